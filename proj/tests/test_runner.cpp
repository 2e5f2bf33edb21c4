#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "../src/common.hpp"
#include "../src/embed.hpp"
#include "../src/equivalence.hpp"
#include "../src/eval_single.hpp"
#include "../src/report.hpp"
#include "../src/runner.hpp"
#include "../src/synth.hpp"

using namespace sb;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sb_run_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int line_count(const std::string& text) {
    return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST_CASE("generate writes a reloadable dataset") {
    TempDir td("gen");
    json cfg{{"command", "generate"}, {"family", "h10_s_l"}, {"seed", 1},
             {"output", td.sub("a")}};
    json res = run_experiment(cfg);
    CHECK(res["nodes"] == 70);
    CHECK(res["family"] == "h10_s_l");

    auto lg = load_edge_list(td.sub("a") + "/h10_s_l.edges");
    CHECK(lg.g.n == 70);
    CHECK(lg.g.num_edges() == generate("h10_s_l", 1).g.num_edges());
    CHECK(line_count(slurp(td.sub("a") + "/labels.csv")) == 71);

    json manifest = json::parse(slurp(td.sub("a") + "/manifest.json"));
    CHECK(manifest["config"] == cfg);
    CHECK(manifest["result"]["nodes"] == 70);
    CHECK(manifest.dump().find("time") == std::string::npos);

    // a second run is byte-identical
    json cfg2 = cfg;
    cfg2["output"] = td.sub("b");
    run_experiment(cfg2);
    CHECK(slurp(td.sub("a") + "/h10_s_l.edges") == slurp(td.sub("b") + "/h10_s_l.edges"));
    CHECK(slurp(td.sub("a") + "/labels.csv") == slurp(td.sub("b") + "/labels.csv"));

    CHECK_THROWS_AS(run_experiment(json{{"command", "generate"}, {"family", "nope"},
                                        {"output", td.sub("c")}}),
                    ConfigError);
}

TEST_CASE("stats emits one row per node") {
    TempDir td("stats");
    json cfg{{"command", "stats"},
             {"graph", json{{"family", "s5"}}},
             {"output", td.sub("o")}};
    run_experiment(cfg);
    auto csv = slurp(td.sub("o") + "/stats.csv");
    CHECK(line_count(csv) == 1 + generate("s5").g.n);
    CHECK(csv.rfind("node,degree,pagerank,", 0) == 0);
    CHECK(csv.find("0,4,") != std::string::npos); // the star-center row
}

TEST_CASE("embed exports ingestable matrices") {
    TempDir td("embed");
    json cfg{{"command", "embed"},
             {"graph", json{{"family", "h5"}}},
             {"methods", {"degree2", "graphwave"}},
             {"output", td.sub("o")}};
    json res = run_experiment(cfg);
    CHECK(res["files"].size() == 2);

    auto g = generate("h5").g;
    auto lg = wrap_generated(g);
    auto back = ingest_embeddings(td.sub("o") + "/degree2.emb", lg.node_of_id);
    auto direct = degree_k_embed(g, 2);
    CHECK(back.rows == direct.rows);

    json manifest = json::parse(slurp(td.sub("o") + "/manifest.json"));
    CHECK(manifest["result"]["methods"][1]["scales"] == "auto");

    CHECK_THROWS_AS(run_experiment(json{{"command", "embed"},
                                        {"graph", json{{"family", "h5"}}},
                                        {"methods", {"degree9"}},
                                        {"output", td.sub("x")}}),
                    ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"command", "embed"},
                                        {"graph", json{{"family", "h5"}}},
                                        {"methods", {"degree", "degree"}},
                                        {"output", td.sub("x")}}),
                    ConfigError);
}

TEST_CASE("equivalence writes similarity matrices and classes") {
    TempDir td("equiv");
    json cfg{{"command", "equivalence"},
             {"graph", json{{"family", "h5"}}},
             {"kinds", {"structural", "automorphic", "regular"}},
             {"output", td.sub("o")}};
    json res = run_experiment(cfg);
    CHECK(res["kinds"]["automorphic"]["class_count"] == 3); // roles pin the cut
    CHECK(res["kinds"]["regular"].contains("iterations_used"));

    auto sim = slurp(td.sub("o") + "/automorphic_similarity.csv");
    CHECK(line_count(sim) == 5);
    CHECK(sim.substr(0, 2) == "1,"); // diagonal first entry

    auto cls = slurp(td.sub("o") + "/structural_classes.csv");
    CHECK(line_count(cls) == 6);
}

TEST_CASE("eval-intrinsic matches direct module calls and ignores job count") {
    TempDir td("intr");
    json cfg{{"command", "eval-intrinsic"},
             {"graph", json{{"family", "h5"}}},
             {"methods", {"degree2"}},
             {"equivalences", {"automorphic"}},
             {"properties", true},
             {"rmse", true},
             {"jobs", 1},
             {"output", td.sub("a")}};
    run_experiment(cfg);
    auto reports = reports_from_json(json::parse(slurp(td.sub("a") + "/report.json")));
    REQUIRE(reports.size() == 1);
    auto& r = reports[0];
    CHECK(r.method == "degree2");

    auto g = generate("h5").g;
    auto E = degree_k_embed(g, 2);
    auto rc = equivalence_rank_correlation(E, maxsim(g));
    CHECK(r.metrics.at("tau_automorphic").mean == rc.tau.mean);
    CHECK(r.metrics.at("degree_rmse").values.size() == 5);
    CHECK(r.metrics.count("corr_degree") + r.notes.count("corr_degree") == 1);

    json cfg4 = cfg;
    cfg4["jobs"] = 4;
    cfg4["output"] = td.sub("b");
    run_experiment(cfg4);
    // the jobs knob and the output path may not leak into the report
    CHECK(slurp(td.sub("a") + "/report.json") == slurp(td.sub("b") + "/report.json"));
    CHECK(slurp(td.sub("a") + "/report.csv") == slurp(td.sub("b") + "/report.csv"));

    json none{{"command", "eval-intrinsic"}, {"graph", json{{"family", "h5"}}},
              {"methods", {"degree"}}, {"output", td.sub("c")}};
    CHECK_THROWS_AS(run_experiment(none), ConfigError);
    json bad_rmse = none;
    bad_rmse["rmse"] = true;
    bad_rmse["distances"] = {"cosine"};
    CHECK_THROWS_AS(run_experiment(bad_rmse), ConfigError);
}

TEST_CASE("eval-extrinsic supports every label source") {
    TempDir td("extr");
    auto base = json{{"command", "eval-extrinsic"},
                     {"graph", json{{"family", "h10_s_l"}}},
                     {"methods", {"degree2"}}};

    json cfg = base;
    cfg["labels"] = json{{"from", "roles"}};
    cfg["output"] = td.sub("roles");
    json res = run_experiment(cfg);
    CHECK(res["classes"] == 4);
    auto reports = reports_from_json(json::parse(slurp(td.sub("roles") + "/report.json")));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].metrics.at("accuracy").values.size() == 5);

    auto g = generate("h10_s_l").g;
    auto direct = extrinsic_eval(degree_k_embed(g, 2), generate("h10_s_l").roles, {});
    CHECK(reports[0].metrics.at("accuracy").mean == direct.accuracy.mean);

    cfg = base;
    cfg["labels"] = json{{"from", "equivalence"}, {"kind", "structural"}};
    cfg["output"] = td.sub("eq");
    CHECK(run_experiment(cfg)["reports"] == 1);

    cfg = base;
    cfg["labels"] = json{{"from", "stat"}, {"stat", "degree"}, {"scheme", "quartile"}};
    cfg["task"] = "cluster";
    cfg["restarts"] = 50;
    cfg["output"] = td.sub("stat");
    run_experiment(cfg);
    auto cl = reports_from_json(json::parse(slurp(td.sub("stat") + "/report.json")));
    CHECK(cl[0].metrics.count("nmi") + cl[0].notes.count("nmi") == 1);

    // labels.csv from generate doubles as a labels file
    json gen{{"command", "generate"}, {"family", "h5"}, {"output", td.sub("gen")}};
    run_experiment(gen);
    cfg = base;
    cfg["graph"] = td.sub("gen") + "/h5.edges";
    cfg["labels"] = json{{"from", "file"}, {"path", td.sub("gen") + "/labels.csv"}};
    cfg["output"] = td.sub("file");
    res = run_experiment(cfg);
    CHECK(res["classes"] == 3);

    cfg["labels"] = json{{"from", "roles"}};
    cfg["output"] = td.sub("bad");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError); // file graphs carry no roles
}

TEST_CASE("buckets reports all three ranges") {
    TempDir td("buck");
    json cfg{{"command", "buckets"},
             {"graph", json{{"family", "h10_s_l"}}},
             {"methods", {"degree2"}},
             {"labels", json{{"from", "roles"}}},
             {"classifier", "knn"},
             {"output", td.sub("o")}};
    run_experiment(cfg);
    auto csv = slurp(td.sub("o") + "/buckets.csv");
    CHECK(line_count(csv) == 4);
    CHECK(csv.find("degree2,degree,low,") != std::string::npos);
    auto reports = reports_from_json(json::parse(slurp(td.sub("o") + "/report.json")));
    auto& sc = reports[0].scalars;
    CHECK(sc.at("count_low") + sc.at("count_mid") + sc.at("count_high") == 70);
    CHECK(sc.count("overall_accuracy") == 1);
}

TEST_CASE("align sweeps noise levels and can save scenarios") {
    TempDir td("align");
    json cfg{{"command", "align"},
             {"graph", json{{"family", "h5"}}},
             {"methods", {"degree", "degree2"}},
             {"noise", {0.0}},
             {"seeds", 2},
             {"bucket_stat", "degree"},
             {"save_scenarios", true},
             {"output", td.sub("o")}};
    json res = run_experiment(cfg);
    CHECK(res["reports"] == 2);
    auto reports = reports_from_json(json::parse(slurp(td.sub("o") + "/report.json")));
    for (auto& r : reports) {
        CHECK(r.metrics.count("accuracy@p=0") == 1);
        CHECK(r.metrics.at("accuracy@p=0").values.size() == 2);
        CHECK(r.metrics.count("nn_ties@p=0") == 1);
    }
    auto bcsv = slurp(td.sub("o") + "/alignment_buckets.csv");
    CHECK(line_count(bcsv) == 1 + 2 * 3);
    CHECK(fs::exists(td.sub("o") + "/scenarios/p0_seed0/g1.edges"));
    CHECK(fs::exists(td.sub("o") + "/scenarios/p0_seed1/truth.csv"));
    auto truth = slurp(td.sub("o") + "/scenarios/p0_seed0/truth.csv");
    CHECK(line_count(truth) == 6);

    json bad = cfg;
    bad["noise"] = {1.5};
    bad["output"] = td.sub("x");
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("graph-classify runs on a collection directory") {
    TempDir td("gc");
    // twenty tiny graphs: triangles labeled 1, paths labeled 2
    auto dir = td.path / "TOY";
    fs::create_directories(dir);
    std::ofstream a(dir / "TOY_A.txt");
    std::ofstream ind(dir / "TOY_graph_indicator.txt");
    std::ofstream lab(dir / "TOY_graph_labels.txt");
    for (int i = 0; i < 20; ++i) {
        int base = 3 * i + 1;
        a << base << ", " << base + 1 << "\n" << base + 1 << ", " << base << "\n";
        a << base + 1 << ", " << base + 2 << "\n" << base + 2 << ", " << base + 1 << "\n";
        if (i % 2 == 0)
            a << base << ", " << base + 2 << "\n" << base + 2 << ", " << base << "\n";
        ind << i + 1 << "\n" << i + 1 << "\n" << i + 1 << "\n";
        lab << (i % 2 ? 2 : 1) << "\n";
    }
    a.close();
    ind.close();
    lab.close();

    json cfg{{"command", "graph-classify"},
             {"data", dir.string()},
             {"methods", {"degree1"}},
             {"folds", 10},
             {"output", td.sub("o")}};
    json res = run_experiment(cfg);
    CHECK(res["collection"] == "TOY");
    CHECK(res["graphs"] == 20);
    auto reports = reports_from_json(json::parse(slurp(td.sub("o") + "/report.json")));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].metrics.at("accuracy").mean == 1.0);
    CHECK(reports[0].graph_id == "TOY");

    json bad = cfg;
    bad["methods"] = {"graphwave"};
    bad["output"] = td.sub("x");
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("rank and report aggregate existing outputs without recomputation") {
    TempDir td("rank");
    EvalReport a1{"e", "g1", "alpha", "euclidean", {{"accuracy", summarize({0.9})}}, {}, {}, {}};
    EvalReport b1{"e", "g1", "beta", "euclidean", {{"accuracy", summarize({0.8})}}, {}, {}, {}};
    EvalReport a2{"e", "g2", "alpha", "euclidean", {{"accuracy", summarize({0.4})}}, {}, {}, {}};
    EvalReport b2{"e", "g2", "beta", "euclidean", {{"accuracy", summarize({0.6})}}, {}, {}, {}};
    fs::create_directories(td.sub("in1"));
    fs::create_directories(td.sub("in2"));
    write_report_files({a1, b1}, td.sub("in1"));
    write_report_files({a2, b2}, td.sub("in2"));

    json cfg{{"command", "rank"},
             {"reports", {td.sub("in1") + "/report.json", td.sub("in2") + "/report.json"}},
             {"output", td.sub("o")}};
    json res = run_experiment(cfg);
    CHECK(res["cells"] == 2);
    auto csv = slurp(td.sub("o") + "/rank.csv");
    CHECK(csv.find("alpha,1.5,0.5,2,0") != std::string::npos);
    CHECK(csv.find("beta,1.5,0.5,2,0") != std::string::npos);
    CHECK(slurp(td.sub("o") + "/rank_by_metric.csv").find("accuracy,alpha,1.5") !=
          std::string::npos);

    json rep{{"command", "report"},
             {"reports", {td.sub("in1") + "/report.json", td.sub("in2") + "/report.json"}},
             {"output", td.sub("merged")}};
    CHECK(run_experiment(rep)["reports"] == 4);
    CHECK(slurp(td.sub("merged") + "/report.csv") == reports_to_csv({a1, b1, a2, b2}));

    json empty_metrics{{"command", "rank"},
                       {"reports", {td.sub("in1") + "/report.json"}},
                       {"metrics", {"nope"}},
                       {"output", td.sub("x")}};
    CHECK_THROWS_AS(run_experiment(empty_metrics), DataError);
}

TEST_CASE("config errors are config errors") {
    TempDir td("cfg");
    CHECK_THROWS_AS(run_experiment(json{{"command", "frobnicate"}}), ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"output", "x"}}), ConfigError);
    CHECK_THROWS_AS(run_experiment_text("not json"), ConfigError);
    CHECK_THROWS_AS(run_experiment_text("[1,2]"), ConfigError);
    try {
        run_experiment(json{{"command", "frobnicate"}});
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("generate") != std::string::npos);
    }
    // a missing edge-list file is a data problem, not a config problem
    CHECK_THROWS_AS(run_experiment(json{{"command", "stats"},
                                        {"graph", td.sub("absent.edges")},
                                        {"output", td.sub("o")}}),
                    DataError);
}

TEST_CASE("the cache directory round-trips expensive embeddings exactly") {
    TempDir td("cache");
    setenv("STRUCBENCH_CACHE", td.sub("cache").c_str(), 1);
    json cfg{{"command", "embed"},
             {"graph", json{{"family", "pb5"}}},
             {"methods", {"graphwave", "xnetmf"}},
             {"output", td.sub("a")}};
    run_experiment(cfg);
    int cached = 0;
    for (auto& e : fs::directory_iterator(td.sub("cache"))) {
        (void)e;
        ++cached;
    }
    CHECK(cached == 2);
    json cfg2 = cfg;
    cfg2["output"] = td.sub("b");
    run_experiment(cfg2); // served from cache
    unsetenv("STRUCBENCH_CACHE");
    CHECK(slurp(td.sub("a") + "/graphwave.emb") == slurp(td.sub("b") + "/graphwave.emb"));
    CHECK(slurp(td.sub("a") + "/xnetmf.emb") == slurp(td.sub("b") + "/xnetmf.emb"));

    // same config without the cache produces the same bytes
    json cfg3 = cfg;
    cfg3["output"] = td.sub("c");
    run_experiment(cfg3);
    CHECK(slurp(td.sub("a") + "/graphwave.emb") == slurp(td.sub("c") + "/graphwave.emb"));
}
