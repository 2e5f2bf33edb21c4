// Command-line front end. Each subcommand assembles a JSON experiment config
// (flags override values from --config) and hands it to the shared library
// through the C API; exit codes are the library's status codes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "strucbench.h"

using nlohmann::json;

namespace {

int fail_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return SB_CONFIG_ERROR;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// shared state for one subcommand invocation
struct Common {
    CLI::App* cmd = nullptr;
    std::string config_file;
    std::string output;
    int jobs = 0;

    std::string graph_path;
    std::string family;
    unsigned long long family_seed = 0;

    std::string methods_csv;
    std::vector<std::string> ingests; // name=path

    void add_config(CLI::App* c) {
        cmd = c;
        c->add_option("--config", config_file, "JSON config file; flags override its fields");
        c->add_option("-o,--output", output, "output directory");
    }
    void add_jobs(CLI::App* c) {
        c->add_option("--jobs", jobs, "worker thread cap (0 = all cores)");
    }
    void add_graph(CLI::App* c) {
        c->add_option("--graph", graph_path, "edge-list file");
        c->add_option("--family", family, "synthetic family instead of --graph");
        c->add_option("--family-seed", family_seed, "seed for the synthetic family");
    }
    void add_methods(CLI::App* c) {
        c->add_option("--methods", methods_csv,
                      "comma-separated: degree, degree1, degree2, graphwave, xnetmf");
        c->add_option("--ingest", ingests, "external embedding as name=path (repeatable)");
    }

    bool passed(const std::string& flag) const {
        auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    }

    // flags land in the config only when actually passed
    int apply(json& cfg) const {
        if (passed("--output")) cfg["output"] = output;
        if (passed("--jobs")) cfg["jobs"] = jobs;
        if (passed("--graph") && passed("--family")) {
            std::cerr << "error: --graph and --family are mutually exclusive\n";
            return SB_CONFIG_ERROR;
        }
        if (passed("--graph")) cfg["graph"] = graph_path;
        if (passed("--family")) {
            json g{{"family", family}};
            if (passed("--family-seed")) g["seed"] = family_seed;
            cfg["graph"] = g;
        }
        if (passed("--methods") || passed("--ingest")) {
            json ms = json::array();
            if (passed("--methods"))
                for (auto& m : split_csv(methods_csv)) ms.push_back(m);
            for (auto& spec : ingests) {
                auto eq = spec.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
                    std::cerr << "error: --ingest wants name=path, got '" << spec << "'\n";
                    return SB_CONFIG_ERROR;
                }
                ms.push_back(json{{"name", spec.substr(0, eq)}, {"file", spec.substr(eq + 1)}});
            }
            cfg["methods"] = ms;
        }
        return SB_OK;
    }
};

int load_config(const Common& co, json& cfg) {
    if (co.config_file.empty()) return SB_OK;
    std::ifstream f(co.config_file);
    if (!f) {
        std::cerr << "error: cannot read config file " << co.config_file << "\n";
        return SB_DATA_ERROR;
    }
    try {
        f >> cfg;
    } catch (const json::exception& e) {
        return fail_config("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!cfg.is_object()) return fail_config("config file must hold a JSON object");
    return SB_OK;
}

// labels come as a compact spec: roles | equivalence:KIND[:K] | file:PATH |
// stat:NAME[:SCHEME]
int parse_labels(const std::string& spec, json& out) {
    if (spec == "roles") {
        out = json{{"from", "roles"}};
        return SB_OK;
    }
    if (spec.rfind("equivalence:", 0) == 0) {
        auto rest = spec.substr(12);
        auto colon = rest.find(':');
        out = json{{"from", "equivalence"}};
        if (colon == std::string::npos) {
            out["kind"] = rest;
        } else {
            out["kind"] = rest.substr(0, colon);
            try {
                out["classes"] = std::stoi(rest.substr(colon + 1));
            } catch (const std::exception&) {
                return fail_config("bad class count in labels spec '" + spec + "'");
            }
        }
        return SB_OK;
    }
    if (spec.rfind("file:", 0) == 0) {
        out = json{{"from", "file"}, {"path", spec.substr(5)}};
        return SB_OK;
    }
    if (spec.rfind("stat:", 0) == 0) {
        auto rest = spec.substr(5);
        auto colon = rest.find(':');
        out = json{{"from", "stat"}};
        if (colon == std::string::npos) {
            out["stat"] = rest;
        } else {
            out["stat"] = rest.substr(0, colon);
            out["scheme"] = rest.substr(colon + 1);
        }
        return SB_OK;
    }
    return fail_config("bad labels spec '" + spec +
                       "'; forms: roles, equivalence:KIND[:K], file:PATH, stat:NAME[:SCHEME]");
}

int run(const json& cfg) {
    char* summary = nullptr;
    sb_status st = sb_run_json(cfg.dump().c_str(), &summary);
    if (st != SB_OK) {
        std::cerr << "error: " << sb_last_error() << "\n";
        return st;
    }
    if (summary) {
        std::cout << summary << "\n";
        sb_free(summary);
    }
    return SB_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark toolkit for structural node embeddings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sb_version());

    struct Sub {
        Common co;
        json extra; // filled by the subcommand's own flags in the callback
        std::function<int(json&)> finish;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    int rc = SB_OK;

    auto make = [&](const std::string& name, const std::string& desc) -> Sub& {
        subs.push_back(std::make_unique<Sub>());
        Sub& s = *subs.back();
        CLI::App* c = app.add_subcommand(name, desc);
        s.co.add_config(c);
        c->callback([&s, &rc, name]() {
            json cfg;
            rc = load_config(s.co, cfg);
            if (rc != SB_OK) return;
            cfg["command"] = name;
            rc = s.co.apply(cfg);
            if (rc != SB_OK) return;
            if (s.finish) {
                rc = s.finish(cfg);
                if (rc != SB_OK) return;
            }
            rc = run(cfg);
        });
        return s;
    };

    {
        Sub& s = make("generate", "emit a synthetic benchmark graph with role labels");
        CLI::App* c = s.co.cmd;
        auto family = std::make_shared<std::string>();
        auto seed = std::make_shared<unsigned long long>(0);
        auto params = std::make_shared<std::vector<std::string>>();
        c->add_option("--family", *family, "synthetic family name");
        c->add_option("--seed", *seed, "generator seed");
        c->add_option("--param", *params, "size parameter as key=value (repeatable)");
        s.finish = [&s, family, seed, params](json& cfg) {
            if (s.co.cmd->count("--family")) cfg["family"] = *family;
            if (s.co.cmd->count("--seed")) cfg["seed"] = *seed;
            for (auto& p : *params) {
                auto eq = p.find('=');
                if (eq == std::string::npos)
                    return fail_config("--param wants key=value, got '" + p + "'");
                try {
                    cfg["params"][p.substr(0, eq)] = std::stoi(p.substr(eq + 1));
                } catch (const std::exception&) {
                    return fail_config("--param value in '" + p + "' is not an integer");
                }
            }
            return static_cast<int>(SB_OK);
        };
    }

    {
        Sub& s = make("stats", "per-node statistics CSV");
        s.co.add_graph(s.co.cmd);
        s.co.add_jobs(s.co.cmd);
    }

    {
        Sub& s = make("embed", "compute embeddings and export them");
        s.co.add_graph(s.co.cmd);
        s.co.add_methods(s.co.cmd);
        s.co.add_jobs(s.co.cmd);
    }

    {
        Sub& s = make("equivalence", "similarity matrices and derived classes");
        CLI::App* c = s.co.cmd;
        s.co.add_graph(c);
        auto kinds = std::make_shared<std::string>();
        auto classes = std::make_shared<int>(0);
        auto multiset = std::make_shared<bool>(false);
        c->add_option("--kinds", *kinds, "comma-separated: structural, automorphic, regular");
        c->add_option("--classes", *classes, "class count for the automorphic cut");
        c->add_flag("--multiset", *multiset, "exact-coloring regular refinement");
        s.finish = [&s, kinds, classes, multiset](json& cfg) {
            if (s.co.cmd->count("--kinds")) cfg["kinds"] = split_csv(*kinds);
            if (s.co.cmd->count("--classes")) cfg["classes"] = *classes;
            if (s.co.cmd->count("--multiset")) cfg["catrege"]["multiset"] = *multiset;
            return static_cast<int>(SB_OK);
        };
    }

    auto add_uint_opt = [](CLI::App* c, const char* flag, const char* help,
                           std::shared_ptr<unsigned long long> v) {
        c->add_option(flag, *v, help);
    };

    {
        Sub& s = make("eval-intrinsic", "rank correlation against equivalences, property "
                                        "correlation, degree RMSE");
        CLI::App* c = s.co.cmd;
        s.co.add_graph(c);
        s.co.add_methods(c);
        s.co.add_jobs(c);
        auto equiv = std::make_shared<std::string>();
        auto dists = std::make_shared<std::string>();
        auto props = std::make_shared<bool>(false);
        auto rmse = std::make_shared<bool>(false);
        auto k = std::make_shared<int>(5);
        auto folds = std::make_shared<int>(5);
        auto seed = std::make_shared<unsigned long long>(0);
        c->add_option("--equivalence", *equiv,
                      "comma-separated: structural, automorphic, regular");
        c->add_option("--distances", *dists, "comma-separated: euclidean, cosine");
        c->add_flag("--properties", *props, "correlate kNN means with node statistics");
        c->add_flag("--rmse", *rmse, "scarce-supervision degree regression");
        c->add_option("--k", *k, "kNN neighborhood size");
        c->add_option("--folds", *folds, "folds for the RMSE split");
        add_uint_opt(c, "--seed", "evaluation seed", seed);
        s.finish = [&s, equiv, dists, props, rmse, k, folds, seed](json& cfg) {
            CLI::App* c = s.co.cmd;
            if (c->count("--equivalence")) cfg["equivalences"] = split_csv(*equiv);
            if (c->count("--distances")) cfg["distances"] = split_csv(*dists);
            if (c->count("--properties")) cfg["properties"] = *props;
            if (c->count("--rmse")) cfg["rmse"] = *rmse;
            if (c->count("--k")) cfg["k"] = *k;
            if (c->count("--folds")) cfg["folds"] = *folds;
            if (c->count("--seed")) cfg["seed"] = *seed;
            return static_cast<int>(SB_OK);
        };
    }

    auto add_classifier_opts = [&](Sub& s, bool with_task) {
        CLI::App* c = s.co.cmd;
        auto labels = std::make_shared<std::string>();
        auto task = std::make_shared<std::string>();
        auto classifier = std::make_shared<std::string>();
        auto folds = std::make_shared<int>(5);
        auto knn_k = std::make_shared<int>(5);
        auto svm_c = std::make_shared<double>(1.0);
        auto logreg_c = std::make_shared<double>(1.0);
        auto restarts = std::make_shared<int>(1000);
        auto seed = std::make_shared<unsigned long long>(0);
        c->add_option("--labels", *labels,
                      "roles | equivalence:KIND[:K] | file:PATH | stat:NAME[:SCHEME]");
        if (with_task) c->add_option("--task", *task, "classify or cluster");
        c->add_option("--classifier", *classifier, "logreg, logreg_ovr, svm, knn");
        c->add_option("--folds", *folds, "cross-validation folds");
        c->add_option("--knn-k", *knn_k, "kNN classifier neighborhood");
        c->add_option("--svm-c", *svm_c, "SVM regularization");
        c->add_option("--logreg-c", *logreg_c, "logistic regression regularization");
        c->add_option("--restarts", *restarts, "kmeans restarts");
        add_uint_opt(c, "--seed", "fold assignment seed", seed);
        return [&s, labels, task, classifier, folds, knn_k, svm_c, logreg_c, restarts, seed,
                with_task](json& cfg) {
            CLI::App* c = s.co.cmd;
            if (c->count("--labels")) {
                json lj;
                int rv = parse_labels(*labels, lj);
                if (rv != SB_OK) return rv;
                cfg["labels"] = lj;
            }
            if (with_task && c->count("--task")) cfg["task"] = *task;
            if (c->count("--classifier")) cfg["classifier"] = *classifier;
            if (c->count("--folds")) cfg["folds"] = *folds;
            if (c->count("--knn-k")) cfg["knn_k"] = *knn_k;
            if (c->count("--svm-c")) cfg["svm_c"] = *svm_c;
            if (c->count("--logreg-c")) cfg["logreg_c"] = *logreg_c;
            if (c->count("--restarts")) cfg["restarts"] = *restarts;
            if (c->count("--seed")) cfg["seed"] = *seed;
            return static_cast<int>(SB_OK);
        };
    };

    {
        Sub& s = make("eval-extrinsic", "classification and clustering against class labels");
        s.co.add_graph(s.co.cmd);
        s.co.add_methods(s.co.cmd);
        s.co.add_jobs(s.co.cmd);
        s.finish = add_classifier_opts(s, true);
    }

    {
        Sub& s = make("buckets", "per-bucket classification quality by node size statistic");
        s.co.add_graph(s.co.cmd);
        s.co.add_methods(s.co.cmd);
        s.co.add_jobs(s.co.cmd);
        auto inner = add_classifier_opts(s, false);
        auto stat = std::make_shared<std::string>();
        s.co.cmd->add_option("--stat", *stat, "degree or triangles");
        s.finish = [&s, inner, stat](json& cfg) {
            int rv = inner(cfg);
            if (rv != SB_OK) return rv;
            if (s.co.cmd->count("--stat")) cfg["stat"] = *stat;
            return static_cast<int>(SB_OK);
        };
    }

    {
        Sub& s = make("rank", "average method ranks across experiment cells");
        CLI::App* c = s.co.cmd;
        auto reports = std::make_shared<std::vector<std::string>>();
        auto metrics = std::make_shared<std::string>();
        c->add_option("--reports", *reports, "report.json files (repeatable)");
        c->add_option("--metrics", *metrics, "restrict to these metrics (comma-separated)");
        s.finish = [&s, reports, metrics](json& cfg) {
            if (s.co.cmd->count("--reports")) cfg["reports"] = *reports;
            if (s.co.cmd->count("--metrics")) cfg["metrics"] = split_csv(*metrics);
            return static_cast<int>(SB_OK);
        };
    }

    {
        Sub& s = make("align", "self-alignment accuracy under edge-removal noise");
        CLI::App* c = s.co.cmd;
        s.co.add_graph(c);
        s.co.add_methods(c);
        s.co.add_jobs(c);
        auto noise = std::make_shared<std::string>();
        auto seeds = std::make_shared<int>(1);
        auto seed = std::make_shared<unsigned long long>(0);
        auto bucket_stat = std::make_shared<std::string>();
        auto save = std::make_shared<bool>(false);
        c->add_option("--noise", *noise, "comma-separated edge-removal probabilities");
        c->add_option("--seeds", *seeds, "scenarios per noise level");
        add_uint_opt(c, "--seed", "base scenario seed", seed);
        c->add_option("--bucket-stat", *bucket_stat, "also bucket accuracy by degree/triangles");
        c->add_flag("--save-scenarios", *save, "serialize each scenario (edge lists + truth)");
        s.finish = [&s, noise, seeds, seed, bucket_stat, save](json& cfg) {
            CLI::App* c = s.co.cmd;
            if (c->count("--noise")) {
                json arr = json::array();
                for (auto& tok : split_csv(*noise)) {
                    try {
                        arr.push_back(std::stod(tok));
                    } catch (const std::exception&) {
                        return fail_config("bad noise level '" + tok + "'");
                    }
                }
                cfg["noise"] = arr;
            }
            if (c->count("--seeds")) cfg["seeds"] = *seeds;
            if (c->count("--seed")) cfg["seed"] = *seed;
            if (c->count("--bucket-stat")) cfg["bucket_stat"] = *bucket_stat;
            if (c->count("--save-scenarios")) cfg["save_scenarios"] = *save;
            return static_cast<int>(SB_OK);
        };
    }

    {
        Sub& s = make("graph-classify", "SVM over distribution features of per-graph embeddings");
        CLI::App* c = s.co.cmd;
        s.co.add_methods(c);
        s.co.add_jobs(c);
        auto data = std::make_shared<std::string>();
        auto folds = std::make_shared<int>(10);
        auto seed = std::make_shared<unsigned long long>(0);
        auto svm_c = std::make_shared<double>(1.0);
        auto node_labels = std::make_shared<bool>(false);
        auto levels = std::make_shared<int>(4);
        auto wl = std::make_shared<int>(2);
        c->add_option("--data", *data, "collection directory (adjacency + indicator + labels)");
        c->add_option("--folds", *folds, "cross-validation folds");
        add_uint_opt(c, "--seed", "fold assignment seed", seed);
        c->add_option("--svm-c", *svm_c, "SVM regularization");
        c->add_flag("--use-node-labels", *node_labels, "seed feature labels from node labels");
        c->add_option("--levels", *levels, "grid resolution levels");
        c->add_option("--wl-iters", *wl, "label expansion rounds");
        s.finish = [&s, data, folds, seed, svm_c, node_labels, levels, wl](json& cfg) {
            CLI::App* c = s.co.cmd;
            if (c->count("--data")) cfg["data"] = *data;
            if (c->count("--folds")) cfg["folds"] = *folds;
            if (c->count("--seed")) cfg["seed"] = *seed;
            if (c->count("--svm-c")) cfg["svm_c"] = *svm_c;
            if (c->count("--use-node-labels")) cfg["use_node_labels"] = *node_labels;
            if (c->count("--levels")) cfg["rgm"]["levels"] = *levels;
            if (c->count("--wl-iters")) cfg["rgm"]["wl_iters"] = *wl;
            return static_cast<int>(SB_OK);
        };
    }

    {
        Sub& s = make("report", "merge existing reports without recomputation");
        CLI::App* c = s.co.cmd;
        auto reports = std::make_shared<std::vector<std::string>>();
        c->add_option("--reports", *reports, "report.json files (repeatable)");
        s.finish = [&s, reports](json& cfg) {
            if (s.co.cmd->count("--reports")) cfg["reports"] = *reports;
            return static_cast<int>(SB_OK);
        };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return SB_CONFIG_ERROR;
    }
    return rc;
}
