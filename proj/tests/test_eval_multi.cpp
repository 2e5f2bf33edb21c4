#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "../src/common.hpp"
#include "../src/embed.hpp"
#include "../src/eval_multi.hpp"
#include "../src/synth.hpp"
#include "oracles.hpp"

using namespace sb;

namespace {

Graph cycle(int n) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n);
    return Graph::build(n, es);
}

Graph path(int n) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return Graph::build(n, es);
}

Graph triangle() { return Graph::build(3, {{0, 1}, {1, 2}, {0, 2}}); }

// brute-force nearest neighbor with the same tie semantics as the tree
std::pair<int, bool> brute_nn(const Rows& pts, const std::vector<double>& q) {
    double best = 1e300;
    int id = -1, at_best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d = 0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            double t = q[k] - pts[i][k];
            d += t * t;
        }
        if (d < best) {
            best = d;
            id = static_cast<int>(i);
            at_best = 1;
        } else if (d == best) {
            ++at_best;
        }
    }
    return {id, at_best > 1};
}

EmbeddingMatrix rows_of(Rows r) {
    EmbeddingMatrix E;
    E.n = static_cast<int>(r.size());
    E.dim = r.empty() ? 0 : static_cast<int>(r[0].size());
    E.rows = std::move(r);
    return E;
}

} // namespace

TEST_CASE("alignment scenarios permute the graph and keep the bijection") {
    auto g = generate("h5").g;
    auto sc = make_alignment_scenario(g, 0.0, 1);
    auto sorted = sc.truth;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> iota(g.n);
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(sorted == iota);
    CHECK(sc.g2.n == g.n);
    CHECK(sc.g2.num_edges() == g.num_edges());
    for (auto [u, v] : g.edges) CHECK(sc.g2.has_edge(sc.truth[u], sc.truth[v]));

    auto again = make_alignment_scenario(g, 0.0, 1);
    CHECK(again.truth == sc.truth);
    CHECK(again.g2.edges == sc.g2.edges);
    auto other = make_alignment_scenario(g, 0.0, 2);
    CHECK(other.truth != sc.truth);

    CHECK_THROWS_AS(make_alignment_scenario(g, -0.1, 0), ConfigError);
    CHECK_THROWS_AS(make_alignment_scenario(g, 1.0, 0), ConfigError);
}

TEST_CASE("alignment noise removes edges at the configured rate") {
    auto g = cycle(10);
    double total = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto sc = make_alignment_scenario(g, 0.3, seed);
        CHECK(sc.g2.num_edges() <= g.num_edges());
        total += sc.g2.num_edges();
    }
    CHECK(std::fabs(total / 300.0 - 7.0) < 0.3);
}

TEST_CASE("alignment scenarios carry edge types through the permutation") {
    auto g = generate("reg_syn_l").g;
    REQUIRE(g.has_types());
    auto sc = make_alignment_scenario(g, 0.0, 3);
    REQUIRE(sc.g2.has_types());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        CHECK(sc.g2.edge_type(sc.truth[u], sc.truth[v]) == g.edge_types[e]);
    }
}

TEST_CASE("kd tree equals a brute-force scan, ties included") {
    for (int dim : {1, 2, 3, 5}) {
        Rng rng(100 + dim);
        Rows pts;
        // lattice coordinates force plenty of exact ties
        for (int i = 0; i < 257; ++i) {
            std::vector<double> p(dim);
            for (double& x : p) x = static_cast<double>(rng.next_below(5));
            pts.push_back(p);
        }
        KdTree tree(pts);
        for (int q = 0; q < 100; ++q) {
            std::vector<double> query(dim);
            for (double& x : query) x = static_cast<double>(rng.next_below(6));
            CHECK(tree.nearest(query) == brute_nn(pts, query));
        }
        for (int i = 0; i < 50; ++i) CHECK(tree.nearest(pts[i]) == brute_nn(pts, pts[i]));
    }
    // and on continuous data, where ties are rare but distances are messy
    Rng rng(9);
    Rows pts;
    for (int i = 0; i < 300; ++i) pts.push_back({rng.next_gaussian(), rng.next_gaussian()});
    KdTree tree(pts);
    for (int q = 0; q < 100; ++q) {
        std::vector<double> query{rng.next_gaussian(), rng.next_gaussian()};
        CHECK(tree.nearest(query) == brute_nn(pts, query));
    }
    CHECK_THROWS_AS(KdTree(Rows{}), DataError);
    CHECK_THROWS_AS(tree.nearest({1.0}), DataError);
}

TEST_CASE("align on exact copies and degenerate embeddings") {
    Rows distinct;
    for (int i = 0; i < 10; ++i) distinct.push_back({static_cast<double>(i)});
    auto E = rows_of(distinct);
    std::vector<int> iota(10);
    std::iota(iota.begin(), iota.end(), 0);
    auto perfect = align(E, E, iota);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.ties == 0);

    auto flat = rows_of(Rows(10, {1.0, 1.0}));
    auto res = align(flat, flat, iota);
    CHECK(res.accuracy == doctest::Approx(0.1));
    CHECK(res.ties == 10);

    auto E3 = rows_of(Rows(10, {1.0, 1.0, 1.0}));
    CHECK_THROWS_AS(align(E, E3, iota), DataError);
    CHECK_THROWS_AS(align(E, E, std::vector<int>(10, 0)), DataError);
}

TEST_CASE("alignment recovers every unique-signature node at zero noise") {
    auto g = oracle::random_graph(40, 80, 9);
    auto sc = make_alignment_scenario(g, 0.0, 4);
    int dmax = std::max(sc.g1.max_degree(), sc.g2.max_degree());
    auto E1 = degree_k_embed(sc.g1, 2, dmax);
    auto E2 = degree_k_embed(sc.g2, 2, dmax);
    KdTree tree(E2.rows);
    int unique_total = 0;
    for (int v = 0; v < g.n; ++v) {
        bool unique = true;
        for (int u = 0; u < g.n && unique; ++u)
            if (u != v && E1.rows[u] == E1.rows[v]) unique = false;
        if (!unique) continue;
        ++unique_total;
        auto [m, tied] = tree.nearest(E1.rows[v]);
        CHECK(m == sc.truth[v]);
        CHECK(!tied);
    }
    REQUIRE(unique_total > 0); // fixture sanity

    // same-orbit nodes are legitimately confusable, singletons are not
    auto house = generate("h5").g;
    auto hsc = make_alignment_scenario(house, 0.0, 6);
    auto orbits = oracle::orbits_by_enumeration(house);
    std::map<int, int> orbit_size;
    for (int o : orbits) ++orbit_size[o];
    int singles = 0;
    for (int v = 0; v < house.n; ++v)
        if (orbit_size[orbits[v]] == 1) ++singles;
    auto H1 = degree_k_embed(hsc.g1, 2);
    auto H2 = degree_k_embed(hsc.g2, 2);
    auto hres = align(H1, H2, hsc.truth);
    CHECK(hres.accuracy >= static_cast<double>(singles) / house.n);
}

TEST_CASE("alignment buckets recompose the overall accuracy") {
    std::vector<std::pair<int, int>> es;
    for (int i = 1; i <= 8; ++i) es.emplace_back(0, i);
    for (int i = 9; i < 14; ++i) es.emplace_back(i, i + 1);
    auto g = Graph::build(15, es);
    auto sc = make_alignment_scenario(g, 0.0, 11);
    int dmax = std::max(sc.g1.max_degree(), sc.g2.max_degree());
    auto E1 = degree_k_embed(sc.g1, 2, dmax);
    auto E2 = degree_k_embed(sc.g2, 2, dmax);
    auto b = alignment_bucket_analysis(sc, E1, E2, BucketStat::degree);
    CHECK(b.lo == 2.0);
    CHECK(b.hi == 4.0);
    CHECK(b.buckets[0].count == 10);
    CHECK(b.buckets[1].count == 4);
    CHECK(b.buckets[2].count == 1);
    CHECK(b.overall_accuracy == align(E1, E2, sc.truth).accuracy);
    double num = 0, den = 0;
    for (auto& bk : b.buckets)
        if (bk.accuracy) {
            num += bk.count * *bk.accuracy;
            den += bk.count;
        }
    CHECK(num / den == doctest::Approx(b.overall_accuracy).epsilon(1e-12));
}

TEST_CASE("disjoint union stitches node ranges") {
    auto u = disjoint_union(path(3), triangle());
    CHECK(u.n == 6);
    CHECK(u.num_edges() == 5);
    CHECK(u.has_edge(0, 1));
    CHECK(u.has_edge(3, 4));
    CHECK(u.has_edge(3, 5));
    CHECK(!u.has_edge(2, 3));
    CHECK(!u.has_types());

    std::vector<int> t1 = {4}, t2 = {5};
    auto a = Graph::build(2, {{0, 1}}, &t1);
    auto b = Graph::build(2, {{0, 1}}, &t2);
    auto tu = disjoint_union(a, b);
    REQUIRE(tu.has_types());
    CHECK(tu.edge_type(0, 1) == 4);
    CHECK(tu.edge_type(2, 3) == 5);
    CHECK(!disjoint_union(a, path(3)).has_types());
}

TEST_CASE("rgm features on a single point") {
    auto g = Graph::build(1, {});
    auto E = rows_of({{0.5}});
    auto grid = rgm_grid({E});
    CHECK(grid.width == std::vector<double>{1.0}); // degenerate range widens to 1
    auto f = rgm_features(g, E, grid, RgmOptions{1, 2});
    REQUIRE(f.size() == 1);
    CHECK(f[0].second == 1.0);
}

TEST_CASE("rgm halving fixture counts nodes per cell") {
    auto g = Graph::build(4, {}); // edgeless: labels stay uniform
    auto E = rows_of({{0.0}, {1.0}, {2.0}, {3.0}});
    auto grid = rgm_grid({E});
    auto f = rgm_features(g, E, grid);
    std::vector<double> values;
    double total = 0;
    for (auto& [idx, v] : f) {
        values.push_back(v);
        total += v;
    }
    std::sort(values.begin(), values.end());
    // level 0: one cell of 4; level 1: 2+2; levels 2 and 3: singletons
    CHECK(values == std::vector<double>{1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 4});
    CHECK(total == 16.0);
}

TEST_CASE("rgm features ignore node numbering") {
    auto g = path(4);
    auto E = degree_k_embed(g, 1);
    // relabel nodes back to front
    std::vector<int> perm = {3, 2, 1, 0};
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : g.edges) es.emplace_back(perm[u], perm[v]);
    auto gp = Graph::build(4, es);
    EmbeddingMatrix Ep = E;
    for (int v = 0; v < 4; ++v) Ep.rows[perm[v]] = E.rows[v];
    auto grid = rgm_grid({E});
    CHECK(rgm_features(g, E, grid) == rgm_features(gp, Ep, grid));
}

TEST_CASE("wl rounds and node labels split cells") {
    // all nodes share one grid cell; only the labels can tell them apart
    auto same_point = rows_of(Rows(3, {0.0}));
    auto grid = rgm_grid({same_point});

    auto p3 = path(3);
    auto with_wl = rgm_features(p3, same_point, grid);
    CHECK(with_wl.size() == 8); // ends vs middle, at each of 4 levels
    auto edgeless = Graph::build(3, {});
    auto uniform = rgm_features(edgeless, same_point, grid);
    CHECK(uniform.size() == 4);

    std::vector<int> labels = {0, 1, 0};
    auto labeled = rgm_features(edgeless, same_point, grid, {}, &labels);
    CHECK(labeled.size() == 8);

    auto copy = rgm_features(p3, same_point, grid);
    CHECK(copy == with_wl);
}

TEST_CASE("tu loader reads the mini fixture") {
    auto col = load_tu_collection(std::string(SB_TEST_DATA) + "/MINI");
    REQUIRE(col.graphs.size() == 2);
    CHECK(col.classes == 2);
    CHECK(col.has_node_labels);
    CHECK(col.warnings.empty());
    auto& g0 = col.graphs[0];
    CHECK(g0.id == "MINI_1");
    CHECK(g0.g.n == 3);
    CHECK(g0.g.num_edges() == 3);
    CHECK(g0.cls == 1); // raw labels {-1, 1} map to {0, 1} in sorted order
    CHECK(g0.node_labels == std::vector<int>{7, 7, 8});
    auto& g1 = col.graphs[1];
    CHECK(g1.g.n == 2);
    CHECK(g1.g.num_edges() == 1);
    CHECK(g1.cls == 0);
    CHECK(g1.node_labels == std::vector<int>{9, 9});
}

TEST_CASE("tu loader rejects malformed inputs") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "sb_tu_bad";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(dir / name);
        f << body;
    };
    write("BAD_A.txt", "1, 2\n2, 1\n3, 4\n");
    write("BAD_graph_indicator.txt", "1\n1\n2\n2\n");
    write("BAD_graph_labels.txt", "0\n1\n");
    CHECK_NOTHROW(load_tu_collection(dir.string()));

    write("BAD_A.txt", "1, 3\n"); // edge spans two graphs
    CHECK_THROWS_WITH_AS(load_tu_collection(dir.string()),
                         doctest::Contains("crosses graphs"), DataError);

    write("BAD_A.txt", "1, 2\nx, 1\n");
    CHECK_THROWS_WITH_AS(load_tu_collection(dir.string()), doctest::Contains(":2"), DataError);

    write("BAD_A.txt", "1, 2\n");
    write("BAD_graph_labels.txt", "0\n");
    CHECK_THROWS_WITH_AS(load_tu_collection(dir.string()),
                         doctest::Contains("label count"), DataError);
    fs::remove(dir / "BAD_graph_labels.txt");
    CHECK_THROWS_AS(load_tu_collection(dir.string()), DataError);
    fs::remove_all(dir);
    CHECK_THROWS_AS(load_tu_collection((fs::temp_directory_path() / "sb_absent").string()),
                    DataError);
}

TEST_CASE("tu loader drops and reports self loops") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "sb_tu_loops";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "L_A.txt") << "1, 1\n1, 2\n2, 1\n";
    std::ofstream(dir / "L_graph_indicator.txt") << "1\n1\n2\n";
    std::ofstream(dir / "L_graph_labels.txt") << "5\n6\n";
    auto col = load_tu_collection(dir.string());
    REQUIRE(col.warnings.size() == 1);
    CHECK(col.warnings[0].find("self-loop") != std::string::npos);
    CHECK(col.graphs[0].g.num_edges() == 1);
    CHECK(col.graphs[1].g.n == 1);
    CHECK(!col.has_node_labels);
    fs::remove_all(dir);
}

TEST_CASE("graph classification separates simple families") {
    GraphCollection col;
    std::vector<EmbeddingMatrix> embs;
    for (int i = 0; i < 30; ++i) {
        GraphEntry e;
        e.id = "g" + std::to_string(i);
        e.g = i % 2 == 0 ? triangle() : path(3);
        e.cls = i % 2;
        col.graphs.push_back(e);
    }
    col.classes = 2;
    int dmax = 2; // joint maximum degree over the collection
    for (auto& e : col.graphs) embs.push_back(degree_k_embed(e.g, 1, dmax));
    auto r = graph_classify(col, embs);
    CHECK(r.accuracy.mean == 1.0);
    CHECK(r.accuracy.stddev == 0.0);
    CHECK(r.accuracy.values.size() == 10);
    CHECK(r.macro_f1.mean == 1.0);
    CHECK(r.warnings.empty());

    auto again = graph_classify(col, embs);
    CHECK(again.accuracy.values == r.accuracy.values);

    GraphClassifyOptions opt;
    opt.jobs = 4;
    auto parallel = graph_classify(col, embs, opt);
    CHECK(parallel.accuracy.values == r.accuracy.values);

    opt = {};
    opt.use_node_labels = true;
    CHECK_THROWS_AS(graph_classify(col, embs, opt), DataError);
    embs.pop_back();
    CHECK_THROWS_AS(graph_classify(col, embs), DataError);
}
