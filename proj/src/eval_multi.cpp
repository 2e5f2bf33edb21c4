#include "eval_multi.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "common.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace sb {

namespace {

constexpr int kHashSpace = 1 << 20;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

} // namespace

AlignmentScenario make_alignment_scenario(const Graph& g, double p, std::uint64_t seed) {
    if (p < 0.0 || p >= 1.0) throw ConfigError("alignment: p must be in [0, 1)");
    if (g.n == 0) throw DataError("alignment: empty graph");
    AlignmentScenario sc;
    sc.g1 = g;
    sc.p = p;
    sc.seed = seed;
    Rng rng(seed);
    sc.truth.resize(g.n);
    std::iota(sc.truth.begin(), sc.truth.end(), 0);
    rng.shuffle(sc.truth);
    std::vector<std::pair<int, int>> kept;
    std::vector<int> kept_types;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (p > 0.0 && rng.next_double() < p) continue;
        auto [u, v] = g.edges[e];
        kept.emplace_back(sc.truth[u], sc.truth[v]);
        if (g.has_types()) kept_types.push_back(g.edge_types[e]);
    }
    sc.g2 = Graph::build(g.n, kept, g.has_types() ? &kept_types : nullptr);
    return sc;
}

KdTree::KdTree(const Rows& points) : pts_(points) {
    if (pts_.empty()) throw DataError("kdtree: no points");
    dim_ = static_cast<int>(pts_[0].size());
    if (dim_ == 0) throw DataError("kdtree: zero-dimensional points");
    for (auto& p : pts_) {
        if (static_cast<int>(p.size()) != dim_) throw DataError("kdtree: ragged points");
        for (double v : p)
            if (!std::isfinite(v)) throw DataError("kdtree: non-finite coordinate");
    }
    std::vector<int> ids(pts_.size());
    std::iota(ids.begin(), ids.end(), 0);
    nodes_.reserve(pts_.size());
    root_ = build(ids, 0, static_cast<int>(ids.size()), 0);
}

int KdTree::build(std::vector<int>& ids, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    int axis = depth % dim_;
    int mid = (lo + hi) / 2;
    std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                     [&](int a, int b) {
                         return std::make_pair(pts_[a][axis], a) <
                                std::make_pair(pts_[b][axis], b);
                     });
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{ids[mid], axis, -1, -1});
    int left = build(ids, lo, mid, depth + 1);
    int right = build(ids, mid + 1, hi, depth + 1);
    nodes_[idx].left = left;
    nodes_[idx].right = right;
    return idx;
}

void KdTree::search(int node, const std::vector<double>& q, double& best, int& best_id,
                    bool& tie) const {
    if (node < 0) return;
    const Node& nd = nodes_[node];
    double d2 = sq_dist(q, pts_[nd.point]);
    if (d2 < best) {
        best = d2;
        best_id = nd.point;
        tie = false;
    } else if (d2 == best) {
        tie = true;
        best_id = std::min(best_id, nd.point);
    }
    double diff = q[nd.axis] - pts_[nd.point][nd.axis];
    int near = diff < 0 ? nd.left : nd.right;
    int far = diff < 0 ? nd.right : nd.left;
    search(near, q, best, best_id, tie);
    // equal axis distance can still hold an exact tie, so no strict prune
    if (diff * diff <= best) search(far, q, best, best_id, tie);
}

std::pair<int, bool> KdTree::nearest(const std::vector<double>& q) const {
    if (static_cast<int>(q.size()) != dim_) throw DataError("kdtree: query dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    bool tie = false;
    search(root_, q, best, best_id, tie);
    return {best_id, tie};
}

AlignResult align(const EmbeddingMatrix& E1, const EmbeddingMatrix& E2,
                  const std::vector<int>& truth) {
    if (E1.dim != E2.dim) throw DataError("align: embedding dimensions differ");
    if (E1.n == 0 || E2.n == 0) throw DataError("align: empty embedding");
    if (E1.n != E2.n) throw DataError("align: node counts differ");
    if (static_cast<int>(truth.size()) != E1.n) throw DataError("align: truth size mismatch");
    std::vector<char> seen(E2.n, 0);
    for (int t : truth) {
        if (t < 0 || t >= E2.n || seen[t]) throw DataError("align: truth is not a bijection");
        seen[t] = 1;
    }
    KdTree tree(E2.rows);
    AlignResult res;
    int correct = 0;
    for (int v = 0; v < E1.n; ++v) {
        auto [u, tied] = tree.nearest(E1.rows[v]);
        if (u == truth[v]) ++correct;
        if (tied) ++res.ties;
    }
    res.accuracy = static_cast<double>(correct) / E1.n;
    return res;
}

BucketReport alignment_bucket_analysis(const AlignmentScenario& sc, const EmbeddingMatrix& E1,
                                       const EmbeddingMatrix& E2, BucketStat stat) {
    const Graph& g = sc.g1;
    if (E1.n != g.n) throw DataError("alignment buckets: embedding does not match graph");
    std::vector<double> s(g.n);
    if (stat == BucketStat::degree) {
        for (int v = 0; v < g.n; ++v) s[v] = g.degree(v);
    } else {
        auto t = triangle_counts(g);
        for (int v = 0; v < g.n; ++v) s[v] = static_cast<double>(t[v]);
    }
    double top = *std::max_element(s.begin(), s.end());
    if (top < 1.0) throw DataError("alignment buckets: statistic is zero everywhere");
    BucketReport out;
    out.lo = std::cbrt(top);
    out.hi = std::cbrt(top * top);
    if (E1.dim != E2.dim) throw DataError("align: embedding dimensions differ");
    if (E1.n != E2.n) throw DataError("align: node counts differ");
    KdTree tree(E2.rows);
    std::vector<char> matched(g.n, 0);
    int correct = 0;
    for (int v = 0; v < g.n; ++v) {
        auto [u, tied] = tree.nearest(E1.rows[v]);
        (void)tied;
        matched[v] = u == sc.truth[v];
        correct += matched[v];
    }
    out.buckets.resize(3);
    for (int b = 0; b < 3; ++b) {
        int hits = 0, cnt = 0;
        for (int v = 0; v < g.n; ++v) {
            int bkt = s[v] < out.lo ? 0 : (s[v] < out.hi ? 1 : 2);
            if (bkt != b) continue;
            ++cnt;
            hits += matched[v];
        }
        out.buckets[b].count = cnt;
        if (cnt > 0) out.buckets[b].accuracy = static_cast<double>(hits) / cnt;
    }
    out.overall_accuracy = static_cast<double>(correct) / g.n;
    return out;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<std::pair<int, int>> es;
    std::vector<int> types;
    bool typed = a.has_types() && b.has_types();
    for (std::size_t e = 0; e < a.edges.size(); ++e) {
        es.push_back(a.edges[e]);
        if (typed) types.push_back(a.edge_types[e]);
    }
    for (std::size_t e = 0; e < b.edges.size(); ++e) {
        es.emplace_back(b.edges[e].first + a.n, b.edges[e].second + a.n);
        if (typed) types.push_back(b.edge_types[e]);
    }
    return Graph::build(a.n + b.n, es, typed ? &types : nullptr);
}

RgmGrid rgm_grid(const std::vector<EmbeddingMatrix>& collection) {
    if (collection.empty()) throw DataError("rgm: empty collection");
    int dim = collection[0].dim;
    if (dim == 0) throw DataError("rgm: zero-dimensional embeddings");
    RgmGrid grid;
    grid.origin.assign(dim, std::numeric_limits<double>::infinity());
    std::vector<double> top(dim, -std::numeric_limits<double>::infinity());
    for (auto& E : collection) {
        if (E.dim != dim) throw DataError("rgm: mixed embedding dimensions");
        for (auto& row : E.rows)
            for (int d = 0; d < dim; ++d) {
                if (!std::isfinite(row[d])) throw DataError("rgm: non-finite embedding value");
                grid.origin[d] = std::min(grid.origin[d], row[d]);
                top[d] = std::max(top[d], row[d]);
            }
    }
    grid.width.resize(dim);
    for (int d = 0; d < dim; ++d) {
        if (!std::isfinite(grid.origin[d])) throw DataError("rgm: collection has no rows");
        double w = top[d] - grid.origin[d];
        grid.width[d] = w > 0 ? w : 1.0;
    }
    return grid;
}

namespace {

// Weisfeiler-Lehman refinement with canonical label ids: new ids follow the
// sorted order of (old label, sorted neighbor labels) keys, so they do not
// depend on node numbering.
std::vector<int> wl_labels(const Graph& g, std::vector<int> lab, int iters) {
    for (int r = 0; r < iters; ++r) {
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::vector<std::pair<int, std::vector<int>>> keys(g.n);
        for (int v = 0; v < g.n; ++v) {
            std::vector<int> nb;
            nb.reserve(g.adj[v].size());
            for (int u : g.adj[v]) nb.push_back(lab[u]);
            std::sort(nb.begin(), nb.end());
            keys[v] = {lab[v], std::move(nb)};
            ids[keys[v]] = 0;
        }
        int next = 0;
        for (auto& [k, id] : ids) id = next++;
        for (int v = 0; v < g.n; ++v) lab[v] = ids[keys[v]];
    }
    return lab;
}

struct Fnv {
    std::uint64_t h = 1469598103934665603ULL;
    void mix(std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    }
};

} // namespace

SparseRow rgm_features(const Graph& g, const EmbeddingMatrix& E, const RgmGrid& grid,
                       const RgmOptions& opt, const std::vector<int>* node_labels) {
    if (E.n != g.n) throw DataError("rgm: embedding does not match graph");
    if (static_cast<int>(grid.origin.size()) != E.dim || grid.width.size() != grid.origin.size())
        throw DataError("rgm: grid does not match embedding dimension");
    if (opt.levels < 1) throw ConfigError("rgm: levels must be >= 1");
    if (opt.wl_iters < 0) throw ConfigError("rgm: wl_iters must be >= 0");
    std::vector<int> lab(g.n, 0);
    if (node_labels) {
        if (static_cast<int>(node_labels->size()) != g.n)
            throw DataError("rgm: node label count mismatch");
        lab = *node_labels;
    }
    lab = wl_labels(g, std::move(lab), opt.wl_iters);
    std::map<int, double> acc;
    for (int lvl = 0; lvl < opt.levels; ++lvl) {
        double scale = static_cast<double>(1LL << lvl);
        long long cap = (1LL << lvl) - 1;
        for (int v = 0; v < g.n; ++v) {
            Fnv f;
            f.mix(static_cast<std::uint64_t>(lvl));
            f.mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(lab[v])));
            for (int d = 0; d < E.dim; ++d) {
                double t = (E.rows[v][d] - grid.origin[d]) / grid.width[d];
                long long c = static_cast<long long>(std::floor(t * scale));
                c = std::clamp(c, 0LL, cap);
                f.mix(static_cast<std::uint64_t>(c));
            }
            acc[static_cast<int>(f.h & (kHashSpace - 1))] += 1.0;
        }
    }
    return SparseRow(acc.begin(), acc.end());
}

namespace {

std::vector<std::vector<long long>> read_int_lines(const std::filesystem::path& path,
                                                   std::size_t want_fields) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::vector<long long>> out;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        for (char& c : line)
            if (c == ',' || c == '\r' || c == '\t') c = ' ';
        std::istringstream ss(line);
        std::vector<long long> vals;
        long long v;
        while (ss >> v) vals.push_back(v);
        std::string rest;
        if (ss.clear(), ss >> rest)
            throw DataError(path.string() + ":" + std::to_string(ln) + ": bad token");
        if (vals.empty()) continue; // tolerate trailing blank lines
        if (vals.size() != want_fields)
            throw DataError(path.string() + ":" + std::to_string(ln) + ": expected " +
                            std::to_string(want_fields) + " value(s)");
        out.push_back(std::move(vals));
    }
    return out;
}

} // namespace

GraphCollection load_tu_collection(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path root(dir);
    if (!fs::is_directory(root)) throw DataError("not a directory: " + dir);
    std::vector<std::string> prefixes;
    for (auto& entry : fs::directory_iterator(root)) {
        auto name = entry.path().filename().string();
        if (name.size() > 6 && name.substr(name.size() - 6) == "_A.txt")
            prefixes.push_back(name.substr(0, name.size() - 6));
    }
    std::sort(prefixes.begin(), prefixes.end());
    if (prefixes.empty()) throw DataError("no *_A.txt file under " + dir);
    if (prefixes.size() > 1) throw DataError("multiple datasets under " + dir);
    const std::string& prefix = prefixes[0];
    auto file = [&](const std::string& suffix) { return root / (prefix + suffix); };

    auto indicator = read_int_lines(file("_graph_indicator.txt"), 1);
    std::size_t N = indicator.size();
    if (N == 0) throw DataError("empty graph indicator");
    long long G = 0;
    for (auto& row : indicator) {
        if (row[0] < 1) throw DataError("graph indicator ids must be >= 1");
        G = std::max(G, row[0]);
    }
    std::vector<std::vector<int>> members(G);
    std::vector<int> local(N), owner(N);
    for (std::size_t i = 0; i < N; ++i) {
        int gi = static_cast<int>(indicator[i][0]) - 1;
        owner[i] = gi;
        local[i] = static_cast<int>(members[gi].size());
        members[gi].push_back(static_cast<int>(i));
    }
    for (long long gi = 0; gi < G; ++gi)
        if (members[gi].empty())
            throw DataError("graph ids are not contiguous: graph " + std::to_string(gi + 1) +
                            " has no nodes");

    auto labels_raw = read_int_lines(file("_graph_labels.txt"), 1);
    if (labels_raw.size() != static_cast<std::size_t>(G))
        throw DataError("graph label count does not match graph count");
    std::set<long long> distinct;
    for (auto& row : labels_raw) distinct.insert(row[0]);
    if (distinct.size() < 2) throw DataError("collection has a single class");
    std::map<long long, int> cls_of;
    for (long long c : distinct) cls_of[c] = static_cast<int>(cls_of.size());

    GraphCollection col;
    col.classes = static_cast<int>(distinct.size());

    std::vector<std::vector<std::pair<int, int>>> edges(G);
    std::vector<std::set<std::pair<int, int>>> dedupe(G);
    auto pairs = read_int_lines(file("_A.txt"), 2);
    long long self_loops = 0;
    for (auto& row : pairs) {
        long long u = row[0], v = row[1];
        if (u < 1 || v < 1 || u > static_cast<long long>(N) || v > static_cast<long long>(N))
            throw DataError("edge endpoint out of range in " + file("_A.txt").string());
        int ui = static_cast<int>(u) - 1, vi = static_cast<int>(v) - 1;
        if (owner[ui] != owner[vi])
            throw DataError("edge crosses graphs in " + file("_A.txt").string());
        if (ui == vi) {
            ++self_loops;
            continue;
        }
        int a = local[ui], b = local[vi];
        if (a > b) std::swap(a, b);
        if (dedupe[owner[ui]].emplace(a, b).second) edges[owner[ui]].emplace_back(a, b);
    }
    if (self_loops > 0)
        col.warnings.push_back(std::to_string(self_loops) + " self-loop(s) dropped");

    std::vector<std::vector<int>> nlab;
    auto nlab_path = file("_node_labels.txt");
    if (fs::exists(nlab_path)) {
        auto raw = read_int_lines(nlab_path, 1);
        if (raw.size() != N) throw DataError("node label count does not match node count");
        col.has_node_labels = true;
        nlab.resize(G);
        for (std::size_t i = 0; i < N; ++i)
            nlab[owner[i]].push_back(static_cast<int>(raw[i][0]));
    }

    for (long long gi = 0; gi < G; ++gi) {
        GraphEntry e;
        e.id = prefix + "_" + std::to_string(gi + 1);
        e.g = Graph::build(static_cast<int>(members[gi].size()), edges[gi]);
        e.cls = cls_of[labels_raw[gi][0]];
        if (col.has_node_labels) e.node_labels = std::move(nlab[gi]);
        col.graphs.push_back(std::move(e));
    }
    return col;
}

GraphClassifyResult graph_classify(const GraphCollection& col,
                                   const std::vector<EmbeddingMatrix>& embeddings,
                                   const GraphClassifyOptions& opt) {
    std::size_t m = col.graphs.size();
    if (m == 0) throw DataError("graph_classify: empty collection");
    if (embeddings.size() != m) throw DataError("graph_classify: one embedding per graph required");
    if (opt.folds < 2) throw ConfigError("graph_classify: need at least two folds");
    if (opt.use_node_labels && !col.has_node_labels)
        throw DataError("graph_classify: collection has no node labels");
    std::vector<int> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] = col.graphs[i].cls;
        if (embeddings[i].n != col.graphs[i].g.n)
            throw DataError("graph_classify: embedding does not match its graph");
    }
    auto grid = rgm_grid(embeddings);
    SparseRows feats(m);
    parallel_for(static_cast<int>(m), opt.jobs, [&](int i) {
        const auto* labels =
            opt.use_node_labels ? &col.graphs[i].node_labels : nullptr;
        feats[i] = rgm_features(col.graphs[i].g, embeddings[i], grid, opt.rgm, labels);
    });
    GraphClassifyResult out;
    auto fold = stratified_folds(y, opt.folds, opt.seed, &out.warnings);
    std::vector<double> accs, f1s;
    for (int f = 0; f < opt.folds; ++f) {
        std::vector<int> tr, te;
        for (std::size_t i = 0; i < m; ++i)
            (fold[i] == f ? te : tr).push_back(static_cast<int>(i));
        if (te.empty()) {
            out.warnings.push_back("fold " + std::to_string(f) + " is empty, skipped");
            continue;
        }
        std::set<int> train_classes;
        for (int i : tr) train_classes.insert(y[i]);
        if (train_classes.size() < 2) {
            out.warnings.push_back("fold " + std::to_string(f) +
                                   " leaves a single-class training set, skipped");
            continue;
        }
        SparseRows Xtr, Xte;
        std::vector<int> ytr, yte;
        for (int i : tr) {
            Xtr.push_back(feats[i]);
            ytr.push_back(y[i]);
        }
        for (int i : te) {
            Xte.push_back(feats[i]);
            yte.push_back(y[i]);
        }
        auto model = svm_fit_sparse(Xtr, kHashSpace, ytr, SvmOptions{opt.svm_c});
        auto pred = linear_predict_sparse(model, Xte);
        accs.push_back(accuracy(yte, pred));
        f1s.push_back(macro_f1(yte, pred));
    }
    if (accs.empty()) throw DataError("graph_classify: no usable folds");
    out.accuracy = summarize(accs);
    out.macro_f1 = summarize(f1s);
    return out;
}

} // namespace sb
