#include "equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

#include "common.hpp"

namespace sb {

namespace {

// Pearson correlation with the zero-variance convention used throughout this
// module: a flat vector correlates 1 with an identical vector, 0 otherwise.
double pearson_conv(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double a = x[k] - mx, b = y[k] - my;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    if (sxx == 0.0 || syy == 0.0) return x == y ? 1.0 : 0.0;
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

Matrix row_correlations(const Matrix& rows) {
    std::size_t n = rows.size();
    Matrix out(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double r = pearson_conv(rows[i], rows[j]);
            out[i][j] = out[j][i] = r;
        }
    return out;
}

// Pearson of two 0/1 adjacency rows, evaluated from integer counts:
// r = (n^2*n11 - n*di*dj) / (sqrt(n*di*(n-di)) * sqrt(n*dj*(n-dj)))
// with n11 = |N(i) cap N(j)|. Mathematically the same as pearson_conv on the
// rows, but interchangeable node pairs get bitwise-equal values, which
// rank-based comparisons against these similarities rely on. Constant rows
// (isolated nodes) keep the convention: 1 iff the rows are identical, else 0.
Matrix adjacency_correlations(const Graph& g) {
    int n = g.n;
    Matrix S(n, std::vector<double>(n, 1.0));
    std::vector<char> mark(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int u : g.adj[i]) mark[u] = 1;
        long long nn = n, di = g.degree(i);
        long long qi = nn * di * (nn - di);
        for (int j = i + 1; j < n; ++j) {
            long long dj = g.degree(j);
            long long qj = nn * dj * (nn - dj);
            long long n11 = 0;
            for (int u : g.adj[j]) n11 += mark[u];
            double r;
            if (qi == 0 || qj == 0)
                r = (di == dj && n11 == di) ? 1.0 : 0.0;
            else
                r = std::clamp(static_cast<double>(nn * nn * n11 - nn * di * dj) /
                                   (std::sqrt(static_cast<double>(qi)) *
                                    std::sqrt(static_cast<double>(qj))),
                               -1.0, 1.0);
            S[i][j] = S[j][i] = r;
        }
        for (int u : g.adj[i]) mark[u] = 0;
    }
    return S;
}

// One CONCOR block: iterate correlations of correlations until every entry is
// within tol of +-1, then split by the sign of the first member's row.
void concor_split(const Matrix& S, const std::vector<int>& block, int depth,
                  const ConcorOptions& opt, std::vector<std::vector<int>>& leaves) {
    std::size_t m = block.size();
    if (depth == 0 || m <= 1) {
        leaves.push_back(block);
        return;
    }
    Matrix M(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) M[i][j] = S[block[i]][block[j]];
    for (int it = 0; it < opt.max_iters; ++it) {
        bool settled = true;
        for (std::size_t i = 0; i < m && settled; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (std::fabs(M[i][j]) < 1.0 - opt.tol) {
                    settled = false;
                    break;
                }
        if (settled) break;
        M = row_correlations(M);
    }
    std::vector<int> pos, neg;
    for (std::size_t j = 0; j < m; ++j)
        (M[0][j] > 0.0 ? pos : neg).push_back(block[j]);
    if (pos.empty() || neg.empty()) {
        leaves.push_back(block);
        return;
    }
    concor_split(S, pos, depth - 1, opt, leaves);
    concor_split(S, neg, depth - 1, opt, leaves);
}

// Contiguous labels ordered by each class's smallest member.
std::vector<int> relabel_by_smallest(const std::vector<int>& raw) {
    std::map<int, int> smallest; // raw label -> smallest node
    for (std::size_t v = 0; v < raw.size(); ++v)
        if (!smallest.count(raw[v])) smallest[raw[v]] = static_cast<int>(v);
    std::vector<std::pair<int, int>> order; // (smallest node, raw label)
    for (auto& [lab, node] : smallest) order.emplace_back(node, lab);
    std::sort(order.begin(), order.end());
    std::map<int, int> remap;
    for (std::size_t k = 0; k < order.size(); ++k) remap[order[k].second] = static_cast<int>(k);
    std::vector<int> out(raw.size());
    for (std::size_t v = 0; v < raw.size(); ++v) out[v] = remap[raw[v]];
    return out;
}

} // namespace

ConcorResult concor(const Graph& g, const ConcorOptions& opt) {
    if (opt.split_depth < 0) throw ConfigError("concor: split_depth must be >= 0");
    if (opt.tol <= 0 || opt.max_iters < 1) throw ConfigError("concor: bad tolerance settings");
    int n = g.n;
    if (n == 0) throw DataError("concor: empty graph");
    ConcorResult res;
    res.S = adjacency_correlations(g);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> leaves;
    concor_split(res.S, all, opt.split_depth, opt, leaves);
    std::vector<int> raw(n, -1);
    for (std::size_t c = 0; c < leaves.size(); ++c)
        for (int v : leaves[c]) raw[v] = static_cast<int>(c);
    res.classes = relabel_by_smallest(raw);
    return res;
}

Matrix maxsim(const Graph& g) {
    int n = g.n;
    if (n == 0) throw DataError("maxsim: empty graph");
    std::vector<std::vector<int>> dist(n);
    int diam = 0;
    for (int v = 0; v < n; ++v) {
        dist[v] = bfs_distances(g, v);
        for (int d : dist[v]) diam = std::max(diam, d);
    }
    int far = diam + 1; // stands in for unreachable
    std::vector<std::vector<double>> prof(n);
    for (int v = 0; v < n; ++v) {
        prof[v].reserve(n - 1);
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            prof[v].push_back(dist[v][u] < 0 ? far : dist[v][u]);
        }
        std::sort(prof[v].begin(), prof[v].end());
    }
    Matrix S(n, std::vector<double>(n, 1.0));
    Matrix l1(n, std::vector<double>(n, 0.0));
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = 0;
            for (int k = 0; k + 1 < n; ++k) d += std::fabs(prof[i][k] - prof[j][k]);
            l1[i][j] = l1[j][i] = d;
            worst = std::max(worst, d);
        }
    if (worst == 0.0) return S; // all profiles identical
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) S[i][j] = 1.0 - l1[i][j] / worst;
    return S;
}

CatregeResult catrege(const Graph& g, const CatregeOptions& opt) {
    if (opt.max_iters < 1) throw ConfigError("catrege: max_iters must be >= 1");
    int n = g.n;
    if (n == 0) throw DataError("catrege: empty graph");
    CatregeResult res;
    res.S.assign(n, std::vector<double>(n, opt.max_iters));
    std::vector<int> cls(n, 0);
    int ncls = 1;
    for (int it = 1; it <= opt.max_iters; ++it) {
        std::vector<std::vector<std::pair<int, int>>> prof(n);
        for (int v = 0; v < n; ++v) {
            auto& p = prof[v];
            for (std::size_t k = 0; k < g.adj[v].size(); ++k) {
                int t = g.has_types() ? g.adj_type[v][k] : 0;
                p.emplace_back(t, cls[g.adj[v][k]]);
            }
            std::sort(p.begin(), p.end());
            if (!opt.multiset) p.erase(std::unique(p.begin(), p.end()), p.end());
        }
        std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> key_id;
        std::vector<int> next(n);
        for (int v = 0; v < n; ++v) {
            auto key = std::make_pair(cls[v], prof[v]);
            next[v] = key_id.emplace(key, static_cast<int>(key_id.size())).first->second;
        }
        int nnext = static_cast<int>(key_id.size());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (cls[i] == cls[j] && next[i] != next[j])
                    res.S[i][j] = res.S[j][i] = it;
        res.iterations_used = it;
        if (nnext == ncls) break; // fixed point
        cls = std::move(next);
        ncls = nnext;
    }
    res.classes = relabel_by_smallest(cls);
    return res;
}

std::vector<int> classes_from_similarity(const Matrix& S, int k) {
    int n = static_cast<int>(S.size());
    if (n == 0) throw DataError("classes_from_similarity: empty matrix");
    for (auto& row : S)
        if (static_cast<int>(row.size()) != n)
            throw DataError("classes_from_similarity: matrix is not square");
    if (k < 1 || k > n) throw ConfigError("classes_from_similarity: k out of range");
    double top = -std::numeric_limits<double>::infinity();
    for (auto& row : S)
        for (double v : row) {
            if (!std::isfinite(v)) throw DataError("classes_from_similarity: non-finite entry");
            top = std::max(top, v);
        }
    // Active clusters keyed by smallest member; average-linkage distances.
    std::vector<int> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), 0);
    std::vector<bool> alive(n, true);
    Matrix D(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) D[i][j] = top - S[i][j];
    std::vector<int> member(n);
    std::iota(member.begin(), member.end(), 0); // node -> cluster slot
    int active = n;
    while (active > k) {
        double best = std::numeric_limits<double>::infinity();
        int ba = -1, bb = -1;
        for (int a = 0; a < n; ++a) {
            if (!alive[a]) continue;
            for (int b = a + 1; b < n; ++b) {
                if (!alive[b]) continue;
                double d = D[a][b];
                if (d < best ||
                    (d == best && std::make_pair(id[a], id[b]) < std::make_pair(id[ba], id[bb]))) {
                    best = d;
                    ba = a;
                    bb = b;
                }
            }
        }
        for (int c = 0; c < n; ++c) {
            if (!alive[c] || c == ba || c == bb) continue;
            D[ba][c] = D[c][ba] =
                (size[ba] * D[ba][c] + size[bb] * D[bb][c]) / (size[ba] + size[bb]);
        }
        size[ba] += size[bb];
        id[ba] = std::min(id[ba], id[bb]);
        alive[bb] = false;
        for (int v = 0; v < n; ++v)
            if (member[v] == bb) member[v] = ba;
        --active;
    }
    std::vector<int> raw(n);
    for (int v = 0; v < n; ++v) raw[v] = member[v];
    return relabel_by_smallest(raw);
}

} // namespace sb
