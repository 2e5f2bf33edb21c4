#pragma once

// Independent reference implementations used only by tests. Kept deliberately
// naive: different algorithms than the library, same answers.

#include <algorithm>
#include <numeric>
#include <vector>

#include "embed.hpp"
#include "equivalence.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace oracle {

// all-pairs shortest paths with path counts, then pair-by-pair accumulation
inline std::vector<double> betweenness_floyd_warshall(const sb::Graph& g) {
    const int n = g.n;
    const double INF = 1e18;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, INF));
    std::vector<std::vector<double>> cnt(n, std::vector<double>(n, 0.0));
    for (int v = 0; v < n; ++v) {
        d[v][v] = 0;
        cnt[v][v] = 1;
    }
    for (auto [u, v] : g.edges) {
        d[u][v] = d[v][u] = 1;
        cnt[u][v] = cnt[v][u] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == k || j == k) continue;
                double via = d[i][k] + d[k][j];
                if (via < d[i][j]) {
                    d[i][j] = via;
                    cnt[i][j] = cnt[i][k] * cnt[k][j];
                } else if (via == d[i][j] && d[i][j] < INF) {
                    cnt[i][j] += cnt[i][k] * cnt[k][j];
                }
            }
    std::vector<double> bc(n, 0.0);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (i == v || j == v || d[i][j] >= INF) continue;
                if (d[i][v] + d[v][j] == d[i][j])
                    bc[v] += cnt[i][v] * cnt[v][j] / cnt[i][j];
            }
    return bc;
}

// orbit partition by filtering all n! permutations; n must stay tiny
inline std::vector<int> orbits_by_enumeration(const sb::Graph& g) {
    const int n = g.n;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    do {
        bool ok = true;
        for (size_t i = 0; ok && i < g.edges.size(); ++i) {
            auto [u, v] = g.edges[i];
            if (!g.has_edge(perm[u], perm[v]))
                ok = false;
            else if (g.has_types() && g.edge_type(perm[u], perm[v]) != g.edge_types[i])
                ok = false;
        }
        if (ok)
            for (int v = 0; v < n; ++v)
                if (find(v) != find(perm[v])) parent[find(perm[v])] = find(v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<int> label(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        int r = find(v);
        if (label[r] < 0) label[r] = next++;
        label[v] = label[r];
    }
    return label;
}

// G(n, m)-style seeded random simple graph
inline sb::Graph random_graph(int n, int m, uint64_t seed) {
    sb::Rng rng(seed);
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < m; ++i) {
        int u = static_cast<int>(rng.next_below(n));
        int v = static_cast<int>(rng.next_below(n));
        if (u != v) es.emplace_back(u, v);
    }
    return sb::Graph::build(n, es);
}

// Reference encodings whose pairwise similarities reproduce an equivalence
// similarity matrix through exact integer arithmetic. Used to check that the
// per-node rank correlation really hits 1 when an embedding carries the same
// information as the equivalence: naive real-valued factorizations break
// analytic ties at the last bit, which rank statistics are sensitive to.

// Sorted-distance-profile encoding: each profile slot p becomes p ones padded
// with zeros, so squared euclidean distance equals the integer L1 distance
// between sorted profiles.
inline sb::EmbeddingMatrix maxsim_staircase(const sb::Graph& g) {
    const int n = g.n;
    std::vector<std::vector<int>> dist(n);
    int diam = 0;
    for (int v = 0; v < n; ++v) {
        dist[v] = sb::bfs_distances(g, v);
        for (int d : dist[v]) diam = std::max(diam, d);
    }
    const int far = diam + 1;
    sb::EmbeddingMatrix E;
    E.n = n;
    E.dim = (n - 1) * far;
    E.rows.assign(n, std::vector<double>(E.dim, 0.0));
    for (int v = 0; v < n; ++v) {
        std::vector<int> prof;
        prof.reserve(n - 1);
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            prof.push_back(dist[v][u] < 0 ? far : dist[v][u]);
        }
        std::sort(prof.begin(), prof.end());
        for (int s = 0; s + 1 < n; ++s)
            for (int p = 0; p < prof[s]; ++p) E.rows[v][s * far + p] = 1.0;
    }
    return E;
}

// Refinement-hierarchy encoding: one 0/1 block per refinement step holding the
// node's class at that step, so squared distance counts the steps at which a
// pair is already separated (times two), an exact integer monotone in the
// separation iteration. The partition chain is recovered from S alone: at step
// t nodes are together iff S > t.
inline sb::EmbeddingMatrix catrege_hierarchy(const sb::Matrix& S, int iterations_used) {
    const int n = static_cast<int>(S.size());
    sb::EmbeddingMatrix E;
    E.n = n;
    E.rows.assign(n, {});
    for (int t = 1; t <= iterations_used; ++t) {
        std::vector<int> cls(n, -1);
        int next = 0;
        for (int v = 0; v < n; ++v) {
            if (cls[v] >= 0) continue;
            cls[v] = next;
            for (int u = v + 1; u < n; ++u)
                if (S[v][u] > t) cls[u] = next;
            ++next;
        }
        for (int v = 0; v < n; ++v) {
            std::vector<double> block(next, 0.0);
            block[cls[v]] = 1.0;
            E.rows[v].insert(E.rows[v].end(), block.begin(), block.end());
        }
    }
    E.dim = static_cast<int>(E.rows.empty() ? 0 : E.rows[0].size());
    return E;
}

// Integer-centered adjacency rows n*A_v - d_v: their cosine equals the pearson
// correlation of the raw 0/1 rows, with every dot product and norm an exact
// integer.
inline sb::EmbeddingMatrix concor_rows(const sb::Graph& g) {
    const int n = g.n;
    sb::EmbeddingMatrix E;
    E.n = n;
    E.dim = n;
    E.rows.assign(n, {});
    for (int v = 0; v < n; ++v) {
        double dv = g.degree(v);
        E.rows[v].assign(n, -dv);
        for (int u : g.adj[v]) E.rows[v][u] += n;
    }
    return E;
}

} // namespace oracle
