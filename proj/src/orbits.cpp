#include "orbits.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "common.hpp"

namespace sb {

namespace {

using Key = std::pair<int, std::vector<std::pair<int, int>>>;

Key node_key(const Graph& g, const std::vector<int>& color, int v) {
    Key k;
    k.first = color[v];
    k.second.reserve(g.adj[v].size());
    for (size_t i = 0; i < g.adj[v].size(); ++i) {
        int t = g.adj_type.empty() ? 0 : g.adj_type[v][i];
        k.second.emplace_back(t, color[g.adj[v][i]]);
    }
    std::sort(k.second.begin(), k.second.end());
    return k;
}

int count_colors(const std::vector<int>& c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

// one-sided refinement to a stable coloring; canonical ids (sorted key order)
void refine_one(const Graph& g, std::vector<int>& color) {
    for (;;) {
        std::map<Key, int> ids;
        std::vector<Key> keys(g.n);
        for (int v = 0; v < g.n; ++v) {
            keys[v] = node_key(g, color, v);
            ids.emplace(keys[v], 0);
        }
        int next = 0;
        for (auto& [k, id] : ids) id = next++;
        int before = count_colors(color);
        for (int v = 0; v < g.n; ++v) color[v] = ids[keys[v]];
        if (count_colors(color) == before) return;
    }
}

// Joint refinement of a source and target coloring in one key space.
// Returns false when the color class sizes stop matching, i.e. no
// automorphism can respect the current constraints.
bool refine_pair(const Graph& g, std::vector<int>& cs, std::vector<int>& ct) {
    for (;;) {
        std::map<Key, std::pair<int, int>> counts; // key -> (#src, #tgt)
        std::vector<Key> ks(g.n), kt(g.n);
        for (int v = 0; v < g.n; ++v) {
            ks[v] = node_key(g, cs, v);
            kt[v] = node_key(g, ct, v);
            counts[ks[v]].first++;
            counts[kt[v]].second++;
        }
        std::map<Key, int> ids;
        int next = 0;
        for (auto& [k, c] : counts) {
            if (c.first != c.second) return false;
            ids.emplace(k, next++);
        }
        int before = count_colors(cs);
        for (int v = 0; v < g.n; ++v) {
            cs[v] = ids[ks[v]];
            ct[v] = ids[kt[v]];
        }
        if (count_colors(cs) == before) return true;
    }
}

bool is_automorphism(const Graph& g, const std::vector<int>& f) {
    for (size_t i = 0; i < g.edges.size(); ++i) {
        auto [u, v] = g.edges[i];
        if (!g.has_edge(f[u], f[v])) return false;
        if (g.has_types() && g.edge_type(f[u], f[v]) != g.edge_types[i]) return false;
    }
    return true;
}

bool search(const Graph& g, std::vector<int> cs, std::vector<int> ct) {
    if (!refine_pair(g, cs, ct)) return false;
    // locate the smallest non-singleton color class
    int ncol = count_colors(cs);
    std::vector<int> size(ncol, 0);
    for (int v = 0; v < g.n; ++v) ++size[cs[v]];
    int cell = -1;
    for (int c = 0; c < ncol; ++c)
        if (size[c] > 1) {
            cell = c;
            break;
        }
    if (cell < 0) {
        // discrete: colors induce the bijection
        std::vector<int> f(g.n), where(ncol, -1);
        for (int v = 0; v < g.n; ++v) where[ct[v]] = v;
        for (int v = 0; v < g.n; ++v) f[v] = where[cs[v]];
        return is_automorphism(g, f);
    }
    int x = -1;
    for (int v = 0; v < g.n; ++v)
        if (cs[v] == cell) {
            x = v;
            break;
        }
    int fresh = ncol;
    for (int y = 0; y < g.n; ++y) {
        if (ct[y] != cell) continue;
        auto cs2 = cs;
        auto ct2 = ct;
        cs2[x] = fresh;
        ct2[y] = fresh;
        if (search(g, std::move(cs2), std::move(ct2))) return true;
    }
    return false;
}

} // namespace

bool automorphism_exists(const Graph& g, int u, int v) {
    if (u == v) return true;
    std::vector<int> cs(g.n, 0), ct(g.n, 0);
    cs[u] = 1;
    ct[v] = 1;
    return search(g, std::move(cs), std::move(ct));
}

std::vector<int> automorphism_orbits(const Graph& g, int node_cap) {
    if (g.n > node_cap)
        throw ResourceRefused("automorphism_orbits: graph has " + std::to_string(g.n) +
                              " nodes, exact orbit search capped at " +
                              std::to_string(node_cap));
    std::vector<int> color(g.n, 0);
    refine_one(g, color);

    std::vector<int> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    int ncol = count_colors(color);
    for (int c = 0; c < ncol; ++c) {
        std::vector<int> cell;
        for (int v = 0; v < g.n; ++v)
            if (color[v] == c) cell.push_back(v);
        if (cell.size() < 2) continue;
        std::vector<int> reps;
        for (int v : cell) {
            bool placed = false;
            for (int r : reps) {
                if (find(r) == find(v)) {
                    placed = true;
                    break;
                }
                if (automorphism_exists(g, r, v)) {
                    parent[find(v)] = find(r);
                    placed = true;
                    break;
                }
            }
            if (!placed) reps.push_back(v);
        }
    }

    // contiguous labels ordered by smallest member
    std::vector<int> label(g.n, -1);
    int next = 0;
    for (int v = 0; v < g.n; ++v) {
        int r = find(v);
        if (label[r] < 0) label[r] = next++;
        label[v] = label[r];
    }
    return label;
}

} // namespace sb
