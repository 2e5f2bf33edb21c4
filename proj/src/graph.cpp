#include "graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "common.hpp"

namespace sb {

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj[u];
    return std::binary_search(a.begin(), a.end(), v);
}

int Graph::edge_type(int u, int v) const {
    if (adj_type.empty()) return 0;
    const auto& a = adj[u];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it == a.end() || *it != v) throw DataError("edge_type: no such edge");
    return adj_type[u][it - a.begin()];
}

int Graph::max_degree() const {
    int d = 0;
    for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
    return d;
}

Graph Graph::build(int n, const std::vector<std::pair<int, int>>& es,
                   const std::vector<int>* types) {
    Graph g;
    g.n = n;
    std::map<std::pair<int, int>, int> uniq; // (u<v) -> type
    for (size_t i = 0; i < es.size(); ++i) {
        int u = es[i].first, v = es[i].second;
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        int t = types ? (*types)[i] : 0;
        auto it = uniq.find({u, v});
        if (it == uniq.end()) uniq.emplace(std::pair<int, int>{u, v}, t);
    }
    g.adj.assign(n, {});
    bool typed = types != nullptr;
    if (typed) g.adj_type.assign(n, {});
    for (const auto& [e, t] : uniq) {
        g.edges.push_back(e);
        if (typed) g.edge_types.push_back(t);
        g.adj[e.first].push_back(e.second);
        g.adj[e.second].push_back(e.first);
        if (typed) {
            g.adj_type[e.first].push_back(t);
            g.adj_type[e.second].push_back(t);
        }
    }
    for (int v = 0; v < n; ++v) {
        if (typed) {
            std::vector<int> order(g.adj[v].size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return g.adj[v][a] < g.adj[v][b]; });
            std::vector<int> na(order.size()), nt(order.size());
            for (size_t i = 0; i < order.size(); ++i) {
                na[i] = g.adj[v][order[i]];
                nt[i] = g.adj_type[v][order[i]];
            }
            g.adj[v] = std::move(na);
            g.adj_type[v] = std::move(nt);
        } else {
            std::sort(g.adj[v].begin(), g.adj[v].end());
        }
    }
    return g;
}

namespace {

struct RawEdge {
    int u, v, type;
};

} // namespace

LoadedGraph load_edge_list_text(const std::string& text, const std::string& origin) {
    LoadedGraph lg;
    std::vector<RawEdge> raw;
    bool any_type = false;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;

    auto intern = [&](const std::string& tok) {
        auto it = lg.node_of_id.find(tok);
        if (it != lg.node_of_id.end()) return it->second;
        int id = static_cast<int>(lg.id_of_node.size());
        lg.id_of_node.push_back(tok);
        lg.node_of_id.emplace(tok, id);
        return id;
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string a, b, c, extra;
        if (!(ls >> a)) continue; // blank
        if (!(ls >> b)) {
            intern(a); // isolated node declaration
            continue;
        }
        bool has_c = static_cast<bool>(ls >> c);
        if (ls >> extra)
            throw DataError(origin + ":" + std::to_string(line_no) +
                            ": expected 'u v' or 'u v type', got extra field '" + extra + "'");
        int type = 0;
        if (has_c) {
            try {
                size_t pos = 0;
                type = std::stoi(c, &pos);
                if (pos != c.size()) throw std::invalid_argument(c);
            } catch (const std::exception&) {
                throw DataError(origin + ":" + std::to_string(line_no) +
                                ": edge type '" + c + "' is not an integer");
            }
            if (type < 0)
                throw DataError(origin + ":" + std::to_string(line_no) +
                                ": edge type must be non-negative");
            any_type = true;
        }
        int u = intern(a), v = intern(b);
        if (u == v) {
            ++lg.self_loops_dropped;
            continue;
        }
        raw.push_back({u, v, type});
    }

    int n = static_cast<int>(lg.id_of_node.size());
    std::vector<std::pair<int, int>> es;
    std::vector<int> types;
    es.reserve(raw.size());
    for (const auto& e : raw) {
        es.emplace_back(e.u, e.v);
        types.push_back(e.type);
    }
    lg.g = Graph::build(n, es, any_type ? &types : nullptr);
    lg.duplicate_edges_dropped =
        static_cast<int>(es.size() - lg.g.edges.size());
    for (int v = 0; v < n; ++v)
        if (lg.g.degree(v) == 0) ++lg.isolated_nodes;
    return lg;
}

LoadedGraph load_edge_list(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open edge list: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_edge_list_text(ss.str(), path);
}

void save_edge_list(const LoadedGraph& lg, const std::string& edge_path,
                    const std::string& id_map_path) {
    std::ofstream ef(edge_path);
    if (!ef) throw DataError("cannot write edge list: " + edge_path);
    for (size_t i = 0; i < lg.g.edges.size(); ++i) {
        auto [u, v] = lg.g.edges[i];
        ef << lg.id_of_node[u] << ' ' << lg.id_of_node[v];
        if (lg.g.has_types()) ef << ' ' << lg.g.edge_types[i];
        ef << '\n';
    }
    for (int v = 0; v < lg.g.n; ++v)
        if (lg.g.degree(v) == 0) ef << lg.id_of_node[v] << '\n';
    if (!id_map_path.empty()) {
        std::ofstream mf(id_map_path);
        if (!mf) throw DataError("cannot write id map: " + id_map_path);
        mf << "original,internal\n";
        for (int v = 0; v < lg.g.n; ++v) mf << lg.id_of_node[v] << ',' << v << '\n';
    }
}

LoadedGraph wrap_generated(Graph g) {
    LoadedGraph lg;
    lg.g = std::move(g);
    lg.id_of_node.resize(lg.g.n);
    for (int v = 0; v < lg.g.n; ++v) {
        lg.id_of_node[v] = std::to_string(v);
        lg.node_of_id.emplace(lg.id_of_node[v], v);
        if (lg.g.degree(v) == 0) ++lg.isolated_nodes;
    }
    return lg;
}

std::vector<int> bfs_distances(const Graph& g, int v) {
    std::vector<int> dist(g.n, -1);
    std::deque<int> q{v};
    dist[v] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : g.adj[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    return dist;
}

std::vector<int> k_hop_nodes(const Graph& g, int v, int k) {
    if (v < 0 || v >= g.n) throw ConfigError("k_hop_nodes: node out of range");
    if (k < 0) throw ConfigError("k_hop_nodes: k must be >= 0");
    auto dist = bfs_distances(g, v);
    std::vector<int> out;
    for (int u = 0; u < g.n; ++u)
        if (dist[u] == k) out.push_back(u);
    return out;
}

} // namespace sb
