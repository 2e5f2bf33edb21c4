#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace sb {

// Simple undirected graph, nodes 0..n-1, sorted adjacency.
// Edge types are optional small ints; untyped graphs read as all-type-0.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    std::vector<std::vector<int>> adj_type; // aligned with adj; empty if untyped
    std::vector<std::pair<int, int>> edges; // u < v, lexicographically sorted
    std::vector<int> edge_types;            // aligned with edges; empty if untyped

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    long long num_edges() const { return static_cast<long long>(edges.size()); }
    bool has_types() const { return !edge_types.empty(); }
    bool has_edge(int u, int v) const;
    int edge_type(int u, int v) const; // 0 when untyped
    int max_degree() const;

    // build from edge triples (u, v, type); dedups, drops self-loops, sorts
    static Graph build(int n, const std::vector<std::pair<int, int>>& es,
                       const std::vector<int>* types = nullptr);
};

struct LoadedGraph {
    Graph g;
    std::vector<std::string> id_of_node;           // internal -> original
    std::unordered_map<std::string, int> node_of_id;
    int self_loops_dropped = 0;
    int duplicate_edges_dropped = 0;
    int isolated_nodes = 0;
};

// Whitespace-separated "u v" or "u v type" lines; '#' starts a comment;
// a single-token line declares an isolated node. Ids are arbitrary strings,
// compacted to 0..n-1 in order of first appearance.
LoadedGraph load_edge_list(const std::string& path);
LoadedGraph load_edge_list_text(const std::string& text, const std::string& origin);

// Writes the edge list with original ids (internal order) and the id map as
// two-column CSV "original,internal". Reloading reproduces graph and map.
void save_edge_list(const LoadedGraph& lg, const std::string& edge_path,
                    const std::string& id_map_path);

// wraps a generated graph (original ids are the decimal node indices)
LoadedGraph wrap_generated(Graph g);

// nodes at exact shortest-path distance k from v, ascending
std::vector<int> k_hop_nodes(const Graph& g, int v, int k);

// all shortest-path distances from v; -1 for unreachable
std::vector<int> bfs_distances(const Graph& g, int v);

} // namespace sb
