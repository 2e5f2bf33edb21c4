#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "graph.hpp"

namespace sb {

struct EmbeddingMatrix {
    int n = 0;
    int dim = 0;
    std::vector<std::vector<double>> rows;
};

// Exact-hop degree histograms. k=0 is the bare degree; k>=1 concatenates one
// histogram per hop h=1..k where slot i counts hop-h neighbors of degree i+1.
// d_max_override widens the bins for cross-graph comparability.
EmbeddingMatrix degree_k_embed(const Graph& g, int k, int d_max_override = 0);

struct GraphWaveOptions {
    std::vector<double> scales; // empty = automatic two-scale selection
    int num_samples = 25;
    double t_max = 100.0;
    int node_cap = 10000; // dense eigendecomposition guard
    int jobs = 1;
};

// Heat-kernel characteristic function samples, (Re, Im) per sample point.
EmbeddingMatrix graphwave_embed(const Graph& g, const GraphWaveOptions& opt = {});

struct XnetmfOptions {
    int max_hop = 2;
    double discount = 0.1;
    double gamma = 1.0;
    int dim = 128;
    std::uint64_t seed = 0;
    int d_max_override = 0;
};

// Landmark-factorized similarity of log-binned neighborhood degree
// histograms; rows unit-normalized.
EmbeddingMatrix xnetmf_embed(const Graph& g, const XnetmfOptions& opt = {});

// word2vec-style text: header "n dim", then one "id x1 .. xdim" line per node.
void export_embeddings(const EmbeddingMatrix& E, const std::vector<std::string>& id_of_node,
                       const std::string& path);

// Rows aligned to internal ids via the map; every mapped node must appear.
EmbeddingMatrix ingest_embeddings(const std::string& path,
                                  const std::unordered_map<std::string, int>& node_of_id);

} // namespace sb
