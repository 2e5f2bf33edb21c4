#pragma once

#include <vector>

#include "graph.hpp"

namespace sb {

struct NodeStats {
    std::vector<int> degree;
    std::vector<double> pagerank;    // damping 0.85, sums to 1
    std::vector<double> betweenness; // unnormalized, unordered pairs once
    std::vector<double> clustering;  // 0 for degree < 2
    std::vector<long long> triangles;
};

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-12; // L1 residual
    int max_iters = 1000;
};

std::vector<double> pagerank(const Graph& g, const PageRankOptions& opt = {});

// Brandes over all sources; parallel over source blocks, reduced in source
// order so results are identical for every job count.
std::vector<double> betweenness(const Graph& g, int jobs = 1);

std::vector<long long> triangle_counts(const Graph& g);
std::vector<double> clustering_coefficients(const Graph& g);

NodeStats compute_stats(const Graph& g, int jobs = 1);

} // namespace sb
