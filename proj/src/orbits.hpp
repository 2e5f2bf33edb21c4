#pragma once

#include <vector>

#include "graph.hpp"

namespace sb {

// Exact automorphism orbits (edge types respected when present), computed by
// iterated color refinement plus individualization backtracking. Orbit labels
// are contiguous, numbered by smallest member node. Throws ResourceRefused
// when n exceeds the cap; this is an exact method, not a scalable one.
std::vector<int> automorphism_orbits(const Graph& g, int node_cap = 200);

// true iff some automorphism maps u to v
bool automorphism_exists(const Graph& g, int u, int v);

} // namespace sb
