#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graph.hpp"

namespace sb {

// A generated benchmark graph with its construction ground truth. Automorphic
// families carry role labels that coincide with automorphism orbits; regular
// families carry coarser role labels plus endpoint-role edge types.
struct SynthGraph {
    std::string family;
    Graph g;
    std::vector<int> roles;
    std::vector<std::string> role_names;
    std::string labeling; // "automorphic" or "regular"
    uint64_t seed = 0;
};

// Size knobs are optional; defaults reproduce the canonical instances.
SynthGraph generate(const std::string& family, uint64_t seed = 0,
                    const std::map<std::string, int>& params = {});

std::vector<std::string> synth_families();
std::string canonical_family(const std::string& name); // throws ConfigError

} // namespace sb
