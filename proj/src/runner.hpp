#pragma once

#include <string>

#include "json.hpp"

namespace sb {

// Runs the experiment a config describes and writes its outputs, plus a
// manifest.json snapshot of the config, into config["output"]. Returns a
// short machine-readable summary of what was produced.
//
// Commands: generate, stats, embed, equivalence, eval-intrinsic,
// eval-extrinsic, buckets, rank, align, graph-classify, report.
nlohmann::json run_experiment(const nlohmann::json& config);

// Parses the text as JSON first; malformed text is a config error.
nlohmann::json run_experiment_text(const std::string& config_text);

} // namespace sb
