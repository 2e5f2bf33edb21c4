#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "eval_single.hpp"

namespace sb {

// One evaluation cell: a (graph, method, distance) combination with its
// metric values. Reports serialize with sorted keys and no timestamps, so a
// rerun with the same config is byte-identical.
struct EvalReport {
    std::string experiment;
    std::string graph_id;
    std::string method;
    std::string distance; // "euclidean", "cosine", or "" when not applicable
    std::map<std::string, Summary> metrics;
    std::map<std::string, double> scalars;
    std::map<std::string, std::string> notes;
    std::vector<std::string> warnings;
};

nlohmann::json report_to_json(const EvalReport& r);
nlohmann::json reports_to_json(const std::vector<EvalReport>& rs);

// Inverse of reports_to_json; accepts a single report object or an array.
std::vector<EvalReport> reports_from_json(const nlohmann::json& j);

// One row per metric: experiment,graph,method,distance,metric,mean,stddev,n.
// Scalars emit n=1 with stddev 0.
std::string reports_to_csv(const std::vector<EvalReport>& rs);

void write_report_files(const std::vector<EvalReport>& rs, const std::string& dir);

} // namespace sb
