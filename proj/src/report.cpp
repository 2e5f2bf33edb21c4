#include "report.hpp"

#include <cstdio>
#include <fstream>

#include "common.hpp"

namespace sb {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json summary_to_json(const Summary& s) {
    return {{"mean", s.mean}, {"stddev", s.stddev}, {"values", s.values}};
}

} // namespace

nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["graph"] = r.graph_id;
    j["method"] = r.method;
    j["distance"] = r.distance;
    j["metrics"] = nlohmann::json::object();
    for (auto& [name, s] : r.metrics) j["metrics"][name] = summary_to_json(s);
    j["scalars"] = nlohmann::json::object();
    for (auto& [name, v] : r.scalars) j["scalars"][name] = v;
    j["notes"] = nlohmann::json::object();
    for (auto& [name, v] : r.notes) j["notes"][name] = v;
    j["warnings"] = r.warnings;
    return j;
}

nlohmann::json reports_to_json(const std::vector<EvalReport>& rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& r : rs) arr.push_back(report_to_json(r));
    return arr;
}

std::vector<EvalReport> reports_from_json(const nlohmann::json& j) {
    const nlohmann::json arr = j.is_array() ? j : nlohmann::json::array({j});
    std::vector<EvalReport> rs;
    for (auto& o : arr) {
        if (!o.is_object()) throw DataError("report entry is not an object");
        EvalReport r;
        try {
            r.experiment = o.at("experiment").get<std::string>();
            r.graph_id = o.at("graph").get<std::string>();
            r.method = o.at("method").get<std::string>();
            r.distance = o.at("distance").get<std::string>();
            for (auto& [name, s] : o.at("metrics").items()) {
                Summary sum;
                sum.mean = s.at("mean").get<double>();
                sum.stddev = s.at("stddev").get<double>();
                sum.values = s.at("values").get<std::vector<double>>();
                r.metrics[name] = std::move(sum);
            }
            for (auto& [name, v] : o.at("scalars").items()) r.scalars[name] = v.get<double>();
            for (auto& [name, v] : o.at("notes").items()) r.notes[name] = v.get<std::string>();
            r.warnings = o.at("warnings").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("malformed report: ") + e.what());
        }
        rs.push_back(std::move(r));
    }
    return rs;
}

std::string reports_to_csv(const std::vector<EvalReport>& rs) {
    std::string out = "experiment,graph,method,distance,metric,mean,stddev,n\n";
    for (auto& r : rs) {
        std::string head = r.experiment + "," + r.graph_id + "," + r.method + "," + r.distance;
        for (auto& [name, s] : r.metrics)
            out += head + "," + name + "," + fmt(s.mean) + "," + fmt(s.stddev) + "," +
                   std::to_string(s.values.size()) + "\n";
        for (auto& [name, v] : r.scalars) out += head + "," + name + "," + fmt(v) + ",0,1\n";
    }
    return out;
}

void write_report_files(const std::vector<EvalReport>& rs, const std::string& dir) {
    {
        std::ofstream f(dir + "/report.json");
        if (!f) throw DataError("cannot write " + dir + "/report.json");
        f << reports_to_json(rs).dump(2) << "\n";
    }
    std::ofstream f(dir + "/report.csv");
    if (!f) throw DataError("cannot write " + dir + "/report.csv");
    f << reports_to_csv(rs);
}

} // namespace sb
