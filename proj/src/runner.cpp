#include "runner.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "embed.hpp"
#include "equivalence.hpp"
#include "eval_multi.hpp"
#include "eval_single.hpp"
#include "graph.hpp"
#include "mlkit.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "stats.hpp"
#include "synth.hpp"

namespace sb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const json& need(const json& c, const char* key) {
    auto it = c.find(key);
    if (it == c.end()) throw ConfigError(std::string("missing config field '") + key + "'");
    return *it;
}

std::string str_field(const json& c, const char* key) {
    const json& v = need(c, key);
    if (!v.is_string()) throw ConfigError(std::string("config field '") + key + "' must be a string");
    return v.get<std::string>();
}

template <class T>
T opt_field(const json& c, const char* key, T def) {
    auto it = c.find(key);
    if (it == c.end()) return def;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot read " + path);
    try {
        json j;
        f >> j;
        return j;
    } catch (const json::exception& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
}

std::string out_dir(const json& c) {
    std::string dir = str_field(c, "output");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir);
    return dir;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << body;
}

// the manifest is the config snapshot that makes a run reproducible; result
// counts are informational extras
void write_manifest(const json& config, const std::string& dir, const json& result = {}) {
    json m;
    m["tool"] = "strucbench";
    m["version"] = "0.1.0";
    m["config"] = config;
    if (result.is_object() && !result.empty()) m["result"] = result;
    write_text(dir + "/manifest.json", m.dump(2) + "\n");
}

// graph input: a path to an edge list, or an inline synth spec
struct GraphSource {
    LoadedGraph lg;
    std::optional<SynthGraph> synth;
    std::string id;
};

std::map<std::string, int> params_map(const json& c) {
    std::map<std::string, int> params;
    auto it = c.find("params");
    if (it == c.end()) return params;
    if (!it->is_object()) throw ConfigError("'params' must be an object of integers");
    for (auto& [k, v] : it->items()) {
        if (!v.is_number_integer()) throw ConfigError("'params' values must be integers");
        params[k] = v.get<int>();
    }
    return params;
}

GraphSource resolve_graph(const json& c) {
    const json& g = need(c, "graph");
    GraphSource out;
    if (g.is_string()) {
        std::string path = g.get<std::string>();
        out.lg = load_edge_list(path);
        out.id = fs::path(path).stem().string();
    } else if (g.is_object()) {
        SynthGraph sg = generate(str_field(g, "family"), opt_field<std::uint64_t>(g, "seed", 0),
                                 params_map(g));
        out.id = sg.family;
        out.lg = wrap_generated(sg.g);
        out.synth = std::move(sg);
    } else {
        throw ConfigError("config field 'graph' must be an edge-list path or a synth spec object");
    }
    return out;
}

// embedding method list: plain names, or {name, file} for an external matrix
struct MethodSpec {
    std::string name;
    std::string kind; // degree | graphwave | xnetmf | ingest
    int k = 0;
    std::string file;
};

MethodSpec parse_method(const json& e) {
    MethodSpec s;
    if (e.is_string()) {
        s.name = e.get<std::string>();
        if (s.name == "degree") {
            s.kind = "degree";
            s.k = 0;
        } else if (s.name == "degree1") {
            s.kind = "degree";
            s.k = 1;
        } else if (s.name == "degree2") {
            s.kind = "degree";
            s.k = 2;
        } else if (s.name == "graphwave" || s.name == "xnetmf") {
            s.kind = s.name;
        } else {
            throw ConfigError("unknown method '" + s.name +
                              "'; valid: degree, degree1, degree2, graphwave, xnetmf, "
                              "or {\"name\", \"file\"} for an external embedding");
        }
    } else if (e.is_object()) {
        s.name = str_field(e, "name");
        s.file = str_field(e, "file");
        s.kind = "ingest";
    } else {
        throw ConfigError("method entries must be names or {\"name\", \"file\"} objects");
    }
    return s;
}

std::vector<MethodSpec> method_list(const json& c) {
    const json& m = need(c, "methods");
    if (!m.is_array() || m.empty()) throw ConfigError("'methods' must be a non-empty array");
    std::vector<MethodSpec> out;
    for (auto& e : m) out.push_back(parse_method(e));
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (out[i].name == out[j].name)
                throw ConfigError("duplicate method name '" + out[i].name + "'");
    return out;
}

GraphWaveOptions graphwave_opts(const json& c, int jobs) {
    GraphWaveOptions o;
    o.jobs = jobs;
    auto it = c.find("graphwave");
    if (it != c.end()) {
        o.num_samples = opt_field<int>(*it, "num_samples", o.num_samples);
        o.t_max = opt_field<double>(*it, "t_max", o.t_max);
        o.node_cap = opt_field<int>(*it, "node_cap", o.node_cap);
        o.scales = opt_field<std::vector<double>>(*it, "scales", {});
    }
    return o;
}

XnetmfOptions xnetmf_opts(const json& c) {
    XnetmfOptions o;
    auto it = c.find("xnetmf");
    if (it != c.end()) {
        o.max_hop = opt_field<int>(*it, "max_hop", o.max_hop);
        o.discount = opt_field<double>(*it, "discount", o.discount);
        o.gamma = opt_field<double>(*it, "gamma", o.gamma);
        o.dim = opt_field<int>(*it, "dim", o.dim);
        o.seed = opt_field<std::uint64_t>(*it, "seed", o.seed);
    }
    return o;
}

// STRUCBENCH_CACHE caches the eigendecomposition-heavy embeddings, keyed by
// method parameters and the exact edge set; the text round-trip is lossless
// at 17 significant digits.
std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string cache_path_for(const std::string& tag, const Graph& g) {
    const char* dir = std::getenv("STRUCBENCH_CACHE");
    if (!dir || !*dir) return "";
    std::string key = tag + "|" + std::to_string(g.n) + "|";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        key += std::to_string(g.edges[i].first) + "," + std::to_string(g.edges[i].second);
        if (g.has_types()) key += ":" + std::to_string(g.edge_types[i]);
        key += ";";
    }
    char name[48];
    std::snprintf(name, sizeof(name), "%016llx-%zu.emb",
                  static_cast<unsigned long long>(fnv64(key)), key.size());
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError(std::string("cannot create cache directory: ") + dir);
    return std::string(dir) + "/" + name;
}

EmbeddingMatrix with_cache(const std::string& tag, const Graph& g,
                           const std::function<EmbeddingMatrix()>& compute) {
    std::string path = cache_path_for(tag, g);
    if (!path.empty() && fs::exists(path)) {
        std::unordered_map<std::string, int> ids;
        for (int v = 0; v < g.n; ++v) ids[std::to_string(v)] = v;
        return ingest_embeddings(path, ids);
    }
    EmbeddingMatrix E = compute();
    if (!path.empty()) {
        std::vector<std::string> names(g.n);
        for (int v = 0; v < g.n; ++v) names[v] = std::to_string(v);
        export_embeddings(E, names, path);
    }
    return E;
}

EmbeddingMatrix compute_embedding(const MethodSpec& m, const Graph& g,
                                  const std::unordered_map<std::string, int>& node_of_id,
                                  const json& c, int jobs, int d_max_override = 0) {
    if (m.kind == "degree") return degree_k_embed(g, m.k, d_max_override);
    if (m.kind == "graphwave") {
        GraphWaveOptions o = graphwave_opts(c, jobs);
        json tag{{"method", "graphwave"},
                 {"num_samples", o.num_samples},
                 {"t_max", o.t_max},
                 {"scales", o.scales}};
        return with_cache(tag.dump(), g, [&] { return graphwave_embed(g, o); });
    }
    if (m.kind == "xnetmf") {
        XnetmfOptions o = xnetmf_opts(c);
        o.d_max_override = d_max_override;
        json tag{{"method", "xnetmf"},   {"max_hop", o.max_hop}, {"discount", o.discount},
                 {"gamma", o.gamma},     {"dim", o.dim},         {"seed", o.seed},
                 {"d_max", o.d_max_override}};
        return with_cache(tag.dump(), g, [&] { return xnetmf_embed(g, o); });
    }
    return ingest_embeddings(m.file, node_of_id);
}

json method_manifest(const MethodSpec& m, const json& c, const EmbeddingMatrix& E) {
    json j{{"name", m.name}, {"dim", E.dim}};
    if (m.kind == "degree") j["k"] = m.k;
    if (m.kind == "ingest") j["file"] = m.file;
    if (m.kind == "graphwave") {
        GraphWaveOptions o = graphwave_opts(c, 1);
        j["num_samples"] = o.num_samples;
        j["t_max"] = o.t_max;
        j["scales"] = o.scales.empty() ? json("auto") : json(o.scales);
    }
    if (m.kind == "xnetmf") {
        XnetmfOptions o = xnetmf_opts(c);
        j["max_hop"] = o.max_hop;
        j["discount"] = o.discount;
        j["gamma"] = o.gamma;
        j["target_dim"] = o.dim;
        j["seed"] = o.seed;
    }
    return j;
}

Dist parse_dist(const std::string& s) {
    if (s == "euclidean") return Dist::euclidean;
    if (s == "cosine") return Dist::cosine;
    throw ConfigError("unknown distance '" + s + "'; valid: euclidean, cosine");
}

struct EquivalenceOut {
    Matrix S;
    std::vector<int> classes; // empty when no partition was derived
    int iterations_used = 0;  // regular only
};

int distinct_count(const std::vector<int>& xs) {
    return static_cast<int>(std::set<int>(xs.begin(), xs.end()).size());
}

// "classes" pins the cut for the automorphic kind; a generated graph defaults
// to its construction role count
EquivalenceOut compute_equivalence(const std::string& kind, const GraphSource& gs,
                                   const json& c) {
    const Graph& g = gs.lg.g;
    if (kind == "structural") {
        ConcorOptions o;
        if (auto it = c.find("concor"); it != c.end()) {
            o.split_depth = opt_field<int>(*it, "split_depth", o.split_depth);
            o.tol = opt_field<double>(*it, "tol", o.tol);
            o.max_iters = opt_field<int>(*it, "max_iters", o.max_iters);
        }
        auto r = concor(g, o);
        return {std::move(r.S), std::move(r.classes), 0};
    }
    if (kind == "automorphic") {
        Matrix S = maxsim(g);
        int k = opt_field<int>(c, "classes", 0);
        if (k == 0 && gs.synth) k = distinct_count(gs.synth->roles);
        EquivalenceOut out{std::move(S), {}, 0};
        if (k > 0) out.classes = classes_from_similarity(out.S, k);
        return out;
    }
    if (kind == "regular") {
        CatregeOptions o;
        if (auto it = c.find("catrege"); it != c.end()) {
            o.max_iters = opt_field<int>(*it, "max_iters", o.max_iters);
            o.multiset = opt_field<bool>(*it, "multiset", o.multiset);
        }
        auto r = catrege(g, o);
        return {std::move(r.S), std::move(r.classes), r.iterations_used};
    }
    throw ConfigError("unknown equivalence kind '" + kind +
                      "'; valid: structural, automorphic, regular");
}

// class labels for extrinsic runs: generator roles, equivalence classes,
// a labels file, or binned node statistics
std::vector<int> compact_labels(std::vector<int> raw) {
    std::vector<int> d = raw;
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    for (int& v : raw)
        v = static_cast<int>(std::lower_bound(d.begin(), d.end(), v) - d.begin());
    return raw;
}

std::vector<int> labels_from_file(const std::string& path,
                                  const std::unordered_map<std::string, int>& node_of_id,
                                  int n) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot read labels file: " + path);
    std::vector<int> raw(n);
    std::vector<char> seen(n, 0);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        for (char& ch : line)
            if (ch == ',' || ch == '\r' || ch == '\t') ch = ' ';
        std::istringstream ss(line);
        std::string id, lab;
        if (!(ss >> id)) continue;
        if (id[0] == '#') continue;
        if (!(ss >> lab)) throw DataError(path + ":" + std::to_string(lineno) + ": missing label");
        std::size_t pos = 0;
        int value = 0;
        try {
            value = std::stoi(lab, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != lab.size()) {
            if (lineno == 1) continue; // header row
            throw DataError(path + ":" + std::to_string(lineno) + ": bad label '" + lab + "'");
        }
        auto it = node_of_id.find(id);
        if (it == node_of_id.end())
            throw DataError(path + ":" + std::to_string(lineno) + ": unknown node '" + id + "'");
        if (seen[it->second])
            throw DataError(path + ":" + std::to_string(lineno) + ": duplicate node '" + id + "'");
        seen[it->second] = 1;
        raw[it->second] = value;
    }
    int missing = static_cast<int>(std::count(seen.begin(), seen.end(), 0));
    if (missing > 0)
        throw DataError(path + ": " + std::to_string(missing) + " node(s) have no label");
    return compact_labels(std::move(raw));
}

std::vector<double> stat_values(const NodeStats& st, const std::string& name) {
    if (name == "degree") return std::vector<double>(st.degree.begin(), st.degree.end());
    if (name == "pagerank") return st.pagerank;
    if (name == "betweenness") return st.betweenness;
    if (name == "clustering") return st.clustering;
    if (name == "triangles") return std::vector<double>(st.triangles.begin(), st.triangles.end());
    throw ConfigError("unknown stat '" + name +
                      "'; valid: degree, pagerank, betweenness, clustering, triangles");
}

std::vector<int> resolve_labels(const json& lab, const GraphSource& gs, int jobs,
                                std::string& desc) {
    if (!lab.is_object()) throw ConfigError("'labels' must be an object with a 'from' field");
    std::string from = str_field(lab, "from");
    if (from == "roles") {
        if (!gs.synth)
            throw ConfigError("labels.from=roles needs a generated graph, not an edge-list file");
        desc = "roles:" + gs.synth->labeling;
        return gs.synth->roles;
    }
    if (from == "equivalence") {
        std::string kind = str_field(lab, "kind");
        auto eq = compute_equivalence(kind, gs, lab);
        if (eq.classes.empty())
            throw ConfigError("equivalence labels of kind '" + kind +
                              "' need a 'classes' count to cut the similarity matrix");
        desc = "equivalence:" + kind;
        return eq.classes;
    }
    if (from == "file") {
        std::string path = str_field(lab, "path");
        desc = "file:" + path;
        return labels_from_file(path, gs.lg.node_of_id, gs.lg.g.n);
    }
    if (from == "stat") {
        std::string stat = str_field(lab, "stat");
        std::string scheme = opt_field<std::string>(lab, "scheme", "quartile");
        BinScheme bs;
        if (scheme == "quartile")
            bs = BinScheme::quartile;
        else if (scheme == "log2")
            bs = BinScheme::log2;
        else
            throw ConfigError("unknown binning scheme '" + scheme + "'; valid: quartile, log2");
        auto st = compute_stats(gs.lg.g, jobs);
        desc = "stat:" + stat + ":" + scheme;
        return label_binning(stat_values(st, stat), bs);
    }
    throw ConfigError("unknown labels.from '" + from +
                      "'; valid: roles, equivalence, file, stat");
}

ExtrinsicOptions extrinsic_opts(const json& c, int jobs) {
    ExtrinsicOptions o;
    o.jobs = jobs;
    std::string task = opt_field<std::string>(c, "task", "classify");
    if (task == "classify")
        o.task = Task::classify;
    else if (task == "cluster")
        o.task = Task::cluster;
    else
        throw ConfigError("unknown task '" + task + "'; valid: classify, cluster");
    std::string cls = opt_field<std::string>(c, "classifier", "logreg");
    if (cls == "logreg")
        o.classifier = Classifier::logreg;
    else if (cls == "logreg_ovr")
        o.classifier = Classifier::logreg_ovr;
    else if (cls == "svm")
        o.classifier = Classifier::svm;
    else if (cls == "knn")
        o.classifier = Classifier::knn;
    else
        throw ConfigError("unknown classifier '" + cls +
                          "'; valid: logreg, logreg_ovr, svm, knn");
    o.folds = opt_field<int>(c, "folds", o.folds);
    o.knn_k = opt_field<int>(c, "knn_k", o.knn_k);
    o.svm_c = opt_field<double>(c, "svm_c", o.svm_c);
    o.logreg_c = opt_field<double>(c, "logreg_c", o.logreg_c);
    o.seed = opt_field<std::uint64_t>(c, "seed", o.seed);
    o.kmeans_restarts = opt_field<int>(c, "restarts", o.kmeans_restarts);
    return o;
}

Summary single(double v) { return summarize({v}); }

std::string ptag(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p);
    return buf;
}

// ---- commands ----

json cmd_generate(const json& c) {
    std::string dir = out_dir(c);
    SynthGraph sg = generate(str_field(c, "family"), opt_field<std::uint64_t>(c, "seed", 0),
                             params_map(c));
    LoadedGraph lg = wrap_generated(sg.g);
    std::string edge_path = dir + "/" + sg.family + ".edges";
    save_edge_list(lg, edge_path, dir + "/" + sg.family + ".ids.csv");
    std::string labels = "node,role,role_name\n";
    for (int v = 0; v < sg.g.n; ++v)
        labels += std::to_string(v) + "," + std::to_string(sg.roles[v]) + "," +
                  sg.role_names[sg.roles[v]] + "\n";
    write_text(dir + "/labels.csv", labels);
    json result{{"nodes", sg.g.n},
                {"edges", sg.g.num_edges()},
                {"labeling", sg.labeling},
                {"roles", sg.role_names},
                {"typed_edges", sg.g.has_types()}};
    write_manifest(c, dir, result);
    result["command"] = "generate";
    result["output"] = dir;
    result["family"] = sg.family;
    return result;
}

json cmd_stats(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    int jobs = opt_field<int>(c, "jobs", 0);
    NodeStats st = compute_stats(gs.lg.g, jobs);
    std::string csv = "node,degree,pagerank,betweenness,clustering,triangles\n";
    for (int v = 0; v < gs.lg.g.n; ++v)
        csv += gs.lg.id_of_node[v] + "," + std::to_string(st.degree[v]) + "," +
               fmt(st.pagerank[v]) + "," + fmt(st.betweenness[v]) + "," + fmt(st.clustering[v]) +
               "," + std::to_string(st.triangles[v]) + "\n";
    write_text(dir + "/stats.csv", csv);
    json result{{"nodes", gs.lg.g.n}, {"edges", gs.lg.g.num_edges()}, {"graph", gs.id}};
    write_manifest(c, dir, result);
    result["command"] = "stats";
    result["output"] = dir;
    return result;
}

json cmd_embed(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    int jobs = opt_field<int>(c, "jobs", 0);
    auto methods = method_list(c);
    json meta = json::array();
    json files = json::array();
    for (auto& m : methods) {
        EmbeddingMatrix E = compute_embedding(m, gs.lg.g, gs.lg.node_of_id, c, jobs);
        std::string path = dir + "/" + m.name + ".emb";
        export_embeddings(E, gs.lg.id_of_node, path);
        meta.push_back(method_manifest(m, c, E));
        files.push_back(m.name + ".emb");
    }
    json result{{"graph", gs.id}, {"nodes", gs.lg.g.n}, {"methods", meta}, {"files", files}};
    write_manifest(c, dir, result);
    result["command"] = "embed";
    result["output"] = dir;
    return result;
}

json cmd_equivalence(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    std::vector<std::string> kinds = opt_field<std::vector<std::string>>(
        c, "kinds", {"structural", "automorphic", "regular"});
    if (kinds.empty()) throw ConfigError("'kinds' must not be empty");
    json result{{"graph", gs.id}, {"kinds", json::object()}};
    for (auto& kind : kinds) {
        EquivalenceOut eq = compute_equivalence(kind, gs, c);
        std::string sim;
        for (auto& row : eq.S) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (j) sim += ',';
                sim += fmt(row[j]);
            }
            sim += '\n';
        }
        write_text(dir + "/" + kind + "_similarity.csv", sim);
        json kj{{"similarity", kind + "_similarity.csv"}};
        if (!eq.classes.empty()) {
            std::string cls = "node,class\n";
            for (int v = 0; v < gs.lg.g.n; ++v)
                cls += gs.lg.id_of_node[v] + "," + std::to_string(eq.classes[v]) + "\n";
            write_text(dir + "/" + kind + "_classes.csv", cls);
            kj["classes"] = kind + "_classes.csv";
            kj["class_count"] = distinct_count(eq.classes);
        }
        if (kind == "regular") kj["iterations_used"] = eq.iterations_used;
        result["kinds"][kind] = kj;
    }
    write_manifest(c, dir, result);
    result["command"] = "equivalence";
    result["output"] = dir;
    return result;
}

json cmd_eval_intrinsic(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    const Graph& g = gs.lg.g;
    int jobs = opt_field<int>(c, "jobs", 0);
    auto methods = method_list(c);
    auto distances = opt_field<std::vector<std::string>>(c, "distances", {"euclidean"});
    auto kinds = opt_field<std::vector<std::string>>(c, "equivalences", {});
    bool props = opt_field<bool>(c, "properties", false);
    bool rmse = opt_field<bool>(c, "rmse", false);
    if (kinds.empty() && !props && !rmse)
        throw ConfigError("nothing to evaluate: set 'equivalences', 'properties', or 'rmse'");
    bool have_euclid =
        std::find(distances.begin(), distances.end(), "euclidean") != distances.end();
    if (rmse && !have_euclid)
        throw ConfigError("'rmse' runs kNN regression under euclidean distance; add it to "
                          "'distances'");
    int k = opt_field<int>(c, "k", 5);
    int folds = opt_field<int>(c, "folds", 5);
    std::uint64_t seed = opt_field<std::uint64_t>(c, "seed", 0);
    std::string experiment = opt_field<std::string>(c, "experiment", "eval-intrinsic");

    std::map<std::string, Matrix> S_of;
    for (auto& kind : kinds)
        if (!S_of.count(kind)) S_of[kind] = compute_equivalence(kind, gs, c).S;

    std::vector<EvalReport> reports;
    for (auto& m : methods) {
        EmbeddingMatrix E = compute_embedding(m, g, gs.lg.node_of_id, c, jobs);
        for (auto& dname : distances) {
            Dist dist = parse_dist(dname);
            EvalReport r;
            r.experiment = experiment;
            r.graph_id = gs.id;
            r.method = m.name;
            r.distance = dname;
            for (auto& kind : kinds) {
                auto rc = equivalence_rank_correlation(E, S_of[kind], dist, jobs);
                if (!rc.applicable) {
                    r.notes["tau_" + kind] = "n/a: cosine distance over a scalar embedding";
                    continue;
                }
                if (rc.defined_nodes == 0) {
                    r.notes["tau_" + kind] = "undefined for every node";
                } else {
                    r.metrics["tau_" + kind] = rc.tau;
                }
                r.scalars["tau_" + kind + "_undefined_nodes"] = rc.undefined_nodes;
            }
            if (props) {
                auto pc = property_correlation(g, E, k, dist, jobs);
                if (!pc.applicable) {
                    r.notes["properties"] = "n/a: cosine distance over a scalar embedding";
                } else {
                    for (auto& [prop, v] : pc.by_property) {
                        if (v)
                            r.metrics["corr_" + prop] = single(*v);
                        else
                            r.notes["corr_" + prop] = "undefined: zero variance";
                    }
                }
            }
            if (rmse && dist == Dist::euclidean)
                r.metrics["degree_rmse"] = degree_rmse(g, E, k, folds, seed);
            reports.push_back(std::move(r));
        }
    }
    write_report_files(reports, dir);
    json result{{"graph", gs.id}, {"reports", reports.size()}};
    write_manifest(c, dir, result);
    result["command"] = "eval-intrinsic";
    result["output"] = dir;
    return result;
}

json cmd_eval_extrinsic(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    int jobs = opt_field<int>(c, "jobs", 0);
    auto methods = method_list(c);
    std::string labels_desc;
    std::vector<int> labels = resolve_labels(need(c, "labels"), gs, jobs, labels_desc);
    ExtrinsicOptions eo = extrinsic_opts(c, jobs);
    std::string experiment = opt_field<std::string>(c, "experiment", "eval-extrinsic");

    std::vector<EvalReport> reports;
    for (auto& m : methods) {
        EmbeddingMatrix E = compute_embedding(m, gs.lg.g, gs.lg.node_of_id, c, jobs);
        ExtrinsicResult er = extrinsic_eval(E, labels, eo);
        EvalReport r;
        r.experiment = experiment;
        r.graph_id = gs.id;
        r.method = m.name;
        r.distance = "n/a";
        r.notes["labels"] = labels_desc;
        r.warnings = er.warnings;
        if (er.task == Task::classify) {
            r.metrics["accuracy"] = er.accuracy;
            r.metrics["macro_f1"] = er.macro_f1;
        } else {
            if (er.nmi)
                r.metrics["nmi"] = single(*er.nmi);
            else
                r.notes["nmi"] = "undefined: degenerate partition";
            if (er.purity) r.metrics["purity"] = single(*er.purity);
        }
        reports.push_back(std::move(r));
    }
    write_report_files(reports, dir);
    json result{{"graph", gs.id}, {"labels", labels_desc}, {"classes", distinct_count(labels)},
                {"reports", reports.size()}};
    write_manifest(c, dir, result);
    result["command"] = "eval-extrinsic";
    result["output"] = dir;
    return result;
}

json cmd_buckets(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    int jobs = opt_field<int>(c, "jobs", 0);
    auto methods = method_list(c);
    std::string labels_desc;
    std::vector<int> labels = resolve_labels(need(c, "labels"), gs, jobs, labels_desc);
    std::string stat_name = opt_field<std::string>(c, "stat", "degree");
    BucketStat stat;
    if (stat_name == "degree")
        stat = BucketStat::degree;
    else if (stat_name == "triangles")
        stat = BucketStat::triangles;
    else
        throw ConfigError("unknown bucket stat '" + stat_name + "'; valid: degree, triangles");
    ExtrinsicOptions eo = extrinsic_opts(c, jobs);
    std::string experiment = opt_field<std::string>(c, "experiment", "buckets");

    static const char* bucket_name[3] = {"low", "mid", "high"};
    std::string csv = "method,stat,bucket,count,accuracy,macro_f1\n";
    std::vector<EvalReport> reports;
    for (auto& m : methods) {
        EmbeddingMatrix E = compute_embedding(m, gs.lg.g, gs.lg.node_of_id, c, jobs);
        BucketReport br = bucket_analysis(gs.lg.g, E, labels, stat, eo);
        EvalReport r;
        r.experiment = experiment;
        r.graph_id = gs.id;
        r.method = m.name;
        r.distance = "n/a";
        r.notes["labels"] = labels_desc;
        r.notes["stat"] = stat_name;
        r.warnings = br.warnings;
        r.scalars["boundary_lo"] = br.lo;
        r.scalars["boundary_hi"] = br.hi;
        r.scalars["overall_accuracy"] = br.overall_accuracy;
        for (int b = 0; b < 3; ++b) {
            const auto& bk = br.buckets[b];
            r.scalars[std::string("count_") + bucket_name[b]] = bk.count;
            if (bk.accuracy)
                r.scalars[std::string("accuracy_") + bucket_name[b]] = *bk.accuracy;
            csv += m.name + "," + stat_name + "," + bucket_name[b] + "," +
                   std::to_string(bk.count) + "," + (bk.accuracy ? fmt(*bk.accuracy) : "") + "," +
                   (bk.macro_f1 ? fmt(*bk.macro_f1) : "") + "\n";
        }
        reports.push_back(std::move(r));
    }
    write_text(dir + "/buckets.csv", csv);
    write_report_files(reports, dir);
    json result{{"graph", gs.id}, {"stat", stat_name}, {"reports", reports.size()}};
    write_manifest(c, dir, result);
    result["command"] = "buckets";
    result["output"] = dir;
    return result;
}

std::vector<EvalReport> load_reports(const json& c) {
    const json& in = need(c, "reports");
    if (!in.is_array() || in.empty())
        throw ConfigError("'reports' must be a non-empty array of report.json paths");
    std::vector<EvalReport> all;
    for (auto& p : in) {
        if (!p.is_string()) throw ConfigError("'reports' entries must be paths");
        auto rs = reports_from_json(read_json_file(p.get<std::string>()));
        all.insert(all.end(), rs.begin(), rs.end());
    }
    return all;
}

json cmd_rank(const json& c) {
    std::string dir = out_dir(c);
    std::vector<EvalReport> all = load_reports(c);
    auto wanted = opt_field<std::vector<std::string>>(c, "metrics", {});
    auto keep = [&](const std::string& m) {
        return wanted.empty() || std::find(wanted.begin(), wanted.end(), m) != wanted.end();
    };
    // a cell is one comparable score slot; methods compete within a cell
    std::map<std::string, RankCell> cells;
    std::set<std::string> metric_names;
    for (auto& r : all) {
        for (auto& [metric, s] : r.metrics) {
            if (!keep(metric)) continue;
            std::string id = r.experiment + "|" + r.graph_id + "|" + r.distance + "|" + metric;
            auto& cell = cells[id];
            cell.id = id;
            cell.score_by_method[r.method] = s.mean;
            metric_names.insert(metric);
        }
    }
    if (cells.empty()) throw DataError("no ranked metrics found in the input reports");
    std::vector<RankCell> flat;
    for (auto& kv : cells) flat.push_back(kv.second);
    auto joint = rank_methods(flat);

    auto rank_csv = [](const std::vector<MethodRank>& rs, const std::string& prefix) {
        std::string csv;
        for (auto& mr : rs)
            csv += prefix + mr.method + "," + fmt(mr.rank.mean) + "," + fmt(mr.rank.stddev) +
                   "," + std::to_string(mr.cells_used) + "," + std::to_string(mr.cells_missing) +
                   "\n";
        return csv;
    };
    write_text(dir + "/rank.csv", "method,mean_rank,stddev,cells_used,cells_missing\n" +
                                      rank_csv(joint, ""));

    // the per-metric view answers whether one metric drives the joint order
    std::string by_metric = "metric,method,mean_rank,stddev,cells_used,cells_missing\n";
    json jm = json::object();
    for (auto& metric : metric_names) {
        std::vector<RankCell> sub;
        for (auto& cell : flat)
            if (cell.id.substr(cell.id.rfind('|') + 1) == metric) sub.push_back(cell);
        auto rs = rank_methods(sub);
        by_metric += rank_csv(rs, metric + ",");
        for (auto& mr : rs)
            jm[metric][mr.method] = {{"mean_rank", mr.rank.mean},
                                     {"stddev", mr.rank.stddev},
                                     {"cells_used", mr.cells_used},
                                     {"cells_missing", mr.cells_missing}};
    }
    write_text(dir + "/rank_by_metric.csv", by_metric);

    json jj = json::object();
    for (auto& mr : joint)
        jj[mr.method] = {{"mean_rank", mr.rank.mean},
                         {"stddev", mr.rank.stddev},
                         {"cells_used", mr.cells_used},
                         {"cells_missing", mr.cells_missing}};
    write_text(dir + "/rank.json",
               json{{"joint", jj}, {"by_metric", jm}}.dump(2) + "\n");
    json result{{"cells", flat.size()}, {"methods", joint.size()}};
    write_manifest(c, dir, result);
    result["command"] = "rank";
    result["output"] = dir;
    return result;
}

// joint embedding of a scenario so the two sides are comparable: degree
// histograms share bins, spectral methods embed the disjoint union
std::pair<EmbeddingMatrix, EmbeddingMatrix> scenario_embeddings(const MethodSpec& m,
                                                                const AlignmentScenario& sc,
                                                                const json& c, int jobs) {
    int n = sc.g1.n;
    if (m.kind == "degree") {
        int dmax = std::max(sc.g1.max_degree(), sc.g2.max_degree());
        return {degree_k_embed(sc.g1, m.k, dmax), degree_k_embed(sc.g2, m.k, dmax)};
    }
    Graph u = disjoint_union(sc.g1, sc.g2);
    EmbeddingMatrix all;
    std::unordered_map<std::string, int> no_ids;
    all = compute_embedding(m, u, no_ids, c, jobs);
    EmbeddingMatrix E1, E2;
    E1.n = E2.n = n;
    E1.dim = E2.dim = all.dim;
    E1.rows.assign(all.rows.begin(), all.rows.begin() + n);
    E2.rows.assign(all.rows.begin() + n, all.rows.end());
    return {E1, E2};
}

json cmd_align(const json& c) {
    std::string dir = out_dir(c);
    GraphSource gs = resolve_graph(c);
    const Graph& g = gs.lg.g;
    int jobs = opt_field<int>(c, "jobs", 0);
    auto methods = method_list(c);
    for (auto& m : methods)
        if (m.kind == "ingest")
            throw ConfigError("alignment embeds both graphs jointly; external embedding files "
                              "are not supported here");
    auto noise = opt_field<std::vector<double>>(c, "noise", {0.0});
    if (noise.empty()) throw ConfigError("'noise' must not be empty");
    int seeds = opt_field<int>(c, "seeds", 1);
    if (seeds < 1) throw ConfigError("'seeds' must be at least 1");
    std::uint64_t base_seed = opt_field<std::uint64_t>(c, "seed", 0);
    std::string bucket_stat = opt_field<std::string>(c, "bucket_stat", "");
    bool save_scenarios = opt_field<bool>(c, "save_scenarios", false);
    std::string experiment = opt_field<std::string>(c, "experiment", "align");

    std::string bucket_csv = "p,method,bucket,count,accuracy_mean,accuracy_stddev,n\n";
    static const char* bucket_name[3] = {"low", "mid", "high"};
    std::vector<EvalReport> reports;
    for (auto& m : methods) {
        EvalReport r;
        r.experiment = experiment;
        r.graph_id = gs.id;
        r.method = m.name;
        r.distance = "euclidean";
        for (double p : noise) {
            std::vector<double> accs, ties;
            std::vector<std::vector<double>> bucket_accs(3);
            std::vector<int> bucket_counts(3, 0);
            for (int s = 0; s < seeds; ++s) {
                AlignmentScenario sc = make_alignment_scenario(g, p, base_seed + s);
                if (save_scenarios) {
                    std::string sdir = dir + "/scenarios/p" + ptag(p) + "_seed" +
                                       std::to_string(base_seed + s);
                    std::error_code ec;
                    fs::create_directories(sdir, ec);
                    if (ec) throw DataError("cannot create " + sdir);
                    save_edge_list(wrap_generated(sc.g1), sdir + "/g1.edges", "");
                    save_edge_list(wrap_generated(sc.g2), sdir + "/g2.edges", "");
                    std::string truth = "g1_node,g2_node\n";
                    for (int v = 0; v < g.n; ++v)
                        truth += std::to_string(v) + "," + std::to_string(sc.truth[v]) + "\n";
                    write_text(sdir + "/truth.csv", truth);
                }
                auto [E1, E2] = scenario_embeddings(m, sc, c, jobs);
                auto res = align(E1, E2, sc.truth);
                accs.push_back(res.accuracy);
                ties.push_back(res.ties);
                if (!bucket_stat.empty()) {
                    BucketStat bs;
                    if (bucket_stat == "degree")
                        bs = BucketStat::degree;
                    else if (bucket_stat == "triangles")
                        bs = BucketStat::triangles;
                    else
                        throw ConfigError("unknown bucket_stat '" + bucket_stat +
                                          "'; valid: degree, triangles");
                    BucketReport br = alignment_bucket_analysis(sc, E1, E2, bs);
                    for (int b = 0; b < 3; ++b) {
                        bucket_counts[b] = br.buckets[b].count;
                        if (br.buckets[b].accuracy)
                            bucket_accs[b].push_back(*br.buckets[b].accuracy);
                    }
                }
            }
            r.metrics["accuracy@p=" + ptag(p)] = summarize(accs);
            r.metrics["nn_ties@p=" + ptag(p)] = summarize(ties);
            if (!bucket_stat.empty()) {
                for (int b = 0; b < 3; ++b) {
                    Summary s;
                    bool have = !bucket_accs[b].empty();
                    if (have) s = summarize(bucket_accs[b]);
                    bucket_csv += ptag(p) + "," + m.name + "," + bucket_name[b] + "," +
                                  std::to_string(bucket_counts[b]) + "," +
                                  (have ? fmt(s.mean) : "") + "," + (have ? fmt(s.stddev) : "") +
                                  "," + std::to_string(s.values.size()) + "\n";
                }
            }
        }
        reports.push_back(std::move(r));
    }
    if (!bucket_stat.empty()) write_text(dir + "/alignment_buckets.csv", bucket_csv);
    write_report_files(reports, dir);
    json result{{"graph", gs.id},
                {"nodes", g.n},
                {"noise", noise},
                {"seeds", seeds},
                {"reports", reports.size()}};
    write_manifest(c, dir, result);
    result["command"] = "align";
    result["output"] = dir;
    return result;
}

json cmd_graph_classify(const json& c) {
    std::string dir = out_dir(c);
    std::string data = str_field(c, "data");
    GraphCollection col = load_tu_collection(data);
    fs::path dp(data);
    if (dp.filename().empty()) dp = dp.parent_path();
    std::string collection_id = dp.filename().string();
    int jobs = opt_field<int>(c, "jobs", 0);
    auto methods = method_list(c);
    for (auto& m : methods)
        if (m.kind != "degree")
            throw ConfigError("graph classification builds per-graph features from degree "
                              "histograms; valid methods: degree, degree1, degree2");
    GraphClassifyOptions o;
    o.use_node_labels = opt_field<bool>(c, "use_node_labels", false);
    o.folds = opt_field<int>(c, "folds", o.folds);
    o.seed = opt_field<std::uint64_t>(c, "seed", o.seed);
    o.svm_c = opt_field<double>(c, "svm_c", o.svm_c);
    o.jobs = jobs;
    if (auto it = c.find("rgm"); it != c.end()) {
        o.rgm.levels = opt_field<int>(*it, "levels", o.rgm.levels);
        o.rgm.wl_iters = opt_field<int>(*it, "wl_iters", o.rgm.wl_iters);
    }
    std::string experiment = opt_field<std::string>(c, "experiment", "graph-classify");

    int dmax = 1;
    for (auto& e : col.graphs) dmax = std::max(dmax, e.g.max_degree());

    std::vector<EvalReport> reports;
    for (auto& m : methods) {
        EvalReport r;
        r.experiment = experiment;
        r.graph_id = collection_id;
        r.method = m.name;
        r.distance = "n/a";
        r.warnings = col.warnings;
        try {
            std::vector<EmbeddingMatrix> embs;
            embs.reserve(col.graphs.size());
            for (auto& e : col.graphs) embs.push_back(degree_k_embed(e.g, m.k, dmax));
            GraphClassifyResult res = graph_classify(col, embs, o);
            r.metrics["accuracy"] = res.accuracy;
            r.metrics["macro_f1"] = res.macro_f1;
            r.warnings.insert(r.warnings.end(), res.warnings.begin(), res.warnings.end());
        } catch (const ResourceRefused& e) {
            // mirror oversized-method table cells instead of failing the run
            r.notes["refused"] = e.what();
        }
        reports.push_back(std::move(r));
    }
    write_report_files(reports, dir);
    json result{{"collection", collection_id},
                {"graphs", col.graphs.size()},
                {"classes", col.classes},
                {"reports", reports.size()}};
    write_manifest(c, dir, result);
    result["command"] = "graph-classify";
    result["output"] = dir;
    return result;
}

json cmd_report(const json& c) {
    std::string dir = out_dir(c);
    std::vector<EvalReport> all = load_reports(c);
    write_report_files(all, dir);
    json result{{"reports", all.size()}};
    write_manifest(c, dir, result);
    result["command"] = "report";
    result["output"] = dir;
    return result;
}

} // namespace

json run_experiment(const json& config) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    std::string cmd = str_field(config, "command");
    if (cmd == "generate") return cmd_generate(config);
    if (cmd == "stats") return cmd_stats(config);
    if (cmd == "embed") return cmd_embed(config);
    if (cmd == "equivalence") return cmd_equivalence(config);
    if (cmd == "eval-intrinsic") return cmd_eval_intrinsic(config);
    if (cmd == "eval-extrinsic") return cmd_eval_extrinsic(config);
    if (cmd == "buckets") return cmd_buckets(config);
    if (cmd == "rank") return cmd_rank(config);
    if (cmd == "align") return cmd_align(config);
    if (cmd == "graph-classify") return cmd_graph_classify(config);
    if (cmd == "report") return cmd_report(config);
    throw ConfigError("unknown command '" + cmd +
                      "'; valid: generate, stats, embed, equivalence, eval-intrinsic, "
                      "eval-extrinsic, buckets, rank, align, graph-classify, report");
}

json run_experiment_text(const std::string& config_text) {
    json c;
    try {
        c = json::parse(config_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return run_experiment(c);
}

} // namespace sb
