#include "strucbench.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "common.hpp"
#include "graph.hpp"
#include "runner.hpp"
#include "synth.hpp"

struct sb_graph {
    sb::LoadedGraph lg;
};

namespace {

thread_local std::string t_error;

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <class Fn>
sb_status guarded(Fn&& fn) {
    try {
        fn();
        t_error.clear();
        return SB_OK;
    } catch (const sb::ConfigError& e) {
        t_error = e.what();
        return SB_CONFIG_ERROR;
    } catch (const sb::ResourceRefused& e) {
        t_error = e.what();
        return SB_RESOURCE_REFUSED;
    } catch (const std::exception& e) {
        t_error = e.what();
        return SB_DATA_ERROR;
    }
}

} // namespace

extern "C" {

sb_status sb_run_json(const char* config_json, char** summary) {
    if (summary) *summary = nullptr;
    if (!config_json) {
        t_error = "config_json is NULL";
        return SB_CONFIG_ERROR;
    }
    return guarded([&] {
        auto res = sb::run_experiment_text(config_json);
        if (summary) *summary = dup_string(res.dump(2));
    });
}

const char* sb_last_error(void) { return t_error.c_str(); }

void sb_free(char* p) { std::free(p); }

const char* sb_version(void) { return "0.1.0"; }

sb_status sb_graph_load(const char* path, sb_graph** out) {
    if (out) *out = nullptr;
    if (!path || !out) {
        t_error = "sb_graph_load needs a path and an out pointer";
        return SB_CONFIG_ERROR;
    }
    return guarded([&] { *out = new sb_graph{sb::load_edge_list(path)}; });
}

sb_status sb_graph_generate(const char* family, unsigned long long seed, sb_graph** out) {
    if (out) *out = nullptr;
    if (!family || !out) {
        t_error = "sb_graph_generate needs a family and an out pointer";
        return SB_CONFIG_ERROR;
    }
    return guarded([&] {
        sb::SynthGraph sg = sb::generate(family, seed);
        *out = new sb_graph{sb::wrap_generated(std::move(sg.g))};
    });
}

void sb_graph_free(sb_graph* g) { delete g; }

int sb_graph_nodes(const sb_graph* g) { return g ? g->lg.g.n : 0; }

long long sb_graph_edges(const sb_graph* g) { return g ? g->lg.g.num_edges() : 0; }

int sb_graph_max_degree(const sb_graph* g) { return g ? g->lg.g.max_degree() : 0; }

} // extern "C"
