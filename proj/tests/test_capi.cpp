#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "strucbench.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sb_capi_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string cfg(const std::string& command, const std::string& rest) {
    return "{\"command\":\"" + command + "\"," + rest + "}";
}

} // namespace

TEST_CASE("sb_run_json runs an experiment and hands back a summary") {
    TempDir td("run");
    char* summary = nullptr;
    std::string c = cfg("generate", "\"family\":\"h10_s_l\",\"output\":\"" + td.sub("o") + "\"");
    CHECK(sb_run_json(c.c_str(), &summary) == SB_OK);
    CHECK(std::string(sb_last_error()).empty());
    REQUIRE(summary != nullptr);
    auto j = nlohmann::json::parse(summary);
    CHECK(j["nodes"] == 70);
    sb_free(summary);
    CHECK(fs::exists(td.sub("o") + "/h10_s_l.edges"));
    CHECK(fs::exists(td.sub("o") + "/manifest.json"));

    // the summary pointer is optional
    std::string c2 = cfg("generate", "\"family\":\"h5\",\"output\":\"" + td.sub("p") + "\"");
    CHECK(sb_run_json(c2.c_str(), nullptr) == SB_OK);
}

TEST_CASE("status codes separate config, data, and refusal failures") {
    TempDir td("err");
    char* summary = reinterpret_cast<char*>(1);
    CHECK(sb_run_json(nullptr, &summary) == SB_CONFIG_ERROR);
    CHECK(summary == nullptr);
    CHECK(!std::string(sb_last_error()).empty());

    CHECK(sb_run_json("not json", nullptr) == SB_CONFIG_ERROR);
    CHECK(sb_run_json("[1]", nullptr) == SB_CONFIG_ERROR);

    std::string bad_family =
        cfg("generate", "\"family\":\"nope\",\"output\":\"" + td.sub("a") + "\"");
    CHECK(sb_run_json(bad_family.c_str(), nullptr) == SB_CONFIG_ERROR);
    CHECK(std::string(sb_last_error()).find("h10_s_l") != std::string::npos);

    std::string bad_file =
        cfg("stats", "\"graph\":\"" + td.sub("absent.edges") + "\",\"output\":\"" +
                         td.sub("b") + "\"");
    CHECK(sb_run_json(bad_file.c_str(), nullptr) == SB_DATA_ERROR);

    std::string capped = cfg("embed", "\"graph\":{\"family\":\"pb5\"},"
                                      "\"methods\":[\"graphwave\"],"
                                      "\"graphwave\":{\"node_cap\":2},"
                                      "\"output\":\"" +
                                          td.sub("c") + "\"");
    CHECK(sb_run_json(capped.c_str(), nullptr) == SB_RESOURCE_REFUSED);
    CHECK(!std::string(sb_last_error()).empty());
}

TEST_CASE("graph handles expose basic shape") {
    sb_graph* g = nullptr;
    REQUIRE(sb_graph_generate("h5", 0, &g) == SB_OK);
    REQUIRE(g != nullptr);
    CHECK(sb_graph_nodes(g) == 5);
    CHECK(sb_graph_edges(g) == 6);
    CHECK(sb_graph_max_degree(g) == 3);
    sb_graph_free(g);

    g = reinterpret_cast<sb_graph*>(1);
    CHECK(sb_graph_generate("nope", 0, &g) == SB_CONFIG_ERROR);
    CHECK(g == nullptr);
    CHECK(sb_graph_load("/definitely/absent.edges", &g) == SB_DATA_ERROR);
    CHECK(g == nullptr);

    CHECK(sb_graph_nodes(nullptr) == 0);
    CHECK(sb_graph_edges(nullptr) == 0);
    CHECK(sb_graph_max_degree(nullptr) == 0);
    sb_graph_free(nullptr);

    TempDir td("load");
    std::string c = cfg("generate", "\"family\":\"pb5\",\"output\":\"" + td.sub("o") + "\"");
    REQUIRE(sb_run_json(c.c_str(), nullptr) == SB_OK);
    REQUIRE(sb_graph_load((td.sub("o") + "/pb5.edges").c_str(), &g) == SB_OK);
    CHECK(sb_graph_nodes(g) == 10);
    CHECK(sb_graph_max_degree(g) == 3);
    sb_graph_free(g);
}

TEST_CASE("version string is stable") {
    CHECK(std::string(sb_version()) == "0.1.0");
}
