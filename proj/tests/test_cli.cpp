#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sb_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult cli(const TempDir& td, const std::string& args) {
    std::string out_f = td.sub("stdout.txt"), err_f = td.sub("stderr.txt");
    std::string cmd =
        std::string(SB_CLI_PATH) + " " + args + " >" + out_f + " 2>" + err_f;
    int rc = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_f);
    r.err = slurp(err_f);
    return r;
}

} // namespace

TEST_CASE("generate subcommand writes a dataset") {
    TempDir td("gen");
    auto r = cli(td, "generate --family h10_s_l --seed 1 -o " + td.sub("o"));
    CHECK(r.code == 0);
    CHECK(r.out.find("\"nodes\": 70") != std::string::npos);
    CHECK(fs::exists(td.sub("o") + "/h10_s_l.edges"));
    CHECK(fs::exists(td.sub("o") + "/labels.csv"));
    CHECK(fs::exists(td.sub("o") + "/manifest.json"));
}

TEST_CASE("failures map to documented exit codes") {
    TempDir td("codes");
    auto unknown_family = cli(td, "generate --family nope -o " + td.sub("a"));
    CHECK(unknown_family.code == 2);
    CHECK(unknown_family.err.find("valid:") != std::string::npos);

    auto missing_file = cli(td, "stats --graph " + td.sub("absent.edges") + " -o " + td.sub("b"));
    CHECK(missing_file.code == 3);
    CHECK(missing_file.err.find("error:") != std::string::npos);

    std::ofstream(td.sub("cap.json"))
        << "{\"graph\":{\"family\":\"pb5\"},\"methods\":[\"graphwave\"],"
           "\"graphwave\":{\"node_cap\":2},\"output\":\"" +
               td.sub("c") + "\"}";
    auto refused = cli(td, "embed --config " + td.sub("cap.json"));
    CHECK(refused.code == 4);

    CHECK(cli(td, "frobnicate").code == 2);
    CHECK(cli(td, "stats --no-such-flag").code == 2);
    CHECK(cli(td, "").code == 2); // a subcommand is required

    auto both = cli(td, "stats --graph x --family h5 -o " + td.sub("d"));
    CHECK(both.code == 2);
    CHECK(both.err.find("mutually exclusive") != std::string::npos);
}

TEST_CASE("flags override config file values") {
    TempDir td("override");
    std::ofstream(td.sub("cfg.json"))
        << "{\"graph\":{\"family\":\"h5\"},\"methods\":[\"degree\"],\"output\":\"" +
               td.sub("a") + "\"}";
    auto from_file = cli(td, "embed --config " + td.sub("cfg.json"));
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("\"nodes\": 5") != std::string::npos);

    auto overridden =
        cli(td, "embed --config " + td.sub("cfg.json") + " --family pb5 -o " + td.sub("b"));
    CHECK(overridden.code == 0);
    CHECK(overridden.out.find("\"nodes\": 10") != std::string::npos);
    CHECK(fs::exists(td.sub("b") + "/degree.emb"));
}

TEST_CASE("version flag reports the library version") {
    TempDir td("ver");
    auto r = cli(td, "--version");
    CHECK(r.code == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("a full pipeline runs through the cli") {
    TempDir td("pipe");
    REQUIRE(cli(td, "generate --family h10_s_l -o " + td.sub("gen")).code == 0);

    auto ev = cli(td, "eval-extrinsic --graph " + td.sub("gen") + "/h10_s_l.edges" +
                          " --labels file:" + td.sub("gen") + "/labels.csv" +
                          " --methods degree2 --classifier knn -o " + td.sub("ev"));
    CHECK(ev.code == 0);
    CHECK(fs::exists(td.sub("ev") + "/report.json"));
    CHECK(fs::exists(td.sub("ev") + "/report.csv"));

    auto rank = cli(td, "rank --reports " + td.sub("ev") + "/report.json -o " + td.sub("rank"));
    CHECK(rank.code == 0);
    CHECK(slurp(td.sub("rank") + "/rank.csv").find("degree2,1,0,") != std::string::npos);

    auto align = cli(td, "align --family h5 --methods degree2 --noise 0,0.01 --seeds 2 -o " +
                             td.sub("al"));
    CHECK(align.code == 0);
    CHECK(slurp(td.sub("al") + "/report.csv").find("accuracy@p=0.01") != std::string::npos);
}

TEST_CASE("reports are byte-identical across job counts") {
    TempDir td("jobs");
    std::string base = "eval-intrinsic --family h10_s_l --methods degree2,graphwave "
                       "--equivalence automorphic,structural --properties ";
    REQUIRE(cli(td, base + "--jobs 1 -o " + td.sub("a")).code == 0);
    REQUIRE(cli(td, base + "--jobs 4 -o " + td.sub("b")).code == 0);
    CHECK(slurp(td.sub("a") + "/report.json") == slurp(td.sub("b") + "/report.json"));
    CHECK(slurp(td.sub("a") + "/report.csv") == slurp(td.sub("b") + "/report.csv"));
    CHECK(!slurp(td.sub("a") + "/report.csv").empty());
}
