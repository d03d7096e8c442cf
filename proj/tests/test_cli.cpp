#include <catch_amalgamated.hpp>

#include "cli.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace attractor::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "attractor-cover");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("attractor_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("presets subcommand", "[cli]")
{
    const auto r = run_cli({"presets"});
    CHECK(r.code == kExitOk);
    for (const char* name : {"example1", "example2", "example3", "example4"}) {
        CHECK(r.out.find(name) != std::string::npos);
    }
    const auto one = run_cli({"presets", "example4"});
    CHECK(one.code == kExitOk);
    CHECK(one.out.find("name = hopf") != std::string::npos);
    CHECK(run_cli({"presets", "example9"}).code == kExitValidation);
}

TEST_CASE("argument errors exit with code 1", "[cli]")
{
    CHECK(run_cli({}).code == kExitValidation);
    CHECK(run_cli({"--bogus"}).code == kExitValidation);
    CHECK(run_cli({"run", "--nope"}).code == kExitValidation);
    CHECK(run_cli({"run"}).code == kExitValidation);
    CHECK(run_cli({"run", "--preset", "example1", "--workers", "0"}).code == kExitValidation);
    CHECK(run_cli({"run", "--config", "/nonexistent.ini"}).code == kExitValidation);
    CHECK(run_cli({"demo", "separatrix", "--x0", "1", "0"}).code == kExitValidation);
}

TEST_CASE("bad config files exit with code 1 and name the key", "[cli]")
{
    const auto dir = fresh_dir("badcfg");
    fs::create_directories(dir);
    const auto cfg = dir / "bad.ini";
    std::ofstream(cfg) << "preset = example1\n[time]\ndt = 0\n";
    const auto r = run_cli({"run", "--config", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("time.dt") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "summary.json"));
}

TEST_CASE("run writes every iteration and a summary", "[cli]")
{
    const auto dir = fresh_dir("run");
    const auto r = run_cli({"run", "--preset", "example1", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("summary.json") != std::string::npos);
    for (int k = 1; k <= 4; ++k) {
        const std::string stem = "cover_" + std::to_string(k);
        CHECK(fs::exists(dir / (stem + ".csv")));
        CHECK(fs::exists(dir / (stem + ".json")));
        CHECK(fs::exists(dir / (stem + ".svg")));
    }
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("iterations").size() == 4);
    CHECK(summary.at("final_cover").at("depth") == 4);
    CHECK(summary.at("config").at("system").at("name") == "eight");
    CHECK(r.err.find("iteration 4:") != std::string::npos);
}

TEST_CASE("worker count does not change the output bytes", "[cli][property]")
{
    const auto a = fresh_dir("w1");
    const auto b = fresh_dir("w5");
    REQUIRE(run_cli({"run", "--preset", "example1", "--iterations", "2", "--workers", "1", "--out", a.string()}).code ==
            kExitOk);
    REQUIRE(run_cli({"run", "--preset", "example1", "--iterations", "2", "--workers", "5", "--out", b.string()}).code ==
            kExitOk);
    for (const char* f : {"cover_1.csv", "cover_2.csv", "cover_2.svg"}) {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("output directory falls back to the environment", "[cli]")
{
    const auto dir = fresh_dir("env");
    ::setenv("ATTRACTOR_COVER_OUT", dir.string().c_str(), 1);
    const auto r = run_cli({"run", "--preset", "example4", "--iterations", "1"});
    ::unsetenv("ATTRACTOR_COVER_OUT");
    REQUIRE(r.code == kExitOk);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "cover_1_xy.svg"));
    CHECK(fs::exists(dir / "cover_1_xz.svg"));
    CHECK(fs::exists(dir / "cover_1_yz.svg"));
}

TEST_CASE("demo separatrix prints JSON", "[cli]")
{
    const auto r = run_cli({"demo", "separatrix", "--horizon", "20"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("fine").at("sign_changes") == 0);
    CHECK(j.contains("coarse"));
}
