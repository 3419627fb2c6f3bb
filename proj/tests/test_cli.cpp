#include "gazelens/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gazelens;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(GAZELENS_TEST_TMP) / "cli" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "gazelens");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("demo session analyzes with three levels and no drops") {
    const fs::path dir = scratch("demo");
    REQUIRE(run({"synth", "--demo", "--out", (dir / "s1.csv").string()}) == kExitOk);
    CHECK(fs::exists(dir / "s1.truth.json"));
    REQUIRE(run({"analyze", (dir / "s1.csv").string(), "--out", (dir / "out").string()}) == kExitOk);
    const auto j = load_json(dir / "out" / "report.json");
    CHECK(j["levels"].size() == 3);
    CHECK(j["input"]["dropped_count"] == 0);
    const std::string md = slurp(dir / "out" / "report.md");
    CHECK(md.find("### Level 1") != std::string::npos);
    CHECK(md.find("### Level 3") != std::string::npos);
    CHECK(md.find("Cross-level comparison") != std::string::npos);
}

TEST_CASE("all-(0,0) log is an empty session") {
    const fs::path dir = scratch("zeros");
    std::ofstream(dir / "z.csv") << "timestamp_ms,gaze,level\n0,\"(0,0)\",1\n20,\"(0,0)\",1\n";
    std::string err;
    CHECK(run({"analyze", (dir / "z.csv").string(), "--out", (dir / "out").string()}, nullptr, &err) ==
          kExitEmptySession);
    CHECK_FALSE(err.empty());
}

TEST_CASE("flag overrides are echoed") {
    const fs::path dir = scratch("override");
    REQUIRE(run({"synth", "--demo", "--out", (dir / "s.csv").string()}) == kExitOk);
    REQUIRE(run({"analyze", (dir / "s.csv").string(), "--out", (dir / "out").string(), "--v-basic", "500",
                 "--set", "match.max_latency=4000"}) == kExitOk);
    const auto j = load_json(dir / "out" / "report.json");
    CHECK(j["config"]["detect.v_basic"] == "500");
    CHECK(j["config"]["match.max_latency"] == "4000");
}

TEST_CASE("config file, environment and flag precedence") {
    const fs::path dir = scratch("precedence");
    REQUIRE(run({"synth", "--demo", "--out", (dir / "s.csv").string()}) == kExitOk);
    std::ofstream(dir / "cfg.txt") << "detect.v_basic = 600\ndetect.v_advanced = 250\n";
    REQUIRE(run({"analyze", (dir / "s.csv").string(), "--out", (dir / "a").string(), "--config",
                 (dir / "cfg.txt").string(), "--v-basic", "650"}) == kExitOk);
    auto j = load_json(dir / "a" / "report.json");
    CHECK(j["config"]["detect.v_basic"] == "650");
    CHECK(j["config"]["detect.v_advanced"] == "250");

    ::setenv(kConfigEnvVar, (dir / "cfg.txt").c_str(), 1);
    REQUIRE(run({"analyze", (dir / "s.csv").string(), "--out", (dir / "b").string()}) == kExitOk);
    ::unsetenv(kConfigEnvVar);
    j = load_json(dir / "b" / "report.json");
    CHECK(j["config"]["detect.v_basic"] == "600");
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    CHECK(run({"analyze", (dir / "missing.csv").string()}) == kExitMissingInput);
    std::ofstream(dir / "bad.csv") << "timestamp_ms,gaze\n0,\"(1,2\"\n";
    CHECK(run({"analyze", (dir / "bad.csv").string(), "--out", (dir / "o").string()}) == kExitParse);
    std::ofstream(dir / "ok.csv") << "timestamp_ms,gaze\n0,\"(100,200)\"\n20,\"(101,200)\"\n";
    CHECK(run({"analyze", (dir / "ok.csv").string(), "--set", "detect.bogus=1"}) == kExitConfig);
    CHECK(run({"analyze", (dir / "ok.csv").string(), "--v-basic", "-5"}) == kExitConfig);
    std::ofstream(dir / "blocker") << "x";
    CHECK(run({"analyze", (dir / "ok.csv").string(), "--out", (dir / "blocker" / "x").string()}) == kExitOutput);
    CHECK(run({"frobnicate"}) == kExitUsage);
    CHECK(run({"analyze"}) == kExitUsage);
    std::ofstream(dir / "spec.json") << "{\"levels\":[{\"clusters\":[{\"center\":[100,100],\"samples\":3,\"dwell_ms\":80}]}]}";
    std::string err;
    CHECK(run({"synth", "--spec", (dir / "spec.json").string(), "--out", (dir / "s.csv").string()}, nullptr, &err) ==
          kExitSpec);
    CHECK(err.find("infeasible") != std::string::npos);
}

TEST_CASE("a level without valid gaze is a partial failure") {
    const fs::path dir = scratch("partial");
    std::ofstream f(dir / "p.csv");
    f << "timestamp_ms,gaze,event,level\n";
    for (int i = 0; i < 20; ++i) f << i * 20 << ",\"(" << 500 + i % 3 << ",500)\",,1\n";
    f << "1000,\"(0,0)\",,2\n1020,\"(0,0)\",,2\n";
    f.close();
    REQUIRE(run({"analyze", (dir / "p.csv").string(), "--out", (dir / "out").string()}) == kExitPartial);
    const auto j = load_json(dir / "out" / "report.json");
    CHECK(j["levels"].size() == 1);
    CHECK(j["failed_levels"].size() == 1);
    CHECK(j["failed_levels"][0]["level"] == 2);
}

TEST_CASE("dwell-80ms spec produces no fixations") {
    const fs::path dir = scratch("dwell80");
    std::ofstream(dir / "spec.json")
        << "{\"seed\":4,\"levels\":[{\"clusters\":[{\"center\":[300,300],\"dwell_ms\":80},"
           "{\"center\":[900,300],\"dwell_ms\":80},{\"center\":[1500,300],\"dwell_ms\":80}]}]}";
    REQUIRE(run({"synth", "--spec", (dir / "spec.json").string(), "--out", (dir / "s.csv").string()}) == kExitOk);
    REQUIRE(run({"analyze", (dir / "s.csv").string(), "--out", (dir / "out").string()}) == kExitOk);
    const auto j = load_json(dir / "out" / "report.json");
    CHECK(j["levels"][0]["fixations"].empty());
    CHECK(j["levels"][0]["metrics"]["fixation_count"] == 0);
}

TEST_CASE("synth with a repeated seed writes identical bytes") {
    const fs::path dir = scratch("seed");
    REQUIRE(run({"synth", "--demo", "--seed", "77", "--out", (dir / "a.csv").string()}) == kExitOk);
    REQUIRE(run({"synth", "--demo", "--seed", "77", "--out", (dir / "b.csv").string()}) == kExitOk);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.truth.json") == slurp(dir / "b.truth.json"));
}

TEST_CASE("batch mode writes one report per student and an index") {
    const fs::path dir = scratch("batch");
    fs::create_directories(dir / "in");
    REQUIRE(run({"synth", "--demo", "--seed", "1", "--out", (dir / "in" / "alice.csv").string()}) == kExitOk);
    REQUIRE(run({"synth", "--demo", "--seed", "2", "--out", (dir / "in" / "bob.csv").string()}) == kExitOk);
    REQUIRE(run({"analyze", (dir / "in").string(), "--out", (dir / "seq").string()}) == kExitOk);
    REQUIRE(run({"analyze", (dir / "in").string(), "--out", (dir / "par").string(), "--jobs", "4"}) == kExitOk);
    CHECK(fs::exists(dir / "seq" / "alice" / "report.json"));
    CHECK(fs::exists(dir / "seq" / "bob" / "report.md"));
    const auto index = load_json(dir / "seq" / "index.json");
    REQUIRE(index["sessions"].size() == 2);
    CHECK(index["sessions"][0]["student_id"] == "alice");
    CHECK(index["sessions"][1]["status"] == "ok");
    CHECK(slurp(dir / "seq" / "alice" / "report.json") == slurp(dir / "par" / "alice" / "report.json"));
    CHECK(slurp(dir / "seq" / "index.json").size() > 0);
}

TEST_CASE("--json prints only the report on stdout") {
    const fs::path dir = scratch("pipe");
    REQUIRE(run({"synth", "--demo", "--out", (dir / "s.csv").string()}) == kExitOk);
    std::string out;
    REQUIRE(run({"analyze", (dir / "s.csv").string(), "--out", (dir / "o").string(), "--json"}, &out) == kExitOk);
    CHECK(out == slurp(dir / "o" / "report.json"));
}

TEST_CASE("validate-config and version") {
    const fs::path dir = scratch("validate");
    std::ofstream(dir / "good.txt") << "detect.v_basic = 500\n";
    std::ofstream(dir / "bad.txt") << "detect.v_basic = fast\n";
    std::string out;
    CHECK(run({"validate-config", (dir / "good.txt").string()}, &out) == kExitOk);
    CHECK(out.find("detect.v_basic = 500") != std::string::npos);
    CHECK(run({"validate-config", (dir / "bad.txt").string()}) == kExitConfig);
    CHECK(run({"version"}, &out) == kExitOk);
    CHECK(out == tool_version() + "\n");
}
