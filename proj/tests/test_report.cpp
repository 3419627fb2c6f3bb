#include "gazelens/cli.hpp"
#include "gazelens/format.hpp"
#include "gazelens/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gazelens;
namespace fs = std::filesystem;

namespace {

SessionReport demo_report() {
    const SynthSession synth = generate_session(demo_spec());
    return analyze_session(synth.session, AnalysisConfig{}, "demo");
}

LevelReport level_with(std::size_t fixations, std::size_t saccades) {
    LevelReport lr;
    lr.level = 1;
    lr.fixations.resize(fixations);
    lr.saccades.resize(saccades);
    lr.metrics.fixation_count = fixations;
    lr.metrics.saccade_count = saccades;
    if (saccades > 0) lr.metrics.fix_sacc_ratio = static_cast<double>(fixations) / saccades;
    return lr;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t data_rows(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n == 0 ? 0 : n - 1;
}

}  // namespace

TEST_CASE("format_fixed rounds half-up without locale") {
    CHECK(format_fixed(0.579, 1) == "0.6");
    CHECK(format_fixed(11.0 / 19.0, 1) == "0.6");
    CHECK(format_fixed(3.0 / 17.0, 1) == "0.2");
    CHECK(format_fixed(0.5, 1) == "0.5");
    CHECK(format_fixed(0.25, 1) == "0.3");
    CHECK(format_fixed(13969.6, 1) == "13969.6");
    CHECK(format_fixed(2.0, 3) == "2.000");
    CHECK(format_fixed(0.0, 1) == "0.0");
    CHECK(format_fixed(std::optional<double>{}, 1) == kUndefinedMarker);
    CHECK(quantize(0.46249, 3) == 0.462);
}

TEST_CASE("cross_level_table ratio cells") {
    const std::vector<LevelReport> levels{level_with(11, 19), level_with(3, 17), level_with(1, 2), level_with(2, 0)};
    const auto rows = cross_level_table(levels);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].fix_sacc_ratio == "0.6");
    CHECK(rows[1].fix_sacc_ratio == "0.2");
    CHECK(rows[2].fix_sacc_ratio == "0.5");
    CHECK(rows[3].fix_sacc_ratio == kUndefinedMarker);
    CHECK(rows[0].fixations == 11);
    CHECK(rows[0].saccades == 19);
}

TEST_CASE("table rows agree with the event lists in the report") {
    const SessionReport r = demo_report();
    const auto rows = cross_level_table(r.per_level);
    REQUIRE(rows.size() == r.per_level.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& lr = r.per_level[i];
        CHECK(rows[i].fixations == lr.fixations.size());
        CHECK(rows[i].saccades == lr.saccades.size());
        if (!lr.saccades.empty())
            CHECK(rows[i].fix_sacc_ratio ==
                  format_fixed(static_cast<double>(lr.fixations.size()) / lr.saccades.size(), 1));
        double sum = 0.0;
        for (const auto& s : lr.saccades) sum += s.amplitude;
        // Both sides are rounded to 0.1 px, the amplitudes one by one.
        CHECK(std::abs(lr.metrics.scan_path - sum) <= 0.05 * static_cast<double>(lr.saccades.size() + 1));
    }
}

TEST_CASE("structured report round-trips") {
    const SessionReport r = demo_report();
    const auto j = to_json(r);
    CHECK(report_from_json(j) == r);
    CHECK(report_from_json(nlohmann::json::parse(render_json(r))) == r);
    CHECK_THROWS_AS(report_from_json(nlohmann::json::parse("{\"student_id\": 3}")), ParseError);
}

TEST_CASE("undefined metrics serialize as null") {
    SessionReport r;
    r.student_id = "x";
    LevelReport lr = level_with(0, 0);
    r.per_level.push_back(lr);
    const auto j = to_json(r);
    CHECK(j["levels"][0]["metrics"]["fix_sacc_ratio"].is_null());
    CHECK(report_from_json(j) == r);
}

TEST_CASE("markdown report sections") {
    const SessionReport r = demo_report();
    const std::string md = render_markdown(r);
    CHECK(md.find("For the student") != std::string::npos);
    CHECK(md.find("For the teacher") != std::string::npos);
    CHECK(md.find("Cross-level comparison") != std::string::npos);
    CHECK(md.find("Needs Improvement") != std::string::npos);
    for (const auto& lr : r.per_level)
        for (const auto& f : lr.risk.factors) CHECK(md.find(f) != std::string::npos);
    CHECK(render_markdown(r) == md);
}

TEST_CASE("emit_reports is deterministic and sized by the events") {
    const SessionReport r = demo_report();
    const fs::path a = fs::path(GAZELENS_TEST_TMP) / "report_a";
    const fs::path b = fs::path(GAZELENS_TEST_TMP) / "report_b";
    fs::remove_all(a);
    fs::remove_all(b);
    const auto files_a = emit_reports(r, {}, a, {});
    const auto files_b = emit_reports(r, {}, b, {});
    REQUIRE(files_a.size() == files_b.size());
    for (std::size_t i = 0; i < files_a.size(); ++i) {
        CHECK(fs::relative(files_a[i], a) == fs::relative(files_b[i], b));
        CHECK(slurp(files_a[i]) == slurp(files_b[i]));
    }
    for (const auto& lr : r.per_level) {
        const std::string k = std::to_string(lr.level);
        CHECK(data_rows(a / "plots" / ("fixations_L" + k + ".csv")) == lr.fixations.size());
        CHECK(data_rows(a / "plots" / ("saccades_L" + k + ".csv")) == lr.saccades.size());
        CHECK(data_rows(a / "plots" / ("scanpath_L" + k + ".csv")) == lr.fixations.size());
    }
    std::ifstream head(a / "plots" / "fixations_L1.csv");
    std::string header;
    std::getline(head, header);
    CHECK(header == "x,y,duration");
}

TEST_CASE("format selection limits the written files") {
    const SessionReport r = demo_report();
    const fs::path dir = fs::path(GAZELENS_TEST_TMP) / "report_json_only";
    fs::remove_all(dir);
    const auto files = emit_reports(r, ReportFormats{true, false, false}, dir, {});
    CHECK(files.size() == 1);
    CHECK(fs::exists(dir / "report.json"));
    CHECK_FALSE(fs::exists(dir / "report.md"));
}

TEST_CASE("unwritable output raises IoError") {
    const SessionReport r = demo_report();
    const fs::path blocker = fs::path(GAZELENS_TEST_TMP) / "blocker";
    fs::create_directories(blocker.parent_path());
    std::ofstream(blocker) << "file";
    CHECK_THROWS_AS(emit_reports(r, {}, blocker / "sub", {}), IoError);
}

TEST_CASE("histogram") {
    const std::vector<double> v{0, 99.9, 100, 250, 250};
    const auto h = histogram(v, 100);
    REQUIRE(h.size() == 3);
    CHECK(h[0].count == 2);
    CHECK(h[1].count == 1);
    CHECK(h[2].count == 2);
    CHECK(h[2].start == 200);
    CHECK(h[2].end == 300);
    CHECK(histogram(std::vector<double>{}, 100).empty());
}
