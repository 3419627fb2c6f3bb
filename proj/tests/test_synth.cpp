#include "gazelens/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace gazelens;
using testutil::sample;

namespace {

SynthSpec three_clusters(std::size_t samples_each) {
    SynthSpec spec;
    spec.seed = 5;
    SynthLevel lv;
    lv.clusters = {{Point2(300, 300), 0.0, samples_each},
                   {Point2(900, 500), 0.0, samples_each},
                   {Point2(1500, 300), 0.0, samples_each}};
    spec.levels.push_back(lv);
    return spec;
}

std::string csv_of(const SynthSession& s) {
    std::ostringstream out;
    write_session_csv(out, s);
    return out.str();
}

}  // namespace

TEST_CASE("planted clusters are recovered") {
    DetectionConfig cfg;
    const SynthSession s = generate_session(three_clusters(10), cfg);
    const EventSet e = detect_events(s.session.samples, cfg, s.session.aoi_map);
    CHECK(e.fixations.size() == 3);
    REQUIRE(s.truth.levels.size() == 1);
    CHECK(s.truth.levels[0].recoverable_count() == 3);
    for (std::size_t i = 0; i < e.fixations.size(); ++i)
        CHECK((e.fixations[i].center - s.truth.levels[0].fixations[i].center).norm() < 5.0);
}

TEST_CASE("80 ms clusters are not recoverable") {
    DetectionConfig cfg;
    const SynthSession s = generate_session(three_clusters(5), cfg);  // 4 intervals of 20 ms
    CHECK(s.truth.levels[0].fixations[0].end - s.truth.levels[0].fixations[0].start == 80);
    CHECK(detect_events(s.session.samples, cfg, s.session.aoi_map).fixations.empty());
    CHECK(s.truth.levels[0].recoverable_count() == 0);
}

TEST_CASE("same seed gives identical streams") {
    const SynthSpec spec = demo_spec(9);
    const SynthSession a = generate_session(spec);
    const SynthSession b = generate_session(spec);
    CHECK(a.session.samples == b.session.samples);
    CHECK(a.session.events == b.session.events);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(csv_of(generate_session(demo_spec(10))) != csv_of(a));
}

TEST_CASE("session file round-trips through ingest") {
    const SynthSession s = generate_session(demo_spec());
    std::istringstream in(csv_of(s));
    RawSession raw = read_session(in, {}, s.session.screen);
    raw.aoi_map = make_aoi_map(raw.inline_aois, raw.screen, &raw.diag);
    const CleanSession clean = filter_samples(raw);
    CHECK(clean.dropped_count == 0);
    CHECK(clean.diverted_count == s.session.diverted_count);
    CHECK(clean.samples == s.session.samples);
    CHECK(clean.events == s.session.events);
    CHECK(clean.aoi_map.aois() == s.session.aoi_map.aois());
    CHECK(clean.levels == s.session.levels);
}

TEST_CASE("spec JSON round-trips") {
    const SynthSpec spec = demo_spec(3);
    std::istringstream in(synth_spec_to_json(spec));
    const SynthSpec back = parse_synth_spec(in);
    CHECK(csv_of(generate_session(back)) == csv_of(generate_session(spec)));
}

TEST_CASE("infeasible specs are rejected") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_synth_spec(in);
    };
    CHECK_THROWS_AS(parse("{\"levels\":[{\"clusters\":[{\"center\":[100,100],\"samples\":3,\"dwell_ms\":80}]}]}"),
                    SpecError);
    CHECK_THROWS_AS(parse("{\"interval_ms\":0}"), SpecError);
    CHECK_THROWS_AS(parse("not json"), SpecError);
    CHECK(parse("{\"levels\":[{\"clusters\":[{\"center\":[100,100],\"dwell_ms\":80}]}]}").levels[0].clusters[0].samples ==
          5);

    SynthSpec off;
    SynthLevel lv;
    lv.clusters = {{Point2(5000, 300), 0.0, 5}};
    off.levels.push_back(lv);
    CHECK_THROWS_AS(generate_session(off), SpecError);
}

TEST_CASE("planted hit rate is reproduced by matching") {
    const SynthSpec spec = demo_spec();
    const SynthSession s = generate_session(spec);
    for (const auto& truth : s.truth.levels) {
        std::vector<TimelineEvent> targets, clicks;
        for (const auto& e : s.session.level_events(truth.level)) {
            if (e.kind == EventKind::target) targets.push_back(e);
            if (e.kind == EventKind::click) clicks.push_back(e);
        }
        const auto r = match_targets(targets, clicks, spec.match);
        CHECK(r.matched == truth.intended_matches);
        CHECK(r.hit_rate == truth.intended_hit_rate);
    }
}

TEST_CASE("generated gaze respects the planted geometry") {
    const SynthSpec spec = random_spec(21, 8);
    const SynthSession s = generate_session(spec);
    const auto& g = s.session.samples;
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i].timestamp > g[i - 1].timestamp);
        CHECK(s.session.screen.contains(g[i].pos));
    }
    CHECK(s.truth.sample_aoi.size() == g.size());
    // Every step inside a planted cluster stays below the clustering threshold.
    for (const auto& f : s.truth.levels[0].fixations) {
        for (std::size_t i = 1; i < g.size(); ++i) {
            if (g[i - 1].timestamp < f.start || g[i].timestamp > f.end) continue;
            CHECK(velocity(g[i - 1], g[i]) < 300.0);
        }
    }
}

TEST_CASE("oracle_ivt examples") {
    std::vector<GazeSample> still;
    for (int i = 0; i < 5; ++i) still.push_back(sample(i * 20, 10, 10));
    for (auto k : oracle_ivt(still, 721)) CHECK(k == MovementKind::fixation);
    std::vector<GazeSample> jumpy;
    for (int i = 0; i < 6; ++i) jumpy.push_back(sample(i * 20, i % 2 ? 1800 : 100, 500));
    const auto labels = oracle_ivt(jumpy, 721);
    CHECK(labels.size() == 5);
    for (auto k : labels) CHECK(k == MovementKind::saccade);
    CHECK(oracle_ivt(std::vector<GazeSample>{sample(0, 1, 1)}, 721).empty());
}
