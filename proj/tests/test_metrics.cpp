#include "gazelens/metrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace gazelens;
using testutil::event;
using testutil::sample;

namespace {

std::vector<TimelineEvent> at(std::initializer_list<Millis> times, EventKind kind) {
    std::vector<TimelineEvent> v;
    for (Millis t : times) v.push_back(event(t, kind));
    return v;
}

Fixation fixation_of(Millis duration) {
    Fixation f;
    f.duration = duration;
    return f;
}

Saccade saccade_of(double amplitude) {
    Saccade s;
    s.amplitude = amplitude;
    return s;
}

}  // namespace

TEST_CASE("match_targets examples") {
    MatchConfig cfg;
    {
        const auto r = match_targets(at({1000}, EventKind::target), at({1600}, EventKind::click), cfg);
        CHECK(r.matched == 1);
        CHECK(r.hit_rate == 100.0);
    }
    {
        const auto r = match_targets(at({1000}, EventKind::target), at({1400}, EventKind::click), cfg);
        CHECK(r.matched == 0);
        CHECK(r.hit_rate == 0.0);
    }
    {
        const auto r = match_targets(at({0, 100}, EventKind::target), at({700}, EventKind::click), cfg);
        CHECK(r.hit_rate == 50.0);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].target == 0);
    }
    {
        const auto r = match_targets({}, at({700}, EventKind::click), cfg);
        CHECK(r.no_targets);
        CHECK(r.hit_rate == 0.0);
    }
}

TEST_CASE("latency window endpoints are inclusive") {
    MatchConfig cfg;
    const auto one = [&](Millis latency) {
        return match_targets(at({1000}, EventKind::target), at({1000 + latency}, EventKind::click), cfg).matched;
    };
    CHECK(one(521) == 0);
    CHECK(one(522) == 1);
    CHECK(one(5000) == 1);
    CHECK(one(5001) == 0);
}

TEST_CASE("matching agrees with brute force and never reuses a click") {
    MatchConfig cfg;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<Millis> t(0, 30000);
    std::uniform_int_distribution<int> n(0, 12);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Millis> ts(n(rng)), cs(n(rng));
        for (auto& x : ts) x = t(rng);
        for (auto& x : cs) x = t(rng);
        std::sort(ts.begin(), ts.end());
        std::sort(cs.begin(), cs.end());
        std::vector<TimelineEvent> targets, clicks;
        for (Millis x : ts) targets.push_back(event(x, EventKind::target));
        for (Millis x : cs) clicks.push_back(event(x, EventKind::click));
        const auto r = match_targets(targets, clicks, cfg);
        const auto o = oracle::greedy_match(targets, clicks, cfg.min_latency, cfg.max_latency);
        CHECK(r.matched == o.matched);
        REQUIRE(r.pairs.size() == o.pairs.size());
        std::vector<bool> used(clicks.size(), false);
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            CHECK(r.pairs[i].target == o.pairs[i].first);
            CHECK(r.pairs[i].click == o.pairs[i].second);
            CHECK_FALSE(used[r.pairs[i].click]);
            used[r.pairs[i].click] = true;
            CHECK(r.pairs[i].latency >= cfg.min_latency);
            CHECK(r.pairs[i].latency <= cfg.max_latency);
        }
    }
}

TEST_CASE("attention_scatter") {
    const std::vector<GazeSample> same{sample(0, 4, 4), sample(1, 4, 4), sample(2, 4, 4)};
    CHECK(*attention_scatter(same) == 0.0);
    const std::vector<GazeSample> row{sample(0, 0, 7), sample(1, 10, 7), sample(2, 20, 7)};
    CHECK(*attention_scatter(row) == doctest::Approx(std::sqrt(200.0 / 3.0)));
    CHECK_FALSE(attention_scatter(std::vector<GazeSample>{}));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1920.0);
    std::vector<GazeSample> s;
    std::vector<double> xs, ys;
    Points2 pts(2, 500);
    for (int i = 0; i < 500; ++i) {
        s.push_back(sample(i, u(rng), u(rng) / 2));
        xs.push_back(s.back().pos.x());
        ys.push_back(s.back().pos.y());
        pts.col(i) = s.back().pos;
    }
    const double expect = oracle::pop_stddev(xs) + oracle::pop_stddev(ys);
    CHECK(*attention_scatter(s) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(attention_scatter(pts) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("task_relevance") {
    ScreenConfig screen;
    const AoiMap m = make_aoi_map({{"bin", 100, 100, 100, 100, true}, {"panel", 1000, 100, 100, 100, false}}, screen);
    const std::vector<GazeSample> s{sample(0, 150, 150), sample(1, 160, 150), sample(2, 240, 150),
                                    sample(3, 600, 600)};
    CHECK(*task_relevance(s, m) == 0.75);
    const std::vector<GazeSample> panel{sample(0, 1050, 150), sample(1, 150, 150)};
    CHECK(*task_relevance(panel, m) == 0.5);
    CHECK(*task_relevance(s, AoiMap{}) == 0.0);
    CHECK_FALSE(task_relevance(std::vector<GazeSample>{}, m));
}

TEST_CASE("aoi_transitions examples") {
    ScreenConfig screen;
    const AoiMap m = make_aoi_map({{"A", 100, 100, 100, 100, true}, {"B", 600, 100, 100, 100, true}}, screen);
    const auto seq = [](std::initializer_list<char> labels) {
        std::vector<GazeSample> s;
        Millis t = 0;
        for (char c : labels) s.push_back(sample(t++, c == 'A' ? 150 : (c == 'B' ? 650 : 400), 150));
        return s;
    };
    CHECK(aoi_transitions(seq({'A', 'A', 'B', 'B', 'A'}), m) == 2);
    CHECK(aoi_transitions(seq({'A', 'A', 'A'}), m) == 0);
    CHECK(aoi_transitions(seq({'A', 'B', 'A', 'B'}), m) == 3);
    CHECK(aoi_transitions(seq({'A', '-', 'A', '-', 'B'}), m) == 1);
}

TEST_CASE("aoi_transitions agrees with a brute-force recount") {
    ScreenConfig screen;
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int layout = 0; layout < 40; ++layout) {
        std::vector<AoiRect> aois;
        const int k = 1 + static_cast<int>(u(rng) * 6);
        for (int i = 0; i < k; ++i)
            aois.push_back({"aoi" + std::to_string(i), u(rng) * 1700, u(rng) * 900, 20 + u(rng) * 300,
                            20 + u(rng) * 300, true});
        const AoiMap m = make_aoi_map(aois, screen);
        std::vector<GazeSample> s;
        std::vector<std::optional<std::string>> labels;
        for (int i = 0; i < 300; ++i) {
            s.push_back(sample(i * 10, u(rng) * 1920, u(rng) * 1080));
            labels.push_back(oracle::containment(s.back().pos.x(), s.back().pos.y(), m.aois(), 50.0));
        }
        CHECK(aoi_transitions(s, m) == oracle::transitions(labels));
    }
}

TEST_CASE("gaze_efficiency") {
    std::vector<GazeSample> twenty;
    for (int i = 0; i < 20; ++i) twenty.push_back(sample(i, 1, 1));
    CHECK(*gaze_efficiency(std::vector<Fixation>{}, twenty) == 0.0);
    CHECK(*gaze_efficiency(std::vector<Fixation>(3), twenty) == doctest::Approx(0.15));
    std::vector<GazeSample> many(2200);
    CHECK(*gaze_efficiency(std::vector<Fixation>(11), many) == doctest::Approx(0.005));
    CHECK_FALSE(gaze_efficiency(std::vector<Fixation>{}, std::vector<GazeSample>{}));
}

TEST_CASE("scan path and ratio") {
    std::vector<Saccade> sacc;
    double sum = 0.0;
    for (int i = 0; i < 19; ++i) {
        sacc.push_back(saccade_of(735.2 + (i % 2 ? 1 : -1) * i));
        sum += sacc.back().amplitude;
    }
    const auto r = scan_path_and_ratio(std::vector<Fixation>(11), sacc);
    CHECK(r.scan_path == sum);
    CHECK(*r.fix_sacc_ratio == doctest::Approx(11.0 / 19.0));
    CHECK(*scan_path_and_ratio(std::vector<Fixation>(1), std::vector<Saccade>(2)).fix_sacc_ratio == 0.5);
    CHECK_FALSE(scan_path_and_ratio(std::vector<Fixation>(1), {}).fix_sacc_ratio);
}

TEST_CASE("behavior labels") {
    CHECK(processing_style_for(7276.6) == labels::kDeepProcessing);
    CHECK(processing_style_for(150) == labels::kQuickScanning);
    CHECK(processing_style_for(400) == labels::kModerateProcessing);
    CHECK(processing_style_for(200) == labels::kModerateProcessing);
    CHECK(search_pattern_for(735.2) == labels::kBroadSearch);
    CHECK(search_pattern_for(50) == labels::kFocusedExamination);
    CHECK(search_pattern_for(300) == labels::kMixedSearch);
    CHECK(search_pattern_for(100) == labels::kMixedSearch);
    const auto b = classify_behavior({}, {});
    CHECK(b.processing_style == labels::kInsufficientData);
    CHECK(b.search_pattern == labels::kInsufficientData);
    const std::vector<Fixation> f{fixation_of(100), fixation_of(200)};
    const std::vector<Saccade> s{saccade_of(40), saccade_of(60)};
    const auto b2 = classify_behavior(f, s);
    CHECK(b2.processing_style == labels::kQuickScanning);
    CHECK(b2.search_pattern == labels::kFocusedExamination);
}

TEST_CASE("compute_metrics bounds") {
    ScreenConfig screen;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const AoiMap m = make_aoi_map({{"A", 100, 100, 300, 300, true}, {"B", 1200, 600, 300, 300, true}}, screen);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<GazeSample> s;
        for (int i = 0; i < 200; ++i) s.push_back(sample(i * 20, u(rng) * 1920, u(rng) * 1080));
        const EventSet e = detect_events(s, DetectionConfig{}, m);
        const auto metrics = compute_metrics(s, {}, e, m);
        CHECK(*metrics.task_relevance >= 0.0);
        CHECK(*metrics.task_relevance <= 1.0);
        CHECK(*metrics.gaze_efficiency >= 0.0);
        CHECK(*metrics.gaze_efficiency <= 1.0);
        CHECK(metrics.sample_count == s.size());
        CHECK(metrics.no_targets);
    }
}
