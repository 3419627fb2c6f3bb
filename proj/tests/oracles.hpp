// Test-only reference implementations. Written directly from the rule
// statements, without calling into the library's own helpers.
#pragma once

#include "gazelens/core.hpp"
#include "gazelens/ingest.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using gazelens::AoiRect;
using gazelens::GazeSample;
using gazelens::TimelineEvent;

// Greedy matching by brute force: targets in time order, each takes the
// earliest-timestamped unused click inside the window.
struct Pairing {
    std::size_t matched = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (target, click)
};

inline Pairing greedy_match(const std::vector<TimelineEvent>& targets, const std::vector<TimelineEvent>& clicks,
                            long long lo, long long hi) {
    Pairing out;
    std::vector<bool> used(clicks.size(), false);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::optional<std::size_t> best;
        for (std::size_t c = 0; c < clicks.size(); ++c) {
            if (used[c]) continue;
            const long long d = clicks[c].timestamp - targets[t].timestamp;
            if (d < lo || d > hi) continue;
            if (!best || clicks[c].timestamp < clicks[*best].timestamp) best = c;
        }
        if (best) {
            used[*best] = true;
            out.pairs.emplace_back(t, *best);
            ++out.matched;
        }
    }
    return out;
}

// Population standard deviation, two-pass.
inline double pop_stddev(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

inline bool inside_inflated(double px, double py, const AoiRect& a, double tol) {
    return px >= a.x - tol && px <= a.x + a.w + tol && py >= a.y - tol && py <= a.y + a.h + tol;
}

// Linear containment scan, first match in declaration order.
inline std::optional<std::string> containment(double px, double py, const std::vector<AoiRect>& aois, double tol) {
    for (const auto& a : aois)
        if (inside_inflated(px, py, a, tol)) return a.name;
    return std::nullopt;
}

// Count of label changes between consecutive non-empty labels.
inline std::size_t transitions(const std::vector<std::optional<std::string>>& labels) {
    std::vector<std::string> seq;
    for (const auto& l : labels)
        if (l) seq.push_back(*l);
    std::size_t n = 0;
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i] != seq[i - 1]) ++n;
    return n;
}

// Additive rule score computed straight from the rule table.
inline int risk_raw(double relevance, double scatter, double transitions, double hit_rate) {
    int s = 0;
    if (relevance < 0.30)
        s += 3;
    else if (relevance < 0.50)
        s += 2;
    if (scatter > 400.0) s += 3;
    if (transitions > 60.0) s += 2;
    if (hit_rate < 50.0) s += 3;
    return s;
}

}  // namespace oracle

namespace testutil {

inline gazelens::GazeSample sample(long long t, double x, double y, int level = 1) {
    gazelens::GazeSample s;
    s.timestamp = t;
    s.pos = gazelens::Point2(x, y);
    s.level = level;
    return s;
}

inline gazelens::TimelineEvent event(long long t, gazelens::EventKind kind, int level = 1) {
    return gazelens::TimelineEvent{t, kind, kind == gazelens::EventKind::click ? "Picked Trash" : "Target Spawn",
                                   level};
}

}  // namespace testutil
