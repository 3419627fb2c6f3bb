#include "gazelens/detect.hpp"

#include "gazelens/geometry.hpp"

#include <cmath>
#include <map>

namespace gazelens {

const char* to_string(MovementKind kind) {
    return kind == MovementKind::fixation ? "fixation" : "saccade";
}

void DetectionConfig::validate() const {
    if (!(v_basic > 0.0) || !(v_advanced > 0.0) || !(spatial_threshold > 0.0) || min_duration <= 0 ||
        min_cluster_size == 0) {
        throw ConfigError("detection thresholds must be strictly positive");
    }
    if (v_advanced > v_basic) throw ConfigError("v_advanced must not exceed v_basic");
}

double velocity(const GazeSample& prev, const GazeSample& curr) {
    if (curr.timestamp < prev.timestamp) {
        throw OrderingError("sample at " + std::to_string(curr.timestamp) + " ms precedes " +
                            std::to_string(prev.timestamp) + " ms");
    }
    return displacement_velocity(prev.pos, curr.pos, static_cast<double>(curr.timestamp - prev.timestamp));
}

std::vector<SampleLabel> classify_ivt(std::span<const GazeSample> samples, const DetectionConfig& cfg) {
    std::vector<SampleLabel> labels;
    if (samples.size() < 2) return labels;
    labels.reserve(samples.size() - 1);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double v = velocity(samples[i - 1], samples[i]);
        labels.push_back({i, v <= cfg.v_basic ? MovementKind::fixation : MovementKind::saccade, v});
    }
    return labels;
}

namespace {

Points2 positions(std::span<const GazeSample> samples) {
    Points2 pts(2, static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = samples[i].pos;
    return pts;
}

std::optional<std::string> modal_aoi(std::span<const GazeSample> members, const AoiMap& aoi) {
    // Key -1 is "no AOI"; ties go to the earliest declared AOI.
    std::map<long, std::size_t> counts;
    for (const auto& s : members) {
        const auto idx = aoi.find(s.pos);
        ++counts[idx ? static_cast<long>(*idx) : -1L];
    }
    long best = -1;
    std::size_t best_count = 0;
    for (const auto& [key, count] : counts) {
        const bool better = count > best_count || (count == best_count && best == -1 && key >= 0);
        if (better) {
            best = key;
            best_count = count;
        }
    }
    if (best < 0) return std::nullopt;
    return aoi.aois()[static_cast<std::size_t>(best)].name;
}

bool qualifies(std::span<const GazeSample> members, const DetectionConfig& cfg) {
    return members.size() >= cfg.min_cluster_size &&
           members.back().timestamp - members.front().timestamp >= cfg.min_duration;
}

}  // namespace

Fixation finalize_cluster(std::span<const GazeSample> members, const DetectionConfig& cfg, const AoiMap& aoi) {
    if (members.empty() || !qualifies(members, cfg)) {
        throw ContractError("cluster of " + std::to_string(members.size()) +
                            " samples does not meet the fixation minima");
    }
    const Points2 pts = positions(members);
    Fixation f;
    f.center = centroid(pts);
    f.start = members.front().timestamp;
    f.end = members.back().timestamp;
    f.duration = f.end - f.start;
    f.dispersion = dispersion(pts);
    f.sample_count = members.size();
    f.dominant_aoi = modal_aoi(members, aoi);
    return f;
}

Saccade summarize_saccade(std::span<const GazeSample> segment) {
    Saccade s;
    if (segment.size() < 2) {
        s.degenerate = true;
        if (!segment.empty()) {
            s.from = s.to = segment.front().pos;
            s.start = s.end = segment.front().timestamp;
        }
        return s;
    }
    s.from = segment.front().pos;
    s.to = segment.back().pos;
    s.amplitude = (s.to - s.from).norm();
    s.start = segment.front().timestamp;
    s.end = segment.back().timestamp;
    s.duration = s.end - s.start;
    for (std::size_t i = 1; i < segment.size(); ++i) {
        const double v = velocity(segment[i - 1], segment[i]);
        if (std::isfinite(v) && v > s.peak_velocity) s.peak_velocity = v;
    }
    return s;
}

EventSet detect_events(std::span<const GazeSample> samples, const DetectionConfig& cfg, const AoiMap& aoi) {
    EventSet out;
    out.cluster_of.assign(samples.size(), -1);
    if (samples.empty()) return out;

    std::size_t begin = 0;
    Point2 sum = samples[0].pos;
    std::optional<std::size_t> last_fixation_end;

    auto close = [&](std::size_t first, std::size_t last) {
        const auto members = samples.subspan(first, last - first + 1);
        if (!qualifies(members, cfg)) return;
        if (last_fixation_end) {
            out.saccades.push_back(summarize_saccade(samples.subspan(*last_fixation_end, first - *last_fixation_end + 1)));
        }
        const int id = static_cast<int>(out.fixations.size());
        out.fixations.push_back(finalize_cluster(members, cfg, aoi));
        for (std::size_t k = first; k <= last; ++k) out.cluster_of[k] = id;
        last_fixation_end = last;
    };

    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double v = velocity(samples[i - 1], samples[i]);
        const Point2 center = sum / static_cast<double>(i - begin);
        if (v < cfg.v_advanced && (samples[i].pos - center).norm() <= cfg.spatial_threshold) {
            sum += samples[i].pos;
            continue;
        }
        close(begin, i - 1);
        begin = i;
        sum = samples[i].pos;
    }
    close(begin, samples.size() - 1);
    return out;
}

}  // namespace gazelens
