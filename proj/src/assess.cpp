#include "gazelens/assess.hpp"

#include "gazelens/format.hpp"

#include <algorithm>
#include <sstream>

namespace gazelens {

const char* to_string(Urgency u) {
    switch (u) {
        case Urgency::high: return "HIGH";
        case Urgency::moderate: return "MODERATE";
        case Urgency::low: return "LOW";
    }
    return "LOW";
}

Urgency urgency_for(int raw_score, const RiskRules& rules) {
    if (raw_score > rules.urgency_high_above) return Urgency::high;
    if (raw_score > rules.urgency_moderate_above) return Urgency::moderate;
    return Urgency::low;
}

RiskAssessment risk_score(const SessionMetrics& m, const RiskRules& rules) {
    RiskAssessment r;
    auto trigger = [&](int weight, const char* label) {
        r.raw_score += weight;
        r.factors.emplace_back(label);
    };

    if (!m.task_relevance) {
        r.notes.emplace_back("task relevance undefined; scored as worst case");
        trigger(rules.weight_relevance_critical, factors::kCriticalFocus);
    } else if (*m.task_relevance < rules.relevance_critical) {
        trigger(rules.weight_relevance_critical, factors::kCriticalFocus);
    } else if (*m.task_relevance < rules.relevance_low) {
        trigger(rules.weight_relevance_low, factors::kLowFocus);
    }

    if (!m.attention_scatter) {
        r.notes.emplace_back("attention scatter undefined; scored as worst case");
        trigger(rules.weight_scatter, factors::kPoorControl);
    } else if (*m.attention_scatter > rules.scatter_limit) {
        trigger(rules.weight_scatter, factors::kPoorControl);
    }

    if (static_cast<double>(m.aoi_transitions) > rules.transitions_limit) {
        trigger(rules.weight_transitions, factors::kHyperactiveScanning);
    }

    if (m.no_targets) {
        r.notes.emplace_back("no targets in level; hit rate scored as worst case");
        trigger(rules.weight_hit_rate, factors::kVeryLowPerformance);
    } else if (m.hit_rate < rules.hit_rate_floor) {
        trigger(rules.weight_hit_rate, factors::kVeryLowPerformance);
    }

    r.display_score = std::min(r.raw_score, rules.display_cap);
    r.urgency = urgency_for(r.raw_score, rules);
    return r;
}

std::string performance_label(double task_relevance, const LabelRules& rules) {
    if (task_relevance >= rules.excellent_at) return performance::kExcellent;
    if (task_relevance >= rules.good_at) return performance::kGood;
    return performance::kNeedsSupport;
}

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

AudienceNotes write_notes(std::span<const SessionMetrics> levels, std::span<const RiskAssessment> risks,
                          std::span<const LevelId> ids, const InterventionPlan& plan, const LabelRules& label_rules) {
    std::ostringstream student;
    std::ostringstream teacher;
    std::ostringstream specialist;

    for (std::size_t i = 0; i < levels.size(); ++i) {
        const SessionMetrics& m = levels[i];
        const RiskAssessment& r = risks[i];
        const std::string label = m.task_relevance ? performance_label(*m.task_relevance, label_rules)
                                                   : std::string(performance::kNeedsSupport);
        student << "Level " << ids[i] << ": " << label << ". ";
        if (label == performance::kExcellent) {
            student << "Your eyes stayed on the bins most of the time. Keep it up!\n";
        } else if (label == performance::kGood) {
            student << "You looked at the bins often. Try to keep your eyes on them a little longer.\n";
        } else {
            student << "Try looking at the bins before you choose where the trash goes.\n";
        }

        teacher << "Level " << ids[i] << ": risk " << r.display_score << "/10 (" << to_string(r.urgency) << "), "
                << "hit rate " << format_fixed(m.hit_rate, 1) << "%, task relevance "
                << format_fixed(m.task_relevance ? std::optional<double>(*m.task_relevance * 100.0) : std::nullopt, 1)
                << "%. Factors: " << (r.factors.empty() ? std::string("none") : join(r.factors, "; ")) << ".\n";

        specialist << "Level " << ids[i] << ": raw score " << r.raw_score << "; scatter "
                   << format_fixed(m.attention_scatter, 1) << " px; AOI transitions " << m.aoi_transitions
                   << "; gaze efficiency " << format_fixed(m.gaze_efficiency, 3) << "; processing "
                   << m.processing_style << "; search " << m.search_pattern << ".";
        for (const auto& note : r.notes) specialist << " Note: " << note << ".";
        specialist << "\n";
    }

    teacher << "Average task relevance " << format_fixed(plan.avg_relevance, 1) << "%; overall urgency "
            << to_string(plan.max_urgency) << ". Recommended: "
            << (plan.interventions.empty() ? std::string("no action needed") : join(plan.interventions, "; "))
            << ".\n";
    if (plan.max_urgency == Urgency::high) {
        specialist << "Overall urgency HIGH: follow-up assessment of attention regulation is recommended.\n";
    }
    return {student.str(), teacher.str(), specialist.str()};
}

}  // namespace

InterventionPlan plan_interventions(std::span<const SessionMetrics> levels, std::span<const RiskAssessment> risks,
                                    const PlanRules& rules, const LabelRules& label_rules,
                                    std::span<const LevelId> level_ids) {
    if (levels.empty()) throw ContractError("intervention planning needs at least one level");
    if (risks.size() != levels.size()) throw ContractError("one risk assessment per level is required");
    if (!level_ids.empty() && level_ids.size() != levels.size()) {
        throw ContractError("level id count does not match level count");
    }
    std::vector<LevelId> default_ids;
    if (level_ids.empty()) {
        for (std::size_t i = 0; i < levels.size(); ++i) default_ids.push_back(static_cast<LevelId>(i + 1));
        level_ids = default_ids;
    }

    InterventionPlan plan;
    double total = 0.0;
    for (const auto& m : levels) total += m.task_relevance.value_or(0.0);
    plan.avg_relevance = total / static_cast<double>(levels.size()) * 100.0;

    if (plan.avg_relevance < rules.focus_tier_below) {
        plan.interventions = {interventions::kFocusTraining, interventions::kReduceDistractions,
                              interventions::kAttentionCuing};
    } else if (plan.avg_relevance < rules.sustained_tier_below) {
        plan.interventions = {interventions::kSustainedAttention, interventions::kVisualAttention};
    }

    for (const auto& r : risks) plan.max_urgency = std::max(plan.max_urgency, r.urgency);
    if (plan.max_urgency == Urgency::high) plan.interventions.emplace_back(interventions::kImmediate);
    if (plan.max_urgency == Urgency::moderate) plan.interventions.emplace_back(interventions::kPreventive);

    plan.audience_notes = write_notes(levels, risks, level_ids, plan, label_rules);
    return plan;
}

RiskProfile risk_profile(const SessionMetrics& m) {
    const auto clamp100 = [](double v) { return std::clamp(v, 0.0, 100.0); };
    RiskProfile p;
    if (m.task_relevance) {
        p.task_focus = clamp100(100.0 * *m.task_relevance);
    } else {
        p.flags.emplace_back("task_focus undefined");
    }
    if (m.attention_scatter) {
        p.attention_control = clamp100(100.0 * (1.0 - std::max(0.0, *m.attention_scatter - 200.0) / 600.0));
    } else {
        p.flags.emplace_back("attention_control undefined");
    }
    if (m.gaze_efficiency) {
        p.movement_efficiency = clamp100(100.0 * *m.gaze_efficiency / 0.5);
    } else {
        p.flags.emplace_back("movement_efficiency undefined");
    }
    p.scanning_pattern = clamp100(100.0 * static_cast<double>(m.aoi_transitions) / 80.0);
    return p;
}

double trend_score(const RiskProfile& p) {
    return (p.task_focus + p.attention_control + p.movement_efficiency + (100.0 - p.scanning_pattern)) / 4.0;
}

}  // namespace gazelens
