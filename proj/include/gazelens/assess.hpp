// Rule-based risk scoring, intervention planning and per-level labels.
#pragma once

#include "gazelens/metrics.hpp"

#include <span>
#include <string>
#include <vector>

namespace gazelens {

enum class Urgency { low, moderate, high };

const char* to_string(Urgency u);

/// Thresholds and weights of the additive risk score. Every comparison is
/// strict, as documented on each field.
struct RiskRules {
    double relevance_critical = 0.30;  ///< task_relevance < this
    int weight_relevance_critical = 3;
    double relevance_low = 0.50;  ///< else task_relevance < this
    int weight_relevance_low = 2;
    double scatter_limit = 400.0;  ///< attention_scatter > this
    int weight_scatter = 3;
    double transitions_limit = 60.0;  ///< aoi_transitions > this
    int weight_transitions = 2;
    double hit_rate_floor = 50.0;  ///< hit_rate < this
    int weight_hit_rate = 3;
    int urgency_high_above = 6;
    int urgency_moderate_above = 3;
    int display_cap = 10;
};

namespace factors {
inline constexpr const char* kCriticalFocus = "Critical task focus deficit";
inline constexpr const char* kLowFocus = "Low task focus";
inline constexpr const char* kPoorControl = "Poor attention control";
inline constexpr const char* kHyperactiveScanning = "Hyperactive scanning";
inline constexpr const char* kVeryLowPerformance = "Very low performance";
}  // namespace factors

struct RiskAssessment {
    int raw_score = 0;
    int display_score = 0;
    std::vector<std::string> factors;  ///< in rule-evaluation order
    Urgency urgency = Urgency::low;
    std::vector<std::string> notes;  ///< provenance of worst-case substitutions

    bool operator==(const RiskAssessment&) const = default;
};

Urgency urgency_for(int raw_score, const RiskRules& rules = {});

/// Additive scoring. Undefined metrics trigger their rule as worst case and
/// leave a note.
RiskAssessment risk_score(const SessionMetrics& m, const RiskRules& rules = {});

struct PlanRules {
    double focus_tier_below = 40.0;      ///< avg relevance percent
    double sustained_tier_below = 60.0;  ///< avg relevance percent
};

namespace interventions {
inline constexpr const char* kFocusTraining = "Focus training";
inline constexpr const char* kReduceDistractions = "Reduce distractions";
inline constexpr const char* kAttentionCuing = "Attention cuing";
inline constexpr const char* kSustainedAttention = "Sustained attention practice";
inline constexpr const char* kVisualAttention = "Visual attention training";
inline constexpr const char* kImmediate = "Immediate intervention needed";
inline constexpr const char* kPreventive = "Preventive measures";
}  // namespace interventions

struct AudienceNotes {
    std::string student;
    std::string teacher;
    std::string specialist;

    bool operator==(const AudienceNotes&) const = default;
};

struct InterventionPlan {
    double avg_relevance = 0.0;  ///< percent
    Urgency max_urgency = Urgency::low;
    std::vector<std::string> interventions;
    AudienceNotes audience_notes;

    bool operator==(const InterventionPlan&) const = default;
};

struct LabelRules {
    double excellent_at = 0.70;
    double good_at = 0.50;
};

namespace performance {
inline constexpr const char* kExcellent = "Excellent";
inline constexpr const char* kGood = "Good";
inline constexpr const char* kNeedsSupport = "Needs Support";
/// Alternate wording of kNeedsSupport seen in some chart legends.
inline constexpr const char* kNeedsSupportAlias = "Needs Improvement";
}  // namespace performance

std::string performance_label(double task_relevance, const LabelRules& rules = {});

/// `level_ids` names the levels in the audience notes; defaults to 1..n.
/// Throws ContractError on an empty level list or mismatched lengths.
InterventionPlan plan_interventions(std::span<const SessionMetrics> levels, std::span<const RiskAssessment> risks,
                                    const PlanRules& rules = {}, const LabelRules& label_rules = {},
                                    std::span<const LevelId> level_ids = {});

/// Four 0-100 axes. scanning_pattern grows with problematic scanning; the
/// other three grow with healthy behavior.
struct RiskProfile {
    double task_focus = 0.0;
    double attention_control = 0.0;
    double movement_efficiency = 0.0;
    double scanning_pattern = 0.0;
    std::vector<std::string> flags;

    bool operator==(const RiskProfile&) const = default;
};

RiskProfile risk_profile(const SessionMetrics& m);

/// Local composite: mean of task_focus, attention_control,
/// movement_efficiency and (100 - scanning_pattern).
double trend_score(const RiskProfile& p);

}  // namespace gazelens
