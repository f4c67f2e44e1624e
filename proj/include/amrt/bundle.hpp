#pragma once

#include "amrt/change.hpp"
#include "amrt/evaluation.hpp"
#include "amrt/objectives.hpp"

#include <map>
#include <string>
#include <vector>

namespace amrt {

// Event-condition-action rule of the coupled loop.
struct CoupledRule {
    struct Action {
        std::string option_id;
        std::vector<Scalar> args; // positional literals for the option's formals
    };
    std::string id;
    std::string condition_id;
    std::vector<Action> actions; // fired in order
    bool enabled = true;
};

struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;
};

// Fully resolved adaptation model: evaluation + change models plus goals,
// qualities, preferences, and rules.
struct AdaptationModelBundle {
    std::string name;
    std::map<std::string, Scalar> parameters; // after substitution, kept for reporting
    std::vector<QualityDimension> qualities;
    PreferenceWeights preferences;
    std::vector<GoalSpec> goals;
    std::vector<EvaluationCondition> conditions;
    OptionMap options;
    std::vector<CoupledRule> rules;
    std::map<std::string, SourceSpan> spans; // declaration id -> site

    std::vector<EvaluationCondition> lane_conditions(Lane lane) const {
        std::vector<EvaluationCondition> out;
        for (const auto& c : conditions)
            if (c.lane == lane) out.push_back(c);
        return out;
    }
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
};

std::string diagnostic_to_string(const Diagnostic& d);

// Bundle-level static checks (weight sums, priority uniqueness, composite
// cycles, sensor-owned effect writes, rule overlap, unreachable options).
std::vector<Diagnostic> static_check_bundle(const AdaptationModelBundle& bundle,
                                            const Metamodel& mm);

} // namespace amrt
