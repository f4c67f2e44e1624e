#pragma once

#include "amrt/model.hpp"
#include "amrt/pattern.hpp"

#include <map>
#include <string>
#include <vector>

namespace amrt {

enum class GoalKind { Require, Forbid };

// require: every scope element (anchor-type nodes passing the anchor's own
// predicates) extends to a full match. forbid: zero matches.
struct GoalSpec {
    std::string id;
    GoalKind kind = GoalKind::Forbid;
    Pattern pattern;
};

struct GoalCheck {
    bool satisfied = true;
    std::vector<Binding> witnesses; // violating scope elements (require) or matches (forbid)
};

enum class Aggregator { Avg, Min, Max, Sum, Fraction };
enum class Direction { Minimize, Maximize };

const char* aggregator_name(Aggregator a);
const char* direction_name(Direction d);

// Predicate over the aggregated node itself (implicit self variable).
struct MetricPredicate {
    std::string attr;
    CmpOp op = CmpOp::Eq;
    Scalar value;
};

struct QualityDimension {
    std::string id;
    Aggregator agg = Aggregator::Avg;
    std::string node_type;
    std::string attribute;                // unused by Fraction
    std::vector<MetricPredicate> filter;  // population filter; Fraction numerator predicate
    Direction direction = Direction::Minimize;
    double lo = 0;
    double hi = 1;
};

struct PreferenceWeights {
    std::map<std::string, double> weights; // qualityId -> w in [0,1], sums to 1
};

// Empty when valid: weights sum to 1 +- 1e-9, in range, and reference
// declared qualities.
std::vector<std::string> validate_preferences(const PreferenceWeights& prefs,
                                              const std::vector<QualityDimension>& qualities);

// Aggregate of q over the model. Avg/min/max/fraction of an empty population
// return the worst bound for the dimension's direction; empty sum is 0.
double measure(const ReflectionModel& model, const Metamodel& mm, const QualityDimension& q);

// maximize: clamp((raw-lo)/(hi-lo)); minimize: 1 - clamp(...). Always in [0,1].
double normalize(double raw, const QualityDimension& q);

// U = sum_q w_q * normalize(measure(model, q), q)
double utility(const ReflectionModel& model, const Metamodel& mm,
               const std::vector<QualityDimension>& qualities, const PreferenceWeights& prefs);

GoalCheck check_goal(const ReflectionModel& model, const Metamodel& mm, const GoalSpec& goal);

} // namespace amrt
