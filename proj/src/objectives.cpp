#include "amrt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amrt {

const char* aggregator_name(Aggregator a) {
    switch (a) {
        case Aggregator::Avg: return "avg";
        case Aggregator::Min: return "min";
        case Aggregator::Max: return "max";
        case Aggregator::Sum: return "sum";
        case Aggregator::Fraction: return "fraction";
    }
    return "?";
}

const char* direction_name(Direction d) {
    return d == Direction::Minimize ? "minimize" : "maximize";
}

std::vector<std::string> validate_preferences(const PreferenceWeights& prefs,
                                              const std::vector<QualityDimension>& qualities) {
    std::vector<std::string> errs;
    double sum = 0;
    for (const auto& [qid, w] : prefs.weights) {
        sum += w;
        if (w < 0 || w > 1) errs.push_back("weight for '" + qid + "' outside [0,1]");
        bool declared = std::any_of(qualities.begin(), qualities.end(),
                                    [&](const QualityDimension& q) { return q.id == qid; });
        if (!declared) errs.push_back("weight references undeclared quality '" + qid + "'");
    }
    if (std::abs(sum - 1.0) > 1e-9)
        errs.push_back("preference weights sum to " + std::to_string(sum) + ", expected 1");
    return errs;
}

namespace {

bool metric_filter_holds(const Node& n, const std::vector<MetricPredicate>& filter) {
    for (const auto& p : filter) {
        auto it = n.attrs.find(p.attr);
        if (it == n.attrs.end() || !eval_cmp(p.op, it->second, p.value)) return false;
    }
    return true;
}

double worst_bound(const QualityDimension& q) {
    return q.direction == Direction::Minimize ? q.hi : q.lo;
}

} // namespace

double measure(const ReflectionModel& model, const Metamodel& mm, const QualityDimension& q) {
    const auto* nt = mm.node_type(q.node_type);
    if (!nt)
        throw ModelError(ErrorCode::Invalid, "measure: unknown node type '" + q.node_type + "'");
    if (q.agg != Aggregator::Fraction && !nt->attributes.count(q.attribute))
        throw ModelError(ErrorCode::Invalid, "measure: unknown attribute '" + q.node_type + "." +
                                                 q.attribute + "'");

    std::size_t population = 0, satisfying = 0;
    double sum = 0;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    std::size_t counted = 0;
    for (const auto& [id, n] : model.nodes()) {
        if (n.type != q.node_type) continue;
        population++;
        if (!metric_filter_holds(n, q.filter)) continue;
        satisfying++;
        if (q.agg == Aggregator::Fraction) continue;
        auto it = n.attrs.find(q.attribute);
        if (it == n.attrs.end() || !is_numeric(it->second)) continue;
        double v = as_number(it->second);
        sum += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        counted++;
    }

    switch (q.agg) {
        case Aggregator::Sum:
            return sum;
        case Aggregator::Fraction:
            if (population == 0) return worst_bound(q);
            return static_cast<double>(satisfying) / static_cast<double>(population);
        case Aggregator::Avg:
            if (counted == 0) return worst_bound(q);
            return sum / static_cast<double>(counted);
        case Aggregator::Min:
            if (counted == 0) return worst_bound(q);
            return mn;
        case Aggregator::Max:
            if (counted == 0) return worst_bound(q);
            return mx;
    }
    return worst_bound(q);
}

double normalize(double raw, const QualityDimension& q) {
    double t = (raw - q.lo) / (q.hi - q.lo);
    t = std::clamp(t, 0.0, 1.0);
    return q.direction == Direction::Maximize ? t : 1.0 - t;
}

double utility(const ReflectionModel& model, const Metamodel& mm,
               const std::vector<QualityDimension>& qualities, const PreferenceWeights& prefs) {
    double u = 0;
    for (const auto& q : qualities) {
        auto it = prefs.weights.find(q.id);
        if (it == prefs.weights.end() || it->second == 0) continue;
        u += it->second * normalize(measure(model, mm, q), q);
    }
    return u;
}

GoalCheck check_goal(const ReflectionModel& model, const Metamodel& mm, const GoalSpec& goal) {
    GoalCheck out;
    if (goal.kind == GoalKind::Forbid) {
        out.witnesses = match_pattern(model, mm, goal.pattern);
        out.satisfied = out.witnesses.empty();
        return out;
    }

    // require: no anchor means a plain existence requirement
    if (goal.pattern.anchor_var.empty()) {
        out.satisfied = !match_pattern(model, mm, goal.pattern).empty();
        return out;
    }

    const PatternNode* anchor = goal.pattern.node(goal.pattern.anchor_var);
    std::vector<AttrPredicate> anchor_preds;
    for (const auto& p : goal.pattern.predicates)
        if (p.var == goal.pattern.anchor_var) anchor_preds.push_back(p);

    for (const auto& [id, n] : model.nodes()) {
        if (n.type != anchor->type) continue;
        bool in_scope = true;
        for (const auto& p : anchor_preds) {
            auto it = n.attrs.find(p.attr);
            if (it == n.attrs.end() || !eval_cmp(p.op, it->second, p.value)) in_scope = false;
        }
        if (!in_scope) continue;
        if (match_pattern(model, mm, goal.pattern, id).empty()) {
            out.witnesses.push_back({{goal.pattern.anchor_var, id}});
            out.satisfied = false;
        }
    }
    return out;
}

} // namespace amrt
