#include "amrt/evaluation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace amrt {

const char* lane_name(Lane l) { return l == Lane::Fast ? "fast" : "slow"; }

bool EvaluationCondition::triggered_by(const ChangeEvent& ev) const {
    bool kind_hit = std::find(trigger_kinds.begin(), trigger_kinds.end(), ev.kind) !=
                    trigger_kinds.end();
    if (!kind_hit) return false;
    if (ev.kind == EventKind::AttrChanged && trigger_attribute)
        return ev.attribute && *ev.attribute == *trigger_attribute;
    return true;
}

namespace {

// Pure-read guard: evaluation must never change the domain state.
struct DigestGuard {
    const ReflectionModel& model;
    std::string before;
    explicit DigestGuard(const ReflectionModel& m) : model(m), before(snapshot_digest(m)) {}
    ~DigestGuard() noexcept(false) {
        if (snapshot_digest(model) != before)
            throw std::logic_error("evaluation mutated the model");
    }
};

std::string derive_anchor(const Pattern& p, const std::vector<Binding>& bindings) {
    if (bindings.empty()) return "";
    const Binding& b = bindings.front();
    if (!p.anchor_var.empty())
        if (auto it = b.find(p.anchor_var); it != b.end()) return it->second;
    return b.empty() ? "" : b.begin()->second;
}

EvaluationResult make_result(const EvaluationCondition& c, std::int64_t tick,
                             std::int64_t& counter) {
    EvaluationResult r;
    r.result_id = ++counter;
    r.condition_id = c.id;
    r.tick = tick;
    r.priority = c.priority;
    r.linked_ref = c.linked_ref;
    return r;
}

} // namespace

std::vector<EvaluationResult> evaluate_full(const ReflectionModel& model, const Metamodel& mm,
                                            const std::vector<EvaluationCondition>& conditions,
                                            std::int64_t tick, std::int64_t& result_counter) {
    DigestGuard guard(model);
    std::vector<const EvaluationCondition*> order;
    for (const auto& c : conditions) order.push_back(&c);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto* a, const auto* b) { return a->priority > b->priority; });

    std::vector<EvaluationResult> results;
    for (const auto* c : order) {
        EvaluationResult r = make_result(*c, tick, result_counter);
        try {
            r.bindings = match_pattern(model, mm, c->pattern);
            r.violated = !r.bindings.empty();
            r.anchor_element_id = derive_anchor(c->pattern, r.bindings);
        } catch (const ModelError& e) {
            r.error = true;
            r.error_message = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<EvaluationResult> evaluate_incremental(const ReflectionModel& model, const Metamodel& mm,
                                                   const std::vector<EvaluationCondition>& conditions,
                                                   const std::vector<ChangeEvent>& events,
                                                   std::int64_t tick, std::int64_t& result_counter) {
    DigestGuard guard(model);
    struct Pending {
        const EvaluationCondition* cond;
        std::string anchor; // empty = unanchored fallback
        std::size_t event_order;
    };
    std::vector<Pending> pending;
    std::set<std::pair<std::string, std::string>> seen; // (conditionId, anchor)

    for (std::size_t i = 0; i < events.size(); ++i) {
        const ChangeEvent& ev = events[i];
        for (const auto& c : conditions) {
            if (!c.triggered_by(ev)) continue;
            std::string anchor;
            bool is_node = model.has_node(ev.element_id);
            bool is_edge = model.has_edge(ev.element_id);
            if (is_node) {
                anchor = ev.element_id;
            } else if (!is_edge && ev.kind != EventKind::EdgeAdded &&
                       ev.kind != EventKind::EdgeRemoved) {
                // node vanished since the event: the violation (if any) is
                // gone from this location; record a clean check
                anchor = "";
            }
            // edge events and vanished nodes evaluate unanchored
            if (!seen.insert({c.id, anchor}).second) continue;
            pending.push_back({&c, anchor, i});
        }
    }

    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        if (a.cond->priority != b.cond->priority) return a.cond->priority > b.cond->priority;
        return a.event_order < b.event_order;
    });

    std::vector<EvaluationResult> results;
    for (const auto& p : pending) {
        EvaluationResult r = make_result(*p.cond, tick, result_counter);
        try {
            if (!p.anchor.empty() && !p.cond->pattern.anchor_var.empty()) {
                r.bindings = match_pattern(model, mm, p.cond->pattern, p.anchor);
                r.anchor_element_id = p.anchor;
            } else {
                r.bindings = match_pattern(model, mm, p.cond->pattern);
                r.anchor_element_id = derive_anchor(p.cond->pattern, r.bindings);
            }
            r.violated = !r.bindings.empty();
        } catch (const ModelError& e) {
            r.error = true;
            r.error_message = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

PublishOutcome annotate_and_publish(ReflectionModel& model,
                                    const std::vector<EvaluationResult>& results) {
    PublishOutcome out;
    for (const auto& r : results) {
        if (!r.violated) continue;
        if (r.anchor_element_id.empty() || !model.has_element(r.anchor_element_id)) {
            out.skipped++;
            continue;
        }
        model.annotate_result(r);
        out.annotated++;
    }
    return out;
}

} // namespace amrt
