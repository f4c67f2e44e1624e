#pragma once

#include "amrt/annotations.hpp"
#include "amrt/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amrt {

enum class Lane { Fast, Slow };

const char* lane_name(Lane l);

// A condition's pattern describes the violating situation; a match is a
// violation instance.
struct EvaluationCondition {
    std::string id;
    int priority = 0; // higher = more critical, unique within a bundle
    std::vector<EventKind> trigger_kinds;
    std::optional<std::string> trigger_attribute; // attr-changed filter
    Pattern pattern;
    Lane lane = Lane::Slow;
    std::string linked_ref;

    bool triggered_by(const ChangeEvent& ev) const;
};

// Evaluates every condition unanchored. Results ordered by descending
// priority; per-condition failures are quarantined into error results.
// Side-effect free: the model's domain digest is checked unchanged.
std::vector<EvaluationResult> evaluate_full(const ReflectionModel& model, const Metamodel& mm,
                                            const std::vector<EvaluationCondition>& conditions,
                                            std::int64_t tick, std::int64_t& result_counter);

// Evaluates only conditions whose triggers match some event, anchored at
// the event location. Node events anchor directly; edge events fall back
// to an unanchored evaluation of the triggered condition. Ordered by
// priority, then event order.
std::vector<EvaluationResult> evaluate_incremental(const ReflectionModel& model, const Metamodel& mm,
                                                   const std::vector<EvaluationCondition>& conditions,
                                                   const std::vector<ChangeEvent>& events,
                                                   std::int64_t tick, std::int64_t& result_counter);

struct PublishOutcome {
    int annotated = 0;
    int skipped = 0; // stale anchors
};

// Annotates violated results at their anchors; stale anchors are skipped
// and counted instead of raising.
PublishOutcome annotate_and_publish(ReflectionModel& model, const std::vector<EvaluationResult>& results);

} // namespace amrt
