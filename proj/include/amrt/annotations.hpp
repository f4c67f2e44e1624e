#pragma once

#include "amrt/pattern.hpp"
#include "amrt/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amrt {

enum class EventKind { AttrChanged, NodeAdded, NodeRemoved, EdgeAdded, EdgeRemoved };
enum class EventSource { System, Adaptation };

const char* event_kind_name(EventKind k);
std::optional<EventKind> event_kind_from_name(const std::string& name);

// A located, typed notification of a runtime phenomenon. Ids are monotone
// within a run.
struct ChangeEvent {
    std::int64_t event_id = 0;
    std::int64_t tick = 0;
    EventKind kind = EventKind::AttrChanged;
    std::string element_id;
    std::optional<std::string> attribute;
    std::optional<Scalar> old_value;
    std::optional<Scalar> new_value;
    EventSource source = EventSource::System;
};

// Outcome of one condition check. violated == !bindings.empty().
struct EvaluationResult {
    std::int64_t result_id = 0;
    std::string condition_id;
    std::int64_t tick = 0;
    bool violated = false;
    std::vector<Binding> bindings;
    std::string anchor_element_id; // empty for unanchored sweeps
    int priority = 0;
    std::string linked_ref;   // optional quality/goal reference, trace-only
    bool error = false;       // condition quarantined, never aborts the others
    std::string error_message;
};

} // namespace amrt
