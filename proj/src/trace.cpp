#include "amrt/trace.hpp"

#include <json.hpp>

namespace amrt {

namespace {

using ojson = nlohmann::ordered_json;

ojson scalar_json(const Scalar& v) {
    switch (v.index()) {
        case 0: return std::get<std::int64_t>(v);
        case 1: return std::get<double>(v);
        case 2: return std::get<std::string>(v);
        default: return std::get<bool>(v);
    }
}

ojson binding_json(const Binding& b) {
    ojson out = ojson::object();
    for (const auto& [var, id] : b) out[var] = id;
    return out;
}

} // namespace

void TraceWriter::emit(const std::string& line) {
    (*out_) << line << "\n";
    lines_++;
}

void TraceWriter::event(std::int64_t tick, const ChangeEvent& ev) {
    ojson payload;
    payload["eventId"] = ev.event_id;
    payload["kind"] = event_kind_name(ev.kind);
    payload["element"] = ev.element_id;
    if (ev.attribute) payload["attribute"] = *ev.attribute;
    if (ev.old_value) payload["old"] = scalar_json(*ev.old_value);
    if (ev.new_value) payload["new"] = scalar_json(*ev.new_value);
    payload["source"] = ev.source == EventSource::System ? "system" : "adaptation";
    ojson rec;
    rec["tick"] = tick;
    rec["kind"] = "event";
    rec["payload"] = std::move(payload);
    emit(rec.dump());
}

void TraceWriter::evaluation(std::int64_t tick, const EvaluationResult& r) {
    ojson payload;
    payload["resultId"] = r.result_id;
    payload["condition"] = r.condition_id;
    payload["priority"] = r.priority;
    payload["violated"] = r.violated;
    ojson bindings = ojson::array();
    for (const auto& b : r.bindings) bindings.push_back(binding_json(b));
    payload["bindings"] = std::move(bindings);
    if (!r.anchor_element_id.empty()) payload["anchor"] = r.anchor_element_id;
    if (!r.linked_ref.empty()) payload["link"] = r.linked_ref;
    if (r.error) payload["error"] = r.error_message;
    ojson rec;
    rec["tick"] = tick;
    rec["kind"] = "evaluation";
    rec["payload"] = std::move(payload);
    emit(rec.dump());
}

void TraceWriter::decision(std::int64_t tick, const DecisionRecord& r) {
    ojson payload;
    payload["engine"] = r.engine;
    payload["consumedEventIds"] = r.consumed_event_ids;
    payload["resultIds"] = r.result_ids;
    ojson chosen = ojson::array();
    for (const auto& c : r.chosen_candidates) {
        ojson entry;
        entry["option"] = c.option_id;
        entry["binding"] = binding_json(c.binding);
        chosen.push_back(std::move(entry));
    }
    payload["chosen"] = std::move(chosen);
    payload["utilityBefore"] = r.utility_before;
    payload["utilityAfter"] = r.utility_after;
    payload["gateOutcome"] = r.gate_outcome;
    payload["executedCommands"] = r.executed_commands;
    ojson rec;
    rec["tick"] = tick;
    rec["kind"] = "decision";
    rec["payload"] = std::move(payload);
    emit(rec.dump());
}

void TraceWriter::swap(std::int64_t tick, const std::vector<std::string>& files,
                       const std::string& bundle, bool staged) {
    ojson payload;
    payload["admFiles"] = files;
    payload["bundle"] = bundle;
    payload["staged"] = staged;
    ojson rec;
    rec["tick"] = tick;
    rec["kind"] = "swap";
    rec["payload"] = std::move(payload);
    emit(rec.dump());
}

void TraceWriter::summary(std::int64_t tick, const Summary& s) {
    ojson payload;
    payload["ticks"] = s.ticks;
    payload["finalUtility"] = s.final_utility;
    payload["adaptations"] = s.adaptations;
    payload["faults"] = s.faults;
    payload["repairedFaults"] = s.repaired_faults;
    payload["meanCoupledReactionLatency"] = s.mean_coupled_reaction_latency;
    ojson rec;
    rec["tick"] = tick;
    rec["kind"] = "summary";
    rec["payload"] = std::move(payload);
    emit(rec.dump());
}

} // namespace amrt
