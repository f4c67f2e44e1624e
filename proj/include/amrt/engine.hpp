#pragma once

#include "amrt/bundle.hpp"
#include "amrt/sim.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace amrt {

struct PlannerConfig {
    int max_depth = 3;        // D
    int beam_width = 8;       // B; <= 0 means unbounded
    double cost_weight = 0.01; // lambda
    int full_sweep_period = 20; // F
    int slow_lane_period = 5;   // K
    int critical_priority = 100; // fast results at/above this escalate

    bool beam_unbounded() const { return beam_width <= 0; }
};

// Append-only history entry tying events -> results -> chosen options ->
// utility delta.
struct DecisionRecord {
    std::int64_t tick = 0;
    std::string engine; // "coupled" | "decoupled"
    std::vector<std::int64_t> consumed_event_ids;
    std::vector<std::int64_t> result_ids;
    std::vector<Candidate> chosen_candidates;
    double utility_before = 0;
    double utility_after = 0;
    std::string gate_outcome; // "pass" | "fail: ..." | "aborted: ..." | "none"
    std::vector<std::string> executed_commands;
};

struct EngineState {
    AdaptationModelBundle bundle;
    std::vector<DecisionRecord> history;
    std::optional<AdaptationModelBundle> pending_swap;
    std::int64_t result_counter = 0;
    std::map<std::int64_t, std::string> result_conditions; // resultId -> conditionId
    std::vector<ChangeEvent> slow_buffer; // accumulated for the decoupled lane

    double model_utility(const ReflectionModel& model, const Metamodel& mm) const {
        if (bundle.qualities.empty()) return 0;
        return utility(model, mm, bundle.qualities, bundle.preferences);
    }
};

struct CoupledOutcome {
    DecisionRecord record;
    std::vector<EvaluationResult> results;
    std::vector<ChangeEvent> adaptation_events;
    bool escalate = false; // a critical fast-lane violation was seen
    bool acted = false;    // a record-worthy attempt happened
};

// One coupled (rule-based) step: incremental fast-lane evaluation, then
// per violated result in priority order the enabled rules fire their
// options through the gate. An element is adapted at most once per tick.
CoupledOutcome coupled_step(EngineState& state, ReflectionModel& model, const Metamodel& mm,
                            const std::vector<ChangeEvent>& events, SimSystem& sys,
                            const PlannerConfig& cfg, std::int64_t tick);

// Decoupled analysis: incremental slow-lane evaluation over the buffered
// events, replaced by a full sweep every F ticks. Violations are annotated.
std::vector<EvaluationResult> analyze(EngineState& state, ReflectionModel& model,
                                      const Metamodel& mm, const PlannerConfig& cfg,
                                      std::int64_t tick);

struct Plan {
    std::vector<Candidate> candidates;
    double predicted_utility = 0;
    double score = 0;
    bool truncated = false; // beam dropped states: best-so-far only
};

// Best-first search over prescriptive variants via do/undo on the live
// model. States failing the gate or violating goals are pruned; leaf score
// is utility minus cost_weight * total cost. The model digest is restored
// before returning.
Plan plan(EngineState& state, ReflectionModel& model, const Metamodel& mm,
          const std::vector<EvaluationResult>& results, const PlannerConfig& cfg);

// Re-applies the plan in one transaction, gate-verifies it as a whole,
// commits, and drives the causal connection.
struct ExecutePlanOutcome {
    DecisionRecord record;
    std::vector<ChangeEvent> adaptation_events;
    bool acted = false;
};
ExecutePlanOutcome execute_plan(EngineState& state, ReflectionModel& model, const Metamodel& mm,
                                const Plan& plan, SimSystem& sys, std::int64_t tick);

enum class EngineKind { Coupled, Decoupled };

// Coupled runs every tick; decoupled on its period or when a critical
// fast-lane result escalated this tick.
std::set<EngineKind> schedule_tick(std::int64_t tick_no, const PlannerConfig& cfg, bool escalated);

enum class SwapOutcome { Staged };

// Stages a statically checked bundle; it becomes active at the next tick
// boundary. Check failures raise ModelError(Invalid).
SwapOutcome hot_swap(EngineState& state, const AdaptationModelBundle& new_bundle,
                     const Metamodel& mm);

// Applies a staged swap, if any. Returns true when the bundle changed.
bool apply_pending_swap(EngineState& state);

struct HistoryFilter {
    std::optional<std::int64_t> min_tick;
    std::optional<std::int64_t> max_tick;
    std::optional<std::string> engine;
    std::optional<std::string> condition_id;
};

std::vector<DecisionRecord> history_query(const EngineState& state, const HistoryFilter& filter);

} // namespace amrt
