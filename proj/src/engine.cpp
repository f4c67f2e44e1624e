#include "amrt/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace amrt {

namespace {

std::map<std::string, Scalar> bind_actuals(const AdaptationOption& opt,
                                           const std::vector<Scalar>& args) {
    std::map<std::string, Scalar> actuals;
    if (args.size() != opt.formal_params.size())
        throw ModelError(ErrorCode::Invalid,
                         "option '" + opt.id + "' expects " +
                             std::to_string(opt.formal_params.size()) + " arguments, got " +
                             std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i)
        actuals[opt.formal_params[i].first] = args[i];
    return actuals;
}

// The element a candidate adapts: its anchor binding when the option
// declares one, otherwise the first bound element.
std::string adapted_element(const OptionMap& options, const Candidate& cand) {
    const auto& opt = options.at(cand.option_id);
    if (!opt.precondition.anchor_var.empty())
        if (auto it = cand.binding.find(opt.precondition.anchor_var); it != cand.binding.end())
            return it->second;
    return cand.binding.empty() ? "" : cand.binding.begin()->second;
}

double plan_cost(const OptionMap& options, const std::vector<Candidate>& cands) {
    double c = 0;
    for (const auto& cand : cands) c += options.at(cand.option_id).cost;
    return c;
}

} // namespace

CoupledOutcome coupled_step(EngineState& state, ReflectionModel& model, const Metamodel& mm,
                            const std::vector<ChangeEvent>& events, SimSystem& sys,
                            const PlannerConfig& cfg, std::int64_t tick) {
    CoupledOutcome out;
    out.record.tick = tick;
    out.record.engine = "coupled";
    for (const auto& e : events) out.record.consumed_event_ids.push_back(e.event_id);

    auto fast = state.bundle.lane_conditions(Lane::Fast);
    out.results = evaluate_incremental(model, mm, fast, events, tick, state.result_counter);
    for (const auto& r : out.results) {
        state.result_conditions[r.result_id] = r.condition_id;
        out.record.result_ids.push_back(r.result_id);
        if (r.violated && r.priority >= cfg.critical_priority) out.escalate = true;
    }
    annotate_and_publish(model, out.results);

    out.record.utility_before = state.model_utility(model, mm);

    TransactionManager txm(model);
    std::set<std::string> adapted; // first firing per element per tick
    std::vector<std::string> gate_failures;

    for (const auto& result : out.results) {
        if (!result.violated || result.error) continue;
        for (const auto& rule : state.bundle.rules) {
            if (!rule.enabled || rule.condition_id != result.condition_id) continue;
            for (const auto& action : rule.actions) {
                const auto& opt = state.bundle.options.at(action.option_id);
                auto actuals = bind_actuals(opt, action.args);
                AdaptationContext ctx;
                if (!result.anchor_element_id.empty()) ctx.locations = {result.anchor_element_id};
                std::map<std::string, std::map<std::string, Scalar>> actual_map{
                    {action.option_id, actuals}};
                OptionMap one{{action.option_id, opt}};
                // composites need their sub-options resolvable
                for (const auto& sub : opt.is_composite()
                                           ? expand_composite(state.bundle.options, opt.id)
                                           : std::vector<std::string>{})
                    one[sub] = state.bundle.options.at(sub);

                auto cands = applicable_options(model, mm, one, ctx, actual_map);
                for (const auto& cand : cands) {
                    if (cand.option_id != action.option_id) continue;
                    std::string element = adapted_element(state.bundle.options, cand);
                    if (!element.empty() && adapted.count(element)) continue;
                    out.acted = true;
                    Application app;
                    try {
                        app = apply_option(model, mm, state.bundle.options, cand, txm);
                    } catch (const ModelError& e) {
                        gate_failures.push_back(std::string("apply: ") + e.what());
                        continue;
                    }
                    auto gate = verify_option(model, mm, app);
                    if (!gate.pass) {
                        txm.current()->rollback();
                        std::string why = "gate(" + cand.option_id + "): ";
                        why += gate.reasons.empty() ? "failed" : gate.reasons.front();
                        gate_failures.push_back(why);
                        continue;
                    }
                    auto delta = txm.current()->commit();
                    auto exec = execute_sync(delta, sys);
                    out.record.chosen_candidates.push_back(cand);
                    for (const auto& cmd : exec.commands)
                        out.record.executed_commands.push_back(command_to_string(cmd));
                    out.adaptation_events.insert(out.adaptation_events.end(), exec.events.begin(),
                                                 exec.events.end());
                    if (!element.empty()) adapted.insert(element);
                    break; // first successful candidate wins for this action
                }
            }
        }
    }

    out.record.utility_after = state.model_utility(model, mm);
    if (!out.acted) {
        out.record.gate_outcome = "none";
    } else if (gate_failures.empty()) {
        out.record.gate_outcome = "pass";
    } else {
        out.record.gate_outcome = "fail: " + gate_failures.front();
    }
    if (out.acted) state.history.push_back(out.record);
    return out;
}

std::vector<EvaluationResult> analyze(EngineState& state, ReflectionModel& model,
                                      const Metamodel& mm, const PlannerConfig& cfg,
                                      std::int64_t tick) {
    auto slow = state.bundle.lane_conditions(Lane::Slow);
    std::vector<ChangeEvent> events = std::move(state.slow_buffer);
    state.slow_buffer.clear();

    std::vector<EvaluationResult> results;
    bool sweep = cfg.full_sweep_period > 0 && tick % cfg.full_sweep_period == 0;
    if (sweep) {
        results = evaluate_full(model, mm, slow, tick, state.result_counter);
    } else {
        results = evaluate_incremental(model, mm, slow, events, tick, state.result_counter);
    }
    for (const auto& r : results) state.result_conditions[r.result_id] = r.condition_id;
    annotate_and_publish(model, results);
    return results;
}

Plan plan(EngineState& state, ReflectionModel& model, const Metamodel& mm,
          const std::vector<EvaluationResult>& results, const PlannerConfig& cfg) {
    bool need = false;
    for (const auto& r : results) need |= (r.violated && !r.error);
    if (!need)
        for (const auto& g : state.bundle.goals)
            need |= !check_goal(model, mm, g).satisfied;

    Plan best;
    best.predicted_utility = state.model_utility(model, mm);
    best.score = best.predicted_utility;
    if (!need) return best;

    std::string digest_before = snapshot_digest(model);
    ModelMode mode_before = model.mode();
    model.set_mode(ModelMode::Prescriptive);

    TransactionManager txm(model);
    auto& txn = txm.begin();

    struct SearchNode {
        std::vector<Candidate> plan;
        double score = 0;
        double utility = 0;
    };
    SearchNode root;
    root.utility = best.predicted_utility;
    root.score = best.score;
    std::vector<SearchNode> frontier{root};

    auto goals_ok = [&] {
        for (const auto& g : state.bundle.goals)
            if (!check_goal(model, mm, g).satisfied) return false;
        return true;
    };

    bool truncated = false;
    for (int depth = 1; depth <= cfg.max_depth && !frontier.empty(); ++depth) {
        std::vector<SearchNode> next;
        for (const auto& node : frontier) {
            // re-establish this node's prescriptive state
            std::size_t base = txn.mark();
            bool replay_ok = true;
            for (const auto& cand : node.plan) {
                try {
                    apply_candidate(model, mm, state.bundle.options, cand, txn);
                } catch (const ModelError&) {
                    replay_ok = false;
                    break;
                }
            }
            if (!replay_ok) {
                txn.rollback_to(base);
                continue;
            }

            auto cands = applicable_options(model, mm, state.bundle.options);
            // expansion order by estimate (benefit-vs-cost), canonical ties
            std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
                auto ea = estimate(a, state.bundle.options, state.bundle.preferences);
                auto eb = estimate(b, state.bundle.options, state.bundle.preferences);
                double sa = ea.weighted_benefit - cfg.cost_weight * ea.cost;
                double sb = eb.weighted_benefit - cfg.cost_weight * eb.cost;
                if (sa != sb) return sa > sb;
                return a < b;
            });

            for (const auto& cand : cands) {
                std::size_t mark = txn.mark();
                Application app;
                try {
                    app = apply_candidate(model, mm, state.bundle.options, cand, txn);
                } catch (const ModelError&) {
                    txn.rollback_to(mark);
                    continue;
                }
                auto gate = verify_option(model, mm, app);
                if (!gate.pass || !goals_ok()) {
                    txn.rollback_to(mark);
                    continue;
                }
                SearchNode child;
                child.plan = node.plan;
                child.plan.push_back(cand);
                child.utility = state.model_utility(model, mm);
                child.score = child.utility - cfg.cost_weight *
                                                  plan_cost(state.bundle.options, child.plan);
                if (child.score > best.score ||
                    (child.score == best.score && child.plan < best.candidates)) {
                    best.candidates = child.plan;
                    best.score = child.score;
                    best.predicted_utility = child.utility;
                }
                next.push_back(std::move(child));
                txn.rollback_to(mark);
            }
            txn.rollback_to(base);
        }
        std::stable_sort(next.begin(), next.end(), [](const SearchNode& a, const SearchNode& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.plan < b.plan;
        });
        if (!cfg.beam_unbounded() && next.size() > static_cast<std::size_t>(cfg.beam_width)) {
            next.resize(static_cast<std::size_t>(cfg.beam_width));
            truncated = true;
        }
        frontier = std::move(next);
    }

    txn.rollback();
    model.set_mode(mode_before);
    if (snapshot_digest(model) != digest_before)
        throw std::logic_error("planner failed to restore the model");
    best.truncated = truncated;
    return best;
}

ExecutePlanOutcome execute_plan(EngineState& state, ReflectionModel& model, const Metamodel& mm,
                                const Plan& the_plan, SimSystem& sys, std::int64_t tick) {
    ExecutePlanOutcome out;
    out.record.tick = tick;
    out.record.engine = "decoupled";
    out.record.utility_before = state.model_utility(model, mm);
    out.record.utility_after = out.record.utility_before;
    out.record.gate_outcome = "none";
    if (the_plan.candidates.empty()) return out;

    out.acted = true;
    TransactionManager txm(model);
    auto& txn = txm.begin();
    std::vector<Application> apps;
    try {
        for (const auto& cand : the_plan.candidates)
            apps.push_back(apply_candidate(model, mm, state.bundle.options, cand, txn));
    } catch (const ModelError& e) {
        txn.rollback();
        out.record.gate_outcome = std::string("aborted: ") + e.what();
        state.history.push_back(out.record);
        return out;
    }

    // gate the plan as a whole
    std::vector<std::string> reasons;
    for (const auto& app : apps) {
        auto gate = verify_option(model, mm, app);
        if (!gate.pass)
            reasons.insert(reasons.end(), gate.reasons.begin(), gate.reasons.end());
    }
    if (!reasons.empty()) {
        txn.rollback();
        out.record.gate_outcome = "fail: " + reasons.front();
        state.history.push_back(out.record);
        return out;
    }

    auto delta = txn.commit();
    out.record.gate_outcome = "pass";
    out.record.chosen_candidates = the_plan.candidates;
    auto exec = execute_sync(delta, sys);
    for (const auto& cmd : exec.commands)
        out.record.executed_commands.push_back(command_to_string(cmd));
    out.adaptation_events = exec.events;
    out.record.utility_after = state.model_utility(model, mm);
    state.history.push_back(out.record);
    return out;
}

std::set<EngineKind> schedule_tick(std::int64_t tick_no, const PlannerConfig& cfg, bool escalated) {
    std::set<EngineKind> out{EngineKind::Coupled};
    if (escalated || (cfg.slow_lane_period > 0 && tick_no % cfg.slow_lane_period == 0))
        out.insert(EngineKind::Decoupled);
    return out;
}

SwapOutcome hot_swap(EngineState& state, const AdaptationModelBundle& new_bundle,
                     const Metamodel& mm) {
    auto diags = static_check_bundle(new_bundle, mm);
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::Error)
            throw ModelError(ErrorCode::Invalid, "invalid adaptation model: " + d.message);
    state.pending_swap = new_bundle;
    return SwapOutcome::Staged;
}

bool apply_pending_swap(EngineState& state) {
    if (!state.pending_swap) return false;
    state.bundle = std::move(*state.pending_swap);
    state.pending_swap.reset();
    return true;
}

std::vector<DecisionRecord> history_query(const EngineState& state, const HistoryFilter& filter) {
    std::vector<DecisionRecord> out;
    for (const auto& r : state.history) {
        if (filter.min_tick && r.tick < *filter.min_tick) continue;
        if (filter.max_tick && r.tick > *filter.max_tick) continue;
        if (filter.engine && r.engine != *filter.engine) continue;
        if (filter.condition_id) {
            bool hit = false;
            for (auto rid : r.result_ids) {
                auto it = state.result_conditions.find(rid);
                if (it != state.result_conditions.end() && it->second == *filter.condition_id)
                    hit = true;
            }
            if (!hit) continue;
        }
        out.push_back(r);
    }
    return out;
}

} // namespace amrt
