#include "amrt/runner.hpp"

#include "amrt/adm/parser.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace amrt {

AdaptationModelBundle load_bundle(const std::vector<std::string>& adm_files, const Metamodel& mm) {
    std::vector<adm::AstBundle> asts;
    for (const auto& path : adm_files) {
        std::ifstream in(path);
        if (!in.good()) throw ConfigError("cannot read '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        auto pr = adm::parse(text.str(), path);
        if (!pr.ok()) {
            for (const auto& d : pr.diagnostics)
                if (d.severity == Diagnostic::Severity::Error)
                    throw ConfigError(diagnostic_to_string(d));
        }
        asts.push_back(std::move(pr.bundle));
    }
    auto rr = adm::resolve(asts, mm);
    if (!rr.ok()) {
        for (const auto& d : rr.diagnostics)
            if (d.severity == Diagnostic::Severity::Error) throw ConfigError(diagnostic_to_string(d));
    }
    for (const auto& d : static_check_bundle(rr.bundle, mm))
        if (d.severity == Diagnostic::Severity::Error) throw ConfigError(diagnostic_to_string(d));
    return rr.bundle;
}

RunOutcome run_scenario(const ScenarioConfig& config, std::ostream& trace_out) {
    const Metamodel& mm = config.metamodel;
    TraceWriter trace(trace_out);

    EngineState state;
    state.bundle = load_bundle(config.adm_files, mm);
    // swap bundles are validated up front: a bad swap is a config error
    std::map<std::int64_t, std::pair<AdaptationModelBundle, std::vector<std::string>>> swaps;
    for (const auto& d : config.hot_swaps)
        swaps[d.tick] = {load_bundle(d.adm_files, mm), d.adm_files};

    SimSystem sys = config.system;
    ReflectionModel model;
    monitor_sync(sys, model, mm); // initial projection, not traced

    bool coupled_on = config.engine != EngineMode::Decoupled;
    bool decoupled_on = config.engine != EngineMode::Coupled;

    std::vector<ChangeEvent> pending_fast; // adaptation events feed the next tick
    int adaptations = 0;
    auto annotate_adaptation_events = [&](const std::vector<ChangeEvent>& evs) {
        for (const auto& ev : evs)
            if (model.has_element(ev.element_id)) model.annotate_event(ev);
    };

    // fault bookkeeping for the latency metric
    struct FaultTrack {
        std::int64_t seen_tick;
        bool repaired = false;
        std::int64_t repaired_tick = 0;
    };
    std::map<std::string, std::vector<FaultTrack>> faults;
    auto observe_events = [&](const std::vector<ChangeEvent>& evs) {
        for (const auto& ev : evs) {
            if (ev.kind != EventKind::AttrChanged || !ev.attribute || *ev.attribute != "state" ||
                !ev.new_value)
                continue;
            const auto* nv = std::get_if<std::string>(&*ev.new_value);
            if (!nv) continue;
            if (*nv == "FAILED" && ev.source == EventSource::System) {
                faults[ev.element_id].push_back({ev.tick});
            } else if (*nv == "RUNNING") {
                auto it = faults.find(ev.element_id);
                if (it == faults.end()) continue;
                for (auto& f : it->second)
                    if (!f.repaired) {
                        f.repaired = true;
                        f.repaired_tick = ev.tick;
                    }
            }
        }
    };

    for (std::int64_t tick = 1; tick <= config.ticks; ++tick) {
        apply_pending_swap(state);

        sys.tick(config.workload);
        auto events = monitor_sync(sys, model, mm);
        for (const auto& ev : events) trace.event(tick, ev);
        observe_events(events);

        // the coupled lane sees this tick's monitor events plus last tick's
        // adaptation events
        std::vector<ChangeEvent> fast_events = std::move(pending_fast);
        pending_fast.clear();
        fast_events.insert(fast_events.end(), events.begin(), events.end());
        state.slow_buffer.insert(state.slow_buffer.end(), fast_events.begin(), fast_events.end());

        bool escalated = false;
        if (coupled_on) {
            auto out = coupled_step(state, model, mm, fast_events, sys, config.planner, tick);
            for (const auto& r : out.results) trace.evaluation(tick, r);
            if (out.acted) {
                trace.decision(tick, out.record);
                adaptations += static_cast<int>(out.record.chosen_candidates.size());
            }
            for (const auto& ev : out.adaptation_events) trace.event(tick, ev);
            observe_events(out.adaptation_events);
            annotate_adaptation_events(out.adaptation_events);
            pending_fast.insert(pending_fast.end(), out.adaptation_events.begin(),
                                out.adaptation_events.end());
            state.slow_buffer.insert(state.slow_buffer.end(), out.adaptation_events.begin(),
                                     out.adaptation_events.end());
            escalated = out.escalate;
        }

        auto engines = schedule_tick(tick, config.planner, escalated);
        if (decoupled_on && engines.count(EngineKind::Decoupled)) {
            auto results = analyze(state, model, mm, config.planner, tick);
            for (const auto& r : results) trace.evaluation(tick, r);
            auto p = plan(state, model, mm, results, config.planner);
            auto out = execute_plan(state, model, mm, p, sys, tick);
            if (out.acted) {
                trace.decision(tick, out.record);
                adaptations += static_cast<int>(out.record.chosen_candidates.size());
            }
            for (const auto& ev : out.adaptation_events) trace.event(tick, ev);
            observe_events(out.adaptation_events);
            annotate_adaptation_events(out.adaptation_events);
            pending_fast.insert(pending_fast.end(), out.adaptation_events.begin(),
                                out.adaptation_events.end());
            state.slow_buffer.insert(state.slow_buffer.end(), out.adaptation_events.begin(),
                                     out.adaptation_events.end());
        }

        if (auto it = swaps.find(tick); it != swaps.end()) {
            hot_swap(state, it->second.first, mm);
            std::vector<std::string> names;
            for (const auto& f : it->second.second)
                names.push_back(std::filesystem::path(f).filename().string());
            trace.swap(tick, names, it->second.first.name, true);
        }
    }

    TraceWriter::Summary s;
    s.ticks = config.ticks;
    s.final_utility = state.model_utility(model, mm);
    s.adaptations = adaptations;
    std::int64_t latency_total = 0;
    for (const auto& [element, tracks] : faults) {
        for (const auto& f : tracks) {
            s.faults++;
            if (f.repaired) {
                s.repaired_faults++;
                latency_total += f.repaired_tick - f.seen_tick;
            }
        }
    }
    s.mean_coupled_reaction_latency =
        s.repaired_faults ? static_cast<double>(latency_total) / s.repaired_faults : 0.0;
    trace.summary(config.ticks, s);

    RunOutcome out;
    out.summary = s;
    out.trace_lines = trace.lines();
    out.final_state = std::move(state);
    out.final_model = std::move(model);
    return out;
}

} // namespace amrt
