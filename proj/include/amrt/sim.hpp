#pragma once

#include "amrt/edit.hpp"
#include "amrt/model.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace amrt {

// Commands are the only way adaptation reaches the running system.
struct RestartCmd {
    std::string component;
};
struct AddReplicaCmd {
    std::string component;
    std::string new_id;
};
struct RemoveReplicaCmd {
    std::string component;
};
struct MigrateCmd {
    std::string component;
    std::string server;
};
struct SetLoadRoutingCmd {
    std::string from;
    std::string to;
    bool add = true;
};

using Command = std::variant<RestartCmd, AddReplicaCmd, RemoveReplicaCmd, MigrateCmd, SetLoadRoutingCmd>;

std::string command_to_string(const Command& cmd);

struct SimComponent {
    std::string ctype;
    std::string state = "RUNNING"; // RUNNING | FAILED
    double base_rt = 0;
    double rt = 0;
    double load = 0;
    std::string server;
};

struct WorkloadSchedule {
    // tick -> (componentId -> demanded load); demand is split equally
    // across RUNNING replicas of the component's ctype
    std::map<std::int64_t, std::map<std::string, double>> loads;
    std::map<std::int64_t, std::vector<std::string>> faults; // tick -> component ids
};

// Deterministic component-based running system. Equal (seed, schedule,
// command sequence) implies identical event streams and final state.
class SimSystem {
public:
    std::map<std::string, double> servers;           // id -> capacity
    std::map<std::string, SimComponent> components;  // id -> component
    std::set<std::pair<std::string, std::string>> connections;
    std::int64_t clock = 0;
    std::uint64_t seed = 0;

    std::int64_t next_event_id() { return ++event_counter_; }

    // Advances one tick: schedule loads, scheduled faults, rt recompute.
    // One event per changed attribute.
    std::vector<ChangeEvent> tick(const WorkloadSchedule& schedule);

    std::vector<ChangeEvent> execute_command(const Command& cmd);

    // Flips a RUNNING component to FAILED (redistributing its load) and
    // returns the state event. Secondary load/rt changes surface through
    // tick events and monitor diffs.
    ChangeEvent inject_fault(const std::string& component_id);

private:
    std::vector<ChangeEvent> apply_fault(const std::string& component_id);
    std::vector<ChangeEvent> redistribute_failed_load();
    std::vector<ChangeEvent> recompute_rts();
    double server_load(const std::string& server_id) const;
    ChangeEvent attr_event(const std::string& element, const std::string& attr, Scalar oldv,
                           Scalar newv, EventSource src);

    std::int64_t event_counter_ = 0;
};

// system -> model direction of the causal connection. Brings `model` to the
// projection of `sys`; one event per difference, annotated at its location
// (removals excepted). Aborts on a nonconforming projection.
std::vector<ChangeEvent> monitor_sync(SimSystem& sys, ReflectionModel& model, const Metamodel& mm);

struct ExecOutcome {
    std::vector<Command> commands;
    std::vector<ChangeEvent> events;
};

// model -> system direction: translates a committed delta into commands and
// executes them in order. Unmappable ops (e.g. writes to sensor-owned
// attributes) raise ModelError(UnmappableDelta).
ExecOutcome execute_sync(const std::vector<EditOp>& delta, SimSystem& sys);

// Derives the model projection of the system (used by monitor_sync and by
// scenario loading).
ReflectionModel project_model(const SimSystem& sys);

} // namespace amrt
