#pragma once

#include "amrt/engine.hpp"
#include "amrt/metamodel.hpp"
#include "amrt/model.hpp"
#include "amrt/sim.hpp"

#include <string>
#include <vector>

namespace amrt {

// Raised for malformed or inconsistent input files; the CLI maps it to
// exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Metamodel load_metamodel_json(const std::string& text, const std::string& origin);
Metamodel load_metamodel_file(const std::string& path);

// Reflection model document (mode + nodes + edges); attribute kinds follow
// the metamodel.
ReflectionModel load_model_json(const std::string& text, const Metamodel& mm,
                                const std::string& origin);
std::string dump_model_json(const ReflectionModel& model);

enum class EngineMode { Coupled, Decoupled, Both };

struct HotSwapDirective {
    std::int64_t tick = 0;
    std::vector<std::string> adm_files; // resolved absolute/relative paths
};

struct ScenarioConfig {
    Metamodel metamodel;
    SimSystem system;
    WorkloadSchedule workload;
    std::vector<std::string> adm_files;
    EngineMode engine = EngineMode::Both;
    std::int64_t ticks = 1;
    std::uint64_t seed = 0;
    PlannerConfig planner;
    std::vector<HotSwapDirective> hot_swaps;
};

// Parses and validates a scenario document; adm/metamodel paths resolve
// relative to the scenario file's directory.
ScenarioConfig load_scenario_file(const std::string& path);

} // namespace amrt
