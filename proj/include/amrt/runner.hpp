#pragma once

#include "amrt/json_io.hpp"
#include "amrt/trace.hpp"

#include <ostream>
#include <string>

namespace amrt {

struct RunOutcome {
    TraceWriter::Summary summary;
    int trace_lines = 0;
    EngineState final_state;     // history and bundle after the run
    ReflectionModel final_model; // synced reflection model after the last tick
};

// Drives the loop: tick -> monitor_sync -> scheduled engines -> records.
// Writes the JSONL trace to `trace_out`. Throws ConfigError for bad
// adaptation models (exit 2 at the CLI) and ModelError for runtime aborts
// (exit 3).
RunOutcome run_scenario(const ScenarioConfig& config, std::ostream& trace_out);

// Loads, resolves, and statically checks adm files against the metamodel.
// Errors raise ConfigError carrying the first diagnostic.
AdaptationModelBundle load_bundle(const std::vector<std::string>& adm_files, const Metamodel& mm);

} // namespace amrt
