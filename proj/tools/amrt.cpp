#include "amrt/adm/parser.hpp"
#include "amrt/assessment.hpp"
#include "amrt/json_io.hpp"
#include "amrt/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntimeAbort = 3;

int cmd_run(const std::string& scenario_path, const std::string& trace_path,
            const std::string& engine, int ticks, std::int64_t seed, bool have_seed) {
    amrt::ScenarioConfig cfg;
    try {
        cfg = amrt::load_scenario_file(scenario_path);
        if (!engine.empty()) {
            if (engine == "coupled") cfg.engine = amrt::EngineMode::Coupled;
            else if (engine == "decoupled") cfg.engine = amrt::EngineMode::Decoupled;
            else if (engine == "both") cfg.engine = amrt::EngineMode::Both;
            else throw amrt::ConfigError("engine must be coupled, decoupled, or both");
        }
        if (ticks > 0) cfg.ticks = ticks;
        if (have_seed) {
            cfg.seed = static_cast<std::uint64_t>(seed);
            cfg.system.seed = cfg.seed;
        }
    } catch (const amrt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ofstream trace_file;
    std::ostringstream devnull;
    std::ostream* trace_out = &devnull;
    if (!trace_path.empty()) {
        trace_file.open(trace_path, std::ios::binary | std::ios::trunc);
        if (!trace_file.good()) {
            std::cerr << "config error: cannot open trace file '" << trace_path << "'\n";
            return kExitUsage;
        }
        trace_out = &trace_file;
    }

    try {
        auto out = amrt::run_scenario(cfg, *trace_out);
        const auto& s = out.summary;
        std::cout << "ticks=" << s.ticks << " finalUtility=" << s.final_utility
                  << " adaptations=" << s.adaptations << " faults=" << s.faults
                  << " repaired=" << s.repaired_faults
                  << " meanReactionLatency=" << s.mean_coupled_reaction_latency
                  << " traceLines=" << out.trace_lines << "\n";
        return kExitOk;
    } catch (const amrt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const amrt::ModelError& e) {
        std::cerr << "runtime abort (" << amrt::error_code_name(e.code()) << "): " << e.what()
                  << "\n";
        return kExitRuntimeAbort;
    }
}

int cmd_check(const std::vector<std::string>& adm_files, const std::string& metamodel_path) {
    amrt::Metamodel mm;
    try {
        mm = amrt::load_metamodel_file(metamodel_path);
    } catch (const amrt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    bool failed = false;
    std::vector<amrt::adm::AstBundle> asts;
    for (const auto& path : adm_files) {
        std::ifstream in(path);
        if (!in.good()) {
            std::cerr << "config error: cannot read '" << path << "'\n";
            return kExitUsage;
        }
        std::ostringstream text;
        text << in.rdbuf();
        auto pr = amrt::adm::parse(text.str(), path);
        for (const auto& d : pr.diagnostics) {
            std::cout << amrt::diagnostic_to_string(d) << "\n";
            failed |= d.severity == amrt::Diagnostic::Severity::Error;
        }
        asts.push_back(std::move(pr.bundle));
    }
    if (failed) return kExitCheckFailed;

    auto rr = amrt::adm::resolve(asts, mm);
    for (const auto& d : rr.diagnostics) {
        std::cout << amrt::diagnostic_to_string(d) << "\n";
        failed |= d.severity == amrt::Diagnostic::Severity::Error;
    }
    if (failed) return kExitCheckFailed;

    for (const auto& d : amrt::static_check_bundle(rr.bundle, mm)) {
        std::cout << amrt::diagnostic_to_string(d) << "\n";
        failed |= d.severity == amrt::Diagnostic::Severity::Error;
    }
    if (failed) return kExitCheckFailed;
    std::cout << "ok: " << rr.bundle.name << " (" << rr.bundle.conditions.size() << " conditions, "
              << rr.bundle.options.size() << " options, " << rr.bundle.rules.size() << " rules)\n";
    return kExitOk;
}

int cmd_assess(const std::string& approach, const std::string& format) {
    try {
        auto matrix = amrt::build_assessment_matrix();
        std::cout << amrt::render_assessment(matrix, format, approach);
        return kExitOk;
    } catch (const amrt::ModelError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"amrt — adaptation-model runtime"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario and stream a JSONL trace");
    std::string scenario_path, trace_path, engine;
    int ticks = 0;
    std::int64_t seed = 0;
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--trace", trace_path, "trace output file (JSONL)");
    run->add_option("--engine", engine, "coupled | decoupled | both (overrides config)");
    run->add_option("--ticks", ticks, "tick count (overrides config)");
    auto* seed_opt = run->add_option("--seed", seed, "rng seed (overrides config)");

    auto* check = app.add_subcommand("check", "validate adaptation model files");
    std::vector<std::string> adm_files;
    std::string metamodel_path;
    check->add_option("adm", adm_files, "adm files")->required();
    check->add_option("--metamodel", metamodel_path, "metamodel JSON file")->required();

    auto* assess = app.add_subcommand("assess", "print the requirements assessment");
    std::string approach, format = "text";
    assess->add_option("--approach", approach, "stitch | story-diagrams | self");
    assess->add_option("--format", format, "text | csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed()) return cmd_run(scenario_path, trace_path, engine, ticks, seed,
                                      seed_opt->count() > 0);
    if (check->parsed()) return cmd_check(adm_files, metamodel_path);
    if (assess->parsed()) return cmd_assess(approach, format);
    return kExitUsage;
}
