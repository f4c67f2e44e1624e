#pragma once

#include "amrt/annotations.hpp"
#include "amrt/engine.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace amrt {

// JSONL trace stream: one {tick, kind, payload} object per line. Record
// kinds: event, evaluation, decision, swap, summary. Field names are part
// of the external interface; traces are byte-reproducible per (config, seed).
class TraceWriter {
public:
    explicit TraceWriter(std::ostream& out) : out_(&out) {}

    void event(std::int64_t tick, const ChangeEvent& ev);
    void evaluation(std::int64_t tick, const EvaluationResult& r);
    void decision(std::int64_t tick, const DecisionRecord& r);
    void swap(std::int64_t tick, const std::vector<std::string>& files, const std::string& bundle,
              bool staged);
    struct Summary {
        std::int64_t ticks = 0;
        double final_utility = 0;
        int adaptations = 0;
        int faults = 0;
        int repaired_faults = 0;
        double mean_coupled_reaction_latency = 0; // ticks; repaired faults only
    };
    void summary(std::int64_t tick, const Summary& s);

    int lines() const { return lines_; }

private:
    void emit(const std::string& line);
    std::ostream* out_;
    int lines_ = 0;
};

} // namespace amrt
