#include "amrt/assessment.hpp"

#include "amrt/model.hpp"

#include <iomanip>
#include <sstream>

namespace amrt {

const char* support_level_text(SupportLevel l) {
    switch (l) {
        case SupportLevel::None: return "--";
        case SupportLevel::Medium: return "M";
        case SupportLevel::Full: return "F";
    }
    return "?";
}

namespace {

struct Row {
    const char* id;
    const char* name;
    const char* category;
    SupportLevel stitch;
    SupportLevel sd;
    SupportLevel self;
    const char* self_rationale;
};

constexpr SupportLevel N = SupportLevel::None;
constexpr SupportLevel M = SupportLevel::Medium;
constexpr SupportLevel F = SupportLevel::Full;

// Stitch and Story Diagram cells are the frozen published comparison.
const Row kRows[] = {
    {"LR-Goals", "Goals", "functional-LR", N, F, F,
     "require/forbid goal patterns checked on the model (test_objectives: goals)"},
    {"LR-Quality", "Quality Dimensions", "functional-LR", F, F, F,
     "aggregate quality metrics with bounds (test_objectives: measure)"},
    {"LR-Preferences", "Preferences", "functional-LR", F, F, M,
     "weights trade off qualities; preferences among goals are not modeled "
     "(test_objectives: utility)"},
    {"LR-ReflectionModels", "Access to Reflection Models", "functional-LR", M, F, F,
     "typed graph read/write via transactions (test_model: transactions)"},
    {"LR-Events", "Events", "functional-LR", M, F, F,
     "change events locate phenomena; anchored evaluation (test_evaluation: incremental)"},
    {"LR-EvalConditions", "Evaluation Conditions", "functional-LR", F, F, F,
     "prioritized structural patterns with predicates (test_evaluation)"},
    {"LR-EvalResults", "Evaluation Results", "functional-LR", N, F, F,
     "results annotated at their anchors (test_evaluation: annotate_and_publish)"},
    {"LR-AdaptOptions", "Adaptation Options", "functional-LR", F, F, F,
     "options with parameterized effects span the configuration space (test_change)"},
    {"LR-AdaptConditions", "Adaptation Conditions", "functional-LR", F, F, F,
     "pre/post/invariant checks gate every application (test_change: verify_option)"},
    {"LR-CostsBenefits", "Costs and Benefits", "functional-LR", F, F, F,
     "per-option cost and expected benefit drive candidate ordering (test_change: estimate)"},
    {"LR-History", "History of Decisions", "functional-LR", M, F, M,
     "decisions recorded and queryable, never consulted for learning "
     "(test_engine: history_query)"},

    {"LR-Modularity", "Modularity and Abstractions", "non-functional-LR", M, F, F,
     "multi-file sub-models and composite options (test_adm: cross-file, test_change: compose)"},
    {"LR-SideEffects", "Side Effects", "non-functional-LR", N, M, F,
     "only option effects may edit; evaluation is digest-checked pure (test_evaluation)"},
    {"LR-Parameters", "Parameters", "non-functional-LR", M, F, F,
     "bundle params substituted at use sites; option formals bound by rules (test_adm)"},
    {"LR-Formality", "Formality", "non-functional-LR", N, M, M,
     "static well-formedness and overlap checks only (test_adm: static_check)"},
    {"LR-Reusability", "Reusability", "non-functional-LR", M, M, F,
     "engine core is parameterized by a user-supplied metamodel (test_model: conformance)"},
    {"LR-EaseOfUse", "Ease of Use", "non-functional-LR", M, F, M,
     "declarative DSL with spanned diagnostics; no graphical tooling (test_adm)"},

    {"FR-Consistency", "Consistency", "FR", M, F, F,
     "conformance + postconditions + invariants gate every commit (test_change, test_engine)"},
    {"FR-Incrementality", "Incrementality", "FR", N, M, F,
     "event-anchored evaluation with periodic sweep (test_evaluation: incremental vs full)"},
    {"FR-Reversibility", "Reversibility", "FR", N, M, F,
     "every edit carries its inverse; rollback is digest-exact (test_model: rollback)"},
    {"FR-Priorities", "Priorities", "FR", N, F, F,
     "conditions evaluated in decreasing criticality (test_evaluation: priorities)"},
    {"FR-TimeScales", "Time Scales", "FR", N, F, F,
     "fast/slow lanes with periodic and escalated planning (test_engine: schedule_tick)"},
    {"FR-Flexibility", "Flexibility", "FR", N, F, F,
     "hot-swap of checked bundles at tick boundaries (test_engine: hot_swap)"},
};

const char* kStitchRationale = "published comparison (frozen fixture)";

} // namespace

AssessmentMatrix build_assessment_matrix() {
    AssessmentMatrix m;
    for (const auto& row : kRows) {
        m.requirements.push_back({row.id, row.name, row.category});
        m.cells["stitch"][row.id] = {row.stitch, kStitchRationale};
        m.cells["story-diagrams"][row.id] = {row.sd, kStitchRationale};
        m.cells["self"][row.id] = {row.self, row.self_rationale};
    }
    return m;
}

SupportLevel assessment_lookup(const AssessmentMatrix& m, const std::string& approach,
                               const std::string& requirement_id) {
    auto ait = m.cells.find(approach);
    if (ait == m.cells.end())
        throw ModelError(ErrorCode::Invalid, "unknown approach '" + approach + "'");
    auto rit = ait->second.find(requirement_id);
    if (rit == ait->second.end())
        throw ModelError(ErrorCode::Invalid, "unknown requirement '" + requirement_id + "'");
    return rit->second.level;
}

std::string render_assessment(const AssessmentMatrix& m, const std::string& format,
                              const std::string& approach) {
    std::vector<std::string> approaches;
    if (approach.empty()) {
        approaches = {"stitch", "story-diagrams", "self"};
    } else {
        if (!m.cells.count(approach))
            throw ModelError(ErrorCode::Invalid, "unknown approach '" + approach + "'");
        approaches = {approach};
    }

    std::ostringstream os;
    if (format == "csv") {
        os << "requirement,category,name";
        for (const auto& a : approaches) os << "," << a;
        if (approaches.size() == 1 && approaches[0] == "self") os << ",rationale";
        os << "\n";
        for (const auto& req : m.requirements) {
            os << req.id << "," << req.category << "," << req.name;
            for (const auto& a : approaches)
                os << "," << support_level_text(m.cells.at(a).at(req.id).level);
            if (approaches.size() == 1 && approaches[0] == "self")
                os << ",\"" << m.cells.at("self").at(req.id).rationale << "\"";
            os << "\n";
        }
        return os.str();
    }
    if (format != "text")
        throw ModelError(ErrorCode::Invalid, "unknown format '" + format + "' (text or csv)");

    os << std::left << std::setw(30) << "Requirement" << std::setw(22) << "Id";
    for (const auto& a : approaches) os << std::setw(16) << a;
    os << "\n" << std::string(52 + 16 * approaches.size(), '-') << "\n";
    std::string category;
    for (const auto& req : m.requirements) {
        if (req.category != category) {
            category = req.category;
            os << "[" << category << "]\n";
        }
        os << std::left << std::setw(30) << req.name << std::setw(22) << req.id;
        for (const auto& a : approaches)
            os << std::setw(16) << support_level_text(m.cells.at(a).at(req.id).level);
        os << "\n";
    }
    os << "\nlegend: '--' no support, 'M' medium support, 'F' full support\n";
    if (approaches.size() == 1 && approaches[0] == "self") {
        os << "\nrationale:\n";
        for (const auto& req : m.requirements)
            os << "  " << req.id << ": " << m.cells.at("self").at(req.id).rationale << "\n";
    }
    return os.str();
}

} // namespace amrt
