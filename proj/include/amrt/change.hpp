#pragma once

#include "amrt/annotations.hpp"
#include "amrt/edit.hpp"
#include "amrt/model.hpp"
#include "amrt/objectives.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace amrt {

// Value expression inside effect templates and postconditions. Evaluated
// against the current model state, the candidate binding, created fresh
// ids, and actual parameters.
struct ValueExpr {
    enum class Kind { Literal, Param, AttrRef, Binary };
    Kind kind = Kind::Literal;
    Scalar literal;
    std::string param;
    std::string var;  // AttrRef: pattern variable or fresh alias
    std::string attr;
    char op = '+'; // Binary: + - * /
    std::shared_ptr<ValueExpr> lhs, rhs;

    static ValueExpr lit(Scalar v) {
        ValueExpr e;
        e.kind = Kind::Literal;
        e.literal = std::move(v);
        return e;
    }
    static ValueExpr param_ref(std::string name) {
        ValueExpr e;
        e.kind = Kind::Param;
        e.param = std::move(name);
        return e;
    }
    static ValueExpr attr_ref(std::string var, std::string attr) {
        ValueExpr e;
        e.kind = Kind::AttrRef;
        e.var = std::move(var);
        e.attr = std::move(attr);
        return e;
    }
    static ValueExpr binary(char op, ValueExpr l, ValueExpr r) {
        ValueExpr e;
        e.kind = Kind::Binary;
        e.op = op;
        e.lhs = std::make_shared<ValueExpr>(std::move(l));
        e.rhs = std::make_shared<ValueExpr>(std::move(r));
        return e;
    }
};

// Parameterized edit templates. Fresh node ids follow the suffix rule
// `<sourceId>#r<k>` with k the smallest unused.
struct SetAttrTemplate {
    std::string var;
    std::string attr;
    ValueExpr value;
};
struct AddNodeTemplate {
    std::string alias;      // local name, e.g. "c#r"
    std::string source_var; // id prefix donor, e.g. "c"
    std::string node_type;
    std::vector<std::pair<std::string, ValueExpr>> initializers;
};
struct AddEdgeTemplate {
    std::string edge_type;
    std::string src_ref; // variable or alias
    std::string tgt_ref;
};
struct RemoveNodeTemplate {
    std::string var;
};
struct RemoveEdgeTemplate {
    std::string edge_type;
    std::string src_ref;
    std::string tgt_ref;
};

using EffectOp = std::variant<SetAttrTemplate, AddNodeTemplate, AddEdgeTemplate, RemoveNodeTemplate,
                              RemoveEdgeTemplate>;

// Precondition predicate against a formal parameter, materialized once
// actuals are known.
struct ParamPredicate {
    std::string var;
    std::string attr;
    CmpOp op = CmpOp::Eq;
    std::string param;
};

struct PostComparison {
    std::string ref; // variable or alias
    std::string attr;
    CmpOp op = CmpOp::Eq;
    ValueExpr value;
};

struct AdaptationOption {
    std::string id;
    std::vector<std::pair<std::string, ScalarKind>> formal_params;
    Pattern precondition;
    std::vector<ParamPredicate> param_predicates;
    std::vector<EffectOp> effect;       // primitive
    std::vector<std::string> compose;   // composite (ordered sub-option ids)
    std::vector<PostComparison> postcondition;
    std::vector<Pattern> invariants; // must not match after application
    double cost = 0;
    std::map<std::string, double> benefit; // qualityId -> expected delta

    bool is_composite() const { return !compose.empty(); }
};

using OptionMap = std::map<std::string, AdaptationOption>;

struct Candidate {
    std::string option_id;
    Binding binding;
    std::map<std::string, Scalar> actual_params;

    friend bool operator<(const Candidate& a, const Candidate& b) {
        if (a.option_id != b.option_id) return a.option_id < b.option_id;
        return a.binding < b.binding;
    }
    friend bool operator==(const Candidate& a, const Candidate& b) {
        return a.option_id == b.option_id && a.binding == b.binding;
    }
};

std::string candidate_to_string(const Candidate& c);

// Anchor locations extracted from events and results; empty context means
// unanchored candidate generation.
struct AdaptationContext {
    std::vector<std::string> locations;
    static AdaptationContext from(const std::vector<ChangeEvent>& events,
                                  const std::vector<EvaluationResult>& results);
};

// All (option, binding) pairs whose precondition matches, in canonical
// (optionId, binding) order. Anchored options restrict to context
// locations when any are given. `actuals` supplies per-option parameter
// values (rule literals); options with unbound formals are skipped.
std::vector<Candidate> applicable_options(
    const ReflectionModel& model, const Metamodel& mm, const OptionMap& options,
    const AdaptationContext& context = {},
    const std::map<std::string, std::map<std::string, Scalar>>& actuals = {});

// One applied (possibly composite) candidate inside a transaction.
struct Application {
    const AdaptationOption* option = nullptr;
    Candidate candidate;
    std::size_t mark = 0; // txn savepoint taken before the effects
    // per applied primitive: option, its binding, fresh ids it created
    struct Step {
        const AdaptationOption* option;
        Binding binding;
        std::map<std::string, std::string> fresh_ids;
    };
    std::vector<Step> steps;
};

// Applies the candidate's effects into `txn` (composites expand depth-first
// left-to-right, shared variable names stay pinned). Re-checks the
// precondition; edit errors unwind to the savepoint and rethrow.
Application apply_candidate(ReflectionModel& model, const Metamodel& mm, const OptionMap& options,
                            const Candidate& cand, Transaction& txn);

// Opens a fresh transaction and applies. The transaction is left open
// for the gate / rollback.
Application apply_option(ReflectionModel& model, const Metamodel& mm, const OptionMap& options,
                         const Candidate& cand, TransactionManager& txm);

struct GateOutcome {
    bool pass = true;
    std::vector<std::string> reasons;
};

// pass iff every applied step's postcondition holds, no option invariant
// matches, and the model conforms.
GateOutcome verify_option(const ReflectionModel& model, const Metamodel& mm,
                          const Application& app);

// Depth-first left-to-right flattening to primitive option ids.
std::vector<std::string> expand_composite(const OptionMap& options, const std::string& option_id);

struct Estimate {
    double cost = 0;
    double weighted_benefit = 0; // sum_q w_q * benefit_q
};

Estimate estimate(const Candidate& cand, const OptionMap& options, const PreferenceWeights& prefs);

} // namespace amrt
