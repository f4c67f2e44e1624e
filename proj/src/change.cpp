#include "amrt/change.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace amrt {

std::string candidate_to_string(const Candidate& c) {
    return c.option_id + binding_to_string(c.binding);
}

AdaptationContext AdaptationContext::from(const std::vector<ChangeEvent>& events,
                                          const std::vector<EvaluationResult>& results) {
    AdaptationContext ctx;
    std::set<std::string> seen;
    for (const auto& r : results)
        if (!r.anchor_element_id.empty() && seen.insert(r.anchor_element_id).second)
            ctx.locations.push_back(r.anchor_element_id);
    for (const auto& e : events)
        if (!e.element_id.empty() && seen.insert(e.element_id).second)
            ctx.locations.push_back(e.element_id);
    return ctx;
}

namespace {

Pattern instantiated_precondition(const AdaptationOption& opt,
                                  const std::map<std::string, Scalar>& actuals) {
    Pattern p = opt.precondition;
    for (const auto& pp : opt.param_predicates) {
        auto it = actuals.find(pp.param);
        if (it == actuals.end())
            throw ModelError(ErrorCode::Invalid,
                             "option '" + opt.id + "': unbound parameter '" + pp.param + "'");
        p.predicates.push_back({pp.var, pp.attr, pp.op, it->second});
    }
    return p;
}

bool has_unbound_formals(const AdaptationOption& opt, const std::map<std::string, Scalar>& actuals) {
    for (const auto& [name, kind] : opt.formal_params)
        if (!actuals.count(name)) return true;
    return false;
}

struct EvalEnv {
    const ReflectionModel& model;
    const Binding& binding;
    const std::map<std::string, std::string>& fresh_ids;
    const std::map<std::string, Scalar>& actuals;

    std::string resolve_ref(const std::string& ref) const {
        if (auto it = fresh_ids.find(ref); it != fresh_ids.end()) return it->second;
        if (auto it = binding.find(ref); it != binding.end()) return it->second;
        throw ModelError(ErrorCode::Invalid, "unbound reference '" + ref + "' in effect");
    }
};

Scalar eval_value(const ValueExpr& e, const EvalEnv& env) {
    switch (e.kind) {
        case ValueExpr::Kind::Literal:
            return e.literal;
        case ValueExpr::Kind::Param: {
            auto it = env.actuals.find(e.param);
            if (it == env.actuals.end())
                throw ModelError(ErrorCode::Invalid, "unbound parameter '" + e.param + "'");
            return it->second;
        }
        case ValueExpr::Kind::AttrRef: {
            std::string id = env.resolve_ref(e.var);
            const Scalar* v = env.model.attr(id, e.attr);
            if (!v)
                throw ModelError(ErrorCode::StaleOp,
                                 "effect reads missing attribute '" + id + "." + e.attr + "'");
            return *v;
        }
        case ValueExpr::Kind::Binary: {
            Scalar l = eval_value(*e.lhs, env);
            Scalar r = eval_value(*e.rhs, env);
            if (!is_numeric(l) || !is_numeric(r))
                throw ModelError(ErrorCode::TypeViolation, "arithmetic on non-numeric values");
            double a = as_number(l), b = as_number(r);
            switch (e.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/':
                    if (b == 0) throw ModelError(ErrorCode::Invalid, "division by zero in effect");
                    return a / b;
            }
            throw ModelError(ErrorCode::Invalid, "unknown operator in effect");
        }
    }
    return Scalar{};
}

std::string fresh_replica_id(const ReflectionModel& model, const std::string& source_id) {
    for (int k = 1;; ++k) {
        std::string id = source_id + "#r" + std::to_string(k);
        if (!model.has_node(id) && !model.has_edge(id)) return id;
    }
}

std::string edge_id_for(const std::string& type, const std::string& src, const std::string& tgt) {
    return type + ":" + src + "->" + tgt;
}

// The candidate's binding must still be a valid occurrence of the pattern.
bool binding_still_valid(const ReflectionModel& model, const Metamodel& mm, const Pattern& pattern,
                         const Binding& binding) {
    std::string anchor;
    if (!pattern.anchor_var.empty()) {
        auto it = binding.find(pattern.anchor_var);
        if (it == binding.end()) return false;
        if (!model.has_element(it->second)) return false;
        anchor = it->second;
    }
    auto matches = match_pattern(model, mm, pattern, anchor);
    return std::find(matches.begin(), matches.end(), binding) != matches.end();
}

void apply_primitive(ReflectionModel& model, const AdaptationOption& opt, const Binding& binding,
                     const std::map<std::string, Scalar>& actuals, Transaction& txn,
                     Application::Step& step) {
    std::map<std::string, std::string> fresh;
    for (const auto& eff : opt.effect) {
        EvalEnv env{model, binding, fresh, actuals};
        std::visit(
            [&](const auto& t) {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, SetAttrTemplate>) {
                    std::string id = env.resolve_ref(t.var);
                    txn.apply(SetAttrOp{id, t.attr, {}, eval_value(t.value, env)});
                } else if constexpr (std::is_same_v<T, AddNodeTemplate>) {
                    std::string source_id = env.resolve_ref(t.source_var);
                    std::string id = fresh_replica_id(model, source_id);
                    Node n;
                    n.type = t.node_type;
                    for (const auto& [attr, vexpr] : t.initializers)
                        n.attrs[attr] = eval_value(vexpr, env);
                    txn.apply(AddNodeOp{id, std::move(n)});
                    fresh[t.alias] = id;
                } else if constexpr (std::is_same_v<T, AddEdgeTemplate>) {
                    std::string src = env.resolve_ref(t.src_ref);
                    std::string tgt = env.resolve_ref(t.tgt_ref);
                    txn.apply(AddEdgeOp{edge_id_for(t.edge_type, src, tgt),
                                        Edge{t.edge_type, src, tgt}});
                } else if constexpr (std::is_same_v<T, RemoveNodeTemplate>) {
                    txn.apply(RemoveNodeOp{env.resolve_ref(t.var), {}});
                } else {
                    std::string src = env.resolve_ref(t.src_ref);
                    std::string tgt = env.resolve_ref(t.tgt_ref);
                    txn.apply(RemoveEdgeOp{edge_id_for(t.edge_type, src, tgt), {}});
                }
            },
            eff);
    }
    step.fresh_ids = std::move(fresh);
}

// Sub-option bindings keep shared variable names pinned to the parent's
// assignment; the canonically first consistent completion is used.
Binding constrained_binding(const ReflectionModel& model, const Metamodel& mm,
                            const Pattern& pattern, const Binding& pinned) {
    auto matches = match_pattern(model, mm, pattern);
    for (const auto& m : matches) {
        bool ok = true;
        for (const auto& [var, id] : m) {
            auto it = pinned.find(var);
            if (it != pinned.end() && it->second != id) ok = false;
        }
        if (ok) return m;
    }
    throw ModelError(ErrorCode::PreconditionVanished,
                     "no consistent sub-option binding for the composite context");
}

} // namespace

std::vector<Candidate> applicable_options(
    const ReflectionModel& model, const Metamodel& mm, const OptionMap& options,
    const AdaptationContext& context,
    const std::map<std::string, std::map<std::string, Scalar>>& actuals) {
    std::vector<Candidate> out;
    static const std::map<std::string, Scalar> no_actuals;
    for (const auto& [id, opt] : options) {
        const auto& opt_actuals = actuals.count(id) ? actuals.at(id) : no_actuals;
        if (has_unbound_formals(opt, opt_actuals)) continue;
        Pattern pre = instantiated_precondition(opt, opt_actuals);

        std::vector<Binding> bindings;
        if (!pre.anchor_var.empty() && !context.locations.empty()) {
            for (const auto& loc : context.locations) {
                if (!model.has_element(loc)) continue;
                auto bs = match_pattern(model, mm, pre, loc);
                bindings.insert(bindings.end(), bs.begin(), bs.end());
            }
            std::sort(bindings.begin(), bindings.end());
            bindings.erase(std::unique(bindings.begin(), bindings.end()), bindings.end());
        } else {
            bindings = match_pattern(model, mm, pre);
        }
        for (auto& b : bindings) out.push_back({id, std::move(b), opt_actuals});
    }
    std::sort(out.begin(), out.end());
    return out;
}

Application apply_candidate(ReflectionModel& model, const Metamodel& mm, const OptionMap& options,
                            const Candidate& cand, Transaction& txn) {
    auto oit = options.find(cand.option_id);
    if (oit == options.end())
        throw ModelError(ErrorCode::Invalid, "unknown option '" + cand.option_id + "'");
    const AdaptationOption& opt = oit->second;

    Pattern pre = instantiated_precondition(opt, cand.actual_params);
    if (!binding_still_valid(model, mm, pre, cand.binding))
        throw ModelError(ErrorCode::PreconditionVanished,
                         "precondition of '" + cand.option_id + "' no longer holds for " +
                             binding_to_string(cand.binding));

    Application app;
    app.option = &opt;
    app.candidate = cand;
    app.mark = txn.mark();
    try {
        if (!opt.is_composite()) {
            Application::Step step{&opt, cand.binding, {}};
            apply_primitive(model, opt, cand.binding, cand.actual_params, txn, step);
            app.steps.push_back(std::move(step));
        } else {
            for (const auto& sub_id : expand_composite(options, opt.id)) {
                const AdaptationOption& sub = options.at(sub_id);
                Pattern sub_pre = instantiated_precondition(sub, cand.actual_params);
                Binding sub_binding = constrained_binding(model, mm, sub_pre, cand.binding);
                Application::Step step{&sub, sub_binding, {}};
                apply_primitive(model, sub, sub_binding, cand.actual_params, txn, step);
                app.steps.push_back(std::move(step));
            }
        }
    } catch (...) {
        txn.rollback_to(app.mark);
        throw;
    }
    return app;
}

Application apply_option(ReflectionModel& model, const Metamodel& mm, const OptionMap& options,
                         const Candidate& cand, TransactionManager& txm) {
    Transaction& txn = txm.begin();
    try {
        return apply_candidate(model, mm, options, cand, txn);
    } catch (...) {
        txn.rollback();
        throw;
    }
}

GateOutcome verify_option(const ReflectionModel& model, const Metamodel& mm,
                          const Application& app) {
    GateOutcome out;
    for (const auto& step : app.steps) {
        EvalEnv env{model, step.binding, step.fresh_ids, app.candidate.actual_params};
        for (const auto& post : step.option->postcondition) {
            std::string id;
            try {
                id = env.resolve_ref(post.ref);
            } catch (const ModelError&) {
                out.pass = false;
                out.reasons.push_back("postcondition reference '" + post.ref + "' unbound");
                continue;
            }
            const Scalar* v = model.attr(id, post.attr);
            if (!v || !eval_cmp(post.op, *v, eval_value(post.value, env))) {
                out.pass = false;
                out.reasons.push_back("postcondition failed: " + post.ref + "." + post.attr + " " +
                                      cmp_op_name(post.op) + " ...");
            }
        }
    }

    std::set<const AdaptationOption*> checked;
    auto check_invariants = [&](const AdaptationOption* opt) {
        if (!checked.insert(opt).second) return;
        for (const auto& inv : opt->invariants) {
            auto matches = match_pattern(model, mm, inv);
            if (!matches.empty()) {
                out.pass = false;
                out.reasons.push_back("invariant of '" + opt->id + "' violated: " +
                                      binding_to_string(matches.front()));
            }
        }
    };
    check_invariants(app.option);
    for (const auto& step : app.steps) check_invariants(step.option);

    auto conf = validate_conformance(model, mm);
    for (const auto& v : conf) {
        out.pass = false;
        out.reasons.push_back("conformance: " + v.element_id + " " + v.rule + " (" + v.message + ")");
    }
    return out;
}

std::vector<std::string> expand_composite(const OptionMap& options, const std::string& option_id) {
    std::vector<std::string> out;
    std::set<std::string> on_path;
    std::function<void(const std::string&)> walk = [&](const std::string& id) {
        auto it = options.find(id);
        if (it == options.end())
            throw ModelError(ErrorCode::Invalid, "composite references unknown option '" + id + "'");
        if (!on_path.insert(id).second)
            throw ModelError(ErrorCode::CycleDetected, "composite cycle through '" + id + "'");
        if (!it->second.is_composite()) {
            out.push_back(id);
        } else {
            for (const auto& sub : it->second.compose) walk(sub);
        }
        on_path.erase(id);
    };
    walk(option_id);
    return out;
}

Estimate estimate(const Candidate& cand, const OptionMap& options, const PreferenceWeights& prefs) {
    const AdaptationOption& opt = options.at(cand.option_id);
    Estimate e;
    e.cost = opt.cost;
    for (const auto& [qid, delta] : opt.benefit) {
        auto it = prefs.weights.find(qid);
        if (it != prefs.weights.end()) e.weighted_benefit += it->second * delta;
    }
    return e;
}

} // namespace amrt
