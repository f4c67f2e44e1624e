#include "amrt/adm/parser.hpp"

#include <map>
#include <set>

namespace amrt::adm {

namespace {

struct Resolver {
    const Metamodel& mm;
    std::vector<Diagnostic>& diags;
    std::map<std::string, Scalar> params; // bundle-level, substituted at use sites
    std::set<std::string> quality_ids, goal_ids, condition_ids, option_ids;

    void error(const SourceSpan& span, const std::string& msg) {
        diags.push_back({Diagnostic::Severity::Error, msg, span});
    }

    // ---- types and kinds ---------------------------------------------------
    const NodeTypeDecl* require_node_type(const std::string& name, const SourceSpan& span) {
        const auto* nt = mm.node_type(name);
        if (!nt) error(span, "unknown type '" + name + "'");
        return nt;
    }
    const AttrDecl* require_attr(const std::string& type, const std::string& attr,
                                 const SourceSpan& span) {
        const auto* decl = mm.attr_decl(type, attr);
        if (!decl) error(span, "unknown attribute '" + type + "." + attr + "'");
        return decl;
    }

    static bool literal_compatible(ScalarKind declared, const Scalar& v) {
        switch (declared) {
            case ScalarKind::Int: return kind_of(v) == ScalarKind::Int;
            case ScalarKind::Float: return is_numeric(v);
            case ScalarKind::String: return kind_of(v) == ScalarKind::String;
            case ScalarKind::Bool: return kind_of(v) == ScalarKind::Bool;
        }
        return false;
    }

    // ---- value expressions ---------------------------------------------------
    // Substitutes bundle params; leaves formals as Param refs; validates
    // attr refs against the variable table.
    ValueExpr resolve_value(const ValueExpr& e, const std::map<std::string, ScalarKind>& formals,
                            const std::map<std::string, std::string>& var_types,
                            const SourceSpan& span) {
        switch (e.kind) {
            case ValueExpr::Kind::Literal:
                return e;
            case ValueExpr::Kind::Param: {
                if (auto it = params.find(e.param); it != params.end())
                    return ValueExpr::lit(it->second);
                if (formals.count(e.param)) return e;
                error(span, "unknown identifier '" + e.param + "'");
                return e;
            }
            case ValueExpr::Kind::AttrRef: {
                auto it = var_types.find(e.var);
                if (it == var_types.end()) {
                    error(span, "unknown variable '" + e.var + "'");
                } else {
                    require_attr(it->second, e.attr, span);
                }
                return e;
            }
            case ValueExpr::Kind::Binary: {
                ValueExpr out = e;
                out.lhs = std::make_shared<ValueExpr>(
                    resolve_value(*e.lhs, formals, var_types, span));
                out.rhs = std::make_shared<ValueExpr>(
                    resolve_value(*e.rhs, formals, var_types, span));
                return out;
            }
        }
        return e;
    }

    void check_predicate_kinds(const std::string& type, const std::string& attr, const Scalar& v,
                               const SourceSpan& span) {
        const auto* decl = mm.attr_decl(type, attr);
        if (decl && !literal_compatible(decl->kind, v))
            error(span, "kind mismatch: '" + type + "." + attr + "' is " + kind_name(decl->kind) +
                            ", compared against " + kind_name(kind_of(v)));
    }

    // ---- patterns -----------------------------------------------------------
    struct ResolvedPattern {
        Pattern pattern;
        std::vector<ParamPredicate> param_predicates; // option pre only
        std::map<std::string, std::string> var_types;
    };

    void resolve_edge(const AstPatternEdge& e, const std::map<std::string, std::string>& var_types,
                      std::vector<PatternEdge>& out) {
        const auto* et = mm.edge_type(e.type);
        if (!et) {
            error(e.span, "unknown edge type '" + e.type + "'");
            return;
        }
        for (const auto& [ref, expected] :
             {std::pair{e.src, et->source}, std::pair{e.tgt, et->target}}) {
            auto it = var_types.find(ref);
            if (it == var_types.end())
                error(e.span, "unknown variable '" + ref + "' in edge");
            else if (it->second != expected)
                error(e.span, "kind mismatch: '" + e.type + "' endpoint '" + ref + "' is " +
                                  it->second + ", expected " + expected);
        }
        out.push_back({e.src, e.type, e.tgt});
    }

    ResolvedPattern resolve_pattern(const AstPattern& ast,
                                    const std::map<std::string, ScalarKind>& formals,
                                    bool allow_param_predicates) {
        ResolvedPattern out;
        for (const auto& n : ast.nodes) {
            require_node_type(n.type, n.span);
            if (out.var_types.count(n.var)) {
                error(n.span, "duplicate pattern variable '" + n.var + "'");
                continue;
            }
            out.var_types[n.var] = n.type;
            out.pattern.nodes.push_back({n.var, n.type});
            if (n.anchored) {
                if (!out.pattern.anchor_var.empty())
                    error(n.span, "pattern declares more than one anchor variable");
                out.pattern.anchor_var = n.var;
            }
        }
        for (const auto& e : ast.edges) resolve_edge(e, out.var_types, out.pattern.edges);

        for (const auto& cmp : ast.where) {
            if (cmp.var.empty()) {
                error(cmp.span, "pattern predicates need a variable ('var.attr')");
                continue;
            }
            auto vt = out.var_types.find(cmp.var);
            if (vt == out.var_types.end()) {
                error(cmp.span, "unknown variable '" + cmp.var + "'");
                continue;
            }
            require_attr(vt->second, cmp.attr, cmp.span);
            ValueExpr rhs = resolve_value(cmp.rhs, formals, {}, cmp.span);
            if (rhs.kind == ValueExpr::Kind::Literal) {
                check_predicate_kinds(vt->second, cmp.attr, rhs.literal, cmp.span);
                out.pattern.predicates.push_back({cmp.var, cmp.attr, cmp.op, rhs.literal});
            } else if (rhs.kind == ValueExpr::Kind::Param && allow_param_predicates) {
                out.param_predicates.push_back({cmp.var, cmp.attr, cmp.op, rhs.param});
            } else {
                error(cmp.span, "pattern predicates compare an attribute against a literal or "
                                "parameter");
            }
        }

        for (const auto& neg : ast.negatives) {
            NegativeClause nac;
            auto local_types = out.var_types;
            for (const auto& n : neg.nodes) {
                require_node_type(n.type, n.span);
                if (local_types.count(n.var)) {
                    error(n.span, "negative variable '" + n.var + "' shadows another variable");
                    continue;
                }
                local_types[n.var] = n.type;
                nac.nodes.push_back({n.var, n.type});
            }
            for (const auto& e : neg.edges) resolve_edge(e, local_types, nac.edges);
            for (const auto& cmp : neg.where) {
                auto vt = local_types.find(cmp.var);
                if (cmp.var.empty() || vt == local_types.end()) {
                    error(cmp.span, "unknown variable '" + cmp.var + "' in negative clause");
                    continue;
                }
                require_attr(vt->second, cmp.attr, cmp.span);
                ValueExpr rhs = resolve_value(cmp.rhs, {}, {}, cmp.span);
                if (rhs.kind != ValueExpr::Kind::Literal) {
                    error(cmp.span, "negative predicates compare against literals");
                    continue;
                }
                check_predicate_kinds(vt->second, cmp.attr, rhs.literal, cmp.span);
                nac.predicates.push_back({cmp.var, cmp.attr, cmp.op, rhs.literal});
            }
            out.pattern.negatives.push_back(std::move(nac));
        }
        return out;
    }
};

} // namespace

ResolveResult resolve(const std::vector<AstBundle>& files, const Metamodel& mm) {
    ResolveResult result;
    AdaptationModelBundle& b = result.bundle;
    Resolver rx{mm, result.diagnostics, {}, {}, {}, {}, {}};

    std::map<std::string, SourceSpan> declared; // global id uniqueness
    auto declare = [&](const std::string& id, const SourceSpan& span) {
        auto [it, fresh] = declared.emplace(id, span);
        if (!fresh)
            rx.error(span, "duplicate declaration '" + id + "' (first at " + it->second.file + ":" +
                               std::to_string(it->second.line) + ")");
        b.spans[id] = span;
        return fresh;
    };

    if (!files.empty()) b.name = files.front().name;

    // params first: every later declaration may use them
    for (const auto& f : files) {
        for (const auto& p : f.params) {
            if (!declare(p.name, p.span)) continue;
            auto kind = kind_from_name(p.kind);
            if (!kind) {
                rx.error(p.span, "unknown kind '" + p.kind + "'");
                continue;
            }
            Scalar v = p.value.literal;
            if (!Resolver::literal_compatible(*kind, v)) {
                rx.error(p.span, "parameter '" + p.name + "' declared " + p.kind +
                                     " but initialized with " + kind_name(kind_of(v)));
                continue;
            }
            if (*kind == ScalarKind::Float && kind_of(v) == ScalarKind::Int)
                v = as_number(v);
            rx.params[p.name] = v;
            b.parameters[p.name] = v;
        }
    }

    for (const auto& f : files) {
        for (const auto& q : f.qualities) {
            if (!declare(q.name, q.span)) continue;
            rx.quality_ids.insert(q.name);
            QualityDimension dim;
            dim.id = q.name;
            if (q.aggregator == "avg") dim.agg = Aggregator::Avg;
            else if (q.aggregator == "min") dim.agg = Aggregator::Min;
            else if (q.aggregator == "max") dim.agg = Aggregator::Max;
            else if (q.aggregator == "sum") dim.agg = Aggregator::Sum;
            else if (q.aggregator == "fraction") dim.agg = Aggregator::Fraction;
            else {
                rx.error(q.span, "unknown aggregator '" + q.aggregator + "'");
                continue;
            }
            dim.node_type = q.node_type;
            const auto* nt = rx.require_node_type(q.node_type, q.span);
            dim.attribute = q.attribute;
            if (dim.agg != Aggregator::Fraction) {
                if (q.attribute.empty()) {
                    rx.error(q.span, "aggregator '" + q.aggregator + "' needs an attribute");
                } else if (nt) {
                    rx.require_attr(q.node_type, q.attribute, q.span);
                }
            }
            for (const auto& cmp : q.where) {
                if (!cmp.var.empty()) {
                    rx.error(cmp.span, "metric predicates use bare attribute names");
                    continue;
                }
                if (nt) rx.require_attr(q.node_type, cmp.attr, cmp.span);
                ValueExpr rhs = rx.resolve_value(cmp.rhs, {}, {}, cmp.span);
                if (rhs.kind != ValueExpr::Kind::Literal) {
                    rx.error(cmp.span, "metric predicates compare against literals or parameters");
                    continue;
                }
                if (nt) rx.check_predicate_kinds(q.node_type, cmp.attr, rhs.literal, cmp.span);
                dim.filter.push_back({cmp.attr, cmp.op, rhs.literal});
            }
            if (q.direction == "minimize") dim.direction = Direction::Minimize;
            else if (q.direction == "maximize") dim.direction = Direction::Maximize;
            else rx.error(q.span, "direction must be minimize or maximize");
            dim.lo = q.lo;
            dim.hi = q.hi;
            if (!(dim.lo < dim.hi)) rx.error(q.span, "bounds need lo < hi");
            b.qualities.push_back(std::move(dim));
        }
    }

    for (const auto& f : files) {
        for (const auto& p : f.preferences) {
            for (const auto& [qid, w] : p.entries) {
                if (!rx.quality_ids.count(qid))
                    rx.error(p.span, "preference references undeclared quality '" + qid + "'");
                if (b.preferences.weights.count(qid))
                    rx.error(p.span, "duplicate preference for '" + qid + "'");
                b.preferences.weights[qid] = w;
            }
        }
    }

    for (const auto& f : files) {
        for (const auto& g : f.goals) {
            if (!declare(g.name, g.span)) continue;
            rx.goal_ids.insert(g.name);
            GoalSpec spec;
            spec.id = g.name;
            spec.kind = g.require ? GoalKind::Require : GoalKind::Forbid;
            spec.pattern = rx.resolve_pattern(g.pattern, {}, false).pattern;
            b.goals.push_back(std::move(spec));
        }
    }

    for (const auto& f : files) {
        for (const auto& c : f.conditions) {
            if (!declare(c.name, c.span)) continue;
            rx.condition_ids.insert(c.name);
            EvaluationCondition cond;
            cond.id = c.name;
            cond.priority = c.priority;
            if (c.lane == "fast") cond.lane = Lane::Fast;
            else if (c.lane == "slow") cond.lane = Lane::Slow;
            else rx.error(c.span, "lane must be fast or slow");
            for (const auto& k : c.event_kinds) {
                auto kind = event_kind_from_name(k);
                if (!kind) rx.error(c.span, "unknown event kind '" + k + "'");
                else cond.trigger_kinds.push_back(*kind);
            }
            cond.trigger_attribute = c.attr_filter;
            cond.linked_ref = c.linked_ref;
            if (!c.linked_ref.empty() && !rx.quality_ids.count(c.linked_ref) &&
                !rx.goal_ids.count(c.linked_ref))
                rx.error(c.span, "link references unknown quality or goal '" + c.linked_ref + "'");
            auto rp = rx.resolve_pattern(c.pattern, {}, false);
            cond.pattern = rp.pattern;
            if (!cond.trigger_kinds.empty() && cond.pattern.anchor_var.empty())
                rx.error(c.span, "condition '" + c.name + "' has triggers but no anchor ('@var')");
            b.conditions.push_back(std::move(cond));
        }
    }

    // options need the full name set for compose references
    for (const auto& f : files)
        for (const auto& o : f.options) rx.option_ids.insert(o.name);

    for (const auto& f : files) {
        for (const auto& o : f.options) {
            if (!declare(o.name, o.span)) continue;
            AdaptationOption opt;
            opt.id = o.name;
            std::map<std::string, ScalarKind> formals;
            for (const auto& [pname, pkind] : o.formals) {
                auto kind = kind_from_name(pkind);
                if (!kind) {
                    rx.error(o.span, "unknown kind '" + pkind + "' for parameter '" + pname + "'");
                    continue;
                }
                if (!formals.emplace(pname, *kind).second)
                    rx.error(o.span, "duplicate parameter '" + pname + "'");
                opt.formal_params.emplace_back(pname, *kind);
            }

            auto rp = rx.resolve_pattern(o.pre, formals, true);
            opt.precondition = rp.pattern;
            opt.param_predicates = rp.param_predicates;
            auto var_types = rp.var_types; // grows with aliases

            if (!o.effects.empty() && !o.compose.empty())
                rx.error(o.span, "option '" + o.name + "' mixes effect and compose");
            for (const auto& eff : o.effects) {
                std::visit(
                    [&](const auto& e) {
                        using T = std::decay_t<decltype(e)>;
                        if constexpr (std::is_same_v<T, AstSetEffect>) {
                            auto it = var_types.find(e.var);
                            if (it == var_types.end()) {
                                rx.error(e.span, "unknown variable '" + e.var + "'");
                                return;
                            }
                            rx.require_attr(it->second, e.attr, e.span);
                            opt.effect.push_back(SetAttrTemplate{
                                e.var, e.attr,
                                rx.resolve_value(e.value, formals, var_types, e.span)});
                        } else if constexpr (std::is_same_v<T, AstAddNodeEffect>) {
                            if (!var_types.count(e.source_var))
                                rx.error(e.span, "unknown source variable '" + e.source_var + "'");
                            const auto* nt = rx.require_node_type(e.node_type, e.span);
                            AddNodeTemplate t;
                            t.alias = e.alias;
                            t.source_var = e.source_var;
                            t.node_type = e.node_type;
                            for (const auto& [attr, vexpr] : e.initializers) {
                                if (nt) rx.require_attr(e.node_type, attr, e.span);
                                t.initializers.emplace_back(
                                    attr, rx.resolve_value(vexpr, formals, var_types, e.span));
                            }
                            if (var_types.count(e.alias))
                                rx.error(e.span, "alias '" + e.alias + "' already declared");
                            var_types[e.alias] = e.node_type;
                            opt.effect.push_back(std::move(t));
                        } else if constexpr (std::is_same_v<T, AstAddEdgeEffect>) {
                            AstPatternEdge pe{e.edge_type, e.src, e.tgt, e.span};
                            std::vector<PatternEdge> tmp;
                            rx.resolve_edge(pe, var_types, tmp);
                            opt.effect.push_back(AddEdgeTemplate{e.edge_type, e.src, e.tgt});
                        } else if constexpr (std::is_same_v<T, AstRemoveNodeEffect>) {
                            if (!var_types.count(e.var))
                                rx.error(e.span, "unknown variable '" + e.var + "'");
                            opt.effect.push_back(RemoveNodeTemplate{e.var});
                        } else {
                            AstPatternEdge pe{e.edge_type, e.src, e.tgt, e.span};
                            std::vector<PatternEdge> tmp;
                            rx.resolve_edge(pe, var_types, tmp);
                            opt.effect.push_back(RemoveEdgeTemplate{e.edge_type, e.src, e.tgt});
                        }
                    },
                    eff);
            }
            for (const auto& sub : o.compose) {
                if (!rx.option_ids.count(sub))
                    rx.error(o.span, "compose references unknown option '" + sub + "'");
                opt.compose.push_back(sub);
            }

            for (const auto& cmp : o.post) {
                if (cmp.var.empty()) {
                    rx.error(cmp.span, "postconditions use 'var.attr' references");
                    continue;
                }
                auto it = var_types.find(cmp.var);
                if (it == var_types.end()) {
                    rx.error(cmp.span, "unknown variable '" + cmp.var + "' in postcondition");
                    continue;
                }
                rx.require_attr(it->second, cmp.attr, cmp.span);
                opt.postcondition.push_back(
                    {cmp.var, cmp.attr, cmp.op,
                     rx.resolve_value(cmp.rhs, formals, var_types, cmp.span)});
            }
            for (const auto& inv : o.invariants)
                opt.invariants.push_back(rx.resolve_pattern(inv, {}, false).pattern);
            opt.cost = o.cost;
            if (opt.cost < 0) rx.error(o.span, "cost must be non-negative");
            for (const auto& [qid, delta] : o.benefit) {
                if (!rx.quality_ids.count(qid))
                    rx.error(o.span, "benefit references undeclared quality '" + qid + "'");
                opt.benefit[qid] = delta;
            }
            b.options[opt.id] = std::move(opt);
        }
    }

    for (const auto& f : files) {
        for (const auto& r : f.rules) {
            if (!declare(r.name, r.span)) continue;
            CoupledRule rule;
            rule.id = r.name;
            rule.condition_id = r.condition;
            if (!rx.condition_ids.count(r.condition))
                rx.error(r.span, "rule references unknown condition '" + r.condition + "'");
            for (const auto& a : r.actions) {
                if (!rx.option_ids.count(a.option)) {
                    rx.error(r.span, "rule references unknown option '" + a.option + "'");
                    continue;
                }
                const auto& opt = b.options.count(a.option) ? b.options.at(a.option)
                                                            : AdaptationOption{};
                if (b.options.count(a.option) && a.args.size() != opt.formal_params.size())
                    rx.error(r.span, "option '" + a.option + "' expects " +
                                         std::to_string(opt.formal_params.size()) +
                                         " arguments, rule passes " + std::to_string(a.args.size()));
                rule.actions.push_back({a.option, a.args});
            }
            b.rules.push_back(std::move(rule));
        }
    }

    return result;
}

} // namespace amrt::adm
