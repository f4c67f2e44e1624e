#include "amrt/adm/parser.hpp"

#include <charconv>
#include <sstream>

namespace amrt::adm {

namespace {

std::string number_text(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string literal_text(const Scalar& v) {
    switch (v.index()) {
        case 0: return std::to_string(std::get<std::int64_t>(v));
        case 1: return number_text(std::get<double>(v));
        case 2: return '"' + std::get<std::string>(v) + '"';
        default: return std::get<bool>(v) ? "true" : "false";
    }
}

std::string vexpr_text(const ValueExpr& e) {
    switch (e.kind) {
        case ValueExpr::Kind::Literal: return literal_text(e.literal);
        case ValueExpr::Kind::Param: return e.param;
        case ValueExpr::Kind::AttrRef: return e.var + "." + e.attr;
        case ValueExpr::Kind::Binary:
            return "(" + vexpr_text(*e.lhs) + " " + std::string(1, e.op) + " " +
                   vexpr_text(*e.rhs) + ")";
    }
    return "";
}

void write_predicates(std::ostream& os, const std::vector<AttrPredicate>& preds,
                      const std::vector<ParamPredicate>& ppreds, bool& first) {
    auto sep = [&] {
        os << (first ? " where " : " and ");
        first = false;
    };
    for (const auto& p : preds) {
        sep();
        os << p.var << "." << p.attr << " " << cmp_op_name(p.op) << " " << literal_text(p.value);
    }
    for (const auto& p : ppreds) {
        sep();
        os << p.var << "." << p.attr << " " << cmp_op_name(p.op) << " " << p.param;
    }
}

void write_pattern(std::ostream& os, const Pattern& p,
                   const std::vector<ParamPredicate>& ppreds = {}) {
    bool first_elem = true;
    auto elem_sep = [&] {
        if (!first_elem) os << ", ";
        first_elem = false;
    };
    for (const auto& n : p.nodes) {
        elem_sep();
        os << n.type << " " << (n.var == p.anchor_var ? "@" : "") << n.var;
    }
    for (const auto& e : p.edges) {
        elem_sep();
        os << "edge " << e.type << "(" << e.src_var << ", " << e.tgt_var << ")";
    }
    for (const auto& nac : p.negatives) {
        elem_sep();
        os << "no (";
        Pattern inner;
        inner.nodes = nac.nodes;
        inner.edges = nac.edges;
        inner.predicates = nac.predicates;
        write_pattern(os, inner);
        os << ")";
    }
    bool first_pred = true;
    write_predicates(os, p.predicates, ppreds, first_pred);
}

} // namespace

std::string serialize(const AdaptationModelBundle& b) {
    std::ostringstream os;
    os << "adaptation " << (b.name.empty() ? "Bundle" : b.name) << ";\n\n";

    for (const auto& [name, value] : b.parameters)
        os << "param " << name << ": " << kind_name(kind_of(value)) << " = "
           << literal_text(value) << ";\n";
    if (!b.parameters.empty()) os << "\n";

    for (const auto& q : b.qualities) {
        os << "quality " << q.id << " {\n";
        os << "  metric " << aggregator_name(q.agg) << "(" << q.node_type;
        if (!q.attribute.empty() && q.agg != Aggregator::Fraction) os << "." << q.attribute;
        bool first = true;
        for (const auto& f : q.filter) {
            os << (first ? " where " : " and ");
            first = false;
            os << f.attr << " " << cmp_op_name(f.op) << " " << literal_text(f.value);
        }
        os << ");\n";
        os << "  direction " << direction_name(q.direction) << ";\n";
        os << "  bounds [" << number_text(q.lo) << ", " << number_text(q.hi) << "];\n";
        os << "}\n";
    }

    if (!b.preferences.weights.empty()) {
        os << "preferences {";
        for (const auto& [qid, w] : b.preferences.weights)
            os << " " << qid << " = " << number_text(w) << ";";
        os << " }\n";
    }
    os << "\n";

    for (const auto& g : b.goals) {
        os << "goal " << g.id << " { " << (g.kind == GoalKind::Require ? "require " : "forbid ");
        write_pattern(os, g.pattern);
        os << " }\n";
    }

    for (const auto& c : b.conditions) {
        os << "condition " << c.id << " priority " << c.priority << " lane " << lane_name(c.lane);
        if (!c.trigger_kinds.empty()) {
            os << " on (";
            for (std::size_t i = 0; i < c.trigger_kinds.size(); ++i)
                os << (i ? " | " : "") << event_kind_name(c.trigger_kinds[i]);
            if (c.trigger_attribute) os << ", " << *c.trigger_attribute;
            os << ")";
        }
        if (!c.linked_ref.empty()) os << " link " << c.linked_ref;
        os << " { ";
        write_pattern(os, c.pattern);
        os << " }\n";
    }
    os << "\n";

    for (const auto& [id, o] : b.options) {
        os << "option " << id << "(";
        for (std::size_t i = 0; i < o.formal_params.size(); ++i)
            os << (i ? ", " : "") << o.formal_params[i].first << ": "
               << kind_name(o.formal_params[i].second);
        os << ") {\n  pre ";
        write_pattern(os, o.precondition, o.param_predicates);
        os << ";\n";
        if (!o.effect.empty()) {
            os << "  effect ";
            for (std::size_t i = 0; i < o.effect.size(); ++i) {
                if (i) os << ",\n         ";
                std::visit(
                    [&](const auto& t) {
                        using T = std::decay_t<decltype(t)>;
                        if constexpr (std::is_same_v<T, SetAttrTemplate>) {
                            os << "set " << t.var << "." << t.attr << " = " << vexpr_text(t.value);
                        } else if constexpr (std::is_same_v<T, AddNodeTemplate>) {
                            os << "add node " << t.alias << " : " << t.node_type << " { ";
                            for (std::size_t k = 0; k < t.initializers.size(); ++k)
                                os << (k ? ", " : "") << t.initializers[k].first << " = "
                                   << vexpr_text(t.initializers[k].second);
                            os << " }";
                        } else if constexpr (std::is_same_v<T, AddEdgeTemplate>) {
                            os << "add edge " << t.edge_type << "(" << t.src_ref << ", "
                               << t.tgt_ref << ")";
                        } else if constexpr (std::is_same_v<T, RemoveNodeTemplate>) {
                            os << "remove node " << t.var;
                        } else {
                            os << "remove edge " << t.edge_type << "(" << t.src_ref << ", "
                               << t.tgt_ref << ")";
                        }
                    },
                    o.effect[i]);
            }
            os << ";\n";
        }
        if (!o.compose.empty()) {
            os << "  compose";
            for (const auto& sub : o.compose) os << " " << sub;
            os << ";\n";
        }
        if (!o.postcondition.empty()) {
            os << "  post ";
            for (std::size_t i = 0; i < o.postcondition.size(); ++i) {
                const auto& p = o.postcondition[i];
                os << (i ? " and " : "") << p.ref << "." << p.attr << " " << cmp_op_name(p.op)
                   << " " << vexpr_text(p.value);
            }
            os << ";\n";
        }
        for (const auto& inv : o.invariants) {
            os << "  invariant ";
            write_pattern(os, inv);
            os << ";\n";
        }
        os << "  cost " << number_text(o.cost) << ";\n";
        if (!o.benefit.empty()) {
            os << "  benefit {";
            for (const auto& [qid, delta] : o.benefit)
                os << " " << qid << " = " << number_text(delta) << ";";
            os << " }\n";
        }
        os << "}\n";
    }
    os << "\n";

    for (const auto& r : b.rules) {
        os << "rule " << r.id << ": when " << r.condition_id << " do";
        for (const auto& a : r.actions) {
            os << " " << a.option_id;
            if (!a.args.empty()) {
                os << "(";
                for (std::size_t i = 0; i < a.args.size(); ++i)
                    os << (i ? ", " : "") << literal_text(a.args[i]);
                os << ")";
            }
        }
        os << ";\n";
    }
    return os.str();
}

} // namespace amrt::adm
