#include "amrt/model.hpp"

#include <algorithm>

namespace amrt {

namespace {

bool predicate_holds(const ReflectionModel& model, const AttrPredicate& p,
                     const std::string& element_id) {
    const Scalar* v = model.attr(element_id, p.attr);
    if (!v) return false;
    return eval_cmp(p.op, *v, p.value);
}

bool edge_present(const ReflectionModel& model, const std::string& type,
                  const std::string& src, const std::string& tgt) {
    for (const auto& [id, e] : model.edges())
        if (e.type == type && e.src == src && e.tgt == tgt) return true;
    return false;
}

struct MatchContext {
    const ReflectionModel& model;
    const Pattern& pattern;
    std::vector<Binding> out;
};

bool nac_extendable(const MatchContext& ctx, const NegativeClause& nac, const Binding& bound,
                    Binding& local, std::size_t next) {
    if (next == nac.nodes.size()) {
        auto resolve = [&](const std::string& var) -> const std::string* {
            if (auto it = local.find(var); it != local.end()) return &it->second;
            if (auto it = bound.find(var); it != bound.end()) return &it->second;
            return nullptr;
        };
        for (const auto& e : nac.edges) {
            const std::string* s = resolve(e.src_var);
            const std::string* t = resolve(e.tgt_var);
            if (!s || !t || !edge_present(ctx.model, e.type, *s, *t)) return false;
        }
        for (const auto& p : nac.predicates) {
            const std::string* id = resolve(p.var);
            if (!id || !predicate_holds(ctx.model, p, *id)) return false;
        }
        return true;
    }
    const auto& pv = nac.nodes[next];
    for (const auto& [id, n] : ctx.model.nodes()) {
        if (n.type != pv.type) continue;
        bool used = std::any_of(bound.begin(), bound.end(),
                                [&](const auto& kv) { return kv.second == id; }) ||
                    std::any_of(local.begin(), local.end(),
                                [&](const auto& kv) { return kv.second == id; });
        if (used) continue;
        local[pv.var] = id;
        if (nac_extendable(ctx, nac, bound, local, next + 1)) {
            local.erase(pv.var);
            return true;
        }
        local.erase(pv.var);
    }
    return false;
}

bool partial_consistent(const MatchContext& ctx, const Binding& bound, const std::string& var) {
    const std::string& id = bound.at(var);
    for (const auto& p : ctx.pattern.predicates)
        if (p.var == var && !predicate_holds(ctx.model, p, id)) return false;
    for (const auto& e : ctx.pattern.edges) {
        auto s = bound.find(e.src_var);
        auto t = bound.find(e.tgt_var);
        if (s != bound.end() && t != bound.end() &&
            !edge_present(ctx.model, e.type, s->second, t->second))
            return false;
    }
    return true;
}

void search(MatchContext& ctx, const std::vector<const PatternNode*>& order, std::size_t next,
            Binding& bound) {
    if (next == order.size()) {
        for (const auto& nac : ctx.pattern.negatives) {
            Binding local;
            if (nac_extendable(ctx, nac, bound, local, 0)) return;
        }
        ctx.out.push_back(bound);
        return;
    }
    const auto& pv = *order[next];
    for (const auto& [id, n] : ctx.model.nodes()) {
        if (n.type != pv.type) continue;
        if (std::any_of(bound.begin(), bound.end(),
                        [&](const auto& kv) { return kv.second == id; }))
            continue;
        bound[pv.var] = id;
        if (partial_consistent(ctx, bound, pv.var)) search(ctx, order, next + 1, bound);
        bound.erase(pv.var);
    }
}

} // namespace

std::vector<Binding> match_pattern(const ReflectionModel& model, const Metamodel& mm,
                                   const Pattern& pattern, const std::string& anchor) {
    (void)mm;
    auto wf = pattern.well_formed_errors();
    if (!wf.empty())
        throw ModelError(ErrorCode::Invalid, "match_pattern: " + wf.front());

    MatchContext ctx{model, pattern, {}};

    std::vector<const PatternNode*> order;
    const PatternNode* anchor_node = nullptr;
    if (!anchor.empty()) {
        if (pattern.anchor_var.empty())
            throw ModelError(ErrorCode::UnknownAnchor, "anchored match on a pattern without anchor variable");
        if (!model.has_element(anchor))
            throw ModelError(ErrorCode::UnknownAnchor, "unknown anchor element '" + anchor + "'");
        anchor_node = pattern.node(pattern.anchor_var);
    }
    for (const auto& n : pattern.nodes)
        if (&n != anchor_node) order.push_back(&n);

    Binding bound;
    if (anchor_node) {
        const Node* an = model.node(anchor);
        if (!an || an->type != anchor_node->type) return {}; // anchor cannot bind the variable
        bound[anchor_node->var] = anchor;
        if (!partial_consistent(ctx, bound, anchor_node->var)) return {};
    }
    search(ctx, order, 0, bound);

    std::sort(ctx.out.begin(), ctx.out.end());
    ctx.out.erase(std::unique(ctx.out.begin(), ctx.out.end()), ctx.out.end());
    return ctx.out;
}

} // namespace amrt
