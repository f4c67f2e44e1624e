#pragma once

// Test-side oracles, independent of the implementation paths they check.

#include "amrt/model.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace amrt::oracle {

// Brute-force subgraph matcher: enumerates every injective type-respecting
// assignment of pattern variables to nodes, then filters by edges,
// predicates, and negative clauses. No search-order tricks, no pruning.
inline std::vector<Binding> brute_force_match(const ReflectionModel& model,
                                              const Pattern& pattern,
                                              const std::string& anchor = "") {
    std::vector<std::string> vars;
    for (const auto& n : pattern.nodes) vars.push_back(n.var);

    std::vector<std::string> ids;
    for (const auto& [id, n] : model.nodes()) ids.push_back(id);

    std::vector<Binding> out;
    std::vector<std::size_t> choice(vars.size(), 0);

    auto attr_ok = [&](const AttrPredicate& p, const std::string& id) {
        const Scalar* v = model.attr(id, p.attr);
        return v && eval_cmp(p.op, *v, p.value);
    };
    auto has_edge = [&](const std::string& type, const std::string& s, const std::string& t) {
        for (const auto& [eid, e] : model.edges())
            if (e.type == type && e.src == s && e.tgt == t) return true;
        return false;
    };

    std::function<void(std::size_t, Binding&)> rec = [&](std::size_t k, Binding& b) {
        if (k == vars.size()) {
            for (const auto& e : pattern.edges)
                if (!has_edge(e.type, b.at(e.src_var), b.at(e.tgt_var))) return;
            for (const auto& p : pattern.predicates)
                if (!attr_ok(p, b.at(p.var))) return;
            if (!anchor.empty() && b.at(pattern.anchor_var) != anchor) return;
            // negatives: exists-extension check, itself brute force
            for (const auto& nac : pattern.negatives) {
                std::vector<std::string> nvars;
                for (const auto& n : nac.nodes) nvars.push_back(n.var);
                bool found = false;
                std::function<void(std::size_t, Binding&)> nrec = [&](std::size_t j, Binding& nb) {
                    if (found) return;
                    if (j == nvars.size()) {
                        auto look = [&](const std::string& v) -> const std::string* {
                            if (auto it = nb.find(v); it != nb.end()) return &it->second;
                            if (auto it = b.find(v); it != b.end()) return &it->second;
                            return nullptr;
                        };
                        for (const auto& e : nac.edges) {
                            const auto* s = look(e.src_var);
                            const auto* t = look(e.tgt_var);
                            if (!s || !t || !has_edge(e.type, *s, *t)) return;
                        }
                        for (const auto& p : nac.predicates) {
                            const auto* id = look(p.var);
                            if (!id || !attr_ok(p, *id)) return;
                        }
                        found = true;
                        return;
                    }
                    for (const auto& id : ids) {
                        const Node* n = model.node(id);
                        if (n->type != nac.nodes[j].type) continue;
                        bool used = false;
                        for (const auto& kv : b)
                            if (kv.second == id) used = true;
                        for (const auto& kv : nb)
                            if (kv.second == id) used = true;
                        if (used) continue;
                        nb[nvars[j]] = id;
                        nrec(j + 1, nb);
                        nb.erase(nvars[j]);
                    }
                };
                Binding nb;
                nrec(0, nb);
                if (found) return;
            }
            out.push_back(b);
            return;
        }
        for (const auto& id : ids) {
            const Node* n = model.node(id);
            if (n->type != pattern.nodes[k].type) continue;
            bool used = false;
            for (const auto& kv : b)
                if (kv.second == id) used = true;
            if (used) continue;
            b[vars[k]] = id;
            rec(k + 1, b);
            b.erase(vars[k]);
        }
    };
    Binding b;
    rec(0, b);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace amrt::oracle

// ---------------------------------------------------------------------------
// Exhaustive planning oracle: enumerates every candidate sequence up to the
// depth bound (re-deriving applicability after each application), prunes
// gate failures and goal violations, and keeps the best score under the
// planner's tie-break. No frontier, no ordering heuristics.
// ---------------------------------------------------------------------------

#include "amrt/bundle.hpp"
#include "amrt/engine.hpp"

namespace amrt::oracle {

struct PlanResult {
    std::vector<Candidate> plan;
    double score = 0;
    double utility = 0;
};

inline PlanResult brute_force_plan(const AdaptationModelBundle& bundle, ReflectionModel& model,
                                   const Metamodel& mm, int max_depth, double cost_weight) {
    auto model_utility = [&](const ReflectionModel& m) {
        return bundle.qualities.empty() ? 0.0
                                        : utility(m, mm, bundle.qualities, bundle.preferences);
    };
    auto goals_ok = [&] {
        for (const auto& g : bundle.goals)
            if (!check_goal(model, mm, g).satisfied) return false;
        return true;
    };

    PlanResult best;
    best.utility = model_utility(model);
    best.score = best.utility;

    std::string before = snapshot_digest(model);
    TransactionManager txm(model);
    auto& txn = txm.begin();
    std::vector<Candidate> current;
    double cost_so_far = 0;

    std::function<void(int)> rec = [&](int depth) {
        if (depth == max_depth) return;
        for (const auto& cand : applicable_options(model, mm, bundle.options)) {
            std::size_t mark = txn.mark();
            Application app;
            try {
                app = apply_candidate(model, mm, bundle.options, cand, txn);
            } catch (const ModelError&) {
                txn.rollback_to(mark);
                continue;
            }
            if (!verify_option(model, mm, app).pass || !goals_ok()) {
                txn.rollback_to(mark);
                continue;
            }
            current.push_back(cand);
            cost_so_far += bundle.options.at(cand.option_id).cost;
            double u = model_utility(model);
            double score = u - cost_weight * cost_so_far;
            if (score > best.score || (score == best.score && current < best.plan)) {
                best.plan = current;
                best.score = score;
                best.utility = u;
            }
            rec(depth + 1);
            cost_so_far -= bundle.options.at(cand.option_id).cost;
            current.pop_back();
            txn.rollback_to(mark);
        }
    };
    rec(0);
    txn.rollback();
    if (snapshot_digest(model) != before) throw std::logic_error("oracle corrupted the model");
    return best;
}

} // namespace amrt::oracle
