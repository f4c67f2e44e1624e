#include "amrt/bundle.hpp"

#include <map>
#include <set>
#include <sstream>

namespace amrt {

std::string diagnostic_to_string(const Diagnostic& d) {
    std::ostringstream os;
    if (!d.span.file.empty()) os << d.span.file << ':' << d.span.line << ':' << d.span.column << ": ";
    os << (d.severity == Diagnostic::Severity::Error ? "error" : "warning") << ": " << d.message;
    return os.str();
}

namespace {

// (variable, attribute) pairs written by an option's effects, composites
// expanded. Used for the overlap warning.
std::set<std::pair<std::string, std::string>> written_attrs(const OptionMap& options,
                                                            const std::string& option_id) {
    std::set<std::pair<std::string, std::string>> out;
    std::vector<std::string> prims;
    try {
        prims = expand_composite(options, option_id);
    } catch (const ModelError&) {
        return out; // cycles reported separately
    }
    for (const auto& pid : prims) {
        for (const auto& eff : options.at(pid).effect)
            if (const auto* sa = std::get_if<SetAttrTemplate>(&eff))
                out.insert({sa->var, sa->attr});
    }
    return out;
}

} // namespace

std::vector<Diagnostic> static_check_bundle(const AdaptationModelBundle& bundle,
                                            const Metamodel& mm) {
    std::vector<Diagnostic> out;
    auto span_of = [&](const std::string& id) {
        auto it = bundle.spans.find(id);
        return it == bundle.spans.end() ? SourceSpan{} : it->second;
    };
    auto error = [&](const std::string& id, const std::string& msg) {
        out.push_back({Diagnostic::Severity::Error, msg, span_of(id)});
    };
    auto warning = [&](const std::string& id, const std::string& msg) {
        out.push_back({Diagnostic::Severity::Warning, msg, span_of(id)});
    };

    for (const auto& msg : validate_preferences(bundle.preferences, bundle.qualities))
        error(bundle.name, msg);

    std::map<int, std::string> priorities;
    for (const auto& c : bundle.conditions) {
        auto [it, fresh] = priorities.emplace(c.priority, c.id);
        if (!fresh)
            error(c.id, "condition '" + c.id + "' duplicates priority " +
                            std::to_string(c.priority) + " of '" + it->second + "'");
        if (!c.trigger_kinds.empty() && c.pattern.anchor_var.empty())
            error(c.id, "condition '" + c.id + "' has triggers but no anchor variable");
    }

    for (const auto& [id, opt] : bundle.options) {
        if (opt.is_composite()) {
            try {
                expand_composite(bundle.options, id);
            } catch (const ModelError& e) {
                error(id, e.what());
            }
        }
        // effects must not write sensor-owned attributes of existing elements
        for (const auto& eff : opt.effect) {
            const auto* sa = std::get_if<SetAttrTemplate>(&eff);
            if (!sa) continue;
            const PatternNode* var = opt.precondition.node(sa->var);
            if (!var) continue; // unresolved vars are resolver errors
            const AttrDecl* decl = mm.attr_decl(var->type, sa->attr);
            if (decl && decl->sensor)
                error(id, "option '" + id + "' writes sensor-owned attribute '" + var->type + "." +
                              sa->attr + "'");
        }
        for (const auto& [qid, delta] : opt.benefit) {
            bool declared = false;
            for (const auto& q : bundle.qualities) declared |= q.id == qid;
            if (!declared)
                error(id, "option '" + id + "' declares a benefit on undeclared quality '" + qid + "'");
        }
    }

    std::set<std::string> known_conditions;
    for (const auto& c : bundle.conditions) known_conditions.insert(c.id);
    std::set<std::string> rule_used_options;
    for (const auto& r : bundle.rules) {
        if (!known_conditions.count(r.condition_id))
            error(r.id, "rule '" + r.id + "' references unknown condition '" + r.condition_id + "'");
        for (const auto& a : r.actions) {
            if (!bundle.options.count(a.option_id)) {
                error(r.id, "rule '" + r.id + "' references unknown option '" + a.option_id + "'");
                continue;
            }
            rule_used_options.insert(a.option_id);
            try {
                for (const auto& sub : expand_composite(bundle.options, a.option_id))
                    rule_used_options.insert(sub);
            } catch (const ModelError&) {
            }
        }
    }

    // overlap: rules on the same condition writing the same (var, attr)
    for (std::size_t i = 0; i < bundle.rules.size(); ++i) {
        for (std::size_t j = i + 1; j < bundle.rules.size(); ++j) {
            const auto& a = bundle.rules[i];
            const auto& b = bundle.rules[j];
            if (a.condition_id != b.condition_id) continue;
            std::set<std::pair<std::string, std::string>> wa, wb;
            for (const auto& act : a.actions)
                if (bundle.options.count(act.option_id)) {
                    auto w = written_attrs(bundle.options, act.option_id);
                    wa.insert(w.begin(), w.end());
                }
            for (const auto& act : b.actions)
                if (bundle.options.count(act.option_id)) {
                    auto w = written_attrs(bundle.options, act.option_id);
                    wb.insert(w.begin(), w.end());
                }
            for (const auto& t : wa)
                if (wb.count(t))
                    warning(b.id, "rules '" + a.id + "' and '" + b.id + "' on condition '" +
                                      a.condition_id + "' both write '" + t.first + "." + t.second +
                                      "'");
        }
    }

    bool has_slow_lane = false;
    for (const auto& c : bundle.conditions) has_slow_lane |= c.lane == Lane::Slow;
    if (!has_slow_lane) {
        for (const auto& [id, opt] : bundle.options)
            if (!rule_used_options.count(id))
                warning(id, "option '" + id + "' is referenced by no rule and the bundle has no "
                            "slow-lane condition to reach it");
    }

    return out;
}

} // namespace amrt
