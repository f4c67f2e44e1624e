#include "amrt/model.hpp"

#include <algorithm>
#include <sstream>

namespace amrt {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::StaleOp: return "stale-op";
        case ErrorCode::TypeViolation: return "type-violation";
        case ErrorCode::TxnClosed: return "txn-closed";
        case ErrorCode::AlreadyOpen: return "already-open";
        case ErrorCode::UnknownElement: return "unknown-element";
        case ErrorCode::UnknownAnchor: return "unknown-anchor";
        case ErrorCode::UnknownTarget: return "unknown-target";
        case ErrorCode::AlreadyFailed: return "already-failed";
        case ErrorCode::Invalid: return "invalid";
        case ErrorCode::UnmappableDelta: return "unmappable-delta";
        case ErrorCode::PreconditionVanished: return "precondition-vanished";
        case ErrorCode::CycleDetected: return "cycle-detected";
        case ErrorCode::ConformanceAbort: return "conformance-abort";
    }
    return "error";
}

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::AttrChanged: return "attr-changed";
        case EventKind::NodeAdded: return "node-added";
        case EventKind::NodeRemoved: return "node-removed";
        case EventKind::EdgeAdded: return "edge-added";
        case EventKind::EdgeRemoved: return "edge-removed";
    }
    return "?";
}

std::optional<EventKind> event_kind_from_name(const std::string& name) {
    if (name == "attr-changed") return EventKind::AttrChanged;
    if (name == "node-added") return EventKind::NodeAdded;
    if (name == "node-removed") return EventKind::NodeRemoved;
    if (name == "edge-added") return EventKind::EdgeAdded;
    if (name == "edge-removed") return EventKind::EdgeRemoved;
    return std::nullopt;
}

std::string binding_to_string(const Binding& b) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [var, id] : b) {
        if (!first) os << ',';
        first = false;
        os << var << "->" << id;
    }
    os << '}';
    return os.str();
}

std::vector<std::string> Metamodel::self_check() const {
    std::vector<std::string> errs;
    for (const auto& [name, et] : edge_types) {
        if (!node_types.count(et.source))
            errs.push_back("edge type '" + name + "' references unknown source type '" + et.source + "'");
        if (!node_types.count(et.target))
            errs.push_back("edge type '" + name + "' references unknown target type '" + et.target + "'");
    }
    return errs;
}

std::vector<std::string> Pattern::well_formed_errors() const {
    std::vector<std::string> errs;
    auto declared = [&](const std::string& var) { return node(var) != nullptr; };
    for (const auto& e : edges) {
        if (!declared(e.src_var)) errs.push_back("edge references undeclared variable '" + e.src_var + "'");
        if (!declared(e.tgt_var)) errs.push_back("edge references undeclared variable '" + e.tgt_var + "'");
    }
    for (const auto& p : predicates)
        if (!declared(p.var)) errs.push_back("predicate references undeclared variable '" + p.var + "'");
    if (!anchor_var.empty() && !declared(anchor_var))
        errs.push_back("anchor variable '" + anchor_var + "' is not declared");
    for (const auto& nac : negatives) {
        auto local = [&](const std::string& var) {
            for (const auto& n : nac.nodes)
                if (n.var == var) return true;
            return declared(var);
        };
        for (const auto& e : nac.edges) {
            if (!local(e.src_var)) errs.push_back("negative edge references undeclared variable '" + e.src_var + "'");
            if (!local(e.tgt_var)) errs.push_back("negative edge references undeclared variable '" + e.tgt_var + "'");
        }
        for (const auto& p : nac.predicates)
            if (!local(p.var)) errs.push_back("negative predicate references undeclared variable '" + p.var + "'");
    }
    return errs;
}

void ReflectionModel::add_node(const std::string& id, Node n) {
    if (nodes_.count(id) || edges_.count(id))
        throw ModelError(ErrorCode::StaleOp, "add_node: id '" + id + "' already exists");
    nodes_.emplace(id, std::move(n));
}

bool ReflectionModel::node_has_incident_edges(const std::string& id) const {
    for (const auto& [eid, e] : edges_)
        if (e.src == id || e.tgt == id) return true;
    return false;
}

Node ReflectionModel::remove_node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end())
        throw ModelError(ErrorCode::StaleOp, "remove_node: unknown node '" + id + "'");
    if (node_has_incident_edges(id))
        throw ModelError(ErrorCode::StaleOp, "remove_node: node '" + id + "' still has incident edges");
    Node captured = std::move(it->second);
    nodes_.erase(it);
    return captured;
}

void ReflectionModel::set_attr(const std::string& id, const std::string& name, Scalar v) {
    auto it = nodes_.find(id);
    if (it == nodes_.end())
        throw ModelError(ErrorCode::StaleOp, "set_attr: unknown node '" + id + "'");
    it->second.attrs[name] = std::move(v);
}

void ReflectionModel::add_edge(const std::string& id, Edge e) {
    if (edges_.count(id) || nodes_.count(id))
        throw ModelError(ErrorCode::StaleOp, "add_edge: id '" + id + "' already exists");
    if (!nodes_.count(e.src))
        throw ModelError(ErrorCode::StaleOp, "add_edge: unknown source '" + e.src + "'");
    if (!nodes_.count(e.tgt))
        throw ModelError(ErrorCode::StaleOp, "add_edge: unknown target '" + e.tgt + "'");
    edges_.emplace(id, std::move(e));
}

Edge ReflectionModel::remove_edge(const std::string& id) {
    auto it = edges_.find(id);
    if (it == edges_.end())
        throw ModelError(ErrorCode::StaleOp, "remove_edge: unknown edge '" + id + "'");
    Edge captured = std::move(it->second);
    edges_.erase(it);
    return captured;
}

void ReflectionModel::annotate_event(const ChangeEvent& ev) {
    if (!has_element(ev.element_id))
        throw ModelError(ErrorCode::UnknownElement,
                         "annotate_event: unknown element '" + ev.element_id + "'");
    event_ann_[ev.element_id].push_back(ev);
}

void ReflectionModel::annotate_result(const EvaluationResult& res) {
    if (!has_element(res.anchor_element_id))
        throw ModelError(ErrorCode::UnknownElement,
                         "annotate_result: unknown element '" + res.anchor_element_id + "'");
    result_ann_[res.anchor_element_id].push_back(res);
}

AnnotationView ReflectionModel::read_annotations(const std::string& element_id) const {
    AnnotationView view;
    if (auto it = event_ann_.find(element_id); it != event_ann_.end()) view.events = it->second;
    if (auto it = result_ann_.find(element_id); it != result_ann_.end()) view.results = it->second;
    view.stale = !has_element(element_id);
    return view;
}

void ReflectionModel::clear_annotations() {
    event_ann_.clear();
    result_ann_.clear();
}

std::vector<ConformanceViolation> validate_conformance(const ReflectionModel& model,
                                                       const Metamodel& mm) {
    std::vector<ConformanceViolation> out;
    auto add = [&](const std::string& id, const std::string& rule, const std::string& msg) {
        out.push_back({id, rule, msg});
    };

    for (const auto& [id, n] : model.nodes()) {
        const auto* nt = mm.node_type(n.type);
        if (!nt) {
            add(id, "unknown-type", "node type '" + n.type + "' is not declared");
            continue;
        }
        for (const auto& [aname, decl] : nt->attributes) {
            auto it = n.attrs.find(aname);
            if (it == n.attrs.end()) {
                add(id, "missing-attribute", "attribute '" + aname + "' missing");
                continue;
            }
            const Scalar& v = it->second;
            bool kind_ok = kind_of(v) == decl.kind ||
                           (decl.kind == ScalarKind::Float && kind_of(v) == ScalarKind::Int);
            if (!kind_ok) {
                add(id, "attr-kind", "attribute '" + aname + "' has kind " +
                                         kind_name(kind_of(v)) + ", expected " + kind_name(decl.kind));
                continue;
            }
            if (!decl.enum_domain.empty()) {
                const auto* s = std::get_if<std::string>(&v);
                if (!s || std::find(decl.enum_domain.begin(), decl.enum_domain.end(), *s) ==
                              decl.enum_domain.end())
                    add(id, "enum-domain",
                        "attribute '" + aname + "' value " + scalar_to_string(v) + " outside enum domain");
            }
            if (decl.range && is_numeric(v) && !decl.range->contains(as_number(v)))
                add(id, "range", "attribute '" + aname + "' value " + scalar_to_string(v) + " out of range");
        }
        for (const auto& [aname, v] : n.attrs)
            if (!nt->attributes.count(aname))
                add(id, "undeclared-attribute", "attribute '" + aname + "' is not declared for type '" + n.type + "'");
    }

    for (const auto& [id, e] : model.edges()) {
        const auto* et = mm.edge_type(e.type);
        if (!et) {
            add(id, "unknown-type", "edge type '" + e.type + "' is not declared");
            continue;
        }
        const Node* src = model.node(e.src);
        const Node* tgt = model.node(e.tgt);
        if (!src) add(id, "dangling-edge", "source '" + e.src + "' does not exist");
        if (!tgt) add(id, "dangling-edge", "target '" + e.tgt + "' does not exist");
        if (src && src->type != et->source)
            add(id, "endpoint-type", "source is '" + src->type + "', edge type requires '" + et->source + "'");
        if (tgt && tgt->type != et->target)
            add(id, "endpoint-type", "target is '" + tgt->type + "', edge type requires '" + et->target + "'");
    }

    // exactly-one multiplicities, counted over source nodes of the edge type
    for (const auto& [ename, et] : mm.edge_types) {
        if (et.source_multiplicity != Multiplicity::ExactlyOne) continue;
        for (const auto& [nid, n] : model.nodes()) {
            if (n.type != et.source) continue;
            std::size_t count = 0;
            for (const auto& [eid, e] : model.edges())
                if (e.type == ename && e.src == nid) count++;
            if (count != 1)
                add(nid, "multiplicity",
                    "node has " + std::to_string(count) + " '" + ename + "' edges, exactly one required");
        }
    }
    return out;
}

} // namespace amrt
