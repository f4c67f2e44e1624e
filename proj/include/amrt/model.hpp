#pragma once

#include "amrt/annotations.hpp"
#include "amrt/metamodel.hpp"
#include "amrt/pattern.hpp"
#include "amrt/scalar.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace amrt {

enum class ErrorCode {
    StaleOp,
    TypeViolation,
    TxnClosed,
    AlreadyOpen,
    UnknownElement,
    UnknownAnchor,
    UnknownTarget,
    AlreadyFailed,
    Invalid,
    UnmappableDelta,
    PreconditionVanished,
    CycleDetected,
    ConformanceAbort,
};

const char* error_code_name(ErrorCode c);

class ModelError : public std::runtime_error {
public:
    ModelError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct Node {
    std::string type;
    std::map<std::string, Scalar> attrs;

    bool operator==(const Node&) const = default;
};

struct Edge {
    std::string type;
    std::string src;
    std::string tgt;

    bool operator==(const Edge&) const = default;
};

enum class ModelMode { Descriptive, Prescriptive };

struct ConformanceViolation {
    std::string element_id;
    std::string rule;    // "dangling-edge", "unknown-type", "attr-kind", ...
    std::string message;
};

struct AnnotationView {
    std::vector<ChangeEvent> events;
    std::vector<EvaluationResult> results;
    bool stale = false; // element no longer exists in the model
};

// Typed attributed graph mirroring the managed system. Element ids are
// caller-supplied strings; ordering (std::map) gives canonical iteration.
class ReflectionModel {
public:
    ReflectionModel() = default;
    explicit ReflectionModel(ModelMode mode) : mode_(mode) {}

    // the write lock is per live instance, never copied
    ReflectionModel(const ReflectionModel& o)
        : nodes_(o.nodes_), edges_(o.edges_), mode_(o.mode_), event_ann_(o.event_ann_),
          result_ann_(o.result_ann_) {}
    ReflectionModel& operator=(const ReflectionModel& o) {
        nodes_ = o.nodes_;
        edges_ = o.edges_;
        mode_ = o.mode_;
        event_ann_ = o.event_ann_;
        result_ann_ = o.result_ann_;
        return *this;
    }

    ModelMode mode() const { return mode_; }
    void set_mode(ModelMode m) { mode_ = m; }

    const std::map<std::string, Node>& nodes() const { return nodes_; }
    const std::map<std::string, Edge>& edges() const { return edges_; }

    bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
    bool has_edge(const std::string& id) const { return edges_.count(id) != 0; }
    bool has_element(const std::string& id) const { return has_node(id) || has_edge(id); }

    const Node* node(const std::string& id) const {
        auto it = nodes_.find(id);
        return it == nodes_.end() ? nullptr : &it->second;
    }
    const Edge* edge(const std::string& id) const {
        auto it = edges_.find(id);
        return it == edges_.end() ? nullptr : &it->second;
    }
    const Scalar* attr(const std::string& node_id, const std::string& name) const {
        const Node* n = node(node_id);
        if (!n) return nullptr;
        auto it = n->attrs.find(name);
        return it == n->attrs.end() ? nullptr : &it->second;
    }

    // Raw structural mutation. Transactions (edit.hpp) are the supported
    // write path; these enforce local invariants only.
    void add_node(const std::string& id, Node n);
    Node remove_node(const std::string& id); // errors if incident edges remain
    void set_attr(const std::string& id, const std::string& name, Scalar v);
    void add_edge(const std::string& id, Edge e);
    Edge remove_edge(const std::string& id);

    // Loader path: no endpoint checks. Conformance validation reports
    // whatever is wrong afterwards.
    void add_edge_unchecked(const std::string& id, Edge e) { edges_[id] = std::move(e); }

    bool node_has_incident_edges(const std::string& id) const;

    // Annotation side-band; excluded from the domain digest.
    void annotate_event(const ChangeEvent& ev);
    void annotate_result(const EvaluationResult& res);
    AnnotationView read_annotations(const std::string& element_id) const;
    void clear_annotations();

    bool operator==(const ReflectionModel& other) const {
        return nodes_ == other.nodes_ && edges_ == other.edges_;
    }

private:
    std::map<std::string, Node> nodes_;
    std::map<std::string, Edge> edges_;
    ModelMode mode_ = ModelMode::Descriptive;
    std::map<std::string, std::vector<ChangeEvent>> event_ann_;
    std::map<std::string, std::vector<EvaluationResult>> result_ann_;
    bool write_locked_ = false; // single open transaction per model
    friend class Transaction;
};

// Empty iff the model conforms; violations are data, not errors.
std::vector<ConformanceViolation> validate_conformance(const ReflectionModel& model,
                                                       const Metamodel& mm);

// Canonical length-prefixed serialization of the domain part (nodes sorted
// by id, attrs by name, edges by id; mode and annotations excluded).
std::vector<std::uint8_t> canonical_bytes(const ReflectionModel& model);

// SHA-256 of canonical_bytes, as a 64-char lowercase hex string.
std::string snapshot_digest(const ReflectionModel& model);

// All injective type- and predicate-respecting embeddings of `pattern`,
// duplicate-free, in canonical order (lexicographic over ids bound in
// variable order). With `anchor`, every binding maps the pattern's anchor
// variable to it.
std::vector<Binding> match_pattern(const ReflectionModel& model, const Metamodel& mm,
                                   const Pattern& pattern, const std::string& anchor = "");

} // namespace amrt
