#pragma once

#include "amrt/scalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace amrt {

// Numeric range restriction on an attribute; either bound optional.
struct AttrRange {
    std::optional<double> min;
    std::optional<double> max;
    bool min_exclusive = false;
    bool max_exclusive = false;

    bool contains(double v) const {
        if (min && (min_exclusive ? v <= *min : v < *min)) return false;
        if (max && (max_exclusive ? v >= *max : v > *max)) return false;
        return true;
    }
};

struct AttrDecl {
    ScalarKind kind = ScalarKind::String;
    std::vector<std::string> enum_domain; // nonempty restricts string values
    std::optional<AttrRange> range;       // int/float only
    bool sensor = false;                  // owned by monitoring, read-only to adaptation
};

struct NodeTypeDecl {
    std::map<std::string, AttrDecl> attributes;
};

enum class Multiplicity { ExactlyOne, Any };

struct EdgeTypeDecl {
    std::string source;
    std::string target;
    Multiplicity source_multiplicity = Multiplicity::Any;
};

// User-supplied typing for reflection models. The engine core is generic
// over it; the shop fixture (CS) is just one instance.
struct Metamodel {
    std::map<std::string, NodeTypeDecl> node_types;
    std::map<std::string, EdgeTypeDecl> edge_types;

    const NodeTypeDecl* node_type(const std::string& name) const {
        auto it = node_types.find(name);
        return it == node_types.end() ? nullptr : &it->second;
    }
    const EdgeTypeDecl* edge_type(const std::string& name) const {
        auto it = edge_types.find(name);
        return it == edge_types.end() ? nullptr : &it->second;
    }
    const AttrDecl* attr_decl(const std::string& node_type_name, const std::string& attr) const {
        const auto* nt = node_type(node_type_name);
        if (!nt) return nullptr;
        auto it = nt->attributes.find(attr);
        return it == nt->attributes.end() ? nullptr : &it->second;
    }

    // Checks the metamodel's own invariants (unique names are structural
    // via map keys; edge endpoints must name declared node types).
    std::vector<std::string> self_check() const;
};

} // namespace amrt
