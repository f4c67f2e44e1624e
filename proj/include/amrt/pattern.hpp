#pragma once

#include "amrt/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace amrt {

// variable -> bound element id
using Binding = std::map<std::string, std::string>;

std::string binding_to_string(const Binding& b);

// Comparison of `var.attr` against a literal. Parameters are substituted
// to literals at resolve time, so the matcher only ever sees values.
struct AttrPredicate {
    std::string var;
    std::string attr;
    CmpOp op = CmpOp::Eq;
    Scalar value;
};

struct PatternNode {
    std::string var;
    std::string type;
};

struct PatternEdge {
    std::string src_var;
    std::string type;
    std::string tgt_var;
};

// Negative application condition: the match dies if the clause's local
// variables can be extended to an occurrence alongside the positive part.
struct NegativeClause {
    std::vector<PatternNode> nodes; // NAC-local variables
    std::vector<PatternEdge> edges; // may reference positive or local vars
    std::vector<AttrPredicate> predicates;
};

struct Pattern {
    std::vector<PatternNode> nodes;
    std::vector<PatternEdge> edges;
    std::vector<AttrPredicate> predicates;
    std::vector<NegativeClause> negatives;
    std::string anchor_var; // empty = unanchored pattern

    const PatternNode* node(const std::string& var) const {
        for (const auto& n : nodes)
            if (n.var == var) return &n;
        return nullptr;
    }

    // Structural well-formedness: edge/predicate/anchor vars declared.
    std::vector<std::string> well_formed_errors() const;
};

} // namespace amrt
