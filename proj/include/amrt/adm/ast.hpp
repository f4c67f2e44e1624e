#pragma once

#include "amrt/bundle.hpp"
#include "amrt/change.hpp"

#include <optional>
#include <string>
#include <vector>

namespace amrt::adm {

// Raw syntax trees. Identifier references (types, attributes, params,
// option/condition names) stay unresolved strings; the resolver binds them
// against the metamodel and the merged declaration table.

struct AstComparison {
    std::string var; // empty: implicit self (metric where)
    std::string attr;
    CmpOp op = CmpOp::Eq;
    ValueExpr rhs; // literal or Param (unresolved identifier)
    SourceSpan span;
};

struct AstPatternNode {
    std::string type;
    std::string var;
    bool anchored = false;
    SourceSpan span;
};

struct AstPatternEdge {
    std::string type;
    std::string src;
    std::string tgt;
    SourceSpan span;
};

struct AstNegative {
    std::vector<AstPatternNode> nodes;
    std::vector<AstPatternEdge> edges;
    std::vector<AstComparison> where;
};

struct AstPattern {
    std::vector<AstPatternNode> nodes;
    std::vector<AstPatternEdge> edges;
    std::vector<AstNegative> negatives;
    std::vector<AstComparison> where;
};

struct AstParam {
    std::string name;
    std::string kind;
    ValueExpr value;
    SourceSpan span;
};

struct AstQuality {
    std::string name;
    std::string aggregator;
    std::string node_type;
    std::string attribute; // optional
    std::vector<AstComparison> where;
    std::string direction;
    double lo = 0, hi = 1;
    SourceSpan span;
};

struct AstPreferences {
    std::vector<std::pair<std::string, double>> entries;
    SourceSpan span;
};

struct AstGoal {
    std::string name;
    bool require = false;
    AstPattern pattern;
    SourceSpan span;
};

struct AstCondition {
    std::string name;
    int priority = 0;
    std::string lane;
    std::vector<std::string> event_kinds;
    std::optional<std::string> attr_filter;
    std::string linked_ref;
    AstPattern pattern;
    SourceSpan span;
};

struct AstSetEffect {
    std::string var;
    std::string attr;
    ValueExpr value;
    SourceSpan span;
};
struct AstAddNodeEffect {
    std::string alias;      // "c#r"
    std::string source_var; // "c"
    std::string node_type;
    std::vector<std::pair<std::string, ValueExpr>> initializers;
    SourceSpan span;
};
struct AstAddEdgeEffect {
    std::string edge_type;
    std::string src;
    std::string tgt;
    SourceSpan span;
};
struct AstRemoveNodeEffect {
    std::string var;
    SourceSpan span;
};
struct AstRemoveEdgeEffect {
    std::string edge_type;
    std::string src;
    std::string tgt;
    SourceSpan span;
};

using AstEffect = std::variant<AstSetEffect, AstAddNodeEffect, AstAddEdgeEffect,
                               AstRemoveNodeEffect, AstRemoveEdgeEffect>;

struct AstOption {
    std::string name;
    std::vector<std::pair<std::string, std::string>> formals; // name, kind
    AstPattern pre;
    std::vector<AstEffect> effects;
    std::vector<std::string> compose;
    std::vector<AstComparison> post;
    std::vector<AstPattern> invariants;
    double cost = 0;
    std::vector<std::pair<std::string, double>> benefit;
    SourceSpan span;
};

struct AstRule {
    std::string name;
    std::string condition;
    struct Action {
        std::string option;
        std::vector<Scalar> args;
    };
    std::vector<Action> actions;
    SourceSpan span;
};

struct AstBundle {
    std::string name;
    std::string file;
    std::vector<AstParam> params;
    std::vector<AstQuality> qualities;
    std::vector<AstPreferences> preferences;
    std::vector<AstGoal> goals;
    std::vector<AstCondition> conditions;
    std::vector<AstOption> options;
    std::vector<AstRule> rules;
};

} // namespace amrt::adm
