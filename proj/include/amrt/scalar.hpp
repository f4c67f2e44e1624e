#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace amrt {

// Attribute value. Int and Float are distinct kinds in the metamodel but
// compare numerically against each other in predicates.
using Scalar = std::variant<std::int64_t, double, std::string, bool>;

enum class ScalarKind { Int, Float, String, Bool };

inline ScalarKind kind_of(const Scalar& v) {
    switch (v.index()) {
        case 0: return ScalarKind::Int;
        case 1: return ScalarKind::Float;
        case 2: return ScalarKind::String;
        default: return ScalarKind::Bool;
    }
}

inline const char* kind_name(ScalarKind k) {
    switch (k) {
        case ScalarKind::Int: return "int";
        case ScalarKind::Float: return "float";
        case ScalarKind::String: return "string";
        case ScalarKind::Bool: return "bool";
    }
    return "?";
}

std::optional<ScalarKind> kind_from_name(const std::string& name);

inline bool is_numeric(const Scalar& v) { return v.index() <= 1; }

inline double as_number(const Scalar& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

// Numeric across int/float, strict otherwise. Cross-kind non-numeric
// comparisons are never equal.
bool scalar_eq(const Scalar& a, const Scalar& b);

// Three-way compare for ordering predicates; nullopt when the pair is not
// ordered (non-numeric cross-kind, or bool).
std::optional<int> scalar_cmp(const Scalar& a, const Scalar& b);

// Display form used in diagnostics and traces ("RUNNING", 200, 12.5, true).
std::string scalar_to_string(const Scalar& v);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmp_op_name(CmpOp op);

bool eval_cmp(CmpOp op, const Scalar& lhs, const Scalar& rhs);

} // namespace amrt
