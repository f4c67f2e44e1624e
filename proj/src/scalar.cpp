#include "amrt/scalar.hpp"

#include <cmath>
#include <sstream>

namespace amrt {

std::optional<ScalarKind> kind_from_name(const std::string& name) {
    if (name == "int") return ScalarKind::Int;
    if (name == "float") return ScalarKind::Float;
    if (name == "string") return ScalarKind::String;
    if (name == "bool") return ScalarKind::Bool;
    return std::nullopt;
}

bool scalar_eq(const Scalar& a, const Scalar& b) {
    if (is_numeric(a) && is_numeric(b)) return as_number(a) == as_number(b);
    if (a.index() != b.index()) return false;
    return a == b;
}

std::optional<int> scalar_cmp(const Scalar& a, const Scalar& b) {
    if (is_numeric(a) && is_numeric(b)) {
        double x = as_number(a), y = as_number(b);
        if (x < y) return -1;
        if (x > y) return 1;
        return 0;
    }
    if (a.index() == 2 && b.index() == 2) {
        const auto& x = std::get<std::string>(a);
        const auto& y = std::get<std::string>(b);
        return x.compare(y) < 0 ? -1 : (x == y ? 0 : 1);
    }
    return std::nullopt;
}

std::string scalar_to_string(const Scalar& v) {
    std::ostringstream os;
    switch (v.index()) {
        case 0: os << std::get<std::int64_t>(v); break;
        case 1: {
            double d = std::get<double>(v);
            if (d == std::floor(d) && std::abs(d) < 1e15) {
                os << static_cast<std::int64_t>(d) << ".0";
            } else {
                os.precision(17);
                os << d;
            }
            break;
        }
        case 2: os << '"' << std::get<std::string>(v) << '"'; break;
        case 3: os << (std::get<bool>(v) ? "true" : "false"); break;
    }
    return os.str();
}

const char* cmp_op_name(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

bool eval_cmp(CmpOp op, const Scalar& lhs, const Scalar& rhs) {
    switch (op) {
        case CmpOp::Eq: return scalar_eq(lhs, rhs);
        case CmpOp::Ne: return !scalar_eq(lhs, rhs);
        default: break;
    }
    auto c = scalar_cmp(lhs, rhs);
    if (!c) return false;
    switch (op) {
        case CmpOp::Lt: return *c < 0;
        case CmpOp::Le: return *c <= 0;
        case CmpOp::Gt: return *c > 0;
        case CmpOp::Ge: return *c >= 0;
        default: return false;
    }
}

} // namespace amrt
