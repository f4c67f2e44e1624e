#pragma once

#include "amrt/adm/ast.hpp"
#include "amrt/bundle.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace amrt::adm {

struct Token {
    enum class Kind { Ident, Number, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    Scalar number; // Number tokens: int or float
    int line = 1;
    int column = 1;
};

// Whitespace-insensitive, `//` line comments. Number/string literals are
// typed; words are bare idents (keywords are contextual).
std::vector<Token> lex(std::string_view text, const std::string& file,
                       std::vector<Diagnostic>& diagnostics);

struct ParseResult {
    AstBundle bundle;
    std::vector<Diagnostic> diagnostics; // all recoverable errors, not just the first
    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.severity == Diagnostic::Severity::Error) return false;
        return true;
    }
};

ParseResult parse(std::string_view text, const std::string& file);

// Binds every type/attribute/id reference against the metamodel, merges the
// sub-model files, and substitutes bundle parameters at use sites.
struct ResolveResult {
    AdaptationModelBundle bundle;
    std::vector<Diagnostic> diagnostics;
    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.severity == Diagnostic::Severity::Error) return false;
        return true;
    }
};

ResolveResult resolve(const std::vector<AstBundle>& files, const Metamodel& mm);

// Canonical `.adm` text: declarations ordered params, qualities,
// preferences, goals, conditions, options, rules; comments dropped.
std::string serialize(const AdaptationModelBundle& bundle);

} // namespace amrt::adm
