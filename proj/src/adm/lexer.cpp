#include "amrt/adm/parser.hpp"

#include <cctype>

namespace amrt::adm {

std::vector<Token> lex(std::string_view text, const std::string& file,
                       std::vector<Diagnostic>& diagnostics) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto peek = [&](std::size_t k = 0) -> char {
        return i + k < text.size() ? text[i + k] : '\0';
    };
    auto advance = [&] {
        if (text[i] == '\n') {
            line++;
            col = 1;
        } else {
            col++;
        }
        i++;
    };
    auto make = [&](Token::Kind kind, std::string t, int l, int c) {
        Token tok;
        tok.kind = kind;
        tok.text = std::move(t);
        tok.line = l;
        tok.column = c;
        return tok;
    };

    while (i < text.size()) {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < text.size() && peek() != '\n') advance();
            continue;
        }
        int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                word += peek();
                advance();
            }
            out.push_back(make(Token::Kind::Ident, word, l, cl));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            bool is_float = false;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
                num += peek();
                advance();
            }
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                is_float = true;
                num += peek();
                advance();
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    num += peek();
                    advance();
                }
            }
            if ((peek() == 'e' || peek() == 'E') &&
                (std::isdigit(static_cast<unsigned char>(peek(1))) ||
                 ((peek(1) == '+' || peek(1) == '-') &&
                  std::isdigit(static_cast<unsigned char>(peek(2)))))) {
                is_float = true;
                num += peek();
                advance();
                if (peek() == '+' || peek() == '-') {
                    num += peek();
                    advance();
                }
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    num += peek();
                    advance();
                }
            }
            Token tok = make(Token::Kind::Number, num, l, cl);
            if (is_float)
                tok.number = std::stod(num);
            else
                tok.number = static_cast<std::int64_t>(std::stoll(num));
            out.push_back(tok);
            continue;
        }
        if (c == '"') {
            advance();
            std::string s;
            bool closed = false;
            while (i < text.size()) {
                if (peek() == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (peek() == '\n') break;
                s += peek();
                advance();
            }
            if (!closed)
                diagnostics.push_back({Diagnostic::Severity::Error, "unterminated string literal",
                                       {file, l, cl}});
            out.push_back(make(Token::Kind::String, s, l, cl));
            continue;
        }
        // multi-char operators first
        static const char* two_char[] = {"==", "!=", "<=", ">="};
        bool matched = false;
        for (const char* op : two_char) {
            if (c == op[0] && peek(1) == op[1]) {
                out.push_back(make(Token::Kind::Punct, op, l, cl));
                advance();
                advance();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static const std::string singles = "{}()[],;:.#@=<>+-*/|";
        if (singles.find(c) != std::string::npos) {
            out.push_back(make(Token::Kind::Punct, std::string(1, c), l, cl));
            advance();
            continue;
        }
        diagnostics.push_back({Diagnostic::Severity::Error,
                               std::string("unexpected character '") + c + "'",
                               {file, l, cl}});
        advance();
    }
    Token eof;
    eof.kind = Token::Kind::End;
    eof.line = line;
    eof.column = col;
    out.push_back(eof);
    return out;
}

} // namespace amrt::adm
