#include "amrt/adm/parser.hpp"

#include <algorithm>

namespace amrt::adm {

namespace {

struct Bail {}; // structural error: give up on the current declaration

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file, std::vector<Diagnostic>& diags)
        : tokens_(std::move(tokens)), file_(std::move(file)), diags_(diags) {}

    AstBundle parse_bundle() {
        AstBundle b;
        b.file = file_;
        if (accept_ident("adaptation")) {
            b.name = expect_name("adaptation model name");
            expect_soft(";");
        } else {
            error(peek(), "expected 'adaptation <name>;' header");
        }
        while (peek().kind != Token::Kind::End) {
            try {
                parse_decl(b);
            } catch (const Bail&) {
                synchronize();
            }
        }
        return b;
    }

private:
    // --- token plumbing -----------------------------------------------------
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
    bool check_punct(const std::string& p) const {
        return peek().kind == Token::Kind::Punct && peek().text == p;
    }
    bool check_ident(const std::string& w) const {
        return peek().kind == Token::Kind::Ident && peek().text == w;
    }
    bool accept_punct(const std::string& p) {
        if (!check_punct(p)) return false;
        advance();
        return true;
    }
    bool accept_ident(const std::string& w) {
        if (!check_ident(w)) return false;
        advance();
        return true;
    }
    SourceSpan span_of(const Token& t) const { return {file_, t.line, t.column}; }
    void error(const Token& t, const std::string& msg) {
        std::string found = t.kind == Token::Kind::End ? "end of file" : "'" + t.text + "'";
        diags_.push_back({Diagnostic::Severity::Error, msg + ", found " + found, span_of(t)});
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        error(t, msg);
        throw Bail{};
    }
    void expect_soft(const std::string& p) {
        if (!accept_punct(p)) error(peek(), "expected '" + p + "'");
    }
    void expect_hard(const std::string& p) {
        if (!accept_punct(p)) fail(peek(), "expected '" + p + "'");
    }
    std::string expect_name(const std::string& what) {
        if (peek().kind != Token::Kind::Ident) fail(peek(), "expected " + what);
        return advance().text;
    }
    double expect_number(const std::string& what) {
        bool neg = accept_punct("-");
        if (peek().kind != Token::Kind::Number) fail(peek(), "expected " + what);
        double v = as_number(advance().number);
        return neg ? -v : v;
    }

    static bool is_decl_keyword(const Token& t) {
        if (t.kind != Token::Kind::Ident) return false;
        static const char* kws[] = {"param", "quality", "preferences", "goal",
                                    "condition", "option", "rule"};
        for (const char* k : kws)
            if (t.text == k) return true;
        return false;
    }

    void synchronize() {
        // skip to the next plausible declaration start
        int depth = 0;
        while (peek().kind != Token::Kind::End) {
            if (depth == 0 && is_decl_keyword(peek())) return;
            if (check_punct("{")) depth++;
            if (check_punct("}")) depth = std::max(0, depth - 1);
            advance();
        }
    }

    // --- declarations -------------------------------------------------------
    void parse_decl(AstBundle& b) {
        const Token& t = peek();
        if (accept_ident("param")) {
            b.params.push_back(parse_param(t));
        } else if (accept_ident("quality")) {
            b.qualities.push_back(parse_quality(t));
        } else if (accept_ident("preferences")) {
            b.preferences.push_back(parse_preferences(t));
        } else if (accept_ident("goal")) {
            b.goals.push_back(parse_goal(t));
        } else if (accept_ident("condition")) {
            b.conditions.push_back(parse_condition(t));
        } else if (accept_ident("option")) {
            b.options.push_back(parse_option(t));
        } else if (accept_ident("rule")) {
            b.rules.push_back(parse_rule(t));
        } else {
            fail(t, "expected a declaration (param, quality, preferences, goal, condition, "
                    "option, rule)");
        }
    }

    AstParam parse_param(const Token& at) {
        AstParam p;
        p.span = span_of(at);
        p.name = expect_name("parameter name");
        expect_hard(":");
        p.kind = expect_name("parameter kind");
        expect_hard("=");
        p.value = ValueExpr::lit(parse_literal());
        expect_soft(";");
        return p;
    }

    Scalar parse_literal() {
        if (accept_ident("true")) return true;
        if (accept_ident("false")) return false;
        if (peek().kind == Token::Kind::String) return advance().text;
        bool neg = accept_punct("-");
        if (peek().kind != Token::Kind::Number) fail(peek(), "expected a literal");
        Scalar v = advance().number;
        if (!neg) return v;
        if (v.index() == 0) return -std::get<std::int64_t>(v);
        return -std::get<double>(v);
    }

    AstQuality parse_quality(const Token& at) {
        AstQuality q;
        q.span = span_of(at);
        q.name = expect_name("quality name");
        expect_hard("{");
        while (!accept_punct("}")) {
            if (accept_ident("metric")) {
                q.aggregator = expect_name("aggregator");
                expect_hard("(");
                q.node_type = expect_name("node type");
                if (accept_punct(".")) q.attribute = expect_name("attribute");
                if (accept_ident("where")) q.where = parse_expr(/*allow_bare_attr=*/true);
                expect_hard(")");
                expect_soft(";");
            } else if (accept_ident("direction")) {
                q.direction = expect_name("direction");
                expect_soft(";");
            } else if (accept_ident("bounds")) {
                expect_hard("[");
                q.lo = expect_number("lower bound");
                expect_hard(",");
                q.hi = expect_number("upper bound");
                expect_hard("]");
                expect_soft(";");
            } else {
                fail(peek(), "expected metric, direction, or bounds");
            }
        }
        return q;
    }

    AstPreferences parse_preferences(const Token& at) {
        AstPreferences p;
        p.span = span_of(at);
        expect_hard("{");
        while (!accept_punct("}")) {
            std::string q = expect_name("quality name");
            expect_hard("=");
            p.entries.emplace_back(q, expect_number("weight"));
            expect_soft(";");
        }
        return p;
    }

    AstGoal parse_goal(const Token& at) {
        AstGoal g;
        g.span = span_of(at);
        g.name = expect_name("goal name");
        expect_hard("{");
        if (accept_ident("require"))
            g.require = true;
        else if (accept_ident("forbid"))
            g.require = false;
        else
            fail(peek(), "expected 'require' or 'forbid'");
        g.pattern = parse_pattern();
        expect_hard("}");
        return g;
    }

    AstCondition parse_condition(const Token& at) {
        AstCondition c;
        c.span = span_of(at);
        c.name = expect_name("condition name");
        if (!accept_ident("priority")) fail(peek(), "expected 'priority'");
        c.priority = static_cast<int>(expect_number("priority"));
        if (!accept_ident("lane")) fail(peek(), "expected 'lane'");
        c.lane = expect_name("lane (fast or slow)");
        if (accept_ident("on")) {
            expect_hard("(");
            c.event_kinds.push_back(parse_event_kind());
            while (accept_punct("|")) c.event_kinds.push_back(parse_event_kind());
            if (accept_punct(",")) c.attr_filter = expect_name("attribute filter");
            expect_hard(")");
        }
        if (accept_ident("link")) c.linked_ref = expect_name("linked quality or goal");
        expect_hard("{");
        c.pattern = parse_pattern();
        expect_hard("}");
        return c;
    }

    std::string parse_event_kind() {
        std::string kind = expect_name("event kind");
        while (accept_punct("-")) kind += "-" + expect_name("event kind");
        return kind;
    }

    AstOption parse_option(const Token& at) {
        AstOption o;
        o.span = span_of(at);
        o.name = expect_name("option name");
        expect_hard("(");
        if (!check_punct(")")) {
            do {
                std::string pname = expect_name("parameter name");
                expect_hard(":");
                o.formals.emplace_back(pname, expect_name("parameter kind"));
            } while (accept_punct(","));
        }
        expect_hard(")");
        expect_hard("{");
        while (!accept_punct("}")) {
            if (accept_ident("pre")) {
                o.pre = parse_pattern();
                expect_soft(";");
            } else if (accept_ident("effect")) {
                o.effects.push_back(parse_effect());
                while (accept_punct(",")) o.effects.push_back(parse_effect());
                expect_soft(";");
            } else if (accept_ident("compose")) {
                o.compose.push_back(expect_name("option name"));
                while (peek().kind == Token::Kind::Ident && !check_ident("post"))
                    o.compose.push_back(advance().text);
                expect_soft(";");
            } else if (accept_ident("post")) {
                o.post = parse_expr(false);
                expect_soft(";");
            } else if (accept_ident("invariant")) {
                o.invariants.push_back(parse_pattern());
                expect_soft(";");
            } else if (accept_ident("cost")) {
                o.cost = expect_number("cost");
                expect_soft(";");
            } else if (accept_ident("benefit")) {
                expect_hard("{");
                while (!accept_punct("}")) {
                    std::string q = expect_name("quality name");
                    expect_hard("=");
                    o.benefit.emplace_back(q, expect_number("benefit"));
                    expect_soft(";");
                }
            } else {
                fail(peek(), "expected pre, effect, compose, post, invariant, cost, or benefit");
            }
        }
        return o;
    }

    AstRule parse_rule(const Token& at) {
        AstRule r;
        r.span = span_of(at);
        r.name = expect_name("rule name");
        expect_hard(":");
        if (!accept_ident("when")) fail(peek(), "expected 'when'");
        r.condition = expect_name("condition name");
        if (!accept_ident("do")) fail(peek(), "expected 'do'");
        do {
            AstRule::Action a;
            a.option = expect_name("option name");
            if (accept_punct("(")) {
                if (!check_punct(")")) {
                    do {
                        a.args.push_back(parse_literal());
                    } while (accept_punct(","));
                }
                expect_hard(")");
            }
            r.actions.push_back(std::move(a));
        } while (peek().kind == Token::Kind::Ident);
        expect_soft(";");
        return r;
    }

    // --- patterns and expressions --------------------------------------------
    // pattern := elem ([","] elem)* ["where" expr]
    // elem := TYPE ["@"] IDENT | "edge" TYPE "(" ref "," ref ")" | "no" "(" pattern ")"
    AstPattern parse_pattern() {
        AstPattern p;
        while (true) {
            if (accept_ident("edge")) {
                AstPatternEdge e;
                e.span = span_of(peek());
                e.type = expect_name("edge type");
                expect_hard("(");
                e.src = parse_ref();
                expect_hard(",");
                e.tgt = parse_ref();
                expect_hard(")");
                p.edges.push_back(std::move(e));
            } else if (accept_ident("no")) {
                expect_hard("(");
                AstPattern inner = parse_pattern();
                expect_hard(")");
                AstNegative neg;
                neg.nodes = std::move(inner.nodes);
                neg.edges = std::move(inner.edges);
                neg.where = std::move(inner.where);
                for ([[maybe_unused]] auto& nested : inner.negatives)
                    error(peek(), "negative clauses cannot nest");
                p.negatives.push_back(std::move(neg));
            } else if (check_ident("where")) {
                advance();
                p.where = parse_expr(false);
                break;
            } else if (peek().kind == Token::Kind::Ident && !check_ident("where")) {
                AstPatternNode n;
                n.span = span_of(peek());
                n.type = advance().text;
                n.anchored = accept_punct("@");
                n.var = expect_name("pattern variable");
                p.nodes.push_back(std::move(n));
            } else {
                break;
            }
            accept_punct(",");
        }
        return p;
    }

    // ref := IDENT ["#" IDENT] — plain variable or fresh alias
    std::string parse_ref() {
        std::string r = expect_name("reference");
        if (accept_punct("#")) r += "#" + expect_name("alias suffix");
        return r;
    }

    std::vector<AstComparison> parse_expr(bool allow_bare_attr) {
        std::vector<AstComparison> out;
        do {
            out.push_back(parse_comparison(allow_bare_attr));
        } while (accept_ident("and"));
        return out;
    }

    AstComparison parse_comparison(bool allow_bare_attr) {
        AstComparison c;
        c.span = span_of(peek());
        std::string first = parse_ref();
        if (accept_punct(".")) {
            c.var = first;
            c.attr = expect_name("attribute");
        } else if (allow_bare_attr) {
            c.attr = first;
        } else {
            fail(peek(), "expected '.' after variable '" + first + "'");
        }
        c.op = parse_cmp_op();
        c.rhs = parse_vexpr();
        return c;
    }

    CmpOp parse_cmp_op() {
        static const std::pair<const char*, CmpOp> ops[] = {
            {"==", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<=", CmpOp::Le},
            {">=", CmpOp::Ge}, {"<", CmpOp::Lt},  {">", CmpOp::Gt},
        };
        for (const auto& [text, op] : ops)
            if (accept_punct(text)) return op;
        fail(peek(), "expected a comparison operator");
    }

    // vexpr := term (("+"|"-") term)* — term := factor (("*"|"/") factor)*
    ValueExpr parse_vexpr() {
        ValueExpr lhs = parse_term();
        while (check_punct("+") || check_punct("-")) {
            char op = advance().text[0];
            lhs = ValueExpr::binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }
    ValueExpr parse_term() {
        ValueExpr lhs = parse_factor();
        while (check_punct("*") || check_punct("/")) {
            char op = advance().text[0];
            lhs = ValueExpr::binary(op, std::move(lhs), parse_factor());
        }
        return lhs;
    }
    ValueExpr parse_factor() {
        if (accept_punct("(")) {
            ValueExpr e = parse_vexpr();
            expect_hard(")");
            return e;
        }
        if (peek().kind == Token::Kind::Number || peek().kind == Token::Kind::String ||
            check_ident("true") || check_ident("false") || check_punct("-"))
            return ValueExpr::lit(parse_literal());
        std::string name = parse_ref();
        if (accept_punct(".")) return ValueExpr::attr_ref(name, expect_name("attribute"));
        return ValueExpr::param_ref(name); // bundle param or option formal
    }

    AstEffect parse_effect() {
        const Token& at = peek();
        if (accept_ident("set")) {
            AstSetEffect e;
            e.span = span_of(at);
            e.var = parse_ref();
            expect_hard(".");
            e.attr = expect_name("attribute");
            expect_hard("=");
            e.value = parse_vexpr();
            return e;
        }
        if (accept_ident("add")) {
            if (accept_ident("node")) {
                AstAddNodeEffect e;
                e.span = span_of(at);
                e.source_var = expect_name("source variable");
                expect_hard("#");
                std::string suffix = expect_name("alias suffix");
                e.alias = e.source_var + "#" + suffix;
                expect_hard(":");
                e.node_type = expect_name("node type");
                expect_hard("{");
                if (!check_punct("}")) {
                    do {
                        std::string attr = expect_name("attribute");
                        expect_hard("=");
                        e.initializers.emplace_back(attr, parse_vexpr());
                    } while (accept_punct(","));
                }
                expect_hard("}");
                return e;
            }
            if (accept_ident("edge")) {
                AstAddEdgeEffect e;
                e.span = span_of(at);
                e.edge_type = expect_name("edge type");
                expect_hard("(");
                e.src = parse_ref();
                expect_hard(",");
                e.tgt = parse_ref();
                expect_hard(")");
                return e;
            }
            fail(peek(), "expected 'node' or 'edge' after 'add'");
        }
        if (accept_ident("remove")) {
            if (accept_ident("node")) {
                AstRemoveNodeEffect e;
                e.span = span_of(at);
                e.var = parse_ref();
                return e;
            }
            if (accept_ident("edge")) {
                AstRemoveEdgeEffect e;
                e.span = span_of(at);
                e.edge_type = expect_name("edge type");
                expect_hard("(");
                e.src = parse_ref();
                expect_hard(",");
                e.tgt = parse_ref();
                expect_hard(")");
                return e;
            }
            fail(peek(), "expected 'node' or 'edge' after 'remove'");
        }
        fail(peek(), "expected set, add, or remove");
    }

    std::vector<Token> tokens_;
    std::string file_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
};

} // namespace

ParseResult parse(std::string_view text, const std::string& file) {
    ParseResult result;
    auto tokens = lex(text, file, result.diagnostics);
    Parser p(std::move(tokens), file, result.diagnostics);
    result.bundle = p.parse_bundle();
    return result;
}

} // namespace amrt::adm
