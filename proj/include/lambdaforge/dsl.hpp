#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "engine.hpp"

// Text format for algebra definitions (.alg) and realization files, plus the
// expression grammar shared with the command line. Parsing never throws: all
// problems (lexical, syntactic, semantic, and engine errors triggered during
// evaluation) are collected as positioned diagnostics, and the parser is safe
// on arbitrary byte input.
//
// Statements:
//   format=1;
//   algebra NAME;
//   generator NAME parity=odd|even weight=Q;
//   brackets_default zero;
//   charge Q;
//   bracket [A, B] = POLY;
//   susy EXPR;
//   rewrite :A B: = EXPR;
//   relation EXPR = 0;
//
// POLY is a sum of terms, each a '*'-product of rational literals, the
// scalar names i/sqrt2/sqrt15, lambda or lambda^k, parenthesized lambda-free
// sums, generators, d(...), and normally ordered products ':A B C:' (right
// nested: ':A B C:' means ':A (:B C:):'; after two or more items a ':'
// closes the product, so deeper shapes go in parentheses). EXPR is a POLY
// with lambda forbidden. Line comments run from '#' to end of line.

namespace lf {

struct Diagnostic {
    int line = 0;
    int col = 0;
    std::string message;
};

inline std::string format_diagnostic(const Diagnostic &d) {
    return std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
}

namespace dsl_detail {

enum class Tok { end, ident, number, str, punct };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    char punct = 0;
    int line = 1;
    int col = 1;
};

inline bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

inline std::vector<Token> lex(std::string_view src, std::vector<Diagnostic> &diags) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t k = 0;
    int bad_bytes = 0;
    auto bump = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    const std::string puncts = "()[],;=*:^+-";
    while (k < src.size()) {
        char c = src[k];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(c);
            ++k;
            continue;
        }
        if (c == '#') {
            while (k < src.size() && src[k] != '\n') {
                bump(src[k]);
                ++k;
            }
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (ident_start(c)) {
            std::size_t s = k;
            while (k < src.size() && ident_char(src[k])) {
                bump(src[k]);
                ++k;
            }
            t.kind = Tok::ident;
            t.text = std::string(src.substr(s, k - s));
            out.push_back(std::move(t));
            continue;
        }
        if (digit(c)) {
            std::size_t s = k;
            while (k < src.size() && digit(src[k])) {
                bump(src[k]);
                ++k;
            }
            if (k < src.size() && src[k] == '/' && k + 1 < src.size() && digit(src[k + 1])) {
                bump(src[k]);
                ++k;
                while (k < src.size() && digit(src[k])) {
                    bump(src[k]);
                    ++k;
                }
            }
            t.kind = Tok::number;
            t.text = std::string(src.substr(s, k - s));
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"') {
            bump(c);
            ++k;
            std::size_t s = k;
            while (k < src.size() && src[k] != '"' && src[k] != '\n') {
                bump(src[k]);
                ++k;
            }
            t.kind = Tok::str;
            t.text = std::string(src.substr(s, k - s));
            if (k < src.size() && src[k] == '"') {
                bump(src[k]);
                ++k;
            } else {
                diags.push_back({t.line, t.col, "unterminated string"});
            }
            out.push_back(std::move(t));
            continue;
        }
        if (puncts.find(c) != std::string::npos) {
            t.kind = Tok::punct;
            t.punct = c;
            t.text = std::string(1, c);
            out.push_back(std::move(t));
            bump(c);
            ++k;
            continue;
        }
        if (++bad_bytes <= 8)
            diags.push_back({line, col,
                             "invalid character (byte " +
                                 std::to_string(static_cast<unsigned char>(c)) + ")"});
        bump(c);
        ++k;
    }
    if (bad_bytes > 8)
        diags.push_back({line, col, std::to_string(bad_bytes - 8) +
                                        " further invalid characters suppressed"});
    Token end;
    end.kind = Tok::end;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    return out;
}

// A cursor over the token stream with shared diagnostics.
struct Cursor {
    const std::vector<Token> *toks = nullptr;
    std::size_t pos = 0;
    std::vector<Diagnostic> *diags = nullptr;

    const Token &peek(std::size_t ahead = 0) const {
        std::size_t k = pos + ahead;
        return k < toks->size() ? (*toks)[k] : toks->back();
    }
    const Token &next() {
        const Token &t = peek();
        if (pos + 1 < toks->size())
            ++pos;
        return t;
    }
    bool at_punct(char c) const {
        return peek().kind == Tok::punct && peek().punct == c;
    }
    bool eat_punct(char c) {
        if (!at_punct(c))
            return false;
        next();
        return true;
    }
    void error(const std::string &msg) {
        if (diags->size() < 100)
            diags->push_back({peek().line, peek().col, msg});
        else if (diags->size() == 100)
            diags->push_back({peek().line, peek().col, "too many errors; giving up"});
    }
    bool overflowed() const { return diags->size() > 100; }
};

// Recursive-descent evaluator for the expression/poly grammar over a fixed
// algebra. Evaluation happens inline (no AST); engine errors are converted to
// diagnostics by the caller's try/catch.
class ExprParser {
  public:
    ExprParser(const Algebra &alg, Cursor &cur) : alg_(alg), cur_(cur) {}

    // Sum of terms, stopping before any token that cannot continue a sum.
    std::optional<LambdaPoly> parse_poly(bool allow_lambda) {
        LambdaPoly out;
        bool first = true;
        for (;;) {
            int sign = 1;
            while (cur_.at_punct('+') || cur_.at_punct('-')) {
                if (cur_.peek().punct == '-')
                    sign = -sign;
                cur_.next();
            }
            auto term = parse_term(allow_lambda);
            if (!term)
                return std::nullopt;
            Rat fact = 1;
            for (long t = 2; t <= term->lambda_power; ++t)
                fact *= t;
            out.add(static_cast<int>(term->lambda_power), term->field,
                    Scalar(sign < 0 ? Rat(-fact) : fact));
            first = false;
            if (cur_.at_punct('+') || cur_.at_punct('-'))
                continue;
            break;
        }
        (void)first;
        return out;
    }

    std::optional<FieldExpr> parse_expr() {
        auto p = parse_poly(false);
        if (!p)
            return std::nullopt;
        return p->nth(0);
    }

  private:
    struct TermVal {
        FieldExpr field;      // constants live on the vacuum monomial
        long lambda_power = 0;
    };

    static bool is_constant(const FieldExpr &e) {
        for (const auto &[m, q] : e.terms())
            if (m != kVacuum)
                return false;
        return true;
    }
    static Scalar constant_of(const FieldExpr &e) {
        auto it = e.terms().find(kVacuum);
        return it == e.terms().end() ? Scalar() : it->second;
    }

    std::optional<TermVal> parse_term(bool allow_lambda) {
        int sign = 1;
        while (cur_.at_punct('+') || cur_.at_punct('-')) {
            if (cur_.peek().punct == '-')
                sign = -sign;
            cur_.next();
        }
        auto acc = parse_factor(allow_lambda);
        if (!acc)
            return std::nullopt;
        while (cur_.eat_punct('*')) {
            auto f = parse_factor(allow_lambda);
            if (!f)
                return std::nullopt;
            acc->lambda_power += f->lambda_power;
            if (acc->lambda_power > 64) {
                cur_.error("lambda power too large");
                return std::nullopt;
            }
            if (is_constant(acc->field))
                acc->field = constant_of(acc->field) * f->field;
            else if (is_constant(f->field))
                acc->field = constant_of(f->field) * acc->field;
            else {
                cur_.error("product of two field expressions; use a normally ordered "
                           "product :A B: instead of '*'");
                return std::nullopt;
            }
        }
        if (sign < 0)
            acc->field = Scalar(-1) * acc->field;
        return acc;
    }

    std::optional<TermVal> parse_factor(bool allow_lambda) {
        if (depth_ > 64) {
            cur_.error("expression nested too deeply");
            return std::nullopt;
        }
        const Token &t = cur_.peek();
        if (t.kind == Tok::number) {
            cur_.next();
            try {
                return TermVal{FieldExpr::constant(Scalar(Rat(t.text))), 0};
            } catch (const std::exception &) {
                cur_.error("invalid rational literal '" + t.text + "'");
                return std::nullopt;
            }
        }
        if (t.kind == Tok::ident) {
            if (t.text == "i") {
                cur_.next();
                return TermVal{FieldExpr::constant(Scalar::i()), 0};
            }
            if (t.text == "sqrt2") {
                cur_.next();
                return TermVal{FieldExpr::constant(Scalar::sqrt2()), 0};
            }
            if (t.text == "sqrt15") {
                cur_.next();
                return TermVal{FieldExpr::constant(Scalar::sqrt15()), 0};
            }
            if (t.text == "lambda") {
                if (!allow_lambda) {
                    cur_.error("lambda is not allowed in this expression");
                    return std::nullopt;
                }
                cur_.next();
                long power = 1;
                if (cur_.eat_punct('^')) {
                    const Token &e = cur_.peek();
                    if (e.kind != Tok::number || e.text.find('/') != std::string::npos) {
                        cur_.error("expected an integer exponent after '^'");
                        return std::nullopt;
                    }
                    if (e.text.size() > 2) {
                        cur_.error("lambda power too large");
                        return std::nullopt;
                    }
                    power = std::stol(e.text);
                    cur_.next();
                }
                return TermVal{FieldExpr::constant(Scalar(1)), power};
            }
            if (t.text == "d") {
                cur_.next();
                if (!cur_.eat_punct('(')) {
                    cur_.error("expected '(' after d");
                    return std::nullopt;
                }
                ++depth_;
                auto inner = parse_poly(false);
                --depth_;
                if (!inner)
                    return std::nullopt;
                if (!cur_.eat_punct(')')) {
                    cur_.error("expected ')'");
                    return std::nullopt;
                }
                return TermVal{derive(alg_, inner->nth(0)), 0};
            }
            // Generator reference.
            if (!alg_.has_gen(t.text)) {
                cur_.error("unknown generator '" + t.text + "'");
                return std::nullopt;
            }
            cur_.next();
            return TermVal{alg_.gen_expr(alg_.gen_index(t.text)), 0};
        }
        if (t.kind == Tok::punct && t.punct == '(') {
            cur_.next();
            ++depth_;
            auto inner = parse_poly(false);
            --depth_;
            if (!inner)
                return std::nullopt;
            if (!cur_.eat_punct(')')) {
                cur_.error("expected ')'");
                return std::nullopt;
            }
            return TermVal{inner->nth(0), 0};
        }
        if (t.kind == Tok::punct && t.punct == ':') {
            cur_.next();
            std::vector<FieldExpr> items;
            for (;;) {
                if (cur_.peek().kind == Tok::end) {
                    cur_.error("unterminated normally ordered product");
                    return std::nullopt;
                }
                if (cur_.at_punct(':')) {
                    if (items.size() >= 2) {
                        cur_.next();
                        break; // closes this product
                    }
                    // opens a nested product as the next item
                }
                ++depth_;
                auto item = parse_factor(false);
                --depth_;
                if (!item)
                    return std::nullopt;
                items.push_back(std::move(item->field));
                if (items.size() > 64) {
                    cur_.error("normally ordered product has too many factors");
                    return std::nullopt;
                }
            }
            if (items.empty()) {
                cur_.error("empty normally ordered product");
                return std::nullopt;
            }
            FieldExpr acc = items.back();
            for (std::size_t k = items.size() - 1; k-- > 0;)
                acc = nprod(alg_, items[k], acc);
            return TermVal{std::move(acc), 0};
        }
        cur_.error("expected an expression");
        return std::nullopt;
    }

    const Algebra &alg_;
    Cursor &cur_;
    int depth_ = 0;
};

// A normally ordered rewrite pattern ':A B:' with optional d(...) wrappers,
// parsed structurally (no evaluation).
inline std::optional<Factor> parse_pattern_item(const Algebra &alg, Cursor &cur) {
    int dorder = 0;
    while (cur.peek().kind == Tok::ident && cur.peek().text == "d") {
        cur.next();
        if (!cur.eat_punct('(')) {
            cur.error("expected '(' after d");
            return std::nullopt;
        }
        ++dorder;
        if (dorder > 64) {
            cur.error("derivative order too large");
            return std::nullopt;
        }
    }
    const Token &t = cur.peek();
    if (t.kind != Tok::ident || !alg.has_gen(t.text)) {
        cur.error("expected a generator name in rewrite pattern");
        return std::nullopt;
    }
    cur.next();
    for (int k = 0; k < dorder; ++k)
        if (!cur.eat_punct(')')) {
            cur.error("expected ')'");
            return std::nullopt;
        }
    return Factor{static_cast<uint16_t>(alg.gen_index(t.text)),
                  static_cast<uint16_t>(dorder)};
}

} // namespace dsl_detail

// ---- public entry points ---------------------------------------------------

struct ParseResult {
    AlgebraPtr algebra;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return algebra != nullptr && diagnostics.empty(); }
};

// Parses an expression in the DSL grammar over an existing algebra.
inline std::pair<std::optional<FieldExpr>, std::vector<Diagnostic>>
parse_expression(const Algebra &alg, std::string_view text) {
    std::vector<Diagnostic> diags;
    auto toks = dsl_detail::lex(text, diags);
    dsl_detail::Cursor cur{&toks, 0, &diags};
    std::optional<FieldExpr> out;
    try {
        dsl_detail::ExprParser p(alg, cur);
        out = p.parse_expr();
        if (out && cur.peek().kind != dsl_detail::Tok::end) {
            cur.error("unexpected trailing input");
            out = std::nullopt;
        }
    } catch (const std::exception &e) {
        cur.error(e.what());
        out = std::nullopt;
    }
    if (!diags.empty())
        out = std::nullopt;
    return {std::move(out), std::move(diags)};
}

// Parses a lambda polynomial (the right-hand side grammar of brackets).
inline std::pair<std::optional<LambdaPoly>, std::vector<Diagnostic>>
parse_poly_text(const Algebra &alg, std::string_view text) {
    std::vector<Diagnostic> diags;
    auto toks = dsl_detail::lex(text, diags);
    dsl_detail::Cursor cur{&toks, 0, &diags};
    std::optional<LambdaPoly> out;
    try {
        dsl_detail::ExprParser p(alg, cur);
        out = p.parse_poly(true);
        if (out && cur.peek().kind != dsl_detail::Tok::end) {
            cur.error("unexpected trailing input");
            out = std::nullopt;
        }
    } catch (const std::exception &e) {
        cur.error(e.what());
        out = std::nullopt;
    }
    if (!diags.empty())
        out = std::nullopt;
    return {std::move(out), std::move(diags)};
}

// Parses a complete algebra definition. Never throws; diagnostics carry all
// lexical, syntactic, semantic, and engine-level problems.
inline ParseResult parse_algebra(std::string_view text) {
    using namespace dsl_detail;
    ParseResult res;
    auto toks = lex(text, res.diagnostics);
    Cursor cur{&toks, 0, &res.diagnostics};
    auto alg = std::make_shared<Algebra>();
    int next_sort_key = 0;

    auto skip_statement = [&] {
        while (cur.peek().kind != Tok::end && !cur.at_punct(';'))
            cur.next();
        cur.eat_punct(';');
    };
    auto expect_semi = [&]() -> bool {
        if (cur.eat_punct(';'))
            return true;
        cur.error("expected ';'");
        skip_statement();
        return false;
    };

    while (cur.peek().kind != Tok::end && !cur.overflowed()) {
        const Token &head = cur.peek();
        if (head.kind != Tok::ident) {
            cur.error("expected a statement");
            skip_statement();
            continue;
        }
        std::string kw = head.text;
        try {
            if (kw == "format") {
                cur.next();
                if (!cur.eat_punct('=')) {
                    cur.error("expected '=' after format");
                    skip_statement();
                    continue;
                }
                const Token &v = cur.peek();
                if (v.kind != Tok::number || v.text != "1")
                    cur.error("unsupported format version '" + v.text + "'");
                if (v.kind != Tok::end)
                    cur.next();
                expect_semi();
                continue;
            }
            if (kw == "algebra") {
                cur.next();
                const Token &n = cur.peek();
                if (n.kind != Tok::ident) {
                    cur.error("expected an algebra name");
                    skip_statement();
                    continue;
                }
                alg->name = n.text;
                cur.next();
                // Optional parenthesized suffix kept as part of the name,
                // e.g. algebra virasoro(21/2);
                if (cur.at_punct('(')) {
                    cur.next();
                    const Token &p = cur.peek();
                    if (p.kind == Tok::number) {
                        alg->name += "(" + p.text + ")";
                        cur.next();
                    }
                    if (!cur.eat_punct(')')) {
                        cur.error("expected ')'");
                        skip_statement();
                        continue;
                    }
                }
                expect_semi();
                continue;
            }
            if (kw == "generator") {
                cur.next();
                const Token &n = cur.peek();
                if (n.kind != Tok::ident) {
                    cur.error("expected a generator name");
                    skip_statement();
                    continue;
                }
                std::string gname = n.text;
                cur.next();
                static const char *reserved[] = {"lambda", "d", "i", "sqrt2", "sqrt15"};
                bool bad = false;
                for (const char *r : reserved)
                    if (gname == r) {
                        cur.error("'" + gname + "' is a reserved word");
                        bad = true;
                    }
                if (alg->has_gen(gname)) {
                    cur.error("generator '" + gname + "' already declared");
                    bad = true;
                }
                std::optional<Parity> parity;
                std::optional<Rat> weight;
                while (cur.peek().kind == Tok::ident) {
                    std::string attr = cur.peek().text;
                    cur.next();
                    if (!cur.eat_punct('=')) {
                        cur.error("expected '=' after '" + attr + "'");
                        bad = true;
                        break;
                    }
                    if (attr == "parity") {
                        const Token &v = cur.peek();
                        if (v.kind == Tok::ident && v.text == "even")
                            parity = Parity::even;
                        else if (v.kind == Tok::ident && v.text == "odd")
                            parity = Parity::odd;
                        else {
                            cur.error("parity must be 'even' or 'odd'");
                            bad = true;
                        }
                        if (v.kind != Tok::end)
                            cur.next();
                    } else if (attr == "weight") {
                        int sign = 1;
                        while (cur.at_punct('-')) {
                            sign = -sign;
                            cur.next();
                        }
                        const Token &v = cur.peek();
                        if (v.kind != Tok::number) {
                            cur.error("weight must be a rational number");
                            bad = true;
                        } else {
                            try {
                                Rat q(v.text);
                                weight = sign < 0 ? Rat(-q) : q;
                            } catch (const std::exception &) {
                                cur.error("invalid rational '" + v.text + "'");
                                bad = true;
                            }
                            cur.next();
                        }
                    } else {
                        cur.error("unknown generator attribute '" + attr + "'");
                        bad = true;
                        break;
                    }
                }
                if (!parity) {
                    cur.error("generator '" + gname + "' needs parity=odd|even");
                    bad = true;
                }
                if (!weight) {
                    cur.error("generator '" + gname + "' needs weight=Q");
                    bad = true;
                }
                if (!bad)
                    alg->gens.push_back({gname, *parity, weight, next_sort_key++});
                expect_semi();
                continue;
            }
            if (kw == "brackets_default") {
                cur.next();
                const Token &v = cur.peek();
                if (v.kind == Tok::ident && v.text == "zero") {
                    alg->table.zero_default = true;
                    cur.next();
                } else {
                    cur.error("expected 'zero'");
                }
                expect_semi();
                continue;
            }
            if (kw == "charge") {
                cur.next();
                ExprParser p(*alg, cur);
                auto e = p.parse_expr();
                if (e) {
                    bool constant = true;
                    for (const auto &[m, q] : e->terms())
                        if (m != kVacuum)
                            constant = false;
                    if (!constant) {
                        cur.error("charge must be a scalar");
                    } else {
                        auto it = e->terms().find(kVacuum);
                        alg->central_charge = it == e->terms().end() ? Scalar() : it->second;
                    }
                }
                expect_semi();
                continue;
            }
            if (kw == "bracket") {
                cur.next();
                if (!cur.eat_punct('[')) {
                    cur.error("expected '[' after bracket");
                    skip_statement();
                    continue;
                }
                auto gen_ref = [&]() -> int {
                    const Token &g = cur.peek();
                    if (g.kind != Tok::ident || !alg->has_gen(g.text)) {
                        cur.error(g.kind == Tok::ident
                                      ? "unknown generator '" + g.text + "'"
                                      : std::string("expected a generator name"));
                        return -1;
                    }
                    cur.next();
                    return alg->gen_index(g.text);
                };
                int a = gen_ref();
                if (a < 0 || !cur.eat_punct(',')) {
                    if (a >= 0)
                        cur.error("expected ','");
                    skip_statement();
                    continue;
                }
                int b = gen_ref();
                if (b < 0 || !cur.eat_punct(']')) {
                    if (b >= 0)
                        cur.error("expected ']'");
                    skip_statement();
                    continue;
                }
                if (!cur.eat_punct('=')) {
                    cur.error("expected '='");
                    skip_statement();
                    continue;
                }
                ExprParser p(*alg, cur);
                auto poly = p.parse_poly(true);
                if (!poly) {
                    skip_statement();
                    continue;
                }
                // Parity bookkeeping: every coefficient must carry the parity
                // of the pair.
                bool want_odd = (alg->gens[a].parity == Parity::odd) !=
                                (alg->gens[b].parity == Parity::odd);
                for (const auto &[j, coeff] : poly->coeffs()) {
                    auto par = expr_parity(*alg, coeff);
                    if (!par || (*par == Parity::odd) != want_odd) {
                        cur.error("bracket [" + alg->gens[a].name + ", " +
                                  alg->gens[b].name +
                                  "] has a coefficient of the wrong parity");
                        break;
                    }
                }
                alg->table.entries[{a, b}] = std::move(*poly);
                expect_semi();
                continue;
            }
            if (kw == "susy") {
                cur.next();
                ExprParser p(*alg, cur);
                auto e = p.parse_expr();
                if (e)
                    alg->susy_gen = std::move(*e);
                expect_semi();
                continue;
            }
            if (kw == "rewrite") {
                cur.next();
                if (!cur.eat_punct(':')) {
                    cur.error("expected a pattern ':A B:' after rewrite");
                    skip_statement();
                    continue;
                }
                auto h = parse_pattern_item(*alg, cur);
                std::optional<Factor> t2;
                if (h)
                    t2 = parse_pattern_item(*alg, cur);
                if (!h || !t2 || !cur.eat_punct(':')) {
                    if (h && t2)
                        cur.error("expected ':' closing the rewrite pattern");
                    skip_statement();
                    continue;
                }
                if (!cur.eat_punct('=')) {
                    cur.error("expected '='");
                    skip_statement();
                    continue;
                }
                ExprParser p(*alg, cur);
                auto e = p.parse_expr();
                if (e)
                    alg->rewrites.push_back({*h, *t2, std::move(*e)});
                expect_semi();
                continue;
            }
            if (kw == "relation") {
                cur.next();
                ExprParser p(*alg, cur);
                auto e = p.parse_expr();
                if (!e) {
                    skip_statement();
                    continue;
                }
                if (!cur.eat_punct('=')) {
                    cur.error("expected '= 0' after the relation expression");
                    skip_statement();
                    continue;
                }
                const Token &z = cur.peek();
                if (z.kind != Tok::number || z.text != "0") {
                    cur.error("relations must be written EXPR = 0");
                    skip_statement();
                    continue;
                }
                cur.next();
                alg->relations.push_back(std::move(*e));
                expect_semi();
                continue;
            }
            cur.error("unknown statement '" + kw + "'");
            skip_statement();
        } catch (const std::exception &e) {
            cur.error(e.what());
            skip_statement();
        }
    }

    res.algebra = std::move(alg);
    return res;
}

// Renders an algebra as a complete .alg definition; parsing the output
// reproduces the algebra exactly.
inline std::string serialize_algebra(const Algebra &alg) {
    std::string out = "format=1;\n";
    if (!alg.name.empty())
        out += "algebra " + alg.name + ";\n";
    for (const auto &g : alg.gens) {
        out += "generator " + g.name +
               " parity=" + (g.parity == Parity::odd ? "odd" : "even");
        if (g.weight) {
            Rat w = *g.weight;
            out += " weight=" + w.str();
        }
        out += ";\n";
    }
    if (alg.table.zero_default)
        out += "brackets_default zero;\n";
    if (alg.central_charge)
        out += "charge " + render_scalar_factor(*alg.central_charge) + ";\n";
    for (const auto &[key, poly] : alg.table.entries)
        out += "bracket [" + alg.gens[key.first].name + ", " + alg.gens[key.second].name +
               "] = " + render_poly(alg, poly) + ";\n";
    if (alg.susy_gen)
        out += "susy " + render_expr(alg, *alg.susy_gen) + ";\n";
    auto pattern_item = [&](const Factor &f) {
        std::string s = alg.gens[f.gen].name;
        for (int k = 0; k < f.dorder; ++k)
            s = "d(" + s + ")";
        return s;
    };
    for (const auto &rw : alg.rewrites)
        out += "rewrite :" + pattern_item(rw.lhs_head) + " " + pattern_item(rw.lhs_tail) +
               ": = " + render_expr(alg, rw.rhs) + ";\n";
    for (const auto &rel : alg.relations)
        out += "relation " + render_expr(alg, rel) + " = 0;\n";
    return out;
}

// ---- realization files ------------------------------------------------------

// A parsed realization file: algebra references plus named generator images
// as (normalized) expression text to be evaluated over the host.
struct RealizationSpec {
    std::string def_ref;
    std::string host_ref;
    std::vector<std::pair<std::string, std::string>> maps;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

inline RealizationSpec parse_realization(std::string_view text) {
    using namespace dsl_detail;
    RealizationSpec res;
    auto toks = lex(text, res.diagnostics);
    Cursor cur{&toks, 0, &res.diagnostics};

    auto skip_statement = [&] {
        while (cur.peek().kind != Tok::end && !cur.at_punct(';'))
            cur.next();
        cur.eat_punct(';');
    };
    // REF = "path" | builtin:NAME | builtin:NAME(PARAM)
    auto parse_ref = [&]() -> std::string {
        const Token &t = cur.peek();
        if (t.kind == Tok::str) {
            cur.next();
            return t.text;
        }
        if (t.kind == Tok::ident && t.text == "builtin") {
            cur.next();
            if (!cur.eat_punct(':')) {
                cur.error("expected ':' after builtin");
                return "";
            }
            const Token &n = cur.peek();
            if (n.kind != Tok::ident) {
                cur.error("expected a builtin name");
                return "";
            }
            std::string ref = "builtin:" + n.text;
            cur.next();
            if (cur.at_punct('(')) {
                cur.next();
                const Token &p = cur.peek();
                if (p.kind != Tok::number) {
                    cur.error("expected a parameter");
                    return "";
                }
                ref += "(" + p.text + ")";
                cur.next();
                if (!cur.eat_punct(')')) {
                    cur.error("expected ')'");
                    return "";
                }
            }
            return ref;
        }
        cur.error("expected a quoted path or builtin:NAME");
        return "";
    };

    while (cur.peek().kind != Tok::end && !cur.overflowed()) {
        const Token &head = cur.peek();
        if (head.kind != Tok::ident) {
            cur.error("expected a statement");
            skip_statement();
            continue;
        }
        std::string kw = head.text;
        if (kw == "format") {
            cur.next();
            if (!cur.eat_punct('='))
                cur.error("expected '=' after format");
            else {
                const Token &v = cur.peek();
                if (v.kind != Tok::number || v.text != "1")
                    cur.error("unsupported format version");
                if (v.kind != Tok::end)
                    cur.next();
            }
            if (!cur.eat_punct(';')) {
                cur.error("expected ';'");
                skip_statement();
            }
            continue;
        }
        if (kw == "def" || kw == "host") {
            cur.next();
            std::string ref = parse_ref();
            if (!ref.empty())
                (kw == "def" ? res.def_ref : res.host_ref) = ref;
            if (!cur.eat_punct(';')) {
                cur.error("expected ';'");
                skip_statement();
            }
            continue;
        }
        if (kw == "map") {
            cur.next();
            const Token &n = cur.peek();
            if (n.kind != Tok::ident) {
                cur.error("expected a generator name after map");
                skip_statement();
                continue;
            }
            std::string name = n.text;
            cur.next();
            if (!cur.eat_punct('=')) {
                cur.error("expected '='");
                skip_statement();
                continue;
            }
            // Collect the raw expression tokens up to ';' and keep their
            // normalized text (token texts joined by spaces — the grammar is
            // whitespace-insensitive).
            std::string body;
            bool saw = false;
            while (cur.peek().kind != Tok::end && !cur.at_punct(';')) {
                const Token &t = cur.peek();
                if (t.kind == Tok::str) {
                    cur.error("strings are not allowed in map expressions");
                    break;
                }
                if (!body.empty())
                    body += " ";
                body += t.text;
                saw = true;
                cur.next();
            }
            if (!saw)
                cur.error("empty map expression");
            else
                res.maps.emplace_back(std::move(name), std::move(body));
            if (!cur.eat_punct(';')) {
                cur.error("expected ';'");
                skip_statement();
            }
            continue;
        }
        cur.error("unknown statement '" + kw + "' in realization file");
        skip_statement();
    }
    if (res.def_ref.empty())
        cur.error("realization file needs a 'def' statement");
    if (res.host_ref.empty())
        cur.error("realization file needs a 'host' statement");
    return res;
}

// Renders a realization back into the text format: builtin references stay
// bare, anything else is quoted as a path.
inline std::string serialize_realization(const RealizationSpec &spec) {
    auto ref = [](const std::string &r) {
        if (r.rfind("builtin:", 0) == 0)
            return r;
        return "\"" + r + "\"";
    };
    std::string out = "format=1;\n";
    out += "def " + ref(spec.def_ref) + ";\n";
    out += "host " + ref(spec.host_ref) + ";\n";
    for (const auto &[name, body] : spec.maps)
        out += "map " + name + " = " + body + ";\n";
    return out;
}

// Evaluates a parsed realization over resolved algebras: one image per
// defining generator, in generator order. Missing or unknown names and
// expression problems are reported as diagnostics.
inline std::pair<std::vector<FieldExpr>, std::vector<Diagnostic>>
realization_images(const RealizationSpec &spec, const Algebra &def, const Algebra &host) {
    std::vector<FieldExpr> images(def.gens.size());
    std::vector<bool> seen(def.gens.size(), false);
    std::vector<Diagnostic> diags;
    for (const auto &[name, body] : spec.maps) {
        if (!def.has_gen(name)) {
            diags.push_back({0, 0, "map names unknown generator '" + name + "'"});
            continue;
        }
        int g = def.gen_index(name);
        if (seen[g])
            diags.push_back({0, 0, "generator '" + name + "' mapped twice"});
        auto [expr, ediags] = parse_expression(host, body);
        for (auto &d : ediags)
            diags.push_back({0, 0, "in map " + name + ": " + d.message});
        if (expr) {
            images[g] = std::move(*expr);
            seen[g] = true;
        }
    }
    for (std::size_t g = 0; g < seen.size(); ++g)
        if (!seen[g])
            diags.push_back({0, 0, "generator '" + def.gens[g].name + "' has no image"});
    return {std::move(images), std::move(diags)};
}

} // namespace lf
