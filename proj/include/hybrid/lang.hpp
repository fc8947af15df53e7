#pragma once

#include "hybrid/linear_ode.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hybrid::lang {

struct var_table {
    std::vector<std::string> names;

    std::optional<std::size_t> index(const std::string& n) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return i;
        return std::nullopt;
    }
    std::size_t size() const { return names.size(); }
};

/// Abstract syntax: atomic programs, skip, sequencing, guarded choice and
/// while-loops over a fixed finite variable set.
struct program {
    enum class kind { atomic, skip, seq, choice, loop };
    kind k = kind::skip;
    ode::atomic_program atom;
    ode::guard test;
    std::vector<program> children; // seq/choice: 2, loop: 1
};

struct diagnostic {
    int line = 0;
    int col = 0;
    std::string message;
};

struct parse_result {
    std::optional<program> prog;
    var_table vars;
    std::vector<diagnostic> diagnostics;
    bool ok() const { return prog.has_value() && diagnostics.empty(); }
};

namespace detail {

struct token {
    enum class kind {
        ident, number, assign, prime, eq, lt, le, gt, ge, ne, tilde, land, lor,
        plus, minus, star, lparen, rparen, lbrace, rbrace, semi, comma, amp, end
    };
    kind k = kind::end;
    std::string text;
    double value = 0;
    int line = 1, col = 1;
};

class lexer {
public:
    explicit lexer(std::string_view src) : src_(src) { advance(); }

    const token& peek() const { return cur_; }
    token take() {
        token t = cur_;
        advance();
        return t;
    }

    bool error() const { return !err_.empty(); }
    diagnostic error_diag() const { return {err_line_, err_col_, err_}; }

private:
    void fail(const std::string& msg) {
        if (err_.empty()) {
            err_ = msg;
            err_line_ = line_;
            err_col_ = col_;
        }
        cur_ = token{token::kind::end, "", 0, line_, col_};
    }

    char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else if (c == '#') { // line comment
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        int line = line_, col = col_;
        auto make = [&](token::kind k, std::string text, std::size_t len) {
            cur_ = token{k, std::move(text), 0, line, col};
            pos_ += len;
            col_ += static_cast<int>(len);
        };
        if (pos_ >= src_.size()) {
            cur_ = token{token::kind::end, "", 0, line, col};
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = pos_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            make(token::kind::ident, std::string(src_.substr(pos_, j - pos_)), j - pos_);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(at(pos_ + 1))))) {
            std::size_t j = pos_;
            while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) ||
                                       src_[j] == '.' || src_[j] == 'e' || src_[j] == 'E' ||
                                       ((src_[j] == '+' || src_[j] == '-') && j > pos_ &&
                                        (src_[j - 1] == 'e' || src_[j - 1] == 'E'))))
                ++j;
            std::string text(src_.substr(pos_, j - pos_));
            try {
                double v = std::stod(text);
                cur_ = token{token::kind::number, text, v, line, col};
            } catch (...) {
                fail("malformed number '" + text + "'");
                return;
            }
            pos_ = j;
            col_ += static_cast<int>(text.size());
            return;
        }
        switch (c) {
            case ':':
                if (at(pos_ + 1) == '=') return make(token::kind::assign, ":=", 2);
                return fail("expected ':=' after ':'");
            case '\'': return make(token::kind::prime, "'", 1);
            case '=': return make(token::kind::eq, "=", 1);
            case '<':
                if (at(pos_ + 1) == '=') return make(token::kind::le, "<=", 2);
                return make(token::kind::lt, "<", 1);
            case '>':
                if (at(pos_ + 1) == '=') return make(token::kind::ge, ">=", 2);
                return make(token::kind::gt, ">", 1);
            case '!':
                if (at(pos_ + 1) == '=') return make(token::kind::ne, "!=", 2);
                return fail("expected '!=' after '!'");
            case '~': return make(token::kind::tilde, "~", 1);
            case '/':
                if (at(pos_ + 1) == '\\') return make(token::kind::land, "/\\", 2);
                return fail("expected '/\\' after '/'");
            case '\\':
                if (at(pos_ + 1) == '/') return make(token::kind::lor, "\\/", 2);
                return fail("expected '\\/' after '\\'");
            case '+': return make(token::kind::plus, "+", 1);
            case '-': return make(token::kind::minus, "-", 1);
            case '*': return make(token::kind::star, "*", 1);
            case '(': return make(token::kind::lparen, "(", 1);
            case ')': return make(token::kind::rparen, ")", 1);
            case '{': return make(token::kind::lbrace, "{", 1);
            case '}': return make(token::kind::rbrace, "}", 1);
            case ';': return make(token::kind::semi, ";", 1);
            case ',': return make(token::kind::comma, ",", 1);
            case '&': return make(token::kind::amp, "&", 1);
            default: return fail(std::string("unexpected character '") + c + "'");
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    token cur_;
    std::string err_;
    int err_line_ = 0, err_col_ = 0;
};

class parser {
public:
    parser(std::string_view src, std::vector<diagnostic>& diags)
        : toks_(tokenize(src, diags)), diags_(diags) {}

    parse_result parse_file() {
        parse_result res;
        if (!diags_.empty()) return res;
        expect_keyword("vars");
        if (failed_) return res;
        while (true) {
            token t = take();
            if (t.k != token::kind::ident) {
                error(t, "expected a variable name");
                return res;
            }
            if (vars_.index(t.text)) {
                error(t, "duplicate variable '" + t.text + "'");
                return res;
            }
            vars_.names.push_back(t.text);
            token n = take();
            if (n.k == token::kind::comma) continue;
            if (n.k == token::kind::semi) break;
            error(n, "expected ',' or ';' in the vars header");
            return res;
        }
        auto p = parse_seq();
        if (failed_) return res;
        token t = peek();
        if (t.k != token::kind::end) {
            error(t, "trailing input after the program");
            return res;
        }
        res.prog = std::move(p);
        res.vars = vars_;
        return res;
    }

private:
    static std::vector<token> tokenize(std::string_view src, std::vector<diagnostic>& diags) {
        std::vector<token> out;
        lexer lx(src);
        while (true) {
            if (lx.error()) {
                diags.push_back(lx.error_diag());
                break;
            }
            token t = lx.take();
            out.push_back(t);
            if (t.k == token::kind::end) break;
        }
        if (lx.error() && (out.empty() || out.back().k != token::kind::end))
            out.push_back(token{});
        return out;
    }

    const token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    void error(const token& t, const std::string& msg) {
        if (!failed_) diags_.push_back({t.line, t.col, msg});
        failed_ = true;
    }

    bool expect(token::kind k, const char* what) {
        token t = take();
        if (t.k != k) {
            error(t, std::string("expected ") + what);
            return false;
        }
        return true;
    }

    void expect_keyword(const std::string& kw) {
        token t = take();
        if (t.k != token::kind::ident || t.text != kw) error(t, "expected '" + kw + "'");
    }

    bool at_keyword(const std::string& kw) const {
        return peek().k == token::kind::ident && peek().text == kw;
    }

    std::size_t dim() const { return vars_.size(); }

    // --- terms: affine expressions ---------------------------------------
    ode::lin_term parse_term() {
        ode::lin_term acc = parse_term_factor();
        while (!failed_) {
            if (peek().k == token::kind::plus) {
                take();
                acc += parse_term_factor();
            } else if (peek().k == token::kind::minus) {
                take();
                ode::lin_term rhs = parse_term_factor();
                rhs.scale(-1.0);
                acc += rhs;
            } else {
                break;
            }
        }
        return acc;
    }

    ode::lin_term parse_term_factor() {
        bool neg = false;
        while (peek().k == token::kind::minus) {
            take();
            neg = !neg;
        }
        ode::lin_term t = parse_term_atom();
        while (peek().k == token::kind::star) {
            token star = take();
            ode::lin_term rhs = parse_term_atom();
            bool lconst = is_constant(t), rconst = is_constant(rhs);
            if (lconst) {
                rhs.scale(t.constant);
                t = rhs;
            } else if (rconst) {
                t.scale(rhs.constant);
            } else {
                error(star, "nonlinear product of variables");
                return t;
            }
        }
        if (neg) t.scale(-1.0);
        return t;
    }

    static bool is_constant(const ode::lin_term& t) {
        for (double c : t.coeff)
            if (c != 0.0) return false;
        return true;
    }

    ode::lin_term parse_term_atom() {
        token t = take();
        if (t.k == token::kind::number) return ode::lin_term::literal(t.value, dim());
        if (t.k == token::kind::ident) {
            auto i = vars_.index(t.text);
            if (!i) {
                error(t, "undeclared variable '" + t.text + "'");
                return ode::lin_term::literal(0, dim());
            }
            return ode::lin_term::variable(*i, dim());
        }
        if (t.k == token::kind::lparen) {
            ode::lin_term inner = parse_term();
            expect(token::kind::rparen, "')'");
            return inner;
        }
        error(t, "expected a term");
        return ode::lin_term::literal(0, dim());
    }

    // --- ODE bound predicates ---------------------------------------------
    ode::predicate parse_predicate() {
        ode::predicate acc = parse_predicate_factor();
        while (!failed_ && peek().k == token::kind::lor) {
            take();
            acc = ode::predicate::disj(std::move(acc), parse_predicate_factor());
        }
        return acc;
    }

    ode::predicate parse_predicate_factor() {
        ode::predicate acc = parse_predicate_atom();
        while (!failed_ && peek().k == token::kind::land) {
            take();
            acc = ode::predicate::conj(std::move(acc), parse_predicate_atom());
        }
        return acc;
    }

    ode::predicate parse_predicate_atom() {
        if (peek().k == token::kind::lparen) {
            // grouping vs. a parenthesized term beginning an atom
            std::size_t mark = pos_;
            std::size_t save_d = diags_.size();
            bool save_f = failed_;
            take();
            ode::predicate inner = parse_predicate();
            if (!failed_ && peek().k == token::kind::rparen) {
                take();
                if (peek().k != token::kind::le && peek().k != token::kind::ge) return inner;
            }
            pos_ = mark;
            diags_.resize(save_d);
            failed_ = save_f;
        }
        ode::lin_term lhs = parse_term();
        token op = take();
        if (op.k == token::kind::le)
            return ode::predicate::atom_le(std::move(lhs), parse_term());
        if (op.k == token::kind::ge)
            return ode::predicate::atom_ge(std::move(lhs), parse_term());
        if (op.k == token::kind::lt || op.k == token::kind::gt)
            error(op, "strict comparisons are not allowed in ODE bounds (use <= or >=)");
        else
            error(op, "expected '<=' or '>=' in an ODE bound");
        return ode::predicate::atom_le(ode::lin_term::literal(0, dim()),
                                       ode::lin_term::literal(0, dim()));
    }

    // --- guards -------------------------------------------------------------
    ode::guard parse_guard() {
        ode::guard acc = parse_guard_factor();
        while (!failed_ && peek().k == token::kind::lor) {
            take();
            acc = ode::guard::disj(std::move(acc), parse_guard_factor());
        }
        return acc;
    }

    ode::guard parse_guard_factor() {
        ode::guard acc = parse_guard_atom();
        while (!failed_ && peek().k == token::kind::land) {
            take();
            acc = ode::guard::conj(std::move(acc), parse_guard_atom());
        }
        return acc;
    }

    ode::guard parse_guard_atom() {
        if (at_keyword("true")) {
            take();
            return ode::guard::lit(true);
        }
        if (at_keyword("false")) {
            take();
            return ode::guard::lit(false);
        }
        if (peek().k == token::kind::tilde) {
            take();
            return ode::guard::neg(parse_guard_atom());
        }
        if (peek().k == token::kind::lparen) {
            std::size_t mark = pos_;
            std::size_t save_d = diags_.size();
            bool save_f = failed_;
            take();
            ode::guard inner = parse_guard();
            if (!failed_ && peek().k == token::kind::rparen) {
                take();
                if (!starts_comparison()) return inner;
            }
            pos_ = mark;
            diags_.resize(save_d);
            failed_ = save_f;
        }
        ode::lin_term lhs = parse_term();
        token op = take();
        switch (op.k) {
            case token::kind::eq: return ode::guard::eq(std::move(lhs), parse_term());
            case token::kind::lt: return ode::guard::lt(std::move(lhs), parse_term());
            case token::kind::ne:
                return ode::guard::neg(ode::guard::eq(std::move(lhs), parse_term()));
            case token::kind::le: { // a <= b  ==  a < b \/ a = b
                ode::lin_term rhs = parse_term();
                return ode::guard::disj(ode::guard::lt(lhs, rhs), ode::guard::eq(lhs, rhs));
            }
            case token::kind::gt: { // a > b  ==  b < a
                ode::lin_term rhs = parse_term();
                return ode::guard::lt(std::move(rhs), std::move(lhs));
            }
            case token::kind::ge: { // a >= b  ==  b < a \/ b = a
                ode::lin_term rhs = parse_term();
                return ode::guard::disj(ode::guard::lt(rhs, lhs), ode::guard::eq(rhs, lhs));
            }
            default:
                error(op, "expected a comparison in a guard");
                return ode::guard::lit(false);
        }
    }

    bool starts_comparison() const {
        switch (peek().k) {
            case token::kind::eq:
            case token::kind::lt:
            case token::kind::le:
            case token::kind::gt:
            case token::kind::ge:
            case token::kind::ne: return true;
            default: return false;
        }
    }

    // --- programs -----------------------------------------------------------
    program parse_seq() {
        program acc = parse_item();
        while (!failed_ && peek().k == token::kind::semi) {
            take();
            program rhs = parse_item();
            program seq;
            seq.k = program::kind::seq;
            seq.children = {std::move(acc), std::move(rhs)};
            acc = std::move(seq);
        }
        return acc;
    }

    program parse_item() {
        if (at_keyword("skip")) {
            take();
            program p;
            p.k = program::kind::skip;
            return p;
        }
        if (at_keyword("wait")) {
            token kw = take();
            expect(token::kind::lparen, "'(' after wait");
            ode::lin_term r = parse_term();
            expect(token::kind::rparen, "')'");
            if (!is_constant(r) || r.constant < 0) {
                error(kw, "wait needs a non-negative constant");
                return {};
            }
            program p;
            p.k = program::kind::atomic;
            p.atom.k = ode::atomic_program::kind::ode_timed;
            p.atom.dyn = ode::dynamics::zero(static_cast<int>(dim()));
            p.atom.bound_r = r.constant;
            return p;
        }
        if (at_keyword("if")) {
            take();
            program p;
            p.k = program::kind::choice;
            p.test = parse_guard();
            expect_keyword("then");
            expect(token::kind::lbrace, "'{'");
            program then_branch = parse_seq();
            expect(token::kind::rbrace, "'}'");
            expect_keyword("else");
            expect(token::kind::lbrace, "'{'");
            program else_branch = parse_seq();
            expect(token::kind::rbrace, "'}'");
            p.children = {std::move(then_branch), std::move(else_branch)};
            return p;
        }
        if (at_keyword("while")) {
            take();
            program p;
            p.k = program::kind::loop;
            p.test = parse_guard();
            expect(token::kind::lbrace, "'{'");
            program body = parse_seq();
            expect(token::kind::rbrace, "'}'");
            p.children = {std::move(body)};
            return p;
        }
        if (peek().k == token::kind::ident && peek(1).k == token::kind::assign)
            return parse_assign_group(false);
        if (peek().k == token::kind::lparen) {
            // assignment group, ODE, or a parenthesized program
            if (peek(1).k == token::kind::ident && peek(2).k == token::kind::assign) {
                take();
                program p = parse_assign_group(true);
                expect(token::kind::rparen, "')'");
                return p;
            }
            if (peek(1).k == token::kind::ident && peek(2).k == token::kind::prime)
                return parse_ode();
            take();
            program p = parse_seq();
            expect(token::kind::rparen, "')'");
            return p;
        }
        error(peek(), "expected a program");
        return {};
    }

    program parse_assign_group(bool grouped) {
        program p;
        p.k = program::kind::atomic;
        p.atom.k = ode::atomic_program::kind::assign;
        p.atom.updates.clear();
        for (std::size_t i = 0; i < dim(); ++i)
            p.atom.updates.push_back(ode::lin_term::variable(i, dim()));
        while (true) {
            token name = take();
            if (name.k != token::kind::ident) {
                error(name, "expected a variable on the left of ':='");
                return p;
            }
            auto idx = vars_.index(name.text);
            if (!idx) {
                error(name, "undeclared variable '" + name.text + "'");
                return p;
            }
            if (!expect(token::kind::assign, "':='")) return p;
            p.atom.updates[*idx] = parse_term();
            if (grouped && peek().k == token::kind::comma) {
                take();
                continue;
            }
            break;
        }
        return p;
    }

    program parse_ode() {
        token open = take(); // '('
        program p;
        p.k = program::kind::atomic;
        p.atom.dyn = ode::dynamics::zero(static_cast<int>(dim()));
        std::vector<bool> seen(dim(), false);
        while (true) {
            token name = take();
            if (name.k != token::kind::ident) {
                error(name, "expected a variable before '''");
                return p;
            }
            auto idx = vars_.index(name.text);
            if (!idx) {
                error(name, "undeclared variable '" + name.text + "'");
                return p;
            }
            if (seen[*idx]) {
                error(name, "duplicate derivative for '" + name.text + "'");
                return p;
            }
            seen[*idx] = true;
            if (!expect(token::kind::prime, "'''")) return p;
            if (!expect(token::kind::eq, "'='")) return p;
            ode::lin_term rhs = parse_term();
            for (std::size_t j = 0; j < dim(); ++j)
                p.atom.dyn.A(static_cast<int>(*idx), static_cast<int>(j)) = rhs.coeff[j];
            p.atom.dyn.c(static_cast<int>(*idx)) = rhs.constant;
            if (peek().k == token::kind::comma) {
                take();
                continue;
            }
            break;
        }
        if (!expect(token::kind::amp, "'&' introducing the bound")) return p;
        // timed bound (constant term) or predicate bound
        std::size_t mark = pos_;
        std::size_t save_d = diags_.size();
        bool save_f = failed_;
        ode::lin_term r = parse_term();
        if (!failed_ && peek().k == token::kind::rparen && is_constant(r)) {
            take();
            if (r.constant < 0) {
                error(open, "negative time bound");
                return p;
            }
            p.atom.k = ode::atomic_program::kind::ode_timed;
            p.atom.bound_r = r.constant;
            return p;
        }
        pos_ = mark;
        diags_.resize(save_d);
        failed_ = save_f;
        p.atom.k = ode::atomic_program::kind::ode_pred;
        p.atom.bound_pred = parse_predicate();
        expect(token::kind::rparen, "')'");
        return p;
    }

    std::vector<token> toks_;
    std::vector<diagnostic>& diags_;
    std::size_t pos_ = 0;
    var_table vars_;
    bool failed_ = false;
};

} // namespace detail

/// Parses `vars x, y; <program>`; diagnostics carry line/column positions.
inline parse_result parse(std::string_view text) {
    std::vector<diagnostic> diags;
    detail::parser p(text, diags);
    parse_result res = p.parse_file();
    res.diagnostics = std::move(diags);
    if (!res.diagnostics.empty()) res.prog.reset();
    return res;
}

} // namespace hybrid::lang
