#pragma once

/// @file logic.hpp
/// Formula languages over expectation terms, likelihood terms, gambles, and
/// function variables: abstract syntax, a shared concrete grammar with
/// parsers and canonical printers, relation desugaring, disjunctive normal
/// form, the term rewritings between languages, and model evaluation.

#include "expecta/expectation.hpp"
#include "expecta/gamble.hpp"
#include "expecta/measures.hpp"
#include "expecta/prop.hpp"
#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace expecta {

enum class RelOp { Ge, Gt, Le, Lt, Eq };

inline std::string to_string(RelOp rel) {
    switch (rel) {
        case RelOp::Ge: return ">=";
        case RelOp::Gt: return ">";
        case RelOp::Le: return "<=";
        case RelOp::Lt: return "<";
        case RelOp::Eq: return "=";
    }
    throw InternalError("unreachable relation");
}

/// One coefficient-weighted expectation term a*E(gamble).
struct ExpTerm {
    Rat coeff;
    SyntacticGamble gamble;

    bool operator==(const ExpTerm& other) const {
        return coeff == other.coeff && gamble == other.gamble;
    }
};

/// a1*E(g1) + ... + ak*E(gk) REL bound, k >= 1.
struct ExpIneq {
    std::vector<ExpTerm> terms;
    RelOp rel = RelOp::Ge;
    Rat bound;

    bool operator==(const ExpIneq& other) const {
        return rel == other.rel && bound == other.bound && terms == other.terms;
    }
};

/// One coefficient-weighted likelihood term a*L(event).
struct LikTerm {
    Rat coeff;
    PropFormula event;

    bool operator==(const LikTerm& other) const {
        return coeff == other.coeff && event == other.event;
    }
};

/// a1*L(phi1) + ... + ak*L(phik) REL bound, k >= 1.
struct LikIneq {
    std::vector<LikTerm> terms;
    RelOp rel = RelOp::Ge;
    Rat bound;

    bool operator==(const LikIneq& other) const {
        return rel == other.rel && bound == other.bound && terms == other.terms;
    }
};

/// gamble REL bound, compared pointwise against the constant gamble.
struct GambleIneq {
    SyntacticGamble gamble;
    RelOp rel = RelOp::Ge;
    Rat bound;

    bool operator==(const GambleIneq& other) const {
        return rel == other.rel && bound == other.bound && gamble == other.gamble;
    }
};

/// One coefficient-weighted function variable a*v.
struct FuncTerm {
    Rat coeff;
    std::string var;

    bool operator==(const FuncTerm& other) const {
        return coeff == other.coeff && var == other.var;
    }
};

/// a1*v1 + ... + ak*vk REL bound, compared pointwise over the domain.
struct FuncIneq {
    std::vector<FuncTerm> terms;
    RelOp rel = RelOp::Ge;
    Rat bound;

    bool operator==(const FuncIneq& other) const {
        return rel == other.rel && bound == other.bound && terms == other.terms;
    }
};

/// Boolean combinations of atomic inequalities. Immutable; nodes are shared
/// on copy.
template <class A>
class Formula {
  public:
    enum class Kind { Atom, Not, And, Or, Implies };

    static Formula atom(A value) {
        auto node = std::make_shared<Node>();
        node->kind = Kind::Atom;
        node->atom = std::move(value);
        return Formula(std::move(node));
    }
    static Formula neg(Formula f) {
        auto node = std::make_shared<Node>();
        node->kind = Kind::Not;
        node->a = std::move(f.node_);
        return Formula(std::move(node));
    }
    static Formula conj(Formula lhs, Formula rhs) { return binary(Kind::And, std::move(lhs), std::move(rhs)); }
    static Formula disj(Formula lhs, Formula rhs) { return binary(Kind::Or, std::move(lhs), std::move(rhs)); }
    static Formula implies(Formula lhs, Formula rhs) {
        return binary(Kind::Implies, std::move(lhs), std::move(rhs));
    }

    Kind kind() const { return node_->kind; }
    const A& leaf() const { return node_->atom; }
    Formula left() const { return Formula(node_->a); }
    Formula right() const { return Formula(node_->b); }
    Formula child() const { return Formula(node_->a); }

    bool operator==(const Formula& other) const { return equal(node_.get(), other.node_.get()); }

  private:
    struct Node {
        Kind kind = Kind::Atom;
        A atom{};
        std::shared_ptr<const Node> a, b;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Formula(NodePtr node) : node_(std::move(node)) {}

    static Formula binary(Kind kind, Formula lhs, Formula rhs) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->a = std::move(lhs.node_);
        node->b = std::move(rhs.node_);
        return Formula(std::move(node));
    }

    static bool equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case Kind::Atom:
                return x->atom == y->atom;
            case Kind::Not:
                return equal(x->a.get(), y->a.get());
            default:
                return equal(x->a.get(), y->a.get()) && equal(x->b.get(), y->b.get());
        }
    }

    NodePtr node_;
};

using ExpFormula = Formula<ExpIneq>;
using LikFormula = Formula<LikIneq>;
using GambleFormula = Formula<GambleIneq>;
using FuncFormula = Formula<FuncIneq>;

// ---------------------------------------------------------------------------
// Lexing and parsing
// ---------------------------------------------------------------------------

namespace detail {

enum class TokType { LParen, RParen, Not, And, Or, Implies, Plus, Minus, Star, RelOp, Number, Ident, End };

struct Token {
    TokType type = TokType::End;
    std::string text;
    RelOp rel = RelOp::Ge;
    std::size_t pos = 0;
};

inline std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](TokType type, std::string lexeme, std::size_t pos) {
        Token tok;
        tok.type = type;
        tok.text = std::move(lexeme);
        tok.pos = pos;
        out.push_back(std::move(tok));
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (c == '(') { push(TokType::LParen, "(", start); ++i; continue; }
        if (c == ')') { push(TokType::RParen, ")", start); ++i; continue; }
        if (c == '!') { push(TokType::Not, "!", start); ++i; continue; }
        if (c == '&') { push(TokType::And, "&", start); ++i; continue; }
        if (c == '|') { push(TokType::Or, "|", start); ++i; continue; }
        if (c == '+') { push(TokType::Plus, "+", start); ++i; continue; }
        if (c == '-') { push(TokType::Minus, "-", start); ++i; continue; }
        if (c == '*') { push(TokType::Star, "*", start); ++i; continue; }
        if (c == '=') {
            if (i + 1 < text.size() && text[i + 1] == '>') {
                push(TokType::Implies, "=>", start);
                i += 2;
            } else {
                push(TokType::RelOp, "=", start);
                out.back().rel = RelOp::Eq;
                ++i;
            }
            continue;
        }
        if (c == '>' || c == '<') {
            const bool eq = i + 1 < text.size() && text[i + 1] == '=';
            RelOp rel = c == '>' ? (eq ? RelOp::Ge : RelOp::Gt) : (eq ? RelOp::Le : RelOp::Lt);
            push(TokType::RelOp, eq ? std::string{c, '='} : std::string{c}, start);
            out.back().rel = rel;
            i += eq ? 2 : 1;
            continue;
        }
        if (c >= '0' && c <= '9') {
            std::size_t j = i;
            while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
            if (j < text.size() && text[j] == '/') {
                std::size_t k = j + 1;
                while (k < text.size() && text[k] >= '0' && text[k] <= '9') ++k;
                if (k == j + 1)
                    throw ParseError("missing denominator at position " + std::to_string(j));
                j = k;
            }
            push(TokType::Number, std::string(text.substr(i, j - i)), start);
            i = j;
            continue;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            std::size_t j = i;
            while (j < text.size() &&
                   ((text[j] >= 'a' && text[j] <= 'z') || (text[j] >= 'A' && text[j] <= 'Z') ||
                    (text[j] >= '0' && text[j] <= '9') || text[j] == '_'))
                ++j;
            push(TokType::Ident, std::string(text.substr(i, j - i)), start);
            i = j;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "' at position " +
                         std::to_string(start));
    }
    push(TokType::End, "", text.size());
    return out;
}

class TokenStream {
  public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
    bool at(TokType type) const { return tokens_[pos_].type == type; }

    bool accept(TokType type) {
        if (!at(type)) return false;
        next();
        return true;
    }

    const Token& expect(TokType type, const std::string& what) {
        if (!at(type)) fail("expected " + what);
        return next();
    }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& tok = peek();
        const std::string got = tok.type == TokType::End ? "end of input" : "'" + tok.text + "'";
        throw ParseError(what + ", found " + got + " at position " + std::to_string(tok.pos));
    }

    std::size_t save() const { return pos_; }
    void restore(std::size_t mark) { pos_ = mark; }

  private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

inline bool lowercase_ident(const Token& tok) {
    return tok.type == TokType::Ident && tok.text[0] >= 'a' && tok.text[0] <= 'z';
}

/// prop := por ['=>' prop]; por := pand ('|' pand)*; pand := punit ('&' punit)*;
/// punit := '!' punit | '(' prop ')' | 'true' | 'false' | ident
inline PropFormula parse_prop(TokenStream& ts);

inline PropFormula parse_prop_unit(TokenStream& ts) {
    if (ts.accept(TokType::Not)) return PropFormula::neg(parse_prop_unit(ts));
    if (ts.accept(TokType::LParen)) {
        PropFormula inner = parse_prop(ts);
        ts.expect(TokType::RParen, "')'");
        return inner;
    }
    if (lowercase_ident(ts.peek())) {
        const std::string name = ts.next().text;
        if (name == "true") return PropFormula::tru();
        if (name == "false") return PropFormula::fls();
        return PropFormula::prop(name);
    }
    ts.fail("expected a propositional formula");
}

inline PropFormula parse_prop_conj(TokenStream& ts) {
    PropFormula out = parse_prop_unit(ts);
    while (ts.accept(TokType::And)) out = PropFormula::conj(std::move(out), parse_prop_unit(ts));
    return out;
}

inline PropFormula parse_prop_disj(TokenStream& ts) {
    PropFormula out = parse_prop_conj(ts);
    while (ts.accept(TokType::Or)) out = PropFormula::disj(std::move(out), parse_prop_conj(ts));
    return out;
}

inline PropFormula parse_prop(TokenStream& ts) {
    PropFormula out = parse_prop_disj(ts);
    if (ts.accept(TokType::Implies)) return PropFormula::implies(std::move(out), parse_prop(ts));
    return out;
}

inline Rat parse_number(TokenStream& ts) {
    const bool negative = ts.accept(TokType::Minus);
    const Token& tok = ts.expect(TokType::Number, "a rational");
    Rat value = parse_rat(tok.text);
    return negative ? Rat(-value) : value;
}

/// Merges structurally equal formulas, keeps first-occurrence order, drops
/// zero coefficients. The empty result is the constant-0 gamble.
inline SyntacticGamble merge_gamble(const SyntacticGamble& g) {
    SyntacticGamble out;
    for (const auto& term : g) {
        bool found = false;
        for (auto& kept : out) {
            if (kept.formula == term.formula) {
                kept.coeff += term.coeff;
                found = true;
                break;
            }
        }
        if (!found) out.push_back(term);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const GambleTerm& t) { return t.coeff == 0; }),
              out.end());
    return out;
}

/// gamble := ['-'] gterm (('+'|'-') gterm)*; gterm := rat ['*' prop] | prop.
/// A bare rational r stands for r*true.
inline SyntacticGamble parse_gamble(TokenStream& ts) {
    SyntacticGamble out;
    bool negate = ts.accept(TokType::Minus);
    while (true) {
        if (ts.at(TokType::Number)) {
            Rat coeff = parse_rat(ts.next().text);
            if (negate) coeff = -coeff;
            if (ts.accept(TokType::Star)) {
                out.push_back({std::move(coeff), parse_prop(ts)});
            } else {
                out.push_back({std::move(coeff), PropFormula::tru()});
            }
        } else {
            PropFormula f = parse_prop(ts);
            out.push_back({negate ? Rat(-1) : Rat(1), std::move(f)});
        }
        if (ts.accept(TokType::Plus)) {
            negate = false;
        } else if (ts.accept(TokType::Minus)) {
            negate = true;
        } else {
            break;
        }
    }
    return merge_gamble(out);
}

/// term := ['-'] signedterm (('+'|'-') signedterm)*;
/// signedterm := [rat '*'] head '(' body ')' with head E or L.
template <class Term, class ParseBody>
std::vector<Term> parse_term_list(TokenStream& ts, const std::string& head, ParseBody&& body) {
    std::vector<Term> out;
    bool negate = ts.accept(TokType::Minus);
    while (true) {
        Rat coeff(1);
        if (ts.at(TokType::Number)) {
            coeff = parse_rat(ts.next().text);
            ts.expect(TokType::Star, "'*'");
        }
        if (negate) coeff = -coeff;
        if (!(ts.at(TokType::Ident) && ts.peek().text == head))
            ts.fail("expected " + head + "(...)");
        ts.next();
        ts.expect(TokType::LParen, "'('");
        out.push_back({std::move(coeff), body(ts)});
        ts.expect(TokType::RParen, "')'");
        if (ts.accept(TokType::Plus)) {
            negate = false;
        } else if (ts.accept(TokType::Minus)) {
            negate = true;
        } else {
            break;
        }
    }
    return out;
}

inline const SyntacticGamble& payload(const ExpTerm& t) { return t.gamble; }
inline const PropFormula& payload(const LikTerm& t) { return t.event; }
inline const std::string& payload(const FuncTerm& t) { return t.var; }

/// Merges terms whose payloads are structurally equal and drops zero
/// coefficients, keeping one zero-coefficient term when all cancel.
template <class Term>
std::vector<Term> merge_terms(std::vector<Term> terms) {
    std::vector<Term> merged;
    for (auto& term : terms) {
        bool found = false;
        for (auto& kept : merged) {
            if (payload(kept) == payload(term)) {
                kept.coeff += term.coeff;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(std::move(term));
    }
    std::vector<Term> out;
    for (auto& term : merged)
        if (term.coeff != 0) out.push_back(std::move(term));
    if (out.empty() && !merged.empty()) {
        merged.front().coeff = 0;
        out.push_back(std::move(merged.front()));
    }
    return out;
}

inline ExpIneq parse_exp_atom(TokenStream& ts) {
    ExpIneq out;
    out.terms = merge_terms(parse_term_list<ExpTerm>(
        ts, "E", [](TokenStream& inner) { return parse_gamble(inner); }));
    out.rel = ts.expect(TokType::RelOp, "a relation").rel;
    out.bound = parse_number(ts);
    return out;
}

inline LikIneq parse_lik_atom(TokenStream& ts) {
    LikIneq out;
    out.terms = merge_terms(parse_term_list<LikTerm>(
        ts, "L", [](TokenStream& inner) { return parse_prop(inner); }));
    out.rel = ts.expect(TokType::RelOp, "a relation").rel;
    out.bound = parse_number(ts);
    return out;
}

/// gamble REL (rat | gamble). A gamble right-hand side is moved to the left;
/// structurally `true` terms of the combined gamble fold into the bound.
inline GambleIneq parse_gamble_atom(TokenStream& ts) {
    GambleIneq out;
    SyntacticGamble lhs = parse_gamble(ts);
    out.rel = ts.expect(TokType::RelOp, "a relation").rel;
    const std::size_t mark = ts.save();
    if (ts.at(TokType::Minus) || ts.at(TokType::Number)) {
        const bool negative = ts.accept(TokType::Minus);
        if (ts.at(TokType::Number)) {
            const std::string digits = ts.next().text;
            if (!ts.at(TokType::Star) && !ts.at(TokType::Plus) && !ts.at(TokType::Minus)) {
                Rat bound = parse_rat(digits);
                out.bound = negative ? Rat(-bound) : bound;
                out.gamble = std::move(lhs);
                return out;
            }
        }
        ts.restore(mark);
    }
    SyntacticGamble rhs = parse_gamble(ts);
    for (auto& term : rhs) lhs.push_back({-term.coeff, std::move(term.formula)});
    lhs = merge_gamble(lhs);
    Rat bound(0);
    SyntacticGamble kept;
    for (auto& term : lhs) {
        if (term.formula == PropFormula::tru()) {
            bound -= term.coeff;
        } else {
            kept.push_back(std::move(term));
        }
    }
    out.gamble = std::move(kept);
    out.bound = std::move(bound);
    return out;
}

/// term := ['-'] signedterm (('+'|'-') signedterm)*; signedterm := [rat '*'] ident.
inline FuncIneq parse_func_atom(TokenStream& ts) {
    FuncIneq out;
    std::vector<FuncTerm> terms;
    bool negate = ts.accept(TokType::Minus);
    while (true) {
        Rat coeff(1);
        if (ts.at(TokType::Number)) {
            coeff = parse_rat(ts.next().text);
            ts.expect(TokType::Star, "'*'");
        }
        if (negate) coeff = -coeff;
        if (!lowercase_ident(ts.peek())) ts.fail("expected a function variable");
        terms.push_back({std::move(coeff), ts.next().text});
        if (ts.accept(TokType::Plus)) {
            negate = false;
        } else if (ts.accept(TokType::Minus)) {
            negate = true;
        } else {
            break;
        }
    }
    out.terms = merge_terms(std::move(terms));
    out.rel = ts.expect(TokType::RelOp, "a relation").rel;
    out.bound = parse_number(ts);
    return out;
}

/// formula := implies; implies := disj ['=>' implies]; disj := conj ('|' conj)*;
/// conj := lit ('&' lit)*; lit := '!' lit | '(' formula ')' | atom.
template <class A, class ParseAtom>
Formula<A> parse_formula(TokenStream& ts, ParseAtom&& atom);

template <class A, class ParseAtom>
Formula<A> parse_lit(TokenStream& ts, ParseAtom&& atom) {
    if (ts.accept(TokType::Not)) return Formula<A>::neg(parse_lit<A>(ts, atom));
    if (ts.at(TokType::LParen)) {
        const std::size_t mark = ts.save();
        ts.next();
        try {
            Formula<A> inner = parse_formula<A>(ts, atom);
            ts.expect(TokType::RParen, "')'");
            return inner;
        } catch (const ParseError&) {
            ts.restore(mark);
        }
    }
    return Formula<A>::atom(atom(ts));
}

template <class A, class ParseAtom>
Formula<A> parse_conj(TokenStream& ts, ParseAtom&& atom) {
    Formula<A> out = parse_lit<A>(ts, atom);
    while (ts.accept(TokType::And)) out = Formula<A>::conj(std::move(out), parse_lit<A>(ts, atom));
    return out;
}

template <class A, class ParseAtom>
Formula<A> parse_disj(TokenStream& ts, ParseAtom&& atom) {
    Formula<A> out = parse_conj<A>(ts, atom);
    while (ts.accept(TokType::Or)) out = Formula<A>::disj(std::move(out), parse_conj<A>(ts, atom));
    return out;
}

template <class A, class ParseAtom>
Formula<A> parse_formula(TokenStream& ts, ParseAtom&& atom) {
    Formula<A> out = parse_disj<A>(ts, atom);
    if (ts.accept(TokType::Implies))
        return Formula<A>::implies(std::move(out), parse_formula<A>(ts, atom));
    return out;
}

template <class A, class ParseAtom>
Formula<A> parse_language(const std::string& text, ParseAtom&& atom) {
    TokenStream ts(lex(text));
    if (ts.at(TokType::End)) throw ParseError("empty formula");
    Formula<A> out = parse_formula<A>(ts, atom);
    if (!ts.at(TokType::End)) ts.fail("expected end of formula");
    return out;
}

}  // namespace detail

inline ExpFormula parse_exp(const std::string& text) {
    return detail::parse_language<ExpIneq>(text, detail::parse_exp_atom);
}

inline LikFormula parse_likelihood(const std::string& text) {
    return detail::parse_language<LikIneq>(text, detail::parse_lik_atom);
}

inline GambleFormula parse_gamble_formula(const std::string& text) {
    return detail::parse_language<GambleIneq>(text, detail::parse_gamble_atom);
}

inline FuncFormula parse_func(const std::string& text) {
    return detail::parse_language<FuncIneq>(text, detail::parse_func_atom);
}

/// Parses a bare gamble expression such as "1*p + 2*(p & q) - 1/2".
inline SyntacticGamble parse_gamble(const std::string& text) {
    detail::TokenStream ts(detail::lex(text));
    if (ts.at(detail::TokType::End)) throw ParseError("empty gamble");
    SyntacticGamble out = detail::parse_gamble(ts);
    if (!ts.at(detail::TokType::End)) ts.fail("expected end of gamble");
    return out;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

template <class Term, class PrintBody>
std::string term_list_string(const std::vector<Term>& terms, PrintBody&& body) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Rat& c = terms[i].coeff;
        if (i == 0) {
            out += to_string(c);
        } else if (c < 0) {
            out += " - " + to_string(Rat(-c));
        } else {
            out += " + " + to_string(c);
        }
        out += '*';
        out += body(terms[i]);
    }
    return out;
}

}  // namespace detail

inline std::string to_string(const ExpIneq& a) {
    return detail::term_list_string(a.terms, [](const ExpTerm& t) {
               return "E(" + to_string(t.gamble) + ")";
           }) +
           " " + to_string(a.rel) + " " + to_string(a.bound);
}

inline std::string to_string(const LikIneq& a) {
    return detail::term_list_string(a.terms, [](const LikTerm& t) {
               return "L(" + t.event.to_string() + ")";
           }) +
           " " + to_string(a.rel) + " " + to_string(a.bound);
}

inline std::string to_string(const GambleIneq& a) {
    return to_string(a.gamble) + " " + to_string(a.rel) + " " + to_string(a.bound);
}

inline std::string to_string(const FuncIneq& a) {
    return detail::term_list_string(a.terms, [](const FuncTerm& t) { return t.var; }) + " " +
           to_string(a.rel) + " " + to_string(a.bound);
}

namespace detail {

template <class A>
void print_formula(const Formula<A>& f, std::string& out) {
    using Kind = typename Formula<A>::Kind;
    switch (f.kind()) {
        case Kind::Atom:
            out += to_string(f.leaf());
            return;
        case Kind::Not:
            out += "!(";
            print_formula(f.child(), out);
            out += ')';
            return;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            out += '(';
            print_formula(f.left(), out);
            out += f.kind() == Kind::And ? " & " : f.kind() == Kind::Or ? " | " : " => ";
            print_formula(f.right(), out);
            out += ')';
            return;
    }
    throw InternalError("unreachable formula kind");
}

}  // namespace detail

template <class A>
std::string to_string(const Formula<A>& f) {
    std::string out;
    detail::print_formula(f, out);
    return out;
}

// ---------------------------------------------------------------------------
// Desugaring and normal form
// ---------------------------------------------------------------------------

namespace detail {

template <class A>
A negate_atom(A atom) {
    for (auto& term : atom.terms) term.coeff = -term.coeff;
    atom.bound = -atom.bound;
    atom.rel = RelOp::Ge;
    return atom;
}

inline GambleIneq negate_atom(GambleIneq atom) {
    for (auto& term : atom.gamble) term.coeff = -term.coeff;
    atom.bound = -atom.bound;
    atom.rel = RelOp::Ge;
    return atom;
}

/// Total-order reading: t > b is the negation of t <= b, and t < b the
/// negation of t >= b.
template <class A>
Formula<A> desugar_total_atom(const A& atom) {
    using F = Formula<A>;
    A geq = atom;
    geq.rel = RelOp::Ge;
    switch (atom.rel) {
        case RelOp::Ge: return F::atom(std::move(geq));
        case RelOp::Le: return F::atom(negate_atom(atom));
        case RelOp::Gt: return F::neg(F::atom(negate_atom(atom)));
        case RelOp::Lt: return F::neg(F::atom(std::move(geq)));
        case RelOp::Eq: return F::conj(F::atom(std::move(geq)), F::atom(negate_atom(atom)));
    }
    throw InternalError("unreachable relation");
}

/// Partial-order reading for pointwise comparisons: strictness is the failure
/// of the opposite weak bound, not of the weak bound's negation.
template <class A>
Formula<A> desugar_partial_atom(const A& atom) {
    using F = Formula<A>;
    A geq = atom;
    geq.rel = RelOp::Ge;
    switch (atom.rel) {
        case RelOp::Ge: return F::atom(std::move(geq));
        case RelOp::Le: return F::atom(negate_atom(atom));
        case RelOp::Gt:
            return F::conj(F::atom(std::move(geq)), F::neg(F::atom(negate_atom(atom))));
        case RelOp::Lt:
            return F::conj(F::atom(negate_atom(atom)), F::neg(F::atom(std::move(geq))));
        case RelOp::Eq:
            return F::conj(F::atom(std::move(geq)), F::atom(negate_atom(atom)));
    }
    throw InternalError("unreachable relation");
}

template <class A, class DesugarAtom>
Formula<A> desugar_formula(const Formula<A>& f, DesugarAtom&& atom) {
    using Kind = typename Formula<A>::Kind;
    switch (f.kind()) {
        case Kind::Atom:
            return atom(f.leaf());
        case Kind::Not:
            return Formula<A>::neg(desugar_formula(f.child(), atom));
        case Kind::And:
            return Formula<A>::conj(desugar_formula(f.left(), atom), desugar_formula(f.right(), atom));
        case Kind::Or:
            return Formula<A>::disj(desugar_formula(f.left(), atom), desugar_formula(f.right(), atom));
        case Kind::Implies:
            return Formula<A>::implies(desugar_formula(f.left(), atom),
                                       desugar_formula(f.right(), atom));
    }
    throw InternalError("unreachable formula kind");
}

}  // namespace detail

/// Rewrites every atom to use only >=; preserves truth in every model.
inline ExpFormula desugar(const ExpFormula& f) {
    return detail::desugar_formula(f, detail::desugar_total_atom<ExpIneq>);
}

inline LikFormula desugar(const LikFormula& f) {
    return detail::desugar_formula(f, detail::desugar_total_atom<LikIneq>);
}

inline GambleFormula desugar(const GambleFormula& f) {
    return detail::desugar_formula(f, detail::desugar_partial_atom<GambleIneq>);
}

inline FuncFormula desugar(const FuncFormula& f) {
    return detail::desugar_formula(f, detail::desugar_partial_atom<FuncIneq>);
}

/// One possibly negated atom of a DNF clause.
template <class A>
struct Literal {
    A atom;
    bool negated = false;

    bool operator==(const Literal& other) const {
        return negated == other.negated && atom == other.atom;
    }
};

template <class A>
using Clause = std::vector<Literal<A>>;

namespace detail {

template <class A>
bool clause_has(const Clause<A>& clause, const A& atom, bool negated) {
    for (const auto& lit : clause)
        if (lit.negated == negated && lit.atom == atom) return true;
    return false;
}

/// Merges two clauses; returns false when they contain complementary
/// literals (the merged clause would be propositionally false).
template <class A>
bool merge_clauses(const Clause<A>& a, const Clause<A>& b, Clause<A>& out) {
    out = a;
    for (const auto& lit : b) {
        if (clause_has(out, lit.atom, !lit.negated)) return false;
        if (!clause_has(out, lit.atom, lit.negated)) out.push_back(lit);
    }
    return true;
}

template <class A>
std::vector<Clause<A>> dnf(const Formula<A>& f, bool positive, std::size_t max_clauses);

template <class A>
std::vector<Clause<A>> dnf_or(std::vector<Clause<A>> lhs, std::vector<Clause<A>> rhs,
                              std::size_t max_clauses) {
    if (lhs.size() + rhs.size() > max_clauses)
        throw CapExceededError("disjunctive normal form exceeds the clause cap");
    for (auto& clause : rhs) lhs.push_back(std::move(clause));
    return lhs;
}

template <class A>
std::vector<Clause<A>> dnf_and(const std::vector<Clause<A>>& lhs,
                               const std::vector<Clause<A>>& rhs, std::size_t max_clauses) {
    std::vector<Clause<A>> out;
    for (const auto& a : lhs) {
        for (const auto& b : rhs) {
            Clause<A> merged;
            if (!merge_clauses(a, b, merged)) continue;
            out.push_back(std::move(merged));
            if (out.size() > max_clauses)
                throw CapExceededError("disjunctive normal form exceeds the clause cap");
        }
    }
    return out;
}

template <class A>
std::vector<Clause<A>> dnf(const Formula<A>& f, bool positive, std::size_t max_clauses) {
    using Kind = typename Formula<A>::Kind;
    switch (f.kind()) {
        case Kind::Atom:
            return {Clause<A>{Literal<A>{f.leaf(), !positive}}};
        case Kind::Not:
            return dnf(f.child(), !positive, max_clauses);
        case Kind::And:
            return positive ? dnf_and(dnf(f.left(), true, max_clauses),
                                      dnf(f.right(), true, max_clauses), max_clauses)
                            : dnf_or(dnf(f.left(), false, max_clauses),
                                     dnf(f.right(), false, max_clauses), max_clauses);
        case Kind::Or:
            return positive ? dnf_or(dnf(f.left(), true, max_clauses),
                                     dnf(f.right(), true, max_clauses), max_clauses)
                            : dnf_and(dnf(f.left(), false, max_clauses),
                                      dnf(f.right(), false, max_clauses), max_clauses);
        case Kind::Implies:
            return positive ? dnf_or(dnf(f.left(), false, max_clauses),
                                     dnf(f.right(), true, max_clauses), max_clauses)
                            : dnf_and(dnf(f.left(), true, max_clauses),
                                      dnf(f.right(), false, max_clauses), max_clauses);
    }
    throw InternalError("unreachable formula kind");
}

}  // namespace detail

/// Disjunctive normal form as a list of conjunctive clauses. Clauses that
/// contain complementary literals are dropped, so the empty list means the
/// formula is propositionally unsatisfiable.
template <class A>
std::vector<Clause<A>> to_dnf(const Formula<A>& f, std::size_t max_clauses = 4096) {
    return detail::dnf(f, true, max_clauses);
}

// ---------------------------------------------------------------------------
// Language transformations
// ---------------------------------------------------------------------------

namespace detail {

template <class A, class B, class MapAtom>
Formula<B> map_atoms(const Formula<A>& f, MapAtom&& fn) {
    using Kind = typename Formula<A>::Kind;
    switch (f.kind()) {
        case Kind::Atom:
            return Formula<B>::atom(fn(f.leaf()));
        case Kind::Not:
            return Formula<B>::neg(map_atoms<A, B>(f.child(), fn));
        case Kind::And:
            return Formula<B>::conj(map_atoms<A, B>(f.left(), fn), map_atoms<A, B>(f.right(), fn));
        case Kind::Or:
            return Formula<B>::disj(map_atoms<A, B>(f.left(), fn), map_atoms<A, B>(f.right(), fn));
        case Kind::Implies:
            return Formula<B>::implies(map_atoms<A, B>(f.left(), fn),
                                       map_atoms<A, B>(f.right(), fn));
    }
    throw InternalError("unreachable formula kind");
}

template <class A, class Visit>
void visit_atoms(const Formula<A>& f, Visit&& fn) {
    using Kind = typename Formula<A>::Kind;
    switch (f.kind()) {
        case Kind::Atom:
            fn(f.leaf());
            return;
        case Kind::Not:
            visit_atoms(f.child(), fn);
            return;
        default:
            visit_atoms(f.left(), fn);
            visit_atoms(f.right(), fn);
            return;
    }
}

}  // namespace detail

/// Replaces every likelihood term with the expectation of the event's
/// indicator gamble; truth-preserving in every model class.
inline ExpFormula translate_likelihood(const LikFormula& f) {
    return detail::map_atoms<LikIneq, ExpIneq>(f, [](const LikIneq& atom) {
        ExpIneq out;
        out.rel = atom.rel;
        out.bound = atom.bound;
        for (const auto& term : atom.terms)
            out.terms.push_back({term.coeff, SyntacticGamble{{Rat(1), term.event}}});
        return out;
    });
}

/// Distributes every expectation over its gamble's terms: a*E(c1*f1 + ... )
/// becomes a*c1*E(f1) + .... Truth-preserving over probability measures.
inline ExpFormula transform_t1(const ExpFormula& f) {
    return detail::map_atoms<ExpIneq, ExpIneq>(f, [](const ExpIneq& atom) {
        ExpIneq out;
        out.rel = atom.rel;
        out.bound = atom.bound;
        for (const auto& term : atom.terms)
            for (const auto& inner : term.gamble)
                out.terms.push_back(
                    {term.coeff * inner.coeff, SyntacticGamble{{Rat(1), inner.formula}}});
        if (out.terms.empty()) out.terms.push_back({Rat(0), SyntacticGamble{{Rat(1), PropFormula::tru()}}});
        out.terms = detail::merge_terms(std::move(out.terms));
        return out;
    });
}

/// The conjunction of literals that pins every proposition to one truth
/// assignment: bit i of `mask` gives props[i]'s sign.
inline PropFormula atom_formula(const std::vector<std::string>& props, std::uint64_t mask) {
    std::vector<PropFormula> lits;
    for (std::size_t i = 0; i < props.size(); ++i) {
        PropFormula p = PropFormula::prop(props[i]);
        lits.push_back(((mask >> i) & 1u) ? std::move(p) : PropFormula::neg(std::move(p)));
    }
    return PropFormula::conj_all(std::move(lits));
}

/// Rewrites every expectation term as a staircase over the atoms of `props`:
/// a*E(g) becomes a*(d1-d0)*E(psi1) + ... with d0 < ... < dm the distinct
/// atom values of g and psi_j the disjunction of atoms valued >= d_j; the
/// constant a*d0 moves into the bound. Truth-preserving over probability,
/// belief, and possibility structures.
inline ExpFormula transform_t2(const ExpFormula& f, const std::vector<std::string>& props) {
    const SpacePtr atoms = AtomSpace::atoms_over(props);
    return detail::map_atoms<ExpIneq, ExpIneq>(f, [&](const ExpIneq& atom) {
        ExpIneq out;
        out.rel = atom.rel;
        out.bound = atom.bound;
        for (const auto& term : atom.terms) {
            const Gamble realized = realize_gamble(term.gamble, atoms);
            std::vector<Rat> levels = realized.values();
            std::sort(levels.begin(), levels.end());
            levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
            out.bound -= term.coeff * levels.front();
            for (std::size_t j = 1; j < levels.size(); ++j) {
                std::vector<PropFormula> parts;
                for (std::size_t w = 0; w < realized.size(); ++w)
                    if (realized[w] >= levels[j]) parts.push_back(atom_formula(props, w));
                out.terms.push_back({term.coeff * (levels[j] - levels[j - 1]),
                                     SyntacticGamble{{Rat(1), PropFormula::disj_all(std::move(parts))}}});
            }
        }
        if (out.terms.empty()) out.terms.push_back({Rat(0), SyntacticGamble{{Rat(1), PropFormula::tru()}}});
        out.terms = detail::merge_terms(std::move(out.terms));
        return out;
    });
}

/// Pointwise max (Max) or min (Min) of two syntactic gambles as a syntactic
/// gamble: both gambles are padded to a shared formula list, and each sign
/// region of that list contributes the extremum of the two coefficient sums.
inline SyntacticGamble syntactic_meet_join(const SyntacticGamble& lhs, const SyntacticGamble& rhs,
                                           CombineMode mode) {
    if (mode == CombineMode::Add)
        throw ModelError("syntactic_meet_join takes Min or Max");
    const SyntacticGamble a = detail::merge_gamble(lhs);
    const SyntacticGamble b = detail::merge_gamble(rhs);
    std::vector<PropFormula> formulas;
    for (const auto& term : a) formulas.push_back(term.formula);
    for (const auto& term : b) {
        bool found = false;
        for (const auto& f : formulas)
            if (f == term.formula) {
                found = true;
                break;
            }
        if (!found) formulas.push_back(term.formula);
    }
    const std::size_t n = formulas.size();
    if (n > 16)
        throw CapExceededError("syntactic meet/join supports at most 16 distinct formulas");
    std::vector<Rat> ca(n, Rat(0)), cb(n, Rat(0));
    for (const auto& term : a)
        for (std::size_t i = 0; i < n; ++i)
            if (formulas[i] == term.formula) ca[i] = term.coeff;
    for (const auto& term : b)
        for (std::size_t i = 0; i < n; ++i)
            if (formulas[i] == term.formula) cb[i] = term.coeff;
    SyntacticGamble out;
    for (std::uint64_t region = 0; region < (std::uint64_t(1) << n); ++region) {
        Rat sum_a(0), sum_b(0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!((region >> i) & 1u)) continue;
            sum_a += ca[i];
            sum_b += cb[i];
        }
        const Rat value = mode == CombineMode::Max ? (sum_a > sum_b ? sum_a : sum_b)
                                                   : (sum_a < sum_b ? sum_a : sum_b);
        if (value == 0) continue;
        std::vector<PropFormula> lits;
        for (std::size_t i = 0; i < n; ++i)
            lits.push_back(((region >> i) & 1u) ? formulas[i] : PropFormula::neg(formulas[i]));
        out.push_back({value, PropFormula::conj_all(std::move(lits))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Proposition and variable collection
// ---------------------------------------------------------------------------

inline std::set<std::string> props_of(const ExpFormula& f) {
    std::set<std::string> out;
    detail::visit_atoms(f, [&](const ExpIneq& atom) {
        for (const auto& term : atom.terms)
            for (const auto& inner : term.gamble) inner.formula.collect_props(out);
    });
    return out;
}

inline std::set<std::string> props_of(const LikFormula& f) {
    std::set<std::string> out;
    detail::visit_atoms(f, [&](const LikIneq& atom) {
        for (const auto& term : atom.terms) term.event.collect_props(out);
    });
    return out;
}

inline std::set<std::string> props_of(const GambleFormula& f) {
    std::set<std::string> out;
    detail::visit_atoms(f, [&](const GambleIneq& atom) {
        for (const auto& term : atom.gamble) term.formula.collect_props(out);
    });
    return out;
}

inline std::set<std::string> vars_of(const FuncFormula& f) {
    std::set<std::string> out;
    detail::visit_atoms(f, [&](const FuncIneq& atom) {
        for (const auto& term : atom.terms) out.insert(term.var);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// True total-order comparison of two rationals under a surface relation.
inline bool rel_holds(RelOp rel, const Rat& lhs, const Rat& rhs) {
    switch (rel) {
        case RelOp::Ge: return lhs >= rhs;
        case RelOp::Gt: return lhs > rhs;
        case RelOp::Le: return lhs <= rhs;
        case RelOp::Lt: return lhs < rhs;
        case RelOp::Eq: return lhs == rhs;
    }
    throw InternalError("unreachable relation");
}

/// The expectation the model assigns a gamble: plain expectation for
/// probability measures, lower expectation for credal sets, the belief-side
/// Choquet value for mass functions, the possibility-side Choquet value for
/// possibility measures.
inline Rat model_expectation(const UncertaintyModel& model, const Gamble& x) {
    if (const auto* mu = std::get_if<ProbabilityMeasure>(&model)) return expect_prob(*mu, x);
    if (const auto* credal = std::get_if<CredalSet>(&model))
        return expect_bounds_credal(*credal, x).lower;
    if (const auto* mass = std::get_if<MassFunction>(&model))
        return mass_expect(*mass, x, ExtremeMode::Min);
    return expect_poss(std::get<PossibilityMeasure>(model), x);
}

/// The likelihood the model assigns an event: probability, lower probability,
/// belief, or possibility.
inline Rat model_likelihood(const UncertaintyModel& model, WorldSet event) {
    if (const auto* mu = std::get_if<ProbabilityMeasure>(&model)) return mu->value(event);
    if (const auto* credal = std::get_if<CredalSet>(&model))
        return event_bounds(*credal, event).first;
    if (const auto* mass = std::get_if<MassFunction>(&model)) return mass->belief(event);
    return std::get<PossibilityMeasure>(model).value(event);
}

namespace detail {

template <class A, class EvalAtom>
bool holds_formula(const Formula<A>& f, EvalAtom&& atom) {
    using Kind = typename Formula<A>::Kind;
    switch (f.kind()) {
        case Kind::Atom:
            return atom(f.leaf());
        case Kind::Not:
            return !holds_formula(f.child(), atom);
        case Kind::And:
            return holds_formula(f.left(), atom) && holds_formula(f.right(), atom);
        case Kind::Or:
            return holds_formula(f.left(), atom) || holds_formula(f.right(), atom);
        case Kind::Implies:
            return !holds_formula(f.left(), atom) || holds_formula(f.right(), atom);
    }
    throw InternalError("unreachable formula kind");
}

}  // namespace detail

inline bool holds(const ExpFormula& f, const UncertaintyModel& model) {
    const SpacePtr& space = model_space(model);
    return detail::holds_formula(f, [&](const ExpIneq& atom) {
        Rat total(0);
        for (const auto& term : atom.terms)
            total += term.coeff * model_expectation(model, realize_gamble(term.gamble, space));
        return rel_holds(atom.rel, total, atom.bound);
    });
}

inline bool holds(const LikFormula& f, const UncertaintyModel& model) {
    const SpacePtr& space = model_space(model);
    return detail::holds_formula(f, [&](const LikIneq& atom) {
        Rat total(0);
        for (const auto& term : atom.terms)
            total += term.coeff * model_likelihood(model, extension(term.event, *space));
        return rel_holds(atom.rel, total, atom.bound);
    });
}

/// Pointwise evaluation over a nonempty set of worlds. Because values are
/// only partially ordered pointwise, the strict relations assert the weak
/// bound plus failure of the opposite weak bound.
inline bool holds(const GambleFormula& f, const SpacePtr& space, WorldSet worlds) {
    if (worlds == 0) throw ModelError("gamble formulas need a nonempty world set");
    if (!subset_of(worlds, space->full_mask()))
        throw ModelError("world set references worlds outside the space");
    return detail::holds_formula(f, [&](const GambleIneq& atom) {
        const Gamble values = realize_gamble(atom.gamble, space);
        bool ge = true;
        bool le = true;
        for (std::size_t w = 0; w < values.size(); ++w) {
            if (!contains(worlds, w)) continue;
            if (values[w] < atom.bound) ge = false;
            if (values[w] > atom.bound) le = false;
        }
        switch (atom.rel) {
            case RelOp::Ge: return ge;
            case RelOp::Le: return le;
            case RelOp::Gt: return ge && !le;
            case RelOp::Lt: return le && !ge;
            case RelOp::Eq: return ge && le;
        }
        throw InternalError("unreachable relation");
    });
}

/// Rational-valued functions on a common finite domain 0..domain_size-1.
struct FuncAssignment {
    std::size_t domain_size = 1;
    std::map<std::string, std::vector<Rat>> values;
};

/// Pointwise evaluation over the assignment's domain, with the same
/// partial-order reading of strict relations as gamble formulas.
inline bool holds(const FuncFormula& f, const FuncAssignment& assign) {
    if (assign.domain_size == 0) throw ModelError("function domains must be nonempty");
    for (const auto& [var, values] : assign.values)
        if (values.size() != assign.domain_size)
            throw ModelError("function '" + var + "' does not cover the domain");
    return detail::holds_formula(f, [&](const FuncIneq& atom) {
        bool ge = true;
        bool le = true;
        for (std::size_t d = 0; d < assign.domain_size; ++d) {
            Rat total(0);
            for (const auto& term : atom.terms) {
                const auto it = assign.values.find(term.var);
                if (it == assign.values.end())
                    throw ModelError("no function assigned to '" + term.var + "'");
                total += term.coeff * it->second[d];
            }
            if (total < atom.bound) ge = false;
            if (total > atom.bound) le = false;
        }
        switch (atom.rel) {
            case RelOp::Ge: return ge;
            case RelOp::Le: return le;
            case RelOp::Gt: return ge && !le;
            case RelOp::Lt: return le && !ge;
            case RelOp::Eq: return ge && le;
        }
        throw InternalError("unreachable relation");
    });
}

}  // namespace expecta
