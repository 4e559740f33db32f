#pragma once

/// @file prop.hpp
/// Propositional formulas over named propositions: the closure of the
/// primitives under not, and, or, implies, with the constants true and false.

#include "expecta/space.hpp"

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace expecta {

class PropFormula {
  public:
    enum class Kind { True, False, Prop, Not, And, Or, Implies };

    static PropFormula tru() { return PropFormula(make(Kind::True)); }
    static PropFormula fls() { return PropFormula(make(Kind::False)); }
    static PropFormula prop(std::string name) {
        auto node = make(Kind::Prop);
        node->name = std::move(name);
        return PropFormula(std::move(node));
    }
    static PropFormula neg(PropFormula f) {
        auto node = make(Kind::Not);
        node->a = std::move(f.node_);
        return PropFormula(std::move(node));
    }
    static PropFormula conj(PropFormula lhs, PropFormula rhs) {
        return binary(Kind::And, std::move(lhs), std::move(rhs));
    }
    static PropFormula disj(PropFormula lhs, PropFormula rhs) {
        return binary(Kind::Or, std::move(lhs), std::move(rhs));
    }
    static PropFormula implies(PropFormula lhs, PropFormula rhs) {
        return binary(Kind::Implies, std::move(lhs), std::move(rhs));
    }

    /// Conjunction of a list; the empty conjunction is `true`.
    static PropFormula conj_all(std::vector<PropFormula> fs) {
        if (fs.empty()) return tru();
        PropFormula out = std::move(fs.front());
        for (std::size_t i = 1; i < fs.size(); ++i) out = conj(std::move(out), std::move(fs[i]));
        return out;
    }
    /// Disjunction of a list; the empty disjunction is `false`.
    static PropFormula disj_all(std::vector<PropFormula> fs) {
        if (fs.empty()) return fls();
        PropFormula out = std::move(fs.front());
        for (std::size_t i = 1; i < fs.size(); ++i) out = disj(std::move(out), std::move(fs[i]));
        return out;
    }

    Kind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    PropFormula left() const { return PropFormula(node_->a); }
    PropFormula right() const { return PropFormula(node_->b); }
    PropFormula child() const { return PropFormula(node_->a); }

    bool operator==(const PropFormula& other) const { return equal(node_.get(), other.node_.get()); }

    void collect_props(std::set<std::string>& out) const { collect(node_.get(), out); }

    std::string to_string() const {
        std::string out;
        print(node_.get(), out);
        return out;
    }

  private:
    struct Node {
        Kind kind;
        std::string name;
        std::shared_ptr<const Node> a, b;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit PropFormula(NodePtr node) : node_(std::move(node)) {}

    static std::shared_ptr<Node> make(Kind kind) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        return node;
    }

    static PropFormula binary(Kind kind, PropFormula lhs, PropFormula rhs) {
        auto node = make(kind);
        node->a = std::move(lhs.node_);
        node->b = std::move(rhs.node_);
        return PropFormula(std::move(node));
    }

    static bool equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case Kind::True:
            case Kind::False:
                return true;
            case Kind::Prop:
                return x->name == y->name;
            case Kind::Not:
                return equal(x->a.get(), y->a.get());
            default:
                return equal(x->a.get(), y->a.get()) && equal(x->b.get(), y->b.get());
        }
    }

    static void collect(const Node* node, std::set<std::string>& out) {
        switch (node->kind) {
            case Kind::Prop:
                out.insert(node->name);
                return;
            case Kind::Not:
                collect(node->a.get(), out);
                return;
            case Kind::And:
            case Kind::Or:
            case Kind::Implies:
                collect(node->a.get(), out);
                collect(node->b.get(), out);
                return;
            default:
                return;
        }
    }

    static bool atom_like(const Node* node) {
        return node->kind == Kind::True || node->kind == Kind::False ||
               node->kind == Kind::Prop;
    }

    static void print(const Node* node, std::string& out) {
        switch (node->kind) {
            case Kind::True:
                out += "true";
                return;
            case Kind::False:
                out += "false";
                return;
            case Kind::Prop:
                out += node->name;
                return;
            case Kind::Not:
                out += '!';
                if (atom_like(node->a.get()) || node->a->kind == Kind::Not) {
                    print(node->a.get(), out);
                } else {
                    out += '(';
                    print(node->a.get(), out);
                    out += ')';
                }
                return;
            case Kind::And:
            case Kind::Or:
            case Kind::Implies: {
                out += '(';
                print(node->a.get(), out);
                out += node->kind == Kind::And ? " & " : node->kind == Kind::Or ? " | " : " => ";
                print(node->b.get(), out);
                out += ')';
                return;
            }
        }
    }

    friend bool eval_prop(const PropFormula&, const AtomSpace&, std::size_t);
    NodePtr node_;
};

/// Standard propositional semantics at one world of a space. Unknown
/// propositions raise UnknownPropositionError naming the symbol.
inline bool eval_prop(const PropFormula& f, const AtomSpace& space, std::size_t world) {
    switch (f.kind()) {
        case PropFormula::Kind::True:
            return true;
        case PropFormula::Kind::False:
            return false;
        case PropFormula::Kind::Prop:
            return space.truth(world, space.prop_index(f.name()));
        case PropFormula::Kind::Not:
            return !eval_prop(f.child(), space, world);
        case PropFormula::Kind::And:
            return eval_prop(f.left(), space, world) && eval_prop(f.right(), space, world);
        case PropFormula::Kind::Or:
            return eval_prop(f.left(), space, world) || eval_prop(f.right(), space, world);
        case PropFormula::Kind::Implies:
            return !eval_prop(f.left(), space, world) || eval_prop(f.right(), space, world);
    }
    throw InternalError("unreachable formula kind");
}

/// The set of worlds where f holds.
inline WorldSet extension(const PropFormula& f, const AtomSpace& space) {
    WorldSet out = 0;
    for (std::size_t w = 0; w < space.world_count(); ++w)
        if (eval_prop(f, space, w)) out |= WorldSet(1) << w;
    return out;
}

inline std::set<std::string> props_of(const PropFormula& f) {
    std::set<std::string> out;
    f.collect_props(out);
    return out;
}

}  // namespace expecta
