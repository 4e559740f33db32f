#pragma once

/// @file gamble.hpp
/// Gambles (rational-valued functions on a sample space), their pointwise
/// algebra, and syntactic gambles as coefficient-weighted propositional
/// formulas.

#include "expecta/prop.hpp"
#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <utility>
#include <vector>

namespace expecta {

class Gamble {
  public:
    Gamble(SpacePtr space, std::vector<Rat> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (!space_) throw ModelError("gamble requires a space");
        if (values_.size() != space_->world_count())
            throw ModelError("gamble value count does not match world count");
    }

    static Gamble constant(SpacePtr space, Rat value) {
        std::vector<Rat> values(space->world_count(), value);
        return Gamble(std::move(space), std::move(values));
    }

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return values_.size(); }
    const Rat& operator[](std::size_t world) const { return values_[world]; }
    const std::vector<Rat>& values() const { return values_; }

    bool operator==(const Gamble& other) const {
        return same_space(space_, other.space_) && values_ == other.values_;
    }

  private:
    SpacePtr space_;
    std::vector<Rat> values_;
};

/// 1 on U, 0 elsewhere. U must stay within the space's worlds.
inline Gamble indicator(WorldSet set, const SpacePtr& space) {
    if (!subset_of(set, space->full_mask()))
        throw ModelError("indicator set references worlds outside the space");
    std::vector<Rat> values(space->world_count(), Rat(0));
    for (std::size_t w = 0; w < space->world_count(); ++w)
        if (contains(set, w)) values[w] = 1;
    return Gamble(space, std::move(values));
}

enum class CombineMode { Add, Min, Max };

/// Pointwise add, min, or max of two gambles on the same space.
inline Gamble combine(CombineMode mode, const Gamble& x, const Gamble& y) {
    require_same_space(x.space(), y.space());
    std::vector<Rat> values(x.size());
    for (std::size_t w = 0; w < x.size(); ++w) {
        switch (mode) {
            case CombineMode::Add:
                values[w] = x[w] + y[w];
                break;
            case CombineMode::Min:
                values[w] = x[w] < y[w] ? x[w] : y[w];
                break;
            case CombineMode::Max:
                values[w] = x[w] > y[w] ? x[w] : y[w];
                break;
        }
    }
    return Gamble(x.space(), std::move(values));
}

/// Pointwise aX + b.
inline Gamble scale_shift(const Rat& a, const Gamble& x, const Rat& b) {
    std::vector<Rat> values(x.size());
    for (std::size_t w = 0; w < x.size(); ++w) values[w] = a * x[w] + b;
    return Gamble(x.space(), std::move(values));
}

/// True iff no world pair is ordered oppositely by the two gambles, i.e.
/// (X(w) - X(w'))(Y(w) - Y(w')) is never negative.
inline bool is_comonotonic(const Gamble& x, const Gamble& y) {
    require_same_space(x.space(), y.space());
    for (std::size_t w = 0; w < x.size(); ++w)
        for (std::size_t v = w + 1; v < x.size(); ++v)
            if ((x[w] - x[v]) * (y[w] - y[v]) < 0) return false;
    return true;
}

/// Minimum of X over a nonempty set of worlds.
inline Rat min_over(const Gamble& x, WorldSet set) {
    bool first = true;
    Rat best;
    for (std::size_t w = 0; w < x.size(); ++w) {
        if (!contains(set, w)) continue;
        if (first || x[w] < best) {
            best = x[w];
            first = false;
        }
    }
    if (first) throw InternalError("min_over of an empty world set");
    return best;
}

/// Maximum of X over a nonempty set of worlds.
inline Rat max_over(const Gamble& x, WorldSet set) {
    bool first = true;
    Rat best;
    for (std::size_t w = 0; w < x.size(); ++w) {
        if (!contains(set, w)) continue;
        if (first || x[w] > best) {
            best = x[w];
            first = false;
        }
    }
    if (first) throw InternalError("max_over of an empty world set");
    return best;
}

/// One weighted formula of a syntactic gamble.
struct GambleTerm {
    Rat coeff;
    PropFormula formula;

    bool operator==(const GambleTerm& other) const {
        return coeff == other.coeff && formula == other.formula;
    }
};

/// b1*phi1 + ... + bn*phin. The empty gamble is the constant 0.
using SyntacticGamble = std::vector<GambleTerm>;

/// The gamble w -> sum of coefficients whose formula holds at w.
inline Gamble realize_gamble(const SyntacticGamble& g, const SpacePtr& space) {
    std::vector<Rat> values(space->world_count(), Rat(0));
    for (const auto& term : g) {
        for (std::size_t w = 0; w < space->world_count(); ++w)
            if (eval_prop(term.formula, *space, w)) values[w] += term.coeff;
    }
    return Gamble(space, std::move(values));
}

inline std::set<std::string> props_of(const SyntacticGamble& g) {
    std::set<std::string> out;
    for (const auto& term : g) term.formula.collect_props(out);
    return out;
}

/// Canonical text: every coefficient explicit, terms joined with signs,
/// empty gamble rendered "0".
inline std::string to_string(const SyntacticGamble& g) {
    if (g.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Rat& c = g[i].coeff;
        if (i == 0) {
            out += to_string(c);
        } else if (c < 0) {
            out += " - " + to_string(Rat(-c));
        } else {
            out += " + " + to_string(c);
        }
        out += '*';
        out += g[i].formula.to_string();
    }
    return out;
}

}  // namespace expecta
