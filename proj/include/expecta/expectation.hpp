#pragma once

/// @file expectation.hpp
/// Expectation operators for all four uncertainty representations. The
/// belief-function expectation is computable by three independent routes
/// (Choquet layer sum, mass-weighted minima, and an LP over the induced
/// credal polytope), and their exact agreement is a tested invariant.

#include "expecta/gamble.hpp"
#include "expecta/linsolve.hpp"
#include "expecta/measures.hpp"
#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <algorithm>
#include <utility>
#include <variant>
#include <vector>

namespace expecta {

struct ExpectationResult {
    Rat lower;
    Rat upper;
};

/// E_mu(X) = sum over worlds of mu(w) X(w).
inline Rat expect_prob(const ProbabilityMeasure& mu, const Gamble& x) {
    require_same_space(mu.space(), x.space());
    Rat out = 0;
    for (std::size_t w = 0; w < x.size(); ++w)
        if (mu[w] != 0) out += mu[w] * x[w];
    return out;
}

/// Exact (min, max) of E_mu(X) over the credal set's measures.
inline ExpectationResult expect_bounds_credal(const CredalSet& credal, const Gamble& x) {
    require_same_space(credal.space(), x.space());
    if (credal.measures().empty()) throw ModelError("expectation over an empty credal set");
    Rat lo = expect_prob(credal.measures().front(), x);
    Rat hi = lo;
    for (std::size_t i = 1; i < credal.measures().size(); ++i) {
        const Rat v = expect_prob(credal.measures()[i], x);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    return {std::move(lo), std::move(hi)};
}

/// Choquet integral of X against a monotone normalized set function:
/// x1 + sum over k of (x_{k+1} - x_k) nu(X > x_k), over the sorted distinct
/// values x1 < ... < xn of X. Duplicate values are merged first; evaluating
/// over any padded superset of values gives the same result, so merging is
/// sound. Throws ModelError unless nu(empty) = 0 and nu(W) = 1.
template <class Nu>
Rat choquet(Nu&& nu, const Gamble& x) {
    const auto& space = *x.space();
    if (nu(WorldSet(0)) != 0 || nu(space.full_mask()) != 1)
        throw ModelError("choquet requires a normalized set function");
    std::vector<Rat> values = x.values();
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    Rat out = values.front();
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        WorldSet above = 0;
        for (std::size_t w = 0; w < x.size(); ++w)
            if (x[w] > values[k]) above |= WorldSet(1) << w;
        out += (values[k + 1] - values[k]) * nu(above);
    }
    return out;
}

/// Choquet integral against the belief view of a mass function.
inline Rat choquet_belief(const MassFunction& m, const Gamble& x) {
    require_same_space(m.space(), x.space());
    return choquet([&m](WorldSet set) { return m.belief(set); }, x);
}

/// Choquet integral against the plausibility view of a mass function.
inline Rat choquet_plausibility(const MassFunction& m, const Gamble& x) {
    require_same_space(m.space(), x.space());
    return choquet([&m](WorldSet set) { return m.plausibility(set); }, x);
}

enum class ExtremeMode { Min, Max };

namespace detail {

inline Rat mass_expect_min(const MassFunction& m, const Gamble& x) {
    Rat out = 0;
    for (const auto& [support, mass] : m.masses()) out += mass * min_over(x, support);
    return out;
}

/// Direct max-weighted sum; public mass_expect(Max) goes through conjugacy
/// instead, and equality of the two is a tested invariant.
inline Rat mass_expect_max_direct(const MassFunction& m, const Gamble& x) {
    Rat out = 0;
    for (const auto& [support, mass] : m.masses()) out += mass * max_over(x, support);
    return out;
}

}  // namespace detail

/// Mass-weighted extreme values: sum of m(U) times the minimum of X over U
/// (mode Min), or the conjugate -E_min(-X) (mode Max).
inline Rat mass_expect(const MassFunction& m, const Gamble& x, ExtremeMode mode) {
    require_same_space(m.space(), x.space());
    if (mode == ExtremeMode::Min) return detail::mass_expect_min(m, x);
    return -detail::mass_expect_min(m, scale_shift(Rat(-1), x, Rat(0)));
}

/// Lower expectation over the belief polytope {mu : mu(U) >= Bel(U) for all
/// U}, by exact LP over per-world probabilities. Independent oracle for
/// choquet_belief and mass_expect; capped at 16 worlds.
inline Rat lower_expect_bel_lp(const MassFunction& m, const Gamble& x) {
    require_same_space(m.space(), x.space());
    const std::size_t n = x.size();
    if (n > 16) throw CapExceededError("lower_expect_bel_lp supports at most 16 worlds");

    LinearSystem s(n);
    for (std::size_t w = 0; w < n; ++w) s.require_nonneg(w);
    s.add(std::vector<Rat>(n, Rat(1)), Rel::Eq, Rat(1));
    const WorldSet full = x.space()->full_mask();
    for (WorldSet u = 1; u < full; ++u) {
        const Rat bel = m.belief(u);
        if (bel == 0) continue;
        std::vector<Rat> coeffs(n, Rat(0));
        for (std::size_t w = 0; w < n; ++w)
            if (contains(u, w)) coeffs[w] = 1;
        s.add(std::move(coeffs), Rel::Ge, bel);
    }
    const auto result = optimize(s, x.values(), Direction::Minimize);
    if (const auto* opt = std::get_if<Optimum>(&result)) return opt->value;
    throw InternalError("belief polytope LP did not reach an optimum");
}

/// Possibilistic expectation: the Choquet integral against Poss (the
/// plausibility view of the consonant mass function).
inline Rat expect_poss(const PossibilityMeasure& poss, const Gamble& x) {
    require_same_space(poss.space(), x.space());
    return choquet([&poss](WorldSet set) { return poss.value(set); }, x);
}

}  // namespace expecta
