#pragma once

/// @file decide.hpp
/// Satisfiability and validity decisions. Expectation formulas are decided
/// per DNF clause by exact LPs over the formula's full atom space, one
/// encoding per model class; gamble formulas by pointwise atom selection;
/// function formulas by per-negation real systems assembled into a finite
/// domain. Every SAT answer carries a witness that re-evaluates to true.

#include "expecta/expectation.hpp"
#include "expecta/gamble.hpp"
#include "expecta/linsolve.hpp"
#include "expecta/logic.hpp"
#include "expecta/measures.hpp"
#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace expecta {

enum class Semantics { Prob, LowerProb, Belief, Possibility };

inline std::string to_string(Semantics semantics) {
    switch (semantics) {
        case Semantics::Prob: return "prob";
        case Semantics::LowerProb: return "lowerprob";
        case Semantics::Belief: return "belief";
        case Semantics::Possibility: return "possibility";
    }
    return "?";
}

inline Semantics parse_semantics(const std::string& name) {
    if (name == "prob") return Semantics::Prob;
    if (name == "lowerprob") return Semantics::LowerProb;
    if (name == "belief") return Semantics::Belief;
    if (name == "possibility") return Semantics::Possibility;
    throw ParseError("unknown semantics '" + name +
                     "' (expected prob, lowerprob, belief, or possibility)");
}

struct DecideOptions {
    std::size_t max_props = 4;
    std::size_t max_clauses = 4096;
    bool possibility_n4 = false;
    bool oracle = false;
};

struct SatWitness {
    SpacePtr space;
    UncertaintyModel model;
};

struct SatResult {
    std::optional<SatWitness> witness;
    bool sat() const { return witness.has_value(); }
};

struct GambleWitness {
    SpacePtr space;
    WorldSet worlds = 0;
};

struct GambleSatResult {
    std::optional<GambleWitness> witness;
    bool sat() const { return witness.has_value(); }
};

struct FuncSatResult {
    std::optional<FuncAssignment> witness;
    bool sat() const { return witness.has_value(); }
};

namespace detail {

/// One clause constraint over the expectations of the clause's distinct
/// gambles: sum of coeff * e(gamble) >= rhs, or > rhs when strict.
struct ClauseRow {
    std::vector<std::pair<std::size_t, Rat>> combo;
    bool strict = false;
    Rat rhs;
};

struct ClauseSystem {
    std::vector<std::vector<Rat>> gambles;
    std::vector<ClauseRow> rows;
    bool dead = false;
};

inline bool constant_vector(const std::vector<Rat>& values) {
    for (const auto& v : values)
        if (v != values.front()) return false;
    return true;
}

/// Realizes a clause's literals over the atom space, interning gambles by
/// their value vectors. Literals whose value is a known constant are checked
/// immediately: a violated one marks the clause dead, a satisfied one is
/// dropped.
inline ClauseSystem build_clause_system(const Clause<ExpIneq>& clause, const SpacePtr& space) {
    ClauseSystem out;
    std::map<std::vector<Rat>, std::size_t> index;
    const auto intern = [&](const std::vector<Rat>& values) {
        const auto [it, inserted] = index.try_emplace(values, out.gambles.size());
        if (inserted) out.gambles.push_back(values);
        return it->second;
    };
    for (const auto& lit : clause) {
        std::vector<std::pair<std::vector<Rat>, Rat>> realized;
        bool all_constant = true;
        for (const auto& term : lit.atom.terms) {
            auto values = realize_gamble(term.gamble, space).values();
            all_constant = all_constant && constant_vector(values);
            realized.emplace_back(std::move(values), term.coeff);
        }
        std::map<std::size_t, Rat> combo;
        if (!all_constant) {
            for (const auto& [values, coeff] : realized) combo[intern(values)] += coeff;
            for (auto it = combo.begin(); it != combo.end();)
                it = it->second == 0 ? combo.erase(it) : std::next(it);
        }
        if (combo.empty()) {
            Rat value = 0;
            if (all_constant)
                for (const auto& [values, coeff] : realized) value += coeff * values.front();
            const bool true_here = lit.negated ? value < lit.atom.bound : value >= lit.atom.bound;
            if (!true_here) {
                out.dead = true;
                return out;
            }
            continue;
        }
        ClauseRow row;
        row.combo.assign(combo.begin(), combo.end());
        row.strict = lit.negated;
        row.rhs = lit.atom.bound;
        if (lit.negated) {
            for (auto& [g, coeff] : row.combo) coeff = -coeff;
            row.rhs = -row.rhs;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline SpacePtr restrict_space(const AtomSpace& space, const std::vector<bool>& keep) {
    std::vector<World> worlds;
    for (std::size_t w = 0; w < space.world_count(); ++w)
        if (keep[w]) worlds.push_back(space.worlds()[w]);
    return std::make_shared<const AtomSpace>(space.props(), std::move(worlds));
}

inline SolveResult lp_solve(const LinearSystem& s, bool audit) {
    return audit ? solve_audited(s) : solve(s);
}

inline std::optional<SatWitness> solve_clause_prob(const ClauseSystem& sys, const SpacePtr& space,
                                                   bool audit) {
    const std::size_t n = space->world_count();
    LinearSystem s(n);
    for (std::size_t w = 0; w < n; ++w) s.require_nonneg(w);
    s.add(std::vector<Rat>(n, Rat(1)), Rel::Eq, Rat(1));
    for (const auto& row : sys.rows) {
        std::vector<Rat> coeffs(n, Rat(0));
        for (const auto& [g, c] : row.combo)
            for (std::size_t w = 0; w < n; ++w) coeffs[w] += c * sys.gambles[g][w];
        s.add(std::move(coeffs), row.strict ? Rel::Gt : Rel::Ge, row.rhs);
    }
    const auto result = lp_solve(s, audit);
    const auto* feasible = std::get_if<Feasible>(&result);
    if (!feasible) return std::nullopt;
    std::vector<bool> keep(n, false);
    std::vector<Rat> values;
    for (std::size_t w = 0; w < n; ++w) keep[w] = feasible->witness[w] != 0;
    const SpacePtr small = restrict_space(*space, keep);
    for (std::size_t w = 0; w < n; ++w)
        if (keep[w]) values.push_back(feasible->witness[w]);
    return SatWitness{small, ProbabilityMeasure(small, std::move(values))};
}

inline std::optional<SatWitness> solve_clause_lowerprob(const ClauseSystem& sys,
                                                        const SpacePtr& space, bool audit) {
    const std::size_t n = space->world_count();
    std::vector<std::vector<Rat>> gambles = sys.gambles;
    std::map<std::vector<Rat>, std::size_t> index;
    for (std::size_t g = 0; g < gambles.size(); ++g) index[gambles[g]] = g;
    const auto intern = [&](std::vector<Rat> values) {
        const auto [it, inserted] = index.try_emplace(std::move(values), gambles.size());
        if (inserted) gambles.push_back(it->first);
        return it->second;
    };
    intern(std::vector<Rat>(n, Rat(0)));
    intern(std::vector<Rat>(n, Rat(1)));

    const std::size_t k = gambles.size();
    const auto var = [n](std::size_t i, std::size_t j) { return i * n + j; };
    LinearSystem s(k * n);
    for (std::size_t v = 0; v < k * n; ++v) s.require_nonneg(v);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rat> coeffs(k * n, Rat(0));
        for (std::size_t j = 0; j < n; ++j) coeffs[var(i, j)] = 1;
        s.add(std::move(coeffs), Rel::Eq, Rat(1));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t other = 0; other < k; ++other) {
            if (other == i) continue;
            std::vector<Rat> coeffs(k * n, Rat(0));
            for (std::size_t j = 0; j < n; ++j) {
                coeffs[var(other, j)] += gambles[i][j];
                coeffs[var(i, j)] -= gambles[i][j];
            }
            s.add(std::move(coeffs), Rel::Ge, Rat(0));
        }
    for (const auto& row : sys.rows) {
        std::vector<Rat> coeffs(k * n, Rat(0));
        for (const auto& [g, c] : row.combo)
            for (std::size_t j = 0; j < n; ++j) coeffs[var(g, j)] += c * gambles[g][j];
        s.add(std::move(coeffs), row.strict ? Rel::Gt : Rel::Ge, row.rhs);
    }
    const auto result = lp_solve(s, audit);
    const auto* feasible = std::get_if<Feasible>(&result);
    if (!feasible) return std::nullopt;

    std::vector<std::vector<Rat>> rows;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rat> mu(feasible->witness.begin() + static_cast<std::ptrdiff_t>(var(i, 0)),
                            feasible->witness.begin() + static_cast<std::ptrdiff_t>(var(i, n)));
        if (std::find(rows.begin(), rows.end(), mu) == rows.end()) rows.push_back(std::move(mu));
    }
    std::vector<bool> keep(n, false);
    for (std::size_t w = 0; w < n; ++w)
        for (const auto& mu : rows)
            if (mu[w] != 0) keep[w] = true;
    const SpacePtr small = restrict_space(*space, keep);
    std::vector<ProbabilityMeasure> measures;
    for (const auto& mu : rows) {
        std::vector<Rat> values;
        for (std::size_t w = 0; w < n; ++w)
            if (keep[w]) values.push_back(mu[w]);
        measures.emplace_back(small, std::move(values));
    }
    return SatWitness{small, CredalSet(small, std::move(measures))};
}

inline std::optional<SatWitness> solve_clause_belief(const ClauseSystem& sys,
                                                     const SpacePtr& space, bool audit) {
    const std::size_t n = space->world_count();
    const std::size_t nsets = (std::size_t(1) << n) - 1;
    std::vector<std::vector<Rat>> min_over_set(sys.gambles.size());
    for (std::size_t g = 0; g < sys.gambles.size(); ++g) {
        auto& table = min_over_set[g];
        table.assign(nsets + 1, Rat(0));
        for (std::size_t u = 1; u <= nsets; ++u) {
            const std::size_t rest = u & (u - 1);
            const auto& lowest = sys.gambles[g][static_cast<std::size_t>(
                std::countr_zero(static_cast<unsigned long long>(u)))];
            table[u] = rest == 0 ? lowest : std::min(table[rest], lowest);
        }
    }
    LinearSystem s(nsets);
    for (std::size_t v = 0; v < nsets; ++v) s.require_nonneg(v);
    s.add(std::vector<Rat>(nsets, Rat(1)), Rel::Eq, Rat(1));
    for (const auto& row : sys.rows) {
        std::vector<Rat> coeffs(nsets, Rat(0));
        for (const auto& [g, c] : row.combo)
            for (std::size_t u = 1; u <= nsets; ++u) coeffs[u - 1] += c * min_over_set[g][u];
        s.add(std::move(coeffs), row.strict ? Rel::Gt : Rel::Ge, row.rhs);
    }
    const auto result = lp_solve(s, audit);
    const auto* feasible = std::get_if<Feasible>(&result);
    if (!feasible) return std::nullopt;
    std::map<WorldSet, Rat> masses;
    for (std::size_t u = 1; u <= nsets; ++u)
        if (feasible->witness[u - 1] != 0) masses[static_cast<WorldSet>(u)] = feasible->witness[u - 1];
    return SatWitness{space, MassFunction(space, std::move(masses))};
}

/// Possibility search over max-vector chains. A possibility measure is a
/// mass function over a nested chain of world sets, and the expectation of
/// each clause gamble is the mass-weighted max over those sets. Each nested
/// chain therefore realizes the convex hull of a componentwise-increasing
/// sequence of max-vectors (one coordinate per distinct gamble), and the
/// distinct sequences form a DAG: node v steps to join(v, t_w) for any world
/// tuple t_w not dominated by v. A direct step is subsumed by one through a
/// strictly smaller sibling, so only minimal successors are followed.
class PossibilitySearch {
  public:
    PossibilitySearch(const ClauseSystem& sys, const SpacePtr& space, bool audit)
        : sys_(sys), space_(space), audit_(audit), n_(space->world_count()),
          k_(sys.gambles.size()) {
        tuples_.assign(n_, std::vector<Rat>(k_));
        for (std::size_t w = 0; w < n_; ++w)
            for (std::size_t g = 0; g < k_; ++g) tuples_[w][g] = sys.gambles[g][w];
    }

    std::optional<SatWitness> run() {
        std::vector<std::vector<Rat>> starts(tuples_);
        std::sort(starts.begin(), starts.end());
        starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
        for (const auto& start : minimal_of(starts))
            if (dfs(start)) return build_witness();
        return std::nullopt;
    }

  private:
    bool leq(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
        for (std::size_t g = 0; g < k_; ++g)
            if (a[g] > b[g]) return false;
        return true;
    }

    std::vector<std::vector<Rat>> minimal_of(const std::vector<std::vector<Rat>>& xs) const {
        std::vector<std::vector<Rat>> out;
        for (const auto& x : xs) {
            bool minimal = true;
            for (const auto& y : xs)
                if (y != x && leq(y, x)) {
                    minimal = false;
                    break;
                }
            if (minimal) out.push_back(x);
        }
        return out;
    }

    bool dfs(const std::vector<Rat>& v) {
        if (++steps_ > kStepCap)
            throw CapExceededError("possibility chain search exceeded its step cap");
        chain_.push_back(v);
        std::vector<std::vector<Rat>> succ;
        for (std::size_t w = 0; w < n_; ++w) {
            if (leq(tuples_[w], v)) continue;
            std::vector<Rat> next(k_);
            for (std::size_t g = 0; g < k_; ++g) next[g] = std::max(v[g], tuples_[w][g]);
            succ.push_back(std::move(next));
        }
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        bool found = false;
        if (succ.empty()) {
            found = solve_chain();
        } else {
            for (const auto& next : minimal_of(succ))
                if (dfs(next)) {
                    found = true;
                    break;
                }
        }
        if (!found) chain_.pop_back();
        return found;
    }

    bool solve_chain() {
        const std::size_t m = chain_.size();
        LinearSystem s(m);
        for (std::size_t j = 0; j < m; ++j) s.require_nonneg(j);
        s.add(std::vector<Rat>(m, Rat(1)), Rel::Eq, Rat(1));
        for (const auto& row : sys_.rows) {
            std::vector<Rat> coeffs(m, Rat(0));
            for (const auto& [g, c] : row.combo)
                for (std::size_t j = 0; j < m; ++j) coeffs[j] += c * chain_[j][g];
            s.add(std::move(coeffs), row.strict ? Rel::Gt : Rel::Ge, row.rhs);
        }
        const auto result = lp_solve(s, audit_);
        const auto* feasible = std::get_if<Feasible>(&result);
        if (!feasible) return false;
        weights_ = feasible->witness;
        return true;
    }

    SatWitness build_witness() const {
        std::vector<Rat> poss(n_, Rat(0));
        for (std::size_t w = 0; w < n_; ++w)
            for (std::size_t j = 0; j < chain_.size(); ++j)
                if (leq(tuples_[w], chain_[j])) poss[w] += weights_[j];
        std::vector<bool> keep(n_, false);
        for (std::size_t w = 0; w < n_; ++w) keep[w] = poss[w] != 0;
        const SpacePtr small = restrict_space(*space_, keep);
        std::vector<Rat> values;
        for (std::size_t w = 0; w < n_; ++w)
            if (keep[w]) values.push_back(poss[w]);
        return SatWitness{small, PossibilityMeasure(small, std::move(values))};
    }

    static constexpr std::size_t kStepCap = 200000;

    const ClauseSystem& sys_;
    SpacePtr space_;
    bool audit_ = false;
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<std::vector<Rat>> tuples_;
    std::vector<std::vector<Rat>> chain_;
    std::vector<Rat> weights_;
    std::size_t steps_ = 0;
};

inline std::optional<SatWitness> solve_clause_possibility(const ClauseSystem& sys,
                                                          const SpacePtr& space, bool audit) {
    return PossibilitySearch(sys, space, audit).run();
}

}  // namespace detail

/// Decides satisfiability of an expectation formula under one model class.
/// The search space is the full atom space over the formula's propositions;
/// propositions absent from the formula are false at every witness world.
inline SatResult sat(const ExpFormula& f, Semantics semantics, const DecideOptions& opts = {}) {
    const auto prop_set = props_of(f);
    if (prop_set.size() > opts.max_props)
        throw CapExceededError("formula uses " + std::to_string(prop_set.size()) +
                               " propositions; the cap is " + std::to_string(opts.max_props));
    if (semantics == Semantics::Possibility && prop_set.size() >= 4 && !opts.possibility_n4)
        throw CapExceededError(
            "possibility decisions over 4 propositions search chains of 16 worlds; "
            "set possibility_n4 to attempt it anyway");
    const SpacePtr space =
        AtomSpace::atoms_over(std::vector<std::string>(prop_set.begin(), prop_set.end()));
    const auto clauses = to_dnf(desugar(f), opts.max_clauses);
    for (const auto& clause : clauses) {
        const auto system = detail::build_clause_system(clause, space);
        if (system.dead) continue;
        std::optional<SatWitness> witness;
        switch (semantics) {
            case Semantics::Prob:
                witness = detail::solve_clause_prob(system, space, opts.oracle);
                break;
            case Semantics::LowerProb:
                witness = detail::solve_clause_lowerprob(system, space, opts.oracle);
                break;
            case Semantics::Belief:
                witness = detail::solve_clause_belief(system, space, opts.oracle);
                break;
            case Semantics::Possibility:
                witness = detail::solve_clause_possibility(system, space, opts.oracle);
                break;
        }
        if (!witness) continue;
        if (!holds(f, witness->model))
            throw InternalError("satisfiability witness failed re-evaluation");
        return SatResult{std::move(witness)};
    }
    return SatResult{};
}

inline bool valid(const ExpFormula& f, Semantics semantics, const DecideOptions& opts = {}) {
    return !sat(ExpFormula::neg(f), semantics, opts).sat();
}

/// Decides satisfiability of a gamble formula over world structures. Weak
/// bounds must hold at every world, so candidate worlds are the atoms passing
/// all of a clause's positive literals; each negated literal then needs one
/// violating world from that pool.
inline GambleSatResult sat_gamble(const GambleFormula& f, const DecideOptions& opts = {}) {
    const auto prop_set = props_of(f);
    if (prop_set.size() > opts.max_props)
        throw CapExceededError("formula uses " + std::to_string(prop_set.size()) +
                               " propositions; the cap is " + std::to_string(opts.max_props));
    const SpacePtr space =
        AtomSpace::atoms_over(std::vector<std::string>(prop_set.begin(), prop_set.end()));
    const std::size_t n = space->world_count();
    const auto clauses = to_dnf(desugar(f), opts.max_clauses);
    for (const auto& clause : clauses) {
        WorldSet pool = space->full_mask();
        std::vector<std::pair<std::vector<Rat>, Rat>> negations;
        for (const auto& lit : clause) {
            auto values = realize_gamble(lit.atom.gamble, space).values();
            if (lit.negated) {
                negations.emplace_back(std::move(values), lit.atom.bound);
                continue;
            }
            for (std::size_t w = 0; w < n; ++w)
                if (values[w] < lit.atom.bound) pool &= ~(WorldSet(1) << w);
        }
        if (pool == 0) continue;
        WorldSet chosen = 0;
        if (negations.empty()) {
            chosen = pool & (~pool + 1);
        } else {
            bool ok = true;
            for (const auto& [values, bound] : negations) {
                WorldSet pick = 0;
                for (std::size_t w = 0; w < n && pick == 0; ++w)
                    if (contains(pool, w) && values[w] < bound) pick = WorldSet(1) << w;
                if (pick == 0) {
                    ok = false;
                    break;
                }
                chosen |= pick;
            }
            if (!ok) continue;
        }
        if (!holds(f, space, chosen))
            throw InternalError("gamble satisfiability witness failed re-evaluation");
        return GambleSatResult{GambleWitness{space, chosen}};
    }
    return GambleSatResult{};
}

namespace detail {

inline std::vector<Rat> func_row(const FuncIneq& atom,
                                 const std::map<std::string, std::size_t>& index) {
    std::vector<Rat> coeffs(index.size(), Rat(0));
    for (const auto& term : atom.terms) coeffs[index.at(term.var)] += term.coeff;
    return coeffs;
}

}  // namespace detail

/// Decides satisfiability of a function-inequality formula over functions on
/// finite domains. Positive literals hold at every domain point; each negated
/// literal is violated at a dedicated point, so a clause with s negations
/// yields a domain of size max(s, 1).
inline FuncSatResult sat_funcineq(const FuncFormula& f, const DecideOptions& opts = {}) {
    const auto var_set = vars_of(f);
    const std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < vars.size(); ++j) index[vars[j]] = j;
    const auto clauses = to_dnf(desugar(f), opts.max_clauses);
    for (const auto& clause : clauses) {
        std::vector<std::pair<std::vector<Rat>, Rat>> positives;
        std::vector<std::pair<std::vector<Rat>, Rat>> negations;
        for (const auto& lit : clause)
            (lit.negated ? negations : positives)
                .emplace_back(detail::func_row(lit.atom, index), lit.atom.bound);
        std::vector<std::vector<Rat>> points;
        bool ok = true;
        const std::size_t systems = negations.empty() ? 1 : negations.size();
        for (std::size_t i = 0; i < systems; ++i) {
            LinearSystem s(vars.size());
            for (const auto& [coeffs, bound] : positives) s.add(coeffs, Rel::Ge, bound);
            if (!negations.empty()) {
                std::vector<Rat> flipped = negations[i].first;
                for (auto& c : flipped) c = -c;
                s.add(std::move(flipped), Rel::Gt, -negations[i].second);
            }
            const auto result = detail::lp_solve(s, opts.oracle);
            const auto* feasible = std::get_if<Feasible>(&result);
            if (!feasible) {
                ok = false;
                break;
            }
            points.push_back(feasible->witness);
        }
        if (!ok) continue;
        FuncAssignment assign;
        assign.domain_size = points.size();
        for (std::size_t j = 0; j < vars.size(); ++j) {
            std::vector<Rat> values;
            for (const auto& point : points) values.push_back(point[j]);
            assign.values[vars[j]] = std::move(values);
        }
        if (!holds(f, assign))
            throw InternalError("function satisfiability witness failed re-evaluation");
        return FuncSatResult{std::move(assign)};
    }
    return FuncSatResult{};
}

/// Same decision with every variable a single real: all literals are pinned
/// to one shared domain point, collapsing the pointwise partial order to the
/// total order on the reals.
inline FuncSatResult sat_funcineq_real(const FuncFormula& f, const DecideOptions& opts = {}) {
    const auto var_set = vars_of(f);
    const std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < vars.size(); ++j) index[vars[j]] = j;
    const auto clauses = to_dnf(desugar(f), opts.max_clauses);
    for (const auto& clause : clauses) {
        LinearSystem s(vars.size());
        for (const auto& lit : clause) {
            std::vector<Rat> coeffs = detail::func_row(lit.atom, index);
            if (lit.negated) {
                for (auto& c : coeffs) c = -c;
                s.add(std::move(coeffs), Rel::Gt, -lit.atom.bound);
            } else {
                s.add(std::move(coeffs), Rel::Ge, lit.atom.bound);
            }
        }
        const auto result = detail::lp_solve(s, opts.oracle);
        const auto* feasible = std::get_if<Feasible>(&result);
        if (!feasible) continue;
        FuncAssignment assign;
        assign.domain_size = 1;
        for (std::size_t j = 0; j < vars.size(); ++j) assign.values[vars[j]] = {feasible->witness[j]};
        if (!holds(f, assign))
            throw InternalError("real satisfiability witness failed re-evaluation");
        return FuncSatResult{std::move(assign)};
    }
    return FuncSatResult{};
}

}  // namespace expecta
