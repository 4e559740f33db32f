#pragma once

/// @file linsolve.hpp
/// Exact rational linear constraint solving: feasibility of mixed weak/strict
/// systems, linear optimization, infeasibility certificates (Farkas for weak
/// systems, Motzkin for mixed ones), and a Fourier-Motzkin eliminator used as
/// an independent cross-check.
///
/// The core is a dense two-phase simplex over rationals with Bland's rule,
/// which terminates without any cycling safeguards beyond the rule itself.
/// Strict inequalities are reduced to optimization: a shared slack delta >= 0
/// turns every `a.x > b` into `a.x - delta >= b`, and the system is feasible
/// exactly when max delta (capped at 1) is positive.

#include "expecta/rational.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace expecta {

enum class Rel { Ge, Gt, Eq };

struct Constraint {
    std::vector<Rat> coeffs;
    Rel rel = Rel::Ge;
    Rat rhs;
};

/// A finite system of linear constraints over `nvars` rational variables,
/// with optional per-variable nonnegativity flags.
struct LinearSystem {
    std::size_t nvars = 0;
    std::vector<Constraint> rows;
    std::vector<bool> nonneg;

    LinearSystem() = default;
    explicit LinearSystem(std::size_t variable_count)
        : nvars(variable_count), nonneg(variable_count, false) {}

    void add(std::vector<Rat> coeffs, Rel rel, Rat rhs) {
        if (coeffs.size() != nvars)
            throw std::invalid_argument("constraint length does not match variable count");
        rows.push_back(Constraint{std::move(coeffs), rel, std::move(rhs)});
    }

    void require_nonneg(std::size_t var) {
        if (var >= nvars) throw std::invalid_argument("nonneg flag out of range");
        nonneg[var] = true;
    }

    bool has_strict() const {
        for (const auto& r : rows)
            if (r.rel == Rel::Gt) return true;
        return false;
    }
};

/// Infeasibility certificate. `sigma` carries one nonnegative multiplier per
/// weak row of the canonical expansion of the system: each >= row as itself,
/// each = row as the pair (>=, flipped >=), in input order, followed by one
/// unit row `e_j >= 0` per nonnegativity-flagged variable. `sigma_strict`
/// carries one multiplier per strict row, in input order.
///
/// The certified contradiction: the combined coefficients cancel to zero
/// while the combined right-hand side d = sigma.b + sigma_strict.b' satisfies
/// d > 0 (no strict multiplier used) or d >= 0 with some strict multiplier
/// positive. Either way no point can satisfy the system.
struct Certificate {
    std::vector<Rat> sigma;
    std::vector<Rat> sigma_strict;
};

struct Feasible {
    std::vector<Rat> witness;
};
struct Infeasible {
    Certificate certificate;
};
using SolveResult = std::variant<Feasible, Infeasible>;

enum class Direction { Minimize, Maximize };

struct Optimum {
    Rat value;
    std::vector<Rat> witness;
};
struct Unbounded {};
using OptimizeResult = std::variant<Optimum, Unbounded, Infeasible>;

namespace detail {

struct ExpandedRow {
    std::vector<Rat> coeffs;
    Rat rhs;
};

/// Canonical weak expansion described on Certificate.
inline std::vector<ExpandedRow> weak_expansion(const LinearSystem& s) {
    std::vector<ExpandedRow> out;
    for (const auto& row : s.rows) {
        if (row.rel == Rel::Gt) continue;
        out.push_back(ExpandedRow{row.coeffs, row.rhs});
        if (row.rel == Rel::Eq) {
            std::vector<Rat> neg(row.coeffs.size());
            for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -row.coeffs[j];
            out.push_back(ExpandedRow{std::move(neg), Rat(-row.rhs)});
        }
    }
    for (std::size_t j = 0; j < s.nvars; ++j) {
        if (j < s.nonneg.size() && s.nonneg[j]) {
            std::vector<Rat> unit(s.nvars, Rat(0));
            unit[j] = 1;
            out.push_back(ExpandedRow{std::move(unit), Rat(0)});
        }
    }
    return out;
}

inline std::vector<ExpandedRow> strict_rows(const LinearSystem& s) {
    std::vector<ExpandedRow> out;
    for (const auto& row : s.rows)
        if (row.rel == Rel::Gt) out.push_back(ExpandedRow{row.coeffs, row.rhs});
    return out;
}

constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Dense exact simplex on the standard form `min c.v, M v = d, v >= 0`.
/// Free variables are split into differences of nonnegative ones, >= rows get
/// surplus variables, and every row gets an artificial variable whose tableau
/// column doubles as the corresponding column of the basis inverse, which is
/// where the dual multipliers are read off.
class Simplex {
  public:
    Simplex(const LinearSystem& s, const std::vector<Rat>& objective) {
        const std::size_t n = s.nvars;
        const std::size_t m = s.rows.size();
        plus_col_.assign(n, npos);
        minus_col_.assign(n, npos);
        std::size_t next = 0;
        for (std::size_t j = 0; j < n; ++j) {
            plus_col_[j] = next++;
            if (!(j < s.nonneg.size() && s.nonneg[j])) minus_col_[j] = next++;
        }
        surplus_col_.assign(m, npos);
        for (std::size_t i = 0; i < m; ++i)
            if (s.rows[i].rel == Rel::Ge) surplus_col_[i] = next++;
        first_art_ = next;
        art_col_.assign(m, npos);
        for (std::size_t i = 0; i < m; ++i) art_col_[i] = next++;
        ncols_ = next;

        tab_.assign(m, std::vector<Rat>(ncols_, Rat(0)));
        rhs_.assign(m, Rat(0));
        basis_.assign(m, npos);
        row_sign_.assign(m, 1);
        row_origin_.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& row = s.rows[i];
            assert(row.rel != Rel::Gt);
            const int sign = row.rhs < 0 ? -1 : 1;
            row_sign_[i] = sign;
            row_origin_[i] = i;
            for (std::size_t j = 0; j < n; ++j) {
                Rat a = sign * row.coeffs[j];
                tab_[i][plus_col_[j]] = a;
                if (minus_col_[j] != npos) tab_[i][minus_col_[j]] = -a;
            }
            if (surplus_col_[i] != npos) tab_[i][surplus_col_[i]] = Rat(-sign);
            tab_[i][art_col_[i]] = 1;
            rhs_[i] = sign * row.rhs;
            basis_[i] = art_col_[i];
        }

        phase2_cost_.assign(ncols_, Rat(0));
        for (std::size_t j = 0; j < n; ++j) {
            phase2_cost_[plus_col_[j]] = objective[j];
            if (minus_col_[j] != npos) phase2_cost_[minus_col_[j]] = -objective[j];
        }
        nvars_ = n;
        original_rows_ = m;
    }

    /// Runs phase 1. Returns true when a feasible basis was found.
    bool phase1() {
        std::vector<Rat> c1(ncols_, Rat(0));
        for (std::size_t col = first_art_; col < ncols_; ++col) c1[col] = 1;
        reset_costrow(c1);
        auto status = iterate([](std::size_t) { return true; });
        assert(status == Status::Optimal);
        (void)status;
        return objval_ == 0;
    }

    /// Duals of the phase-1 optimum, one per original row. Only meaningful
    /// when phase1() reported infeasibility.
    std::vector<Rat> phase1_duals() const {
        std::vector<Rat> pi(original_rows_, Rat(0));
        for (std::size_t i = 0; i < original_rows_; ++i)
            pi[i] = row_sign_[i] * (Rat(1) - costrow_[art_col_[i]]);
        return pi;
    }

    enum class Status { Optimal, UnboundedObjective };

    /// Runs phase 2 on the stored objective. Requires a successful phase1().
    Status phase2() {
        drive_out_artificials();
        reset_costrow(phase2_cost_);
        const std::size_t bar = first_art_;
        return iterate([bar](std::size_t col) { return col < bar; });
    }

    /// Value of the stored objective at the current basis.
    const Rat& objective_value() const { return objval_; }

    /// Duals of the phase-2 optimum per original row; rows removed as
    /// redundant get multiplier zero.
    std::vector<Rat> phase2_duals() const {
        std::vector<Rat> pi(original_rows_, Rat(0));
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            const std::size_t orig = row_origin_[i];
            pi[orig] = row_sign_[orig] * (Rat(0) - costrow_[art_col_[orig]]);
        }
        return pi;
    }

    /// Current basic solution mapped back to the original variables.
    std::vector<Rat> witness() const {
        std::vector<Rat> colval(ncols_, Rat(0));
        for (std::size_t i = 0; i < tab_.size(); ++i) colval[basis_[i]] = rhs_[i];
        std::vector<Rat> z(nvars_, Rat(0));
        for (std::size_t j = 0; j < nvars_; ++j) {
            z[j] = colval[plus_col_[j]];
            if (minus_col_[j] != npos) z[j] -= colval[minus_col_[j]];
        }
        return z;
    }

    /// Number of basic variables with nonzero value (for sparsity checks).
    std::size_t positive_basic_count() const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (rhs_[i] != 0) ++count;
        return count;
    }

  private:
    void reset_costrow(const std::vector<Rat>& cost) {
        costrow_ = cost;
        objval_ = 0;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            const Rat& cb = cost[basis_[i]];
            if (cb == 0) continue;
            for (std::size_t col = 0; col < ncols_; ++col)
                if (tab_[i][col] != 0) costrow_[col] -= cb * tab_[i][col];
            objval_ += cb * rhs_[i];
        }
    }

    void pivot(std::size_t r, std::size_t e) {
        const Rat d = tab_[r][e];
        assert(d != 0);
        if (d != 1) {
            for (auto& v : tab_[r]) v /= d;
            rhs_[r] /= d;
        }
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r) continue;
            const Rat f = tab_[i][e];
            if (f == 0) continue;
            for (std::size_t col = 0; col < ncols_; ++col)
                if (tab_[r][col] != 0) tab_[i][col] -= f * tab_[r][col];
            rhs_[i] -= f * rhs_[r];
        }
        const Rat fc = costrow_[e];
        if (fc != 0) {
            for (std::size_t col = 0; col < ncols_; ++col)
                if (tab_[r][col] != 0) costrow_[col] -= fc * tab_[r][col];
            objval_ += fc * rhs_[r];
        }
        basis_[r] = e;
    }

    /// Bland's rule: enter the lowest-index improving column, leave on the
    /// minimal ratio breaking ties by lowest basic column index.
    template <class Allowed>
    Status iterate(Allowed&& allowed) {
        for (;;) {
            std::size_t e = npos;
            for (std::size_t col = 0; col < ncols_; ++col) {
                if (allowed(col) && costrow_[col] < 0) {
                    e = col;
                    break;
                }
            }
            if (e == npos) return Status::Optimal;
            std::size_t r = npos;
            Rat best;
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                if (tab_[i][e] <= 0) continue;
                Rat ratio = rhs_[i] / tab_[i][e];
                if (r == npos || ratio < best ||
                    (ratio == best && basis_[i] < basis_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == npos) return Status::UnboundedObjective;
            pivot(r, e);
        }
    }

    /// Pivots zero-valued artificials out of the basis; rows where that is
    /// impossible are redundant restatements of other rows and are dropped.
    void drive_out_artificials() {
        std::size_t i = 0;
        while (i < tab_.size()) {
            if (basis_[i] < first_art_) {
                ++i;
                continue;
            }
            assert(rhs_[i] == 0);
            std::size_t e = npos;
            for (std::size_t col = 0; col < first_art_; ++col) {
                if (tab_[i][col] != 0) {
                    e = col;
                    break;
                }
            }
            if (e != npos) {
                pivot(i, e);
                ++i;
            } else {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                row_origin_.erase(row_origin_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    std::size_t nvars_ = 0;
    std::size_t ncols_ = 0;
    std::size_t first_art_ = 0;
    std::size_t original_rows_ = 0;
    std::vector<std::vector<Rat>> tab_;
    std::vector<Rat> rhs_;
    std::vector<Rat> costrow_;
    Rat objval_;
    std::vector<Rat> phase2_cost_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> plus_col_, minus_col_, surplus_col_, art_col_;
    std::vector<std::size_t> row_origin_;
    std::vector<int> row_sign_;
};

/// Assembles a Certificate from per-original-row duals. `pi[i]` belongs to
/// sigma when row i is weak and to sigma_strict when strict. The slack needed
/// to cancel leftover coefficient mass on nonnegative variables goes onto
/// their unit rows.
inline Certificate make_certificate(const LinearSystem& s, const std::vector<Rat>& pi) {
    Certificate cert;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& row = s.rows[i];
        switch (row.rel) {
            case Rel::Ge:
                assert(pi[i] >= 0);
                cert.sigma.push_back(pi[i]);
                break;
            case Rel::Eq:
                cert.sigma.push_back(pi[i] > 0 ? pi[i] : Rat(0));
                cert.sigma.push_back(pi[i] < 0 ? Rat(-pi[i]) : Rat(0));
                break;
            case Rel::Gt:
                assert(pi[i] >= 0);
                cert.sigma_strict.push_back(pi[i]);
                break;
        }
    }
    for (std::size_t j = 0; j < s.nvars; ++j) {
        Rat combined = 0;
        for (std::size_t i = 0; i < s.rows.size(); ++i)
            if (pi[i] != 0) combined += pi[i] * s.rows[i].coeffs[j];
        if (j < s.nonneg.size() && s.nonneg[j]) {
            assert(combined <= 0);
            cert.sigma.push_back(Rat(-combined));
        } else {
            assert(combined == 0);
            (void)combined;
        }
    }
    return cert;
}

}  // namespace detail

/// Verifies an infeasibility certificate against the system, exactly.
/// Returns true iff the multipliers are nonnegative, the combined
/// coefficients cancel, and the combined right-hand side meets the Farkas
/// (> 0) or Motzkin (>= 0 with a positive strict multiplier) condition.
/// Throws std::invalid_argument when the multiplier counts do not match the
/// canonical expansion.
inline bool check_certificate(const LinearSystem& s, const Certificate& cert) {
    const auto weak = detail::weak_expansion(s);
    const auto strict = detail::strict_rows(s);
    if (cert.sigma.size() != weak.size() || cert.sigma_strict.size() != strict.size())
        throw std::invalid_argument("certificate dimensions do not match system");
    for (const auto& v : cert.sigma)
        if (v < 0) return false;
    for (const auto& v : cert.sigma_strict)
        if (v < 0) return false;
    std::vector<Rat> combined(s.nvars, Rat(0));
    Rat d = 0;
    for (std::size_t k = 0; k < weak.size(); ++k) {
        if (cert.sigma[k] == 0) continue;
        for (std::size_t j = 0; j < s.nvars; ++j)
            combined[j] += cert.sigma[k] * weak[k].coeffs[j];
        d += cert.sigma[k] * weak[k].rhs;
    }
    bool strict_used = false;
    for (std::size_t k = 0; k < strict.size(); ++k) {
        if (cert.sigma_strict[k] == 0) continue;
        strict_used = true;
        for (std::size_t j = 0; j < s.nvars; ++j)
            combined[j] += cert.sigma_strict[k] * strict[k].coeffs[j];
        d += cert.sigma_strict[k] * strict[k].rhs;
    }
    for (const auto& c : combined)
        if (c != 0) return false;
    return strict_used ? d >= 0 : d > 0;
}

namespace detail {

inline void validate_system(const LinearSystem& s) {
    for (const auto& row : s.rows)
        if (row.coeffs.size() != s.nvars)
            throw std::invalid_argument("constraint length does not match variable count");
    if (!s.nonneg.empty() && s.nonneg.size() != s.nvars)
        throw std::invalid_argument("nonneg flag vector length does not match variable count");
}

inline SolveResult solve_weak(const LinearSystem& s) {
    Simplex sx(s, std::vector<Rat>(s.nvars, Rat(0)));
    if (sx.phase1()) return Feasible{sx.witness()};
    return Infeasible{make_certificate(s, sx.phase1_duals())};
}

}  // namespace detail

/// Decides feasibility. Weak systems yield a basic witness (at most one
/// nonzero entry per constraint row); mixed systems are decided by
/// maximizing the shared strictness slack. Infeasible outcomes carry a
/// certificate that passes check_certificate.
inline SolveResult solve(const LinearSystem& s) {
    detail::validate_system(s);
    if (!s.has_strict()) return detail::solve_weak(s);

    LinearSystem ext(s.nvars + 1);
    const std::size_t delta = s.nvars;
    for (std::size_t j = 0; j < s.nvars; ++j)
        if (j < s.nonneg.size() && s.nonneg[j]) ext.nonneg[j] = true;
    ext.nonneg[delta] = true;
    std::vector<std::size_t> ext_to_orig;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& row = s.rows[i];
        std::vector<Rat> c = row.coeffs;
        c.push_back(row.rel == Rel::Gt ? Rat(-1) : Rat(0));
        ext.add(std::move(c), row.rel == Rel::Gt ? Rel::Ge : row.rel, row.rhs);
        ext_to_orig.push_back(i);
    }
    {
        std::vector<Rat> cap(s.nvars + 1, Rat(0));
        cap[delta] = -1;
        ext.add(std::move(cap), Rel::Ge, Rat(-1));
    }
    std::vector<Rat> objective(s.nvars + 1, Rat(0));
    objective[delta] = -1;

    detail::Simplex sx(ext, objective);
    const auto map_duals = [&](const std::vector<Rat>& ext_pi) {
        std::vector<Rat> pi(s.rows.size(), Rat(0));
        for (std::size_t k = 0; k < ext_to_orig.size(); ++k) pi[ext_to_orig[k]] = ext_pi[k];
        return detail::make_certificate(s, pi);
    };
    if (!sx.phase1()) return Infeasible{map_duals(sx.phase1_duals())};
    const auto status = sx.phase2();
    if (status != detail::Simplex::Status::Optimal)
        throw InternalError("strictness slack reported unbounded despite cap");
    Rat max_delta = -sx.objective_value();
    if (max_delta > 0) {
        auto w = sx.witness();
        w.resize(s.nvars);
        return Feasible{std::move(w)};
    }
    return Infeasible{map_duals(sx.phase2_duals())};
}

/// Exact linear optimization over a weak system. Strict constraints are a
/// contract error here; callers desugar them through solve().
inline OptimizeResult optimize(const LinearSystem& s, const std::vector<Rat>& objective,
                               Direction direction) {
    detail::validate_system(s);
    if (objective.size() != s.nvars)
        throw std::invalid_argument("objective length does not match variable count");
    if (s.has_strict())
        throw std::invalid_argument("optimize does not accept strict constraints");

    std::vector<Rat> c = objective;
    if (direction == Direction::Maximize)
        for (auto& v : c) v = -v;
    detail::Simplex sx(s, c);
    if (!sx.phase1()) return Infeasible{detail::make_certificate(s, sx.phase1_duals())};
    if (sx.phase2() != detail::Simplex::Status::Optimal) return Unbounded{};
    Rat value = sx.objective_value();
    if (direction == Direction::Maximize) value = -value;
    return Optimum{std::move(value), sx.witness()};
}

/// Checks a point against the system, exactly.
inline bool satisfies(const LinearSystem& s, const std::vector<Rat>& point) {
    if (point.size() != s.nvars) return false;
    for (std::size_t j = 0; j < s.nvars; ++j)
        if (j < s.nonneg.size() && s.nonneg[j] && point[j] < 0) return false;
    for (const auto& row : s.rows) {
        Rat lhs = 0;
        for (std::size_t j = 0; j < s.nvars; ++j)
            if (row.coeffs[j] != 0) lhs += row.coeffs[j] * point[j];
        switch (row.rel) {
            case Rel::Ge:
                if (!(lhs >= row.rhs)) return false;
                break;
            case Rel::Gt:
                if (!(lhs > row.rhs)) return false;
                break;
            case Rel::Eq:
                if (!(lhs == row.rhs)) return false;
                break;
        }
    }
    return true;
}

/// One constraint per line, `c1 c2 ... cn REL rhs`, nonnegativity flags
/// rendered as explicit unit rows. Debug aid for the CLI.
inline std::string dump(const LinearSystem& s) {
    std::ostringstream out;
    const auto emit = [&](const std::vector<Rat>& coeffs, const char* rel, const Rat& rhs) {
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (j) out << ' ';
            out << to_string(coeffs[j]);
        }
        if (!coeffs.empty()) out << ' ';
        out << rel << ' ' << to_string(rhs) << '\n';
    };
    for (const auto& row : s.rows) {
        const char* rel = row.rel == Rel::Ge ? ">=" : row.rel == Rel::Gt ? ">" : "=";
        emit(row.coeffs, rel, row.rhs);
    }
    for (std::size_t j = 0; j < s.nvars; ++j) {
        if (j < s.nonneg.size() && s.nonneg[j]) {
            std::vector<Rat> unit(s.nvars, Rat(0));
            unit[j] = 1;
            emit(unit, ">=", Rat(0));
        }
    }
    return out.str();
}

namespace detail {

struct FmRow {
    std::vector<Rat> coeffs;
    Rat rhs;
    bool strict;
};

/// Scale-normalizes a row in place so equal half-spaces compare equal:
/// divide by the absolute value of the first nonzero coefficient.
inline void fm_normalize(FmRow& row) {
    for (const auto& c : row.coeffs) {
        if (c != 0) {
            Rat scale = c > 0 ? c : Rat(-c);
            if (scale != 1) {
                for (auto& v : row.coeffs) v /= scale;
                row.rhs /= scale;
            }
            return;
        }
    }
}

/// Returns false when a coefficient-free row is contradictory, true when it
/// is vacuous (the caller then drops it).
inline bool fm_trivial_ok(const FmRow& row) {
    return row.strict ? row.rhs < 0 : row.rhs <= 0;
}

inline bool fm_all_zero(const FmRow& row) {
    for (const auto& c : row.coeffs)
        if (c != 0) return false;
    return true;
}

}  // namespace detail

/// Fourier-Motzkin feasibility of the same systems solve() accepts. Handles
/// strict rows natively (a combination is strict when either parent is).
/// Independent of the simplex path by construction; used as a test oracle
/// and by the CLI audit flag. Throws CapExceededError when intermediate row
/// growth passes `row_cap`.
inline bool fm_feasible(const LinearSystem& s, std::size_t row_cap = 200000) {
    detail::validate_system(s);
    std::vector<detail::FmRow> rows;
    const auto push = [&](detail::FmRow row) -> bool {
        if (detail::fm_all_zero(row)) return detail::fm_trivial_ok(row);
        detail::fm_normalize(row);
        rows.push_back(std::move(row));
        return true;
    };
    for (const auto& row : s.rows) {
        switch (row.rel) {
            case Rel::Ge:
                if (!push({row.coeffs, row.rhs, false})) return false;
                break;
            case Rel::Gt:
                if (!push({row.coeffs, row.rhs, true})) return false;
                break;
            case Rel::Eq: {
                if (!push({row.coeffs, row.rhs, false})) return false;
                std::vector<Rat> neg(row.coeffs.size());
                for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -row.coeffs[j];
                if (!push({std::move(neg), Rat(-row.rhs), false})) return false;
                break;
            }
        }
    }
    for (std::size_t j = 0; j < s.nvars; ++j) {
        if (j < s.nonneg.size() && s.nonneg[j]) {
            std::vector<Rat> unit(s.nvars, Rat(0));
            unit[j] = 1;
            if (!push({std::move(unit), Rat(0), false})) return false;
        }
    }

    std::vector<bool> eliminated(s.nvars, false);
    for (std::size_t round = 0; round < s.nvars; ++round) {
        std::size_t var = detail::npos;
        std::size_t best_cost = 0;
        for (std::size_t j = 0; j < s.nvars; ++j) {
            if (eliminated[j]) continue;
            std::size_t pos = 0, neg = 0;
            for (const auto& row : rows) {
                if (row.coeffs[j] > 0)
                    ++pos;
                else if (row.coeffs[j] < 0)
                    ++neg;
            }
            const std::size_t cost = pos * neg;
            if (var == detail::npos || cost < best_cost) {
                var = j;
                best_cost = cost;
            }
        }
        eliminated[var] = true;

        std::vector<detail::FmRow> lower, upper, next;
        for (auto& row : rows) {
            if (row.coeffs[var] > 0)
                lower.push_back(std::move(row));
            else if (row.coeffs[var] < 0)
                upper.push_back(std::move(row));
            else
                next.push_back(std::move(row));
        }
        // Dominance pruning: per normalized coefficient vector keep only the
        // tightest bound (largest rhs, strict beating weak on ties).
        std::map<std::vector<Rat>, std::pair<Rat, bool>> tightest;
        const auto consider = [&](detail::FmRow row) -> bool {
            if (detail::fm_all_zero(row)) return detail::fm_trivial_ok(row);
            detail::fm_normalize(row);
            auto it = tightest.find(row.coeffs);
            if (it == tightest.end()) {
                tightest.emplace(std::move(row.coeffs), std::make_pair(row.rhs, row.strict));
            } else if (row.rhs > it->second.first ||
                       (row.rhs == it->second.first && row.strict && !it->second.second)) {
                it->second = std::make_pair(row.rhs, row.strict);
            }
            return true;
        };
        for (auto& row : next)
            if (!consider(std::move(row))) return false;
        for (const auto& lo : lower) {
            for (const auto& hi : upper) {
                const Rat mlo = -hi.coeffs[var];
                const Rat mhi = lo.coeffs[var];
                detail::FmRow row;
                row.coeffs.resize(s.nvars);
                for (std::size_t j = 0; j < s.nvars; ++j)
                    row.coeffs[j] = mlo * lo.coeffs[j] + mhi * hi.coeffs[j];
                row.rhs = mlo * lo.rhs + mhi * hi.rhs;
                row.strict = lo.strict || hi.strict;
                if (!consider(std::move(row))) return false;
                if (tightest.size() > row_cap)
                    throw CapExceededError("fourier-motzkin row growth exceeded cap");
            }
        }
        rows.clear();
        rows.reserve(tightest.size());
        for (auto& [coeffs, bound] : tightest)
            rows.push_back(detail::FmRow{coeffs, bound.first, bound.second});
    }
    return true;
}

/// solve() plus independent cross-checks: feasible witnesses are substituted
/// back into every constraint, infeasibility certificates are re-verified,
/// and systems with at most `fm_var_cap` variables are re-decided by
/// Fourier-Motzkin elimination. Any disagreement is an InternalError.
inline SolveResult solve_audited(const LinearSystem& s, std::size_t fm_var_cap = 6) {
    SolveResult result = solve(s);
    if (const auto* ok = std::get_if<Feasible>(&result)) {
        if (!satisfies(s, ok->witness))
            throw InternalError("audit: feasible witness violates the system");
    } else if (!check_certificate(s, std::get<Infeasible>(result).certificate)) {
        throw InternalError("audit: infeasibility certificate failed verification");
    }
    if (s.nvars <= fm_var_cap && fm_feasible(s) != std::holds_alternative<Feasible>(result))
        throw InternalError("audit: fourier-motzkin disagrees with the simplex");
    return result;
}

}  // namespace expecta
