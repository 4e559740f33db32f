#pragma once

/// @file measures.hpp
/// The four uncertainty representations: probability measures, credal sets,
/// mass functions (belief functions in Moebius coordinates), and possibility
/// measures, together with their validity checks and the mass/Moebius
/// correspondence.

#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace expecta {

/// Tag for constructors that skip axiom validation. Structural requirements
/// (sizes, space membership) are still enforced. Used by document parsers so
/// validate_model can report violations instead of the constructor throwing.
struct unchecked_t {
    explicit unchecked_t() = default;
};
inline constexpr unchecked_t unchecked{};

struct Violation {
    std::string axiom;
    std::string detail;
};

inline std::string describe(const std::vector<Violation>& violations) {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.axiom + ": " + v.detail;
    }
    return out;
}

class ProbabilityMeasure {
  public:
    ProbabilityMeasure(SpacePtr space, std::vector<Rat> values)
        : ProbabilityMeasure(unchecked, std::move(space), std::move(values)) {
        const auto violations = validate();
        if (!violations.empty()) throw ModelError("invalid probability measure; " + describe(violations));
    }

    ProbabilityMeasure(unchecked_t, SpacePtr space, std::vector<Rat> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (!space_) throw ModelError("probability measure requires a space");
        if (values_.size() != space_->world_count())
            throw ModelError("probability value count does not match world count");
    }

    const SpacePtr& space() const { return space_; }
    const Rat& operator[](std::size_t world) const { return values_[world]; }
    const std::vector<Rat>& values() const { return values_; }

    /// mu(U): the exact sum of world probabilities over U.
    Rat value(WorldSet set) const {
        Rat out = 0;
        for (std::size_t w = 0; w < values_.size(); ++w)
            if (contains(set, w)) out += values_[w];
        return out;
    }

    std::vector<Violation> validate() const {
        std::vector<Violation> out;
        Rat sum = 0;
        for (std::size_t w = 0; w < values_.size(); ++w) {
            if (values_[w] < 0)
                out.push_back({"nonnegativity", "world '" + space_->world_id(w) +
                                                    "' has probability " + to_string(values_[w])});
            sum += values_[w];
        }
        if (sum != 1)
            out.push_back({"total-probability", "values sum to " + to_string(sum) + ", not 1"});
        return out;
    }

  private:
    SpacePtr space_;
    std::vector<Rat> values_;
};

class CredalSet {
  public:
    CredalSet(SpacePtr space, std::vector<ProbabilityMeasure> measures)
        : CredalSet(unchecked, std::move(space), std::move(measures)) {
        const auto violations = validate();
        if (!violations.empty()) throw ModelError("invalid credal set; " + describe(violations));
    }

    CredalSet(unchecked_t, SpacePtr space, std::vector<ProbabilityMeasure> measures)
        : space_(std::move(space)), measures_(std::move(measures)) {
        if (!space_) throw ModelError("credal set requires a space");
        for (const auto& mu : measures_) require_same_space(space_, mu.space());
    }

    const SpacePtr& space() const { return space_; }
    const std::vector<ProbabilityMeasure>& measures() const { return measures_; }

    std::vector<Violation> validate() const {
        std::vector<Violation> out;
        if (measures_.empty()) out.push_back({"nonempty", "credal set has no measures"});
        for (std::size_t i = 0; i < measures_.size(); ++i)
            for (const auto& v : measures_[i].validate())
                out.push_back({v.axiom, "measure " + std::to_string(i) + ": " + v.detail});
        return out;
    }

  private:
    SpacePtr space_;
    std::vector<ProbabilityMeasure> measures_;
};

/// A belief function in mass coordinates: positive weights on nonempty
/// subsets summing to 1. Belief and plausibility are derived views.
class MassFunction {
  public:
    MassFunction(SpacePtr space, std::map<WorldSet, Rat> masses)
        : MassFunction(unchecked, std::move(space), std::move(masses)) {
        const auto violations = validate();
        if (!violations.empty()) throw ModelError("invalid mass function; " + describe(violations));
    }

    MassFunction(unchecked_t, SpacePtr space, std::map<WorldSet, Rat> masses)
        : space_(std::move(space)), masses_(std::move(masses)) {
        if (!space_) throw ModelError("mass function requires a space");
        for (const auto& [set, mass] : masses_) {
            (void)mass;
            if (!subset_of(set, space_->full_mask()))
                throw ModelError("mass assigned outside the space's worlds");
        }
    }

    const SpacePtr& space() const { return space_; }
    const std::map<WorldSet, Rat>& masses() const { return masses_; }

    /// Bel(U) = sum of masses of subsets of U.
    Rat belief(WorldSet set) const {
        Rat out = 0;
        for (const auto& [support, mass] : masses_)
            if (subset_of(support, set)) out += mass;
        return out;
    }

    /// Plaus(U) = 1 - Bel(complement of U): the mass of sets meeting U.
    Rat plausibility(WorldSet set) const {
        Rat out = 0;
        for (const auto& [support, mass] : masses_)
            if ((support & set) != 0) out += mass;
        return out;
    }

    std::vector<Violation> validate() const {
        std::vector<Violation> out;
        Rat sum = 0;
        for (const auto& [set, mass] : masses_) {
            if (set == 0)
                out.push_back({"empty-set-mass", "mass " + to_string(mass) + " on the empty set"});
            if (mass <= 0)
                out.push_back({"positivity", "mass " + to_string(mass) + " on " +
                                                 format_world_set(*space_, set)});
            sum += mass;
        }
        if (sum != 1) out.push_back({"total-mass", "masses sum to " + to_string(sum) + ", not 1"});
        return out;
    }

  private:
    SpacePtr space_;
    std::map<WorldSet, Rat> masses_;
};

class PossibilityMeasure {
  public:
    PossibilityMeasure(SpacePtr space, std::vector<Rat> values)
        : PossibilityMeasure(unchecked, std::move(space), std::move(values)) {
        const auto violations = validate();
        if (!violations.empty())
            throw ModelError("invalid possibility measure; " + describe(violations));
    }

    PossibilityMeasure(unchecked_t, SpacePtr space, std::vector<Rat> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (!space_) throw ModelError("possibility measure requires a space");
        if (values_.size() != space_->world_count())
            throw ModelError("possibility value count does not match world count");
    }

    const SpacePtr& space() const { return space_; }
    const Rat& operator[](std::size_t world) const { return values_[world]; }
    const std::vector<Rat>& values() const { return values_; }

    /// Poss(U) = max world possibility over U; 0 on the empty set.
    Rat value(WorldSet set) const {
        Rat out = 0;
        for (std::size_t w = 0; w < values_.size(); ++w)
            if (contains(set, w) && values_[w] > out) out = values_[w];
        return out;
    }

    std::vector<Violation> validate() const {
        std::vector<Violation> out;
        Rat max = 0;
        for (std::size_t w = 0; w < values_.size(); ++w) {
            if (values_[w] < 0 || values_[w] > 1)
                out.push_back({"range", "world '" + space_->world_id(w) + "' has possibility " +
                                            to_string(values_[w])});
            if (values_[w] > max) max = values_[w];
        }
        if (max != 1)
            out.push_back({"normalization", "maximum possibility is " + to_string(max) + ", not 1"});
        return out;
    }

    /// The canonical consonant mass function: sort the distinct possibility
    /// values 1 = v1 > v2 > ... > vk > 0 and give the nested supports
    /// U_i = {w : poss(w) >= v_i} mass v_i - v_{i+1} (with v_{k+1} = 0).
    MassFunction consonant_mass() const {
        std::vector<Rat> levels;
        for (const auto& v : values_)
            if (v > 0) levels.push_back(v);
        std::sort(levels.begin(), levels.end(), [](const Rat& a, const Rat& b) { return a > b; });
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::map<WorldSet, Rat> masses;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            WorldSet support = 0;
            for (std::size_t w = 0; w < values_.size(); ++w)
                if (values_[w] >= levels[i]) support |= WorldSet(1) << w;
            const Rat next = i + 1 < levels.size() ? levels[i + 1] : Rat(0);
            masses[support] = levels[i] - next;
        }
        return MassFunction(space_, std::move(masses));
    }

  private:
    SpacePtr space_;
    std::vector<Rat> values_;
};

using UncertaintyModel =
    std::variant<ProbabilityMeasure, CredalSet, MassFunction, PossibilityMeasure>;

inline const SpacePtr& model_space(const UncertaintyModel& model) {
    return std::visit([](const auto& m) -> const SpacePtr& { return m.space(); }, model);
}

/// Violations of the representation's defining axioms; empty means ok.
inline std::vector<Violation> validate_model(const UncertaintyModel& model) {
    return std::visit([](const auto& m) { return m.validate(); }, model);
}

/// Moebius inversion failed: some coefficient came out negative, so the
/// input set function is not a belief function.
struct NegativeMassError : ModelError {
    NegativeMassError(const AtomSpace& space, WorldSet subset_, Rat mass_)
        : ModelError("not a belief function: mass of " + format_world_set(space, subset_) +
                     " is " + to_string(mass_)),
          subset(subset_),
          mass(std::move(mass_)) {}
    WorldSet subset;
    Rat mass;
};

/// Moebius inversion of a set function given on every subset of the space
/// (table indexed by world-set bitmask, so table[0] is v of the empty set).
/// Returns the mass function whose belief view reproduces v; throws
/// NegativeMassError when v is not a belief function, and ModelError when v
/// is partial or not grounded/normalized.
inline MassFunction mass_from_belief(const SpacePtr& space, const std::vector<Rat>& table) {
    if (space->world_count() > 20)
        throw CapExceededError("mass_from_belief supports at most 20 worlds");
    const std::size_t n = std::size_t(1) << space->world_count();
    if (table.size() != n)
        throw ModelError("set function must be given on all " + std::to_string(n) + " subsets");
    if (table[0] != 0) throw ModelError("set function must assign 0 to the empty set");
    if (table[n - 1] != 1) throw ModelError("set function must assign 1 to the full set");

    std::vector<Rat> moebius(n, Rat(0));
    std::map<WorldSet, Rat> masses;
    for (WorldSet u = 1; u < n; ++u) {
        Rat m = table[u];
        // Proper submask walk: every V with V subset of U, V != U.
        for (WorldSet v = (u - 1) & u;; v = (v - 1) & u) {
            m -= moebius[v];
            if (v == 0) break;
        }
        if (m < 0) throw NegativeMassError(*space, u, m);
        moebius[u] = m;
        if (m > 0) masses[u] = m;
    }
    return MassFunction(space, std::move(masses));
}

inline Rat belief_value(const MassFunction& m, WorldSet set) { return m.belief(set); }
inline Rat plausibility_value(const MassFunction& m, WorldSet set) { return m.plausibility(set); }
inline Rat poss_value(const PossibilityMeasure& poss, WorldSet set) { return poss.value(set); }

/// Exact (min, max) of mu(U) over the credal set's finitely many measures.
inline std::pair<Rat, Rat> event_bounds(const CredalSet& credal, WorldSet set) {
    const auto& measures = credal.measures();
    if (measures.empty()) throw ModelError("event_bounds over an empty credal set");
    Rat lo = measures.front().value(set);
    Rat hi = lo;
    for (std::size_t i = 1; i < measures.size(); ++i) {
        const Rat v = measures[i].value(set);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    return {lo, hi};
}

}  // namespace expecta
