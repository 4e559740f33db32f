#pragma once

/// @file coherence.hpp
/// Coherence of lower-expectation assessments and their natural extension.
/// An assessment pins lower values for finitely many gambles; coherence asks
/// that no nonnegative combination of the assessed margins is pointwise
/// strictly beaten by a single margin, and the natural extension is the
/// least committal lower expectation agreeing with a coherent assessment.

#include "expecta/gamble.hpp"
#include "expecta/linsolve.hpp"
#include "expecta/logic.hpp"
#include "expecta/model_json.hpp"
#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace expecta {

/// Rejected assessment: the natural extension only exists for coherent ones.
struct IncoherenceError : Error {
    using Error::Error;
};

/// Gambles with assessed lower values, all on one space. The constant
/// gambles 0 and 1 are always adjoined (in that order, after the given
/// entries) at their only coherent values, so the degenerate corners of the
/// coherence condition need no separate handling.
class Assessment {
  public:
    Assessment(SpacePtr space, std::vector<std::pair<Gamble, Rat>> entries)
        : space_(std::move(space)), entries_(std::move(entries)) {
        if (!space_) throw ModelError("assessment requires a space");
        for (const auto& entry : entries_)
            if (!(*entry.first.space() == *space_))
                throw SpaceMismatchError("assessed gamble lives on a different space");
        entries_.emplace_back(Gamble::constant(space_, Rat(0)), Rat(0));
        entries_.emplace_back(Gamble::constant(space_, Rat(1)), Rat(1));
    }

    const SpacePtr& space() const { return space_; }
    /// All entries, the two constant anchors last.
    const std::vector<std::pair<Gamble, Rat>>& entries() const { return entries_; }
    /// Number of entries as given, excluding the anchors.
    std::size_t assessed_count() const { return entries_.size() - 2; }

  private:
    SpacePtr space_;
    std::vector<std::pair<Gamble, Rat>> entries_;
};

struct Coherent {};

/// Witness of incoherence: nonnegative multipliers with multipliers[index]
/// fixed to 1 whose combined margin stays pointwise strictly below the
/// distinguished gamble's margin.
struct Incoherent {
    std::size_t index = 0;
    std::vector<Rat> multipliers;
};

using CoherenceResult = std::variant<Coherent, Incoherent>;

/// One strict-feasibility system per candidate gamble, in the normalized
/// form where the distinguished multiplier is 1; the constant-1 anchor never
/// needs to be distinguished. Incoherent iff some system is feasible.
inline CoherenceResult is_coherent(const Assessment& a, bool audit = false) {
    const auto& entries = a.entries();
    const std::size_t n = entries.size();
    const std::size_t worlds = a.space()->world_count();
    for (std::size_t star = 0; star + 1 < n; ++star) {
        LinearSystem s(n - 1);
        for (std::size_t v = 0; v + 1 < n; ++v) s.require_nonneg(v);
        for (std::size_t w = 0; w < worlds; ++w) {
            std::vector<Rat> coeffs;
            coeffs.reserve(n - 1);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == star) continue;
                coeffs.push_back(entries[j].second - entries[j].first[w]);
            }
            s.add(std::move(coeffs), Rel::Gt, entries[star].second - entries[star].first[w]);
        }
        const auto result = audit ? solve_audited(s) : solve(s);
        if (const auto* feasible = std::get_if<Feasible>(&result)) {
            std::vector<Rat> b(n, Rat(0));
            b[star] = 1;
            std::size_t v = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == star) continue;
                b[j] = feasible->witness[v++];
            }
            return Incoherent{star, std::move(b)};
        }
    }
    return Coherent{};
}

/// Largest α such that Y - α dominates some nonnegative combination of the
/// assessed margins. Agrees with the assessed values on the assessed
/// gambles and is the least committal coherent extension.
inline Rat natural_extension(const Assessment& a, const Gamble& y, bool audit = false) {
    if (!(*y.space() == *a.space()))
        throw SpaceMismatchError("queried gamble lives on a different space");
    if (std::holds_alternative<Incoherent>(is_coherent(a, audit)))
        throw IncoherenceError("assessment is incoherent; it has no natural extension");
    const auto& entries = a.entries();
    const std::size_t n = entries.size();
    const std::size_t worlds = a.space()->world_count();
    LinearSystem s(n + 1);
    for (std::size_t j = 0; j < n; ++j) s.require_nonneg(1 + j);
    for (std::size_t w = 0; w < worlds; ++w) {
        std::vector<Rat> coeffs(n + 1, Rat(0));
        coeffs[0] = -1;
        for (std::size_t j = 0; j < n; ++j) coeffs[1 + j] = entries[j].second - entries[j].first[w];
        s.add(std::move(coeffs), Rel::Ge, -y[w]);
    }
    std::vector<Rat> objective(n + 1, Rat(0));
    objective[0] = 1;
    const auto result = optimize(s, objective, Direction::Maximize);
    const auto* best = std::get_if<Optimum>(&result);
    if (!best) throw InternalError("natural extension LP must reach a finite optimum");
    if (audit && !satisfies(s, best->witness))
        throw InternalError("audit: optimal witness violates the extension system");
    Rat top = y[0];
    for (std::size_t w = 1; w < worlds; ++w) top = std::max(top, y[w]);
    if (best->value > top)
        throw InternalError("natural extension exceeded the maximum of the gamble");
    return best->value;
}

/// Assessment document:
/// {"model_space": {"props": [...], "worlds": [...]},
///  "assessments": [{"gamble": "1*p + 2*(p & q)", "lower": "3/8"}, ...]}.
inline Assessment parse_assessment(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("model_space") || !j.contains("assessments"))
        throw ModelError("assessment document needs model_space and assessments");
    SpacePtr space = detail::space_from_json(j.at("model_space"));
    const auto& list = j.at("assessments");
    if (!list.is_array()) throw ModelError("assessments must be an array");
    std::vector<std::pair<Gamble, Rat>> entries;
    for (const auto& item : list) {
        if (!item.is_object() || !item.contains("gamble") || !item.contains("lower"))
            throw ModelError("each assessment needs a gamble and a lower value");
        if (!item.at("gamble").is_string()) throw ModelError("gamble must be a string");
        const SyntacticGamble sg = parse_gamble(item.at("gamble").get<std::string>());
        entries.emplace_back(realize_gamble(sg, space),
                             detail::rat_from_json(item.at("lower"), "lower"));
    }
    return Assessment(std::move(space), std::move(entries));
}

/// Inverse of parse_assessment up to gamble syntax: each assessed gamble is
/// printed as a sum over the atom formulas of its nonzero worlds.
inline std::string serialize_assessment(const Assessment& a) {
    nlohmann::json j;
    j["model_space"] = detail::space_to_json(*a.space());
    nlohmann::json list = nlohmann::json::array();
    const auto& props = a.space()->props();
    for (std::size_t i = 0; i < a.assessed_count(); ++i) {
        const auto& [gamble, lower] = a.entries()[i];
        SyntacticGamble sg;
        for (std::size_t w = 0; w < gamble.size(); ++w) {
            if (gamble[w] == 0) continue;
            sg.push_back({gamble[w], atom_formula(props, a.space()->worlds()[w].assign)});
        }
        if (sg.empty()) sg.push_back({Rat(0), PropFormula::tru()});
        list.push_back({{"gamble", to_string(sg)}, {"lower", to_string(lower)}});
    }
    j["assessments"] = std::move(list);
    return j.dump(2);
}

}  // namespace expecta
