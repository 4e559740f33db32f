#include "expecta/decide.hpp"

#include "expecta/model_json.hpp"

#include "support/axiom_support.hpp"
#include "support/formula_support.hpp"
#include "support/test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <variant>
#include <vector>

using namespace expecta;
using testsupport::harness_seed;
using testsupport::rand_exp_formula;
using testsupport::rand_gamble_formula;
using testsupport::rand_int;
using testsupport::rand_lik_formula;
using testsupport::rand_model;
using testsupport::Rng;

namespace {

const std::vector<std::string>& prop_pool(int which) {
    static const std::vector<std::string> two{"p", "q"};
    static const std::vector<std::string> three{"p", "q", "r"};
    return which == 0 ? two : three;
}

constexpr Semantics kAllSemantics[] = {Semantics::Prob, Semantics::LowerProb, Semantics::Belief,
                                       Semantics::Possibility};

int model_class(Semantics semantics) {
    switch (semantics) {
        case Semantics::Prob: return 0;
        case Semantics::LowerProb: return 1;
        case Semantics::Belief: return 2;
        case Semantics::Possibility: return 3;
    }
    return 0;
}

bool refutes(Rng& rng, const ExpFormula& f, Semantics semantics, int samples) {
    const auto props = props_of(f);
    const SpacePtr space =
        AtomSpace::atoms_over(std::vector<std::string>(props.begin(), props.end()));
    for (int i = 0; i < samples; ++i)
        if (holds(f, rand_model(rng, space, model_class(semantics)))) return false;
    return true;
}

}  // namespace

TEST_CASE("frozen satisfiability decisions") {
    const auto separation = sat(parse_exp("2*E(p + q) > 1"), Semantics::LowerProb);
    REQUIRE(separation.sat());
    REQUIRE(std::holds_alternative<CredalSet>(separation.witness->model));
    REQUIRE(holds(parse_exp("2*E(p + q) > 1"), separation.witness->model));

    REQUIRE_FALSE(sat(parse_exp("E(p) >= 1 & E(!p) >= 1"), Semantics::Prob).sat());
    REQUIRE_FALSE(sat(parse_exp("E(p) > 1"), Semantics::Prob).sat());
    REQUIRE_FALSE(sat(parse_exp("E(p) <= 0 & E(!p) <= 0"), Semantics::Prob).sat());
    REQUIRE(sat(parse_exp("E(p) <= 0 & E(!p) <= 0"), Semantics::Belief).sat());

    const ExpFormula discriminator = parse_exp("E(p | q) >= 1 & E(p) <= 0 & E(q) <= 0");
    const auto as_belief = sat(discriminator, Semantics::Belief);
    REQUIRE(as_belief.sat());
    const auto& mass = std::get<MassFunction>(as_belief.witness->model);
    REQUIRE(mass.masses().size() <= 4);
    REQUIRE_FALSE(sat(discriminator, Semantics::Possibility).sat());
}

TEST_CASE("frozen validity decisions") {
    for (const Semantics semantics : kAllSemantics) {
        REQUIRE(valid(parse_exp("E(true) = 1"), semantics));
        REQUIRE(valid(parse_exp("E(p) >= 0"), semantics));
        REQUIRE(valid(parse_exp("E(p) <= 1"), semantics));
        REQUIRE_FALSE(valid(parse_exp("E(p) >= 1/2"), semantics));
    }
    REQUIRE(valid(parse_exp("E(p) + E(!p) = 1"), Semantics::Prob));
    REQUIRE_FALSE(valid(parse_exp("E(p) + E(!p) = 1"), Semantics::Belief));
    REQUIRE(valid(parse_exp("E(p) + E(q) - E(p & q) <= 1"), Semantics::Prob));
}

TEST_CASE("caps guard the exponential procedures") {
    REQUIRE_THROWS_AS(sat(parse_exp("E(p1 + p2 + p3 + p4 + p5) >= 0"), Semantics::Prob),
                      CapExceededError);
    REQUIRE_THROWS_AS(sat(parse_exp("E(a & b & c & d) >= 1"), Semantics::Possibility),
                      CapExceededError);
    DecideOptions wide;
    wide.possibility_n4 = true;
    const auto gated = sat(parse_exp("E(a & b & c & d) >= 1"), Semantics::Possibility, wide);
    REQUIRE(gated.sat());
    DecideOptions narrow;
    narrow.max_clauses = 2;
    REQUIRE_THROWS_AS(
        sat(parse_exp("(E(p) >= 0 | E(p) >= 1) & (E(q) >= 0 | E(q) >= 1)"), Semantics::Prob, narrow),
        CapExceededError);
}

TEST_CASE("gamble formula satisfiability") {
    const auto partition = sat_gamble(parse_gamble_formula("p + !p >= 1"));
    REQUIRE(partition.sat());
    REQUIRE(std::popcount(partition.witness->worlds) == 1);

    REQUIRE_FALSE(sat_gamble(parse_gamble_formula("!(p >= 0)")).sat());
    REQUIRE_FALSE(sat_gamble(parse_gamble_formula("p >= 1 & p <= 0")).sat());

    const auto negated = sat_gamble(parse_gamble_formula("!(2*p - q >= 0)"));
    REQUIRE(negated.sat());
    REQUIRE(negated.witness->worlds == WorldSet(1) << 2);
    REQUIRE(negated.witness->space->worlds()[2].assign == 0b10);

    const auto strict = sat_gamble(parse_gamble_formula("p > 0"));
    REQUIRE(strict.sat());
    REQUIRE(holds(parse_gamble_formula("p > 0"), strict.witness->space, strict.witness->worlds));
}

TEST_CASE("gamble decision agrees with brute-force structure enumeration") {
    Rng rng(harness_seed(76001));
    for (int iter = 0; iter < 220; ++iter) {
        const auto& props = prop_pool(iter % 2);
        const GambleFormula f = rand_gamble_formula(rng, props, 2);
        const auto result = sat_gamble(f);
        const auto prop_set = props_of(f);
        const SpacePtr space = AtomSpace::atoms_over(
            std::vector<std::string>(prop_set.begin(), prop_set.end()));
        bool brute = false;
        for (WorldSet ws = 1; ws <= space->full_mask() && !brute; ++ws)
            brute = holds(f, space, ws);
        REQUIRE(result.sat() == brute);
        if (result.sat())
            REQUIRE(holds(f, result.witness->space, result.witness->worlds));
    }
}

TEST_CASE("function formula satisfiability") {
    REQUIRE_FALSE(sat_funcineq(parse_func("v >= 1 & !(v >= 1)")).sat());

    const FuncFormula split = parse_func("!(v <= 0) & !(v >= 0)");
    const auto as_functions = sat_funcineq(split);
    REQUIRE(as_functions.sat());
    REQUIRE(as_functions.witness->domain_size == 2);
    REQUIRE(holds(split, *as_functions.witness));
    REQUIRE_FALSE(sat_funcineq_real(split).sat());

    const auto affine = sat_funcineq(parse_func("v1 + v2 >= 1"));
    REQUIRE(affine.sat());
    REQUIRE(holds(parse_func("v1 + v2 >= 1"), *affine.witness));

    const auto real = sat_funcineq_real(parse_func("2*v > 1 & v <= 1"));
    REQUIRE(real.sat());
    REQUIRE(real.witness->domain_size == 1);

    REQUIRE_FALSE(sat_funcineq(parse_func("v > 0 & v < 0")).sat());
    REQUIRE(sat_funcineq(parse_func("v >= 0 | v < 0")).sat());
}

TEST_CASE("decision corpus: soundness, refutation sampling, monotonicity") {
    Rng rng(harness_seed(76011));
    int sat_count = 0;
    int unsat_count = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const auto& props = prop_pool(iter % 2);
        const ExpFormula f = rand_exp_formula(rng, props, 2);
        const std::size_t atom_count = std::size_t(1) << props_of(f).size();
        bool prob_sat = false;
        bool lower_sat = false;
        bool belief_sat = false;
        for (const Semantics semantics : kAllSemantics) {
            const auto result = sat(f, semantics);
            if (result.sat()) {
                ++sat_count;
                REQUIRE(holds(f, result.witness->model));
                REQUIRE(result.witness->space->world_count() <= atom_count);
                const int klass = model_class(semantics);
                const auto& model = result.witness->model;
                REQUIRE((klass == 0) == std::holds_alternative<ProbabilityMeasure>(model));
                REQUIRE((klass == 1) == std::holds_alternative<CredalSet>(model));
                REQUIRE((klass == 2) == std::holds_alternative<MassFunction>(model));
                REQUIRE((klass == 3) == std::holds_alternative<PossibilityMeasure>(model));
            } else {
                ++unsat_count;
                REQUIRE(refutes(rng, f, semantics, 150));
            }
            if (semantics == Semantics::Prob) prob_sat = result.sat();
            if (semantics == Semantics::LowerProb) lower_sat = result.sat();
            if (semantics == Semantics::Belief) belief_sat = result.sat();
        }
        if (prob_sat) {
            REQUIRE(lower_sat);
            REQUIRE(belief_sat);
        }
    }
    REQUIRE(sat_count > 0);
    REQUIRE(unsat_count > 0);
}

TEST_CASE("likelihood decisions agree with their expectation translations") {
    Rng rng(harness_seed(76021));
    for (int iter = 0; iter < 40; ++iter) {
        const auto& props = prop_pool(iter % 2);
        const LikFormula f = rand_lik_formula(rng, props, 2);
        const ExpFormula translated = translate_likelihood(f);
        for (const Semantics semantics : kAllSemantics) {
            const auto result = sat(translated, semantics);
            if (result.sat()) {
                REQUIRE(holds(f, result.witness->model));
            } else {
                const auto prop_set = props_of(f);
                const SpacePtr space = AtomSpace::atoms_over(
                    std::vector<std::string>(prop_set.begin(), prop_set.end()));
                for (int i = 0; i < 100; ++i)
                    REQUIRE_FALSE(holds(f, rand_model(rng, space, model_class(semantics))));
            }
        }
    }
}

TEST_CASE("expectation axioms hold in random models of their class") {
    Rng rng(harness_seed(76031));
    for (const auto& axiom : testsupport::expectation_axiom_cases()) {
        INFO(axiom.name);
        REQUIRE(testsupport::axiom_failures(axiom, rng, 500) == 0);
    }
}

TEST_CASE("gamble axioms hold in random world structures") {
    Rng rng(harness_seed(76041));
    for (const auto& axiom : testsupport::gamble_axiom_cases()) {
        INFO(axiom.name);
        REQUIRE(testsupport::axiom_failures(axiom, rng, 500) == 0);
    }
}

TEST_CASE("witnesses serialize as model documents") {
    const auto result = sat(parse_exp("2*E(p + q) > 1"), Semantics::LowerProb);
    REQUIRE(result.sat());
    const std::string doc =
        serialize_model(result.witness->space, result.witness->model);
    const ParsedModel parsed = parse_model(doc);
    REQUIRE(holds(parse_exp("2*E(p + q) > 1"), parsed.model));
}

TEST_CASE("semantics names round-trip") {
    for (const Semantics semantics : kAllSemantics)
        REQUIRE(parse_semantics(to_string(semantics)) == semantics);
    REQUIRE_THROWS_AS(parse_semantics("bayes"), ParseError);
}
