#include "expecta/measures.hpp"
#include "expecta/model_json.hpp"

#include "support/test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace expecta;
using testsupport::rand_int;
using testsupport::rand_mass;
using testsupport::rand_poss;
using testsupport::rand_prob;
using testsupport::rand_world_set;
using testsupport::Rng;

namespace {

SpacePtr three_world_space() {
    return std::make_shared<const AtomSpace>(
        std::vector<std::string>{"p", "q"},
        std::vector<World>{{"w1", 0b01}, {"w2", 0b11}, {"w3", 0b00}});
}

/// The lower probability read off a credal set, tabulated on all subsets.
std::vector<Rat> lower_probability_table(const CredalSet& credal) {
    const auto full = credal.space()->full_mask();
    std::vector<Rat> table(full + 1);
    for (WorldSet u = 0; u <= full; ++u) table[u] = event_bounds(credal, u).first;
    return table;
}

/// Three-measure credal set whose lower probability is 0 on singletons and
/// 3/8 on doubletons.
CredalSet determination_credal(const SpacePtr& space) {
    auto mk = [&](Rat a, Rat b, Rat c) {
        return ProbabilityMeasure(space, {std::move(a), std::move(b), std::move(c)});
    };
    return CredalSet(space, {mk(Rat(0), Rat(3, 8), Rat(5, 8)), mk(Rat(5, 8), Rat(0), Rat(3, 8)),
                             mk(Rat(3, 8), Rat(5, 8), Rat(0))});
}

}  // namespace

TEST_CASE("probability measures validate") {
    const auto space = three_world_space();
    CHECK(ProbabilityMeasure(space, {Rat(1, 2), Rat(1, 2), Rat(0)}).validate().empty());
    CHECK_THROWS_AS(ProbabilityMeasure(space, {Rat(1, 2), Rat(1, 2), Rat(1, 2)}), ModelError);
    const ProbabilityMeasure bad(unchecked, space, {Rat(1, 2), Rat(1, 2), Rat(1, 2)});
    const auto violations = bad.validate();
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].axiom == "total-probability");
    const ProbabilityMeasure negative(unchecked, space, {Rat(3, 2), Rat(-1, 2), Rat(0)});
    REQUIRE(negative.validate().size() == 1);
    CHECK(negative.validate()[0].axiom == "nonnegativity");
}

TEST_CASE("probability value is additive over worlds") {
    const auto space = three_world_space();
    const ProbabilityMeasure mu(space, {Rat(5, 8), Rat(0), Rat(3, 8)});
    CHECK(mu.value(0) == Rat(0));
    CHECK(mu.value(0b101) == Rat(1));
    CHECK(mu.value(0b011) == Rat(5, 8));
}

TEST_CASE("the determination example's lower probability is not a belief function") {
    const auto space = three_world_space();
    const auto credal = determination_credal(space);
    for (std::size_t w = 0; w < 3; ++w)
        CHECK(event_bounds(credal, WorldSet(1) << w).first == Rat(0));
    for (const WorldSet u : {WorldSet(0b011), WorldSet(0b101), WorldSet(0b110)})
        CHECK(event_bounds(credal, u).first == Rat(3, 8));
    CHECK(event_bounds(credal, 0b111).first == Rat(1));

    const auto table = lower_probability_table(credal);
    try {
        mass_from_belief(space, table);
        FAIL("expected NegativeMassError");
    } catch (const NegativeMassError& e) {
        CHECK(e.subset == WorldSet(0b111));
        CHECK(e.mass == Rat(-1, 8));
    }
}

TEST_CASE("mass_from_belief handles the frozen examples") {
    const auto space = three_world_space();
    SECTION("unit mass at w1") {
        std::vector<Rat> table(8, Rat(0));
        for (WorldSet u = 0; u < 8; ++u) table[u] = contains(u, 0) ? Rat(1) : Rat(0);
        const auto m = mass_from_belief(space, table);
        REQUIRE(m.masses().size() == 1);
        CHECK(m.masses().at(0b001) == Rat(1));
    }
    SECTION("additive set functions invert to singleton masses") {
        const ProbabilityMeasure mu(space, {Rat(1, 2), Rat(1, 3), Rat(1, 6)});
        std::vector<Rat> table(8);
        for (WorldSet u = 0; u < 8; ++u) table[u] = mu.value(u);
        const auto m = mass_from_belief(space, table);
        REQUIRE(m.masses().size() == 3);
        CHECK(m.masses().at(0b001) == Rat(1, 2));
        CHECK(m.masses().at(0b010) == Rat(1, 3));
        CHECK(m.masses().at(0b100) == Rat(1, 6));
    }
    SECTION("structural rejections") {
        CHECK_THROWS_AS(mass_from_belief(space, std::vector<Rat>(7, Rat(0))), ModelError);
        std::vector<Rat> bad_empty(8, Rat(0));
        bad_empty[0] = Rat(1, 2);
        bad_empty[7] = Rat(1);
        CHECK_THROWS_AS(mass_from_belief(space, bad_empty), ModelError);
        std::vector<Rat> bad_full(8, Rat(0));
        bad_full[7] = Rat(1, 2);
        CHECK_THROWS_AS(mass_from_belief(space, bad_full), ModelError);
    }
}

TEST_CASE("belief and plausibility views") {
    const auto space = three_world_space();
    SECTION("vacuous mass") {
        const MassFunction m(space, {{0b111, Rat(1)}});
        for (WorldSet u = 0; u < 0b111; ++u) CHECK(m.belief(u) == Rat(0));
        CHECK(m.belief(0b111) == Rat(1));
        for (WorldSet u = 1; u <= 0b111; ++u) CHECK(m.plausibility(u) == Rat(1));
        CHECK(m.plausibility(0) == Rat(0));
    }
    SECTION("singleton masses reduce to a probability") {
        const MassFunction m(space,
                             {{0b001, Rat(1, 2)}, {0b010, Rat(1, 3)}, {0b100, Rat(1, 6)}});
        const ProbabilityMeasure mu(space, {Rat(1, 2), Rat(1, 3), Rat(1, 6)});
        for (WorldSet u = 0; u < 8; ++u) {
            CHECK(m.belief(u) == mu.value(u));
            CHECK(m.plausibility(u) == mu.value(u));
        }
    }
    SECTION("split mass") {
        const MassFunction m(space, {{0b011, Rat(1, 2)}, {0b100, Rat(1, 2)}});
        CHECK(m.belief(0b101) == Rat(1, 2));
        CHECK(m.plausibility(0b101) == Rat(1));
    }
}

TEST_CASE("belief and plausibility are conjugate") {
    Rng rng(testsupport::harness_seed(73001));
    const auto space = AtomSpace::atoms_over({"p", "q"});
    for (int iter = 0; iter < 200; ++iter) {
        const auto m = rand_mass(rng, space);
        const WorldSet u = rand_world_set(rng, space);
        CHECK(m.belief(u) + m.plausibility(space->full_mask() & ~u) == Rat(1));
        CHECK(m.belief(u) <= m.plausibility(u));
    }
}

TEST_CASE("mass round trip through the belief view") {
    Rng rng(testsupport::harness_seed(73002));
    const auto space = AtomSpace::atoms_over({"p", "q"});
    for (int iter = 0; iter < 200; ++iter) {
        const auto m = rand_mass(rng, space);
        std::vector<Rat> table(space->full_mask() + 1);
        for (WorldSet u = 0; u <= space->full_mask(); ++u) table[u] = m.belief(u);
        const auto back = mass_from_belief(space, table);
        CHECK(back.masses() == m.masses());
    }
}

TEST_CASE("credal event bounds") {
    const auto space = three_world_space();
    SECTION("singleton credal sets pin both bounds") {
        const ProbabilityMeasure mu(space, {Rat(1, 4), Rat(1, 4), Rat(1, 2)});
        const CredalSet credal(space, {mu});
        for (WorldSet u = 0; u < 8; ++u) {
            const auto [lo, hi] = event_bounds(credal, u);
            CHECK(lo == mu.value(u));
            CHECK(hi == mu.value(u));
        }
    }
    SECTION("lower and upper are conjugate") {
        Rng rng(testsupport::harness_seed(73003));
        for (int iter = 0; iter < 100; ++iter) {
            const auto credal = testsupport::rand_credal(rng, space);
            const WorldSet u = rand_world_set(rng, space);
            const auto [lo, hi] = event_bounds(credal, u);
            CHECK(lo <= hi);
            CHECK(lo == Rat(1) - event_bounds(credal, space->full_mask() & ~u).second);
        }
    }
}

TEST_CASE("possibility values") {
    const auto space = three_world_space();
    const PossibilityMeasure poss(space, {Rat(1), Rat(1, 2), Rat(1, 4)});
    CHECK(poss.value(0b110) == Rat(1, 2));
    CHECK(poss.value(space->full_mask()) == Rat(1));
    CHECK(poss.value(0) == Rat(0));
    CHECK_THROWS_AS(PossibilityMeasure(space, {Rat(1, 2), Rat(1, 2), Rat(0)}), ModelError);
    CHECK_THROWS_AS(PossibilityMeasure(space, {Rat(1), Rat(2), Rat(0)}), ModelError);
}

TEST_CASE("possibility measures are maxitive") {
    Rng rng(testsupport::harness_seed(73004));
    const auto space = AtomSpace::atoms_over({"p", "q"});
    for (int iter = 0; iter < 200; ++iter) {
        const auto poss = rand_poss(rng, space);
        const WorldSet u = rand_world_set(rng, space);
        const WorldSet v = rand_world_set(rng, space);
        const Rat lhs = poss.value(u | v);
        const Rat rhs = poss.value(u) > poss.value(v) ? poss.value(u) : poss.value(v);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("consonant mass functions have nested supports and recover Poss") {
    Rng rng(testsupport::harness_seed(73005));
    const auto space = AtomSpace::atoms_over({"p", "q"});
    for (int iter = 0; iter < 200; ++iter) {
        const auto poss = rand_poss(rng, space);
        const auto m = poss.consonant_mass();
        CHECK(m.validate().empty());
        for (const auto& [u, mu] : m.masses()) {
            (void)mu;
            for (const auto& [v, mv] : m.masses()) {
                (void)mv;
                CHECK((subset_of(u, v) || subset_of(v, u)));
            }
        }
        for (WorldSet u = 0; u <= space->full_mask(); ++u)
            CHECK(m.plausibility(u) == poss.value(u));
    }
}

TEST_CASE("validate_model accepts constructor output") {
    Rng rng(testsupport::harness_seed(73006));
    const auto space = AtomSpace::atoms_over({"p", "q"});
    for (int iter = 0; iter < 50; ++iter) {
        CHECK(validate_model(UncertaintyModel(rand_prob(rng, space))).empty());
        CHECK(validate_model(UncertaintyModel(testsupport::rand_credal(rng, space))).empty());
        CHECK(validate_model(UncertaintyModel(rand_mass(rng, space))).empty());
        CHECK(validate_model(UncertaintyModel(rand_poss(rng, space))).empty());
    }
}

TEST_CASE("validate_model reports violations on unchecked values") {
    const auto space = three_world_space();
    const MassFunction m(unchecked, space, {{0, Rat(1, 4)}, {0b011, Rat(3, 4)}});
    const auto violations = m.validate();
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].axiom == "empty-set-mass");
    const MassFunction short_mass(unchecked, space, {{0b011, Rat(3, 4)}});
    REQUIRE(short_mass.validate().size() == 1);
    CHECK(short_mass.validate()[0].axiom == "total-mass");
    const CredalSet empty(unchecked, space, {});
    REQUIRE(empty.validate().size() == 1);
    CHECK(empty.validate()[0].axiom == "nonempty");
}

TEST_CASE("model documents round-trip") {
    Rng rng(testsupport::harness_seed(73007));
    const auto space = AtomSpace::atoms_over({"p", "q"});
    for (int iter = 0; iter < 25; ++iter) {
        const std::vector<UncertaintyModel> models{
            UncertaintyModel(rand_prob(rng, space)),
            UncertaintyModel(testsupport::rand_credal(rng, space)),
            UncertaintyModel(rand_mass(rng, space)),
            UncertaintyModel(rand_poss(rng, space)),
        };
        for (const auto& model : models) {
            const auto text = serialize_model(space, model);
            const auto back = parse_model(text);
            CHECK(same_space(back.space, space));
            CHECK(serialize_model(back.space, back.model) == text);
        }
    }
}

TEST_CASE("model documents reject violations and malformed input") {
    const std::string header = R"({"props":["p"],"worlds":[{"id":"a","assign":{"p":true}},{"id":"b","assign":{"p":false}}],)";
    SECTION("sum violation is reported through validate_model") {
        const std::string text =
            header + R"("measure":{"type":"probability","values":{"a":"1/2","b":"1/4"}}})";
        CHECK_THROWS_WITH(parse_model(text),
                          Catch::Matchers::ContainsSubstring("total-probability"));
        CHECK_NOTHROW(parse_model_unchecked(text));
    }
    SECTION("structural errors") {
        CHECK_THROWS_AS(parse_model("not json"), ParseError);
        CHECK_THROWS_AS(parse_model(R"({"props":[],"worlds":[]})"), ModelError);
        CHECK_THROWS_AS(
            parse_model(header +
                        R"("measure":{"type":"probability","values":{"zz":"1"}}})"),
            ModelError);
        CHECK_THROWS_AS(
            parse_model(header + R"("measure":{"type":"mass","masses":{"a,a":"1"}}})"),
            ModelError);
        CHECK_THROWS_AS(
            parse_model(header + R"("measure":{"type":"probability","values":{"a":0.5}}})"),
            ModelError);
        CHECK_THROWS_AS(
            parse_model(header + R"("measure":{"type":"waves","values":{}}})"), ModelError);
        CHECK_THROWS_AS(
            parse_model(
                R"({"props":["p"],"worlds":[{"id":"a","assign":{}}],"measure":{"type":"probability","values":{"a":"1"}}})"),
            ModelError);
    }
    SECTION("mass documents parse comma-joined keys") {
        const std::string text =
            header + R"("measure":{"type":"mass","masses":{"a,b":"1/2","b":"1/2"}}})";
        const auto parsed = parse_model(text);
        const auto& m = std::get<MassFunction>(parsed.model);
        CHECK(m.masses().at(0b11) == Rat(1, 2));
        CHECK(m.masses().at(0b10) == Rat(1, 2));
    }
}
