#include "expecta/coherence.hpp"

#include "expecta/expectation.hpp"

#include "support/test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

using namespace expecta;
using testsupport::harness_seed;
using testsupport::rand_credal;
using testsupport::rand_gamble_rat;
using testsupport::rand_int;
using testsupport::rand_rat;
using testsupport::rand_space;
using testsupport::Rng;

namespace {

SpacePtr two_world_space() {
    return std::make_shared<const AtomSpace>(std::vector<std::string>{"p"},
                                             std::vector<World>{{"w1", 1}, {"w2", 0}});
}

SpacePtr three_world_space() {
    return std::make_shared<const AtomSpace>(
        std::vector<std::string>{"p", "q"},
        std::vector<World>{{"w1", 0b01}, {"w2", 0b11}, {"w3", 0b00}});
}

Gamble gamble_of(const SpacePtr& space, std::vector<Rat> values) {
    return Gamble(space, std::move(values));
}

void verify_incoherence(const Assessment& a, const Incoherent& inc) {
    const auto& entries = a.entries();
    REQUIRE(inc.index + 1 < entries.size());
    REQUIRE(inc.multipliers.size() == entries.size());
    REQUIRE(inc.multipliers[inc.index] == 1);
    for (const auto& b : inc.multipliers) REQUIRE(b >= 0);
    for (std::size_t w = 0; w < a.space()->world_count(); ++w) {
        Rat combined(0);
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (j == inc.index) continue;
            combined += inc.multipliers[j] * (entries[j].first[w] - entries[j].second);
        }
        REQUIRE(combined < entries[inc.index].first[w] - entries[inc.index].second);
    }
}

std::pair<Assessment, CredalSet> credal_assessment(Rng& rng, const SpacePtr& space) {
    CredalSet credal = rand_credal(rng, space);
    std::vector<std::pair<Gamble, Rat>> entries;
    const int count = rand_int(rng, 1, 4);
    for (int i = 0; i < count; ++i) {
        Gamble g = rand_gamble_rat(rng, space, 3, 3);
        const Rat lower = expect_bounds_credal(credal, g).lower;
        entries.emplace_back(std::move(g), lower);
    }
    return {Assessment(space, std::move(entries)), std::move(credal)};
}

}  // namespace

TEST_CASE("anchors are always adjoined") {
    const SpacePtr space = two_world_space();
    const Assessment a(space, {{gamble_of(space, {Rat(1), Rat(0)}), Rat(1, 2)}});
    REQUIRE(a.assessed_count() == 1);
    REQUIRE(a.entries().size() == 3);
    REQUIRE(a.entries()[1].first == Gamble::constant(space, Rat(0)));
    REQUIRE(a.entries()[1].second == 0);
    REQUIRE(a.entries()[2].first == Gamble::constant(space, Rat(1)));
    REQUIRE(a.entries()[2].second == 1);

    const SpacePtr other = three_world_space();
    REQUIRE_THROWS_AS(
        Assessment(space, {{Gamble::constant(other, Rat(0)), Rat(0)}}),
        SpaceMismatchError);
}

TEST_CASE("overcommitted indicator pair is incoherent") {
    const SpacePtr space = two_world_space();
    const Assessment a(space, {{gamble_of(space, {Rat(1), Rat(0)}), Rat(1, 2)},
                               {gamble_of(space, {Rat(0), Rat(1)}), Rat(3, 4)}});
    const auto result = is_coherent(a);
    const auto* inc = std::get_if<Incoherent>(&result);
    REQUIRE(inc != nullptr);
    REQUIRE(inc->index == 2);
    verify_incoherence(a, *inc);
}

TEST_CASE("constant gamble assessed above its value is incoherent") {
    const SpacePtr space = two_world_space();
    const Assessment a(space, {{Gamble::constant(space, Rat(0)), Rat(1)}});
    const auto result = is_coherent(a);
    const auto* inc = std::get_if<Incoherent>(&result);
    REQUIRE(inc != nullptr);
    REQUIRE(inc->index == 1);
    verify_incoherence(a, *inc);
}

TEST_CASE("under-assessment below the implied bound is incoherent") {
    const SpacePtr space = three_world_space();
    const Gamble x = gamble_of(space, {Rat(1), Rat(2), Rat(3)});
    const Assessment low(space, {{x, Rat(0)}});
    REQUIRE(std::holds_alternative<Incoherent>(is_coherent(low)));
    const Assessment at_min(space, {{x, Rat(1)}});
    REQUIRE(std::holds_alternative<Coherent>(is_coherent(at_min)));
    const Assessment at_max(space, {{x, Rat(3)}});
    REQUIRE(std::holds_alternative<Coherent>(is_coherent(at_max)));
    const Assessment above(space, {{x, Rat(4)}});
    REQUIRE(std::holds_alternative<Incoherent>(is_coherent(above)));
}

TEST_CASE("credal lower expectations are coherent") {
    Rng rng(harness_seed(77001));
    for (int iter = 0; iter < 60; ++iter) {
        const SpacePtr space = rand_space(rng, 2, 5);
        const auto [a, credal] = credal_assessment(rng, space);
        REQUIRE(std::holds_alternative<Coherent>(is_coherent(a)));
    }
}

TEST_CASE("sure loss is incoherent") {
    Rng rng(harness_seed(77011));
    for (int iter = 0; iter < 60; ++iter) {
        const SpacePtr space = rand_space(rng, 2, 5);
        const CredalSet credal = rand_credal(rng, space);
        std::vector<std::pair<Gamble, Rat>> entries;
        const int count = rand_int(rng, 1, 3);
        for (int i = 0; i < count; ++i) {
            Gamble g = rand_gamble_rat(rng, space, 3, 3);
            const Rat lower = expect_bounds_credal(credal, g).lower;
            entries.emplace_back(std::move(g), lower);
        }
        Gamble bad = rand_gamble_rat(rng, space, 3, 3);
        Rat top = bad[0];
        for (std::size_t w = 1; w < bad.size(); ++w) top = std::max(top, bad[w]);
        entries.emplace_back(std::move(bad), top + Rat(rand_int(rng, 1, 3), 2));
        const Assessment a(space, std::move(entries));
        const auto result = is_coherent(a);
        const auto* inc = std::get_if<Incoherent>(&result);
        REQUIRE(inc != nullptr);
        verify_incoherence(a, *inc);
    }
}

TEST_CASE("vacuous natural extension is the pointwise minimum") {
    Rng rng(harness_seed(77021));
    for (int iter = 0; iter < 40; ++iter) {
        const SpacePtr space = rand_space(rng, 2, 5);
        const Assessment vacuous(space, {});
        const Gamble y = rand_gamble_rat(rng, space, 4, 3);
        Rat lowest = y[0];
        for (std::size_t w = 1; w < y.size(); ++w) lowest = std::min(lowest, y[w]);
        REQUIRE(natural_extension(vacuous, y) == lowest);
    }
}

TEST_CASE("natural extension reproduces the determination assessment") {
    const SpacePtr space = three_world_space();
    const Gamble x = gamble_of(space, {Rat(1), Rat(2), Rat(3)});
    const Assessment a(space, {{x, Rat(13, 8)}});
    REQUIRE(natural_extension(a, x) == Rat(13, 8));
    const Gamble scaled = gamble_of(space, {Rat(1), Rat(3), Rat(5)});
    REQUIRE(natural_extension(a, scaled) == Rat(9, 4));
    const Assessment vacuous(space, {});
    REQUIRE(natural_extension(vacuous, x) == 1);
}

TEST_CASE("natural extension agrees with assessed values and respects the credal bound") {
    Rng rng(harness_seed(77031));
    for (int iter = 0; iter < 40; ++iter) {
        const SpacePtr space = rand_space(rng, 2, 5);
        const auto [a, credal] = credal_assessment(rng, space);
        for (std::size_t i = 0; i < a.assessed_count(); ++i)
            REQUIRE(natural_extension(a, a.entries()[i].first) == a.entries()[i].second);
        const Gamble y = rand_gamble_rat(rng, space, 3, 3);
        REQUIRE(natural_extension(a, y) <= expect_bounds_credal(credal, y).lower);
    }
}

TEST_CASE("natural extension is a lower expectation") {
    Rng rng(harness_seed(77041));
    for (int iter = 0; iter < 30; ++iter) {
        const SpacePtr space = rand_space(rng, 2, 5);
        const auto [a, credal] = credal_assessment(rng, space);
        const Gamble y1 = rand_gamble_rat(rng, space, 3, 3);
        const Gamble y2 = rand_gamble_rat(rng, space, 3, 3);
        const Gamble sum = combine(CombineMode::Add, y1, y2);
        REQUIRE(natural_extension(a, sum) >=
                natural_extension(a, y1) + natural_extension(a, y2));

        const Rat scale(rand_int(rng, 0, 3));
        const Rat shift = rand_rat(rng, 2, 3);
        std::vector<Rat> affine(space->world_count());
        for (std::size_t w = 0; w < affine.size(); ++w) affine[w] = scale * y1[w] + shift;
        REQUIRE(natural_extension(a, Gamble(space, std::move(affine))) ==
                scale * natural_extension(a, y1) + shift);

        std::vector<Rat> raised(space->world_count());
        for (std::size_t w = 0; w < raised.size(); ++w)
            raised[w] = y1[w] + Rat(rand_int(rng, 0, 2));
        REQUIRE(natural_extension(a, Gamble(space, std::move(raised))) >=
                natural_extension(a, y1));
    }
}

TEST_CASE("incoherent assessments have no natural extension") {
    const SpacePtr space = two_world_space();
    const Assessment a(space, {{Gamble::constant(space, Rat(0)), Rat(1)}});
    REQUIRE_THROWS_AS(natural_extension(a, Gamble::constant(space, Rat(0))), IncoherenceError);

    const Assessment fine(space, {});
    REQUIRE_THROWS_AS(natural_extension(fine, Gamble::constant(three_world_space(), Rat(0))),
                      SpaceMismatchError);
}

TEST_CASE("assessment documents round-trip") {
    const std::string doc = R"json({
      "model_space": {
        "props": ["p", "q"],
        "worlds": [
          {"id": "w1", "assign": {"p": true, "q": false}},
          {"id": "w2", "assign": {"p": true, "q": true}},
          {"id": "w3", "assign": {"p": false, "q": false}}
        ]
      },
      "assessments": [
        {"gamble": "1*p + 2*(p & q)", "lower": "3/8"}
      ]
    })json";
    const Assessment a = parse_assessment(doc);
    REQUIRE(a.assessed_count() == 1);
    REQUIRE(a.space()->world_count() == 3);
    REQUIRE(a.entries()[0].first == gamble_of(a.space(), {Rat(1), Rat(3), Rat(0)}));
    REQUIRE(a.entries()[0].second == Rat(3, 8));

    const Assessment again = parse_assessment(serialize_assessment(a));
    REQUIRE(again.assessed_count() == a.assessed_count());
    REQUIRE(again.entries()[0].first.values() == a.entries()[0].first.values());
    REQUIRE(again.entries()[0].second == a.entries()[0].second);

    REQUIRE_THROWS_AS(parse_assessment("not json"), ParseError);
    REQUIRE_THROWS_AS(parse_assessment(R"json({"assessments": []})json"), ModelError);
    REQUIRE_THROWS_AS(parse_assessment(R"json({"model_space": {"props": ["p"]}, "assessments": [{}]})json"),
                      ModelError);
    const std::string unknown = R"json({
      "model_space": {"props": ["p"], "worlds": [{"id": "w1", "assign": {"p": true}}]},
      "assessments": [{"gamble": "1*z", "lower": "0"}]
    })json";
    REQUIRE_THROWS_AS(parse_assessment(unknown), UnknownPropositionError);
}
