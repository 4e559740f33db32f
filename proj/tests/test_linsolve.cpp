#include "expecta/linsolve.hpp"

#include "support/test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <variant>
#include <vector>

using namespace expecta;
using testsupport::rand_int;
using testsupport::rand_rat;
using testsupport::Rng;

namespace {

LinearSystem make_system(std::size_t nvars) { return LinearSystem(nvars); }

/// Random system at the oracle's scale: up to 4 variables, up to 8 rows,
/// small integer and fractional coefficients, mixed relations and flags.
LinearSystem random_system(Rng& rng, bool allow_strict) {
    LinearSystem s(static_cast<std::size_t>(rand_int(rng, 1, 4)));
    const int nrows = rand_int(rng, 0, 8);
    for (int i = 0; i < nrows; ++i) {
        std::vector<Rat> coeffs(s.nvars);
        for (auto& c : coeffs) c = rand_rat(rng, 3, 2);
        Rel rel = Rel::Ge;
        const int pick = rand_int(rng, 0, allow_strict ? 5 : 3);
        if (pick == 3) rel = Rel::Eq;
        if (pick >= 4) rel = Rel::Gt;
        s.add(std::move(coeffs), rel, rand_rat(rng, 3, 2));
    }
    for (std::size_t j = 0; j < s.nvars; ++j)
        if (rand_int(rng, 0, 2) == 0) s.require_nonneg(j);
    return s;
}

}  // namespace

TEST_CASE("contradictory bounds are infeasible with the unit certificate") {
    auto s = make_system(1);
    s.add({Rat(1)}, Rel::Ge, Rat(1));
    s.add({Rat(-1)}, Rel::Ge, Rat(0));
    const auto result = solve(s);
    REQUIRE(std::holds_alternative<Infeasible>(result));
    const auto& cert = std::get<Infeasible>(result).certificate;
    CHECK(cert.sigma == std::vector<Rat>{Rat(1), Rat(1)});
    CHECK(cert.sigma_strict.empty());
    CHECK(check_certificate(s, cert));
}

TEST_CASE("strict majority split is feasible") {
    auto s = make_system(2);
    s.add({Rat(1), Rat(1)}, Rel::Eq, Rat(1));
    s.require_nonneg(0);
    s.require_nonneg(1);
    s.add({Rat(1), Rat(-1)}, Rel::Gt, Rat(0));
    const auto result = solve(s);
    REQUIRE(std::holds_alternative<Feasible>(result));
    const auto& w = std::get<Feasible>(result).witness;
    CHECK(satisfies(s, w));
    CHECK(w[0] + w[1] == Rat(1));
    CHECK(w[0] > w[1]);
}

TEST_CASE("the null constraint is feasible at zero") {
    auto s = make_system(1);
    s.add({Rat(0)}, Rel::Ge, Rat(0));
    const auto result = solve(s);
    REQUIRE(std::holds_alternative<Feasible>(result));
    CHECK(std::get<Feasible>(result).witness == std::vector<Rat>{Rat(0)});
}

TEST_CASE("check_certificate rejects bad multipliers") {
    auto s = make_system(1);
    s.add({Rat(1)}, Rel::Ge, Rat(1));
    s.add({Rat(-1)}, Rel::Ge, Rat(0));
    CHECK_FALSE(check_certificate(s, Certificate{{Rat(1), Rat(-1)}, {}}));
    CHECK_FALSE(check_certificate(s, Certificate{{Rat(0), Rat(0)}, {}}));
    CHECK_FALSE(check_certificate(s, Certificate{{Rat(1), Rat(2)}, {}}));
    CHECK_THROWS_AS(check_certificate(s, Certificate{{Rat(1)}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(check_certificate(s, Certificate{{Rat(1), Rat(1)}, {Rat(0)}}),
                    std::invalid_argument);
}

TEST_CASE("optimize frozen examples") {
    SECTION("max x with x <= 1, x >= 0 attains 1") {
        auto s = make_system(1);
        s.add({Rat(-1)}, Rel::Ge, Rat(-1));
        s.require_nonneg(0);
        const auto result = optimize(s, {Rat(1)}, Direction::Maximize);
        REQUIRE(std::holds_alternative<Optimum>(result));
        CHECK(std::get<Optimum>(result).value == Rat(1));
        CHECK(std::get<Optimum>(result).witness == std::vector<Rat>{Rat(1)});
    }
    SECTION("max x with only x >= 0 is unbounded") {
        auto s = make_system(1);
        s.require_nonneg(0);
        const auto result = optimize(s, {Rat(1)}, Direction::Maximize);
        CHECK(std::holds_alternative<Unbounded>(result));
    }
    SECTION("separable min attains 7/12") {
        auto s = make_system(2);
        s.add({Rat(1), Rat(0)}, Rel::Ge, Rat(1, 3));
        s.add({Rat(0), Rat(1)}, Rel::Ge, Rat(1, 4));
        const auto result = optimize(s, {Rat(1), Rat(1)}, Direction::Minimize);
        REQUIRE(std::holds_alternative<Optimum>(result));
        CHECK(std::get<Optimum>(result).value == Rat(7, 12));
    }
    SECTION("strict rows are a contract error") {
        auto s = make_system(1);
        s.add({Rat(1)}, Rel::Gt, Rat(0));
        CHECK_THROWS_AS(optimize(s, {Rat(1)}, Direction::Maximize), std::invalid_argument);
    }
    SECTION("infeasible optimization carries a checkable certificate") {
        auto s = make_system(1);
        s.add({Rat(1)}, Rel::Ge, Rat(2));
        s.add({Rat(-1)}, Rel::Ge, Rat(-1));
        const auto result = optimize(s, {Rat(1)}, Direction::Minimize);
        REQUIRE(std::holds_alternative<Infeasible>(result));
        CHECK(check_certificate(s, std::get<Infeasible>(result).certificate));
    }
}

TEST_CASE("redundant equalities are tolerated") {
    auto s = make_system(2);
    s.add({Rat(1), Rat(1)}, Rel::Eq, Rat(1));
    s.add({Rat(2), Rat(2)}, Rel::Eq, Rat(2));
    s.add({Rat(1), Rat(-1)}, Rel::Eq, Rat(0));
    const auto result = optimize(s, {Rat(1), Rat(0)}, Direction::Minimize);
    REQUIRE(std::holds_alternative<Optimum>(result));
    CHECK(std::get<Optimum>(result).value == Rat(1, 2));
}

TEST_CASE("simplex minimum over a probability simplex picks the least cost") {
    auto s = make_system(4);
    s.add({Rat(1), Rat(1), Rat(1), Rat(1)}, Rel::Eq, Rat(1));
    for (std::size_t j = 0; j < 4; ++j) s.require_nonneg(j);
    const std::vector<Rat> cost{Rat(5), Rat(2), Rat(7, 2), Rat(9)};
    const auto result = optimize(s, cost, Direction::Minimize);
    REQUIRE(std::holds_alternative<Optimum>(result));
    CHECK(std::get<Optimum>(result).value == Rat(2));
    const auto up = optimize(s, cost, Direction::Maximize);
    REQUIRE(std::holds_alternative<Optimum>(up));
    CHECK(std::get<Optimum>(up).value == Rat(9));
}

TEST_CASE("solve agrees with the Fourier-Motzkin oracle on random systems") {
    Rng rng(testsupport::harness_seed(71001));
    for (int iter = 0; iter < 300; ++iter) {
        const auto s = random_system(rng, true);
        const bool oracle = fm_feasible(s);
        const auto result = solve(s);
        if (std::holds_alternative<Feasible>(result)) {
            INFO(dump(s));
            CHECK(oracle);
            CHECK(satisfies(s, std::get<Feasible>(result).witness));
        } else {
            INFO(dump(s));
            CHECK_FALSE(oracle);
            CHECK(check_certificate(s, std::get<Infeasible>(result).certificate));
        }
    }
}

TEST_CASE("weak-system witnesses are basic and sparse") {
    Rng rng(testsupport::harness_seed(71002));
    for (int iter = 0; iter < 200; ++iter) {
        const auto s = random_system(rng, false);
        const auto result = solve(s);
        if (!std::holds_alternative<Feasible>(result)) continue;
        const auto& w = std::get<Feasible>(result).witness;
        std::size_t nonzero = 0;
        for (const auto& v : w)
            if (v != 0) ++nonzero;
        INFO(dump(s));
        CHECK(nonzero <= s.rows.size());
    }
}

TEST_CASE("strictness reduces to slack maximization") {
    Rng rng(testsupport::harness_seed(71003));
    for (int iter = 0; iter < 200; ++iter) {
        const auto s = random_system(rng, true);
        if (!s.has_strict()) continue;

        LinearSystem relaxed(s.nvars + 1);
        const std::size_t delta = s.nvars;
        for (std::size_t j = 0; j < s.nvars; ++j)
            if (s.nonneg[j]) relaxed.nonneg[j] = true;
        relaxed.nonneg[delta] = true;
        for (const auto& row : s.rows) {
            auto coeffs = row.coeffs;
            coeffs.push_back(row.rel == Rel::Gt ? Rat(-1) : Rat(0));
            relaxed.add(std::move(coeffs), row.rel == Rel::Gt ? Rel::Ge : row.rel, row.rhs);
        }
        std::vector<Rat> objective(relaxed.nvars, Rat(0));
        objective[delta] = 1;
        const auto opt = optimize(relaxed, objective, Direction::Maximize);

        const bool feasible = std::holds_alternative<Feasible>(solve(s));
        const bool slack_positive =
            std::holds_alternative<Unbounded>(opt) ||
            (std::holds_alternative<Optimum>(opt) && std::get<Optimum>(opt).value > 0);
        INFO(dump(s));
        CHECK(feasible == slack_positive);
    }
}

TEST_CASE("dump renders one constraint per line") {
    auto s = make_system(2);
    s.add({Rat(1, 2), Rat(-1)}, Rel::Ge, Rat(1, 3));
    s.add({Rat(0), Rat(1)}, Rel::Gt, Rat(0));
    s.add({Rat(1), Rat(1)}, Rel::Eq, Rat(1));
    s.require_nonneg(1);
    CHECK(dump(s) ==
          "1/2 -1 >= 1/3\n"
          "0 1 > 0\n"
          "1 1 = 1\n"
          "0 1 >= 0\n");
}
