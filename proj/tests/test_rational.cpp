#include "expecta/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

using expecta::parse_rat;
using expecta::Rat;
using expecta::to_string;

TEST_CASE("parse_rat reads integers and fractions") {
    CHECK(parse_rat("0") == Rat(0));
    CHECK(parse_rat("5") == Rat(5));
    CHECK(parse_rat("-7") == Rat(-7));
    CHECK(parse_rat("+7") == Rat(7));
    CHECK(parse_rat("3/4") == Rat(3, 4));
    CHECK(parse_rat("-3/4") == Rat(-3, 4));
    CHECK(parse_rat("6/8") == Rat(3, 4));
    CHECK(parse_rat("123456789123456789/2") == Rat(expecta::BigInt("123456789123456789"), 2));
}

TEST_CASE("parse_rat rejects malformed input") {
    CHECK_THROWS_AS(parse_rat(""), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("-"), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("1/"), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("/2"), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("1/0"), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("1.5"), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("1 /2"), expecta::ParseError);
    CHECK_THROWS_AS(parse_rat("2/3x"), expecta::ParseError);
}

TEST_CASE("to_string emits lowest terms and round-trips") {
    CHECK(to_string(Rat(0)) == "0");
    CHECK(to_string(Rat(-4, 2)) == "-2");
    CHECK(to_string(Rat(3, 4)) == "3/4");
    CHECK(to_string(Rat(-3, 9)) == "-1/3");
    for (int num = -12; num <= 12; ++num) {
        for (int den = 1; den <= 9; ++den) {
            const Rat r(num, den);
            CHECK(parse_rat(to_string(r)) == r);
        }
    }
}
