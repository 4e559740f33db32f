#pragma once

/// @file rational.hpp
/// Exact rational scalar type used throughout the library, plus the shared
/// exception hierarchy and the canonical "a" / "a/b" text round trip.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace expecta {

/// Arbitrary-precision exact rational. All core computations use this type;
/// no floating point appears anywhere in the library.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed text input (rationals, formulas, system dumps). Messages carry
/// a character offset where applicable.
struct ParseError : Error {
    using Error::Error;
};

/// A formula referenced a proposition the evaluation space does not declare.
struct UnknownPropositionError : Error {
    using Error::Error;
};

/// Two values that must share a sample space do not.
struct SpaceMismatchError : Error {
    using Error::Error;
};

/// A documented size guard was exceeded (world count, proposition count,
/// DNF clause count).
struct CapExceededError : Error {
    using Error::Error;
};

/// A model document or measure violates its defining axioms.
struct ModelError : Error {
    using Error::Error;
};

/// An internal invariant was breached. The CLI maps this to exit code 2.
struct InternalError : Error {
    using Error::Error;
};

/// Parses a rational written as "a" or "a/b" with optional leading sign and
/// no interior whitespace. Throws ParseError on malformed input or zero
/// denominator. The result is stored in lowest terms.
inline Rat parse_rat(std::string_view text) {
    const auto fail = [&](const char* why) -> Rat {
        throw ParseError("bad rational '" + std::string(text) + "': " + why);
    };
    if (text.empty()) return fail("empty");
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    const auto read_int = [&]() -> BigInt {
        if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
            fail("expected digits");
        BigInt value = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            value *= 10;
            value += text[pos] - '0';
            ++pos;
        }
        return value;
    };
    const BigInt numerator = read_int();
    BigInt denominator = 1;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        denominator = read_int();
        if (denominator == 0) fail("zero denominator");
    }
    if (pos != text.size()) fail("trailing characters");
    Rat result(numerator, denominator);
    return negative ? Rat(-result) : result;
}

/// Canonical text form: "a" when the denominator is 1, otherwise "a/b" in
/// lowest terms. parse_rat(to_string(r)) == r for every r.
inline std::string to_string(const Rat& value) {
    std::string out = numerator(value).str();
    if (denominator(value) != 1) {
        out += '/';
        out += denominator(value).str();
    }
    return out;
}

}  // namespace expecta
