#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace wtcpir {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Accepts "p/q", integers and terminating decimals ("0.25", "-3"). Anything
// with an exponent or that is not an exact finite decimal is rejected with
// UsageError.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

// Rounded half away from zero to the given number of places.
std::string to_decimal_string(const Rational& r, int places = 6);

BigInt numerator_of(const Rational& r);
BigInt denominator_of(const Rational& r);

// Throws UsageError when r is not an integer or does not fit.
std::int64_t to_int64(const Rational& r);

}  // namespace wtcpir
