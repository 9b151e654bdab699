#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace plankline {

// Exact rational number, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// Builds p/q and canonicalizes. q must be nonzero.
Rational make_rational(long p, long q = 1);

/// "p/q" or "p" (no denominator when it is 1).
std::string to_string(const Rational& r);

/// Parses "p/q", an integer, or a finite decimal literal such as "-0.585" or "1e-4".
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational from_double(double v);

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational rationalize(double v, long max_den);

inline double to_double(const Rational& r) { return r.get_d(); }

int sign(const Rational& r);

/// floor(r) as an exact integer.
Integer floor(const Rational& r);

/// Fixed-point decimal rendering with `digits` fractional digits (round half away from zero).
std::string to_decimal(const Rational& r, int digits);

}  // namespace plankline
