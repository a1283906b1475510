#pragma once

#include <gmpxx.h>

#include <string>

namespace maxlab {

// Exact arithmetic everywhere; only p-th powers and norms leave the rationals.
using Rational = mpq_class;

// mpq_class(n, d) does not canonicalize on its own — route all raw
// numerator/denominator construction through here.
Rational make_rational(long num, long den = 1);

// Accepts "3/7", "-2", "0.25", "1e-3", "2.5e2". Throws std::invalid_argument
// with the offending text on anything else (including a zero denominator).
Rational parse_rational(const std::string& text);

// Canonical "num/den", or just "num" for integers.
std::string to_fraction_string(const Rational& q);

double to_double(const Rational& q);

// q^e by integer exponentiation of numerator and denominator (exact).
// Negative e inverts; throws std::domain_error on 0^negative.
Rational rational_pow(const Rational& q, long e);

// Shortest decimal round-trip is not needed; outputs are pinned to 15
// significant digits so byte-identical reruns are trivial to guarantee.
std::string format_double(double v);

}  // namespace maxlab
