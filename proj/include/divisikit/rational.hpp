#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace divisikit {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", integers and decimals with optional exponent ("0.26", "1e-3").
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

double to_double(const Rational& q);
// Exact binary value of a finite double.
Rational from_double(double x);

Rational abs(const Rational& q);
Rational pow(const Rational& q, unsigned n);
Rational max_abs(const std::vector<Rational>& v);

// Simplest fraction (smallest denominator) in the closed interval [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi);

Integer lcm_of_denominators(const std::vector<Rational>& v);

} // namespace divisikit
