#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace folitor {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

// Exact dyadic rational equal to the given double.
Rational rational_from_double(double x);

// sum_{j<=k} 2^{-j!}, the truncated Liouville constant, exact.
Rational liouville_constant(int k);

// A slope: always carries a double value; carries the exact rational when the
// input was given exactly (rationals, liouville(k)).  Floating inputs are
// never snapped to rationals.
struct Slope {
    double value = 0.0;
    std::optional<Rational> exact;

    static Slope from_double(double v) { return {v, std::nullopt}; }
    static Slope from_rational(const Rational& r) { return {to_double(r), r}; }
    bool is_exact() const { return exact.has_value(); }
};

// Parses "sqrt2", "sqrt3", "golden", "liouville(k)", "p/q", or a decimal
// literal.  Only rationals and liouville(k) are exact.
Slope parse_slope(const std::string& text);

struct Convergent {
    BigInt p;  // numerator
    BigInt q;  // denominator, q >= 1
};

// Continued-fraction terms of an exact rational (finite).
std::vector<BigInt> continued_fraction(const Rational& x, std::size_t max_terms = 256);

std::vector<Convergent> convergents_of(const Rational& x, std::size_t max_terms = 256);

// Certified convergents of a slope.  Exact slopes give the exact (finite)
// list.  Floating slopes are treated as the dyadic interval value +/- spread
// (default: one ulp), and the expansion stops where the interval endpoints
// disagree, so every returned convergent is a convergent of every number in
// the interval.
std::vector<Convergent> certified_convergents(const Slope& a, const BigInt& max_denominator,
                                              double spread = -1.0);

}  // namespace folitor
