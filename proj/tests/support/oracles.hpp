#pragma once

// Test-side oracles, deliberately independent of the MPFR-backed library
// path: pure rational Taylor series with remainder bounds, Machin's formula
// for pi, and GMP integer square roots on scaled numerators/denominators.

#include <utility>

#include "cylpack/rational.hpp"

namespace cylpack::oracles {

struct RationalBounds {
    Rational lo, hi;
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

// cos(x) for |x| < 8 with |error| <= 2^-bits, by alternating Taylor series
// with the first omitted term as the remainder bound.
RationalBounds taylor_cos(const Rational& x, long bits);

// sin(x) likewise.
RationalBounds taylor_sin(const Rational& x, long bits);

// pi via 16*atan(1/5) - 4*atan(1/239), each atan an alternating series.
RationalBounds machin_pi(long bits);

// sqrt(q) for q >= 0 with error < 2^-bits, via mpz_sqrt on scaled integers.
RationalBounds integer_sqrt(const Rational& q, long bits);

}  // namespace cylpack::oracles
