#pragma once

// Symbolic angles on the construction grid. An AngleSpec denotes the exact
// angle (1+epsilon)*j / 2^k radians; it is stored symbolically and evaluated
// lazily so grid collinearity can be decided by rational arithmetic alone.

#include "cylpack/interval.hpp"
#include "cylpack/rational.hpp"

namespace cylpack {

struct AngleSpec {
    BigInt j;          // grid multiple
    long k = 0;        // grid scale: step (1+epsilon)/2^k
    Rational epsilon;  // grid stretch

    // Exact radian value (1+epsilon)*j / 2^k.
    Rational radians() const {
        return (Rational(1) + epsilon) * Rational(j) / Rational(int_pow2(static_cast<unsigned long>(k)));
    }
};

inline Interval angle_enclosure(const AngleSpec& a, Prec prec = kDefaultPrec) {
    return Interval::from_rational(a.radians(), prec);
}

inline Interval interval_cos(const AngleSpec& a, Prec prec = kDefaultPrec) {
    return iv_cos(angle_enclosure(a, prec));
}

inline Interval interval_sin(const AngleSpec& a, Prec prec = kDefaultPrec) {
    return iv_sin(angle_enclosure(a, prec));
}

// Exact radian difference theta_a - theta_b (may be negative; not folded).
inline Rational angle_diff(const AngleSpec& a, const AngleSpec& b) {
    return a.radians() - b.radians();
}

// Exact comparison of a rational against m*pi (sign of q - m*pi), decided by
// refinement; a nonzero rational never ties with a pi multiple.
int cmp_rational_vs_pi_multiple(const Rational& q, long m);

// Validates 0 <= radians < 2*pi. The upper test is against an irrational
// bound and is decided by refinement; grid angles are never equal to 2*pi.
bool angle_in_range(const AngleSpec& a);

// Whether the angle between two rays whose directed angle difference is
// theta (|theta| < 2*pi) is >= threshold. The ray angle is min(t, 2*pi - t)
// for t = |theta|; the decision is exact.
bool ray_angle_ge(const Rational& theta, const Rational& threshold);

}  // namespace cylpack
