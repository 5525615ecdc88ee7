#pragma once

// Construction parameters. RingParams carries the ring-construction constants
// (epsilon, L, K^2 = L^2 - 1, r0, delta); ShellParams the shell/lattice
// construction schedule (a_k growth, T_k heights, shell bounds, filter
// exponent).

#include <cstdint>
#include <string>
#include <vector>

#include "cylpack/interval.hpp"
#include "cylpack/rational.hpp"

namespace cylpack {

struct RingParams {
    Rational epsilon;
    Rational l;      // half-integer grid value
    Rational k_sq;   // L^2 - 1, exact
    BigInt r0;       // power of two; all height/angle conditions hold for d >= r0
    Rational delta;  // gap parameter used by the quadratic condition (iv)

    Interval k_enclosure(Prec prec = kDefaultPrec) const {
        return iv_sqrt(Interval::from_rational(k_sq, prec));
    }
};

// Least admissible L on the half-integer grid and least power-of-two r0.
// Each for-all-d condition is reduced to closed form whose validity for all
// d >= r0 is itself verified (vertex/monotonicity arguments), not assumed.
// Throws if no L below the search ceiling satisfies the constraints.
RingParams select_ring_params(const Rational& epsilon);

// Per-condition minimal thresholds on d^2 (diagnostics and golden tests).
struct RingConditionThresholds {
    Rational cos_gap_d_sq;       // condition (i), via the quartic cosine bound
    Rational height_mix_d_sq;    // condition (ii) threshold (squared), incl. vertex
    Rational slack_d_sq;         // condition (iii): d^2 >= 2000/epsilon
    Rational gap_quartic_d_sq;   // condition (iv): d^2 >= (250 + delta^2)/delta^4
};
RingConditionThresholds ring_condition_thresholds(const Rational& epsilon, const Rational& l,
                                                  const Rational& k_sq, const Rational& delta);

// ---------------------------------------------------------------------------

struct ShellParams {
    long a_base = 1;
    long a_growth = 100;   // a_{k+1} = a_growth * a_k
    long t_exponent = 10;  // T_{k+1} = 2^(t_exponent * a_{k+1}) * T_k
    int k_max = 1;
    Rational angle_exponent = rat(39, 40);  // filter |cos| >= d2^(-angle_exponent)
    long max_t_bits = 1'100'000;            // size guard on the exact T_k

    std::vector<long> a_sequence() const;
    // Exact heights; throws past the bit guard with a clear message.
    std::vector<BigInt> t_sequence() const;
    // Shell k (1-based) is 2^(a_k) < |x| <= 2^(2a_k).
    Rational shell_lo(int k) const;
    Rational shell_hi(int k) const;
    // Half-open shells never overlap when a_{k+1} >= 2 a_k.
    bool shells_disjoint() const;
};

std::vector<std::pair<long, BigInt>> shell_sequences(const ShellParams& p);

}  // namespace cylpack
