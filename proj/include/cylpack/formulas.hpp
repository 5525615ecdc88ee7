#pragma once

// Closed-form squared distances for axes anchored in the plane z = 0 with
// in-plane direction perpendicular to the anchor ray:
//   anchor (x, y, 0), direction (y, -x, h).
// ring_distance_* is the specialization h_i = K*d_i + L used by the ring
// construction; axis_distance_* takes arbitrary positive heights and is the
// kernel the certifier uses. Both are written term-for-term from their
// source displays and cross-validated against the generic skew formula
// rather than trusted.

#include "cylpack/geom.hpp"
#include "cylpack/interval.hpp"
#include "cylpack/rational.hpp"

namespace cylpack {

template <class S>
struct FormulaParts {
    S num;
    S den;
};

namespace detail {

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static Rational from_long(long v) { return Rational(v); }
    static Rational sq(const Rational& v) { return v * v; }
};

template <>
struct ScalarOps<Interval> {
    static Interval from_long(long v) { return Interval(v); }
    static Interval sq(const Interval& v) { return iv_sqr(v); }
};

// Ring formula: numerator and denominator of
//   dist^2 = [(1-c)^2 d1^2 d2^2 g^2 + 2L(1-c) d1 d2 g (d2-d1)^2 + L^2 (d2-d1)^4]
//          / [-(1-c)^2 d1^2 d2^2 + 2(1-c) d1 d2 (L^2 (1+d1 d2) + KL(d1+d2)) + L^2 (d2-d1)^2]
// with g = K(d1+d2) + 2L.
template <class S>
FormulaParts<S> ring_parts(const S& d1, const S& d2, const S& c, const S& k, const S& l) {
    using Ops = ScalarOps<S>;
    const S one = Ops::from_long(1);
    const S two = Ops::from_long(2);
    const S g = k * (d1 + d2) + two * l;
    const S u = (one - c) * d1 * d2;
    const S gap_sq = Ops::sq(d2 - d1);
    const S num = Ops::sq(u) * Ops::sq(g) + two * l * u * g * gap_sq + Ops::sq(l) * Ops::sq(gap_sq);
    const S den = two * u * (Ops::sq(l) * (one + d1 * d2) + k * l * (d1 + d2)) - Ops::sq(u) +
                  Ops::sq(l) * gap_sq;
    return {num, den};
}

// General-height quotient:
//   dist^2 = (d1^2 T2 + d2^2 T1 - (T1+T2) d1 d2 c)^2
//          / [(1-c^2) d2^2 (d1^2 + T1^2) + (d1 T2 - c T1 d2)^2]
template <class S>
FormulaParts<S> axis_parts(const S& d1, const S& d2, const S& c, const S& t1, const S& t2) {
    using Ops = ScalarOps<S>;
    const S one = Ops::from_long(1);
    const S num = Ops::sq(Ops::sq(d1) * t2 + Ops::sq(d2) * t1 - (t1 + t2) * d1 * d2 * c);
    const S den =
        (one - Ops::sq(c)) * Ops::sq(d2) * (Ops::sq(d1) + Ops::sq(t1)) + Ops::sq(d1 * t2 - c * t1 * d2);
    return {num, den};
}

}  // namespace detail

// ----------------------------- ring formula -------------------------------

// Exact path; K must be rational (pairs with K^2 = L^2 - 1 exist densely:
// L = (t + 1/t)/2, K = (t - 1/t)/2). Throws if the denominator is <= 0.
Rational ring_distance_sq(const Rational& d1, const Rational& d2, const Rational& c,
                          const Rational& k, const Rational& l);

// Interval path; c is an enclosure (typically of cos of a grid angle), K an
// enclosure of sqrt(L^2-1). Throws if the denominator enclosure reaches <= 0.
Interval ring_distance_sq(const Interval& d1, const Interval& d2, const Interval& c,
                          const Interval& k, const Interval& l);

FormulaParts<Rational> ring_distance_parts(const Rational& d1, const Rational& d2,
                                           const Rational& c, const Rational& k, const Rational& l);
FormulaParts<Interval> ring_distance_parts(const Interval& d1, const Interval& d2,
                                           const Interval& c, const Interval& k, const Interval& l);

// ------------------------- general-height formula -------------------------

Rational axis_distance_sq(const Rational& d1, const Rational& d2, const Rational& c,
                          const Rational& t1, const Rational& t2);
Interval axis_distance_sq(const Interval& d1, const Interval& d2, const Interval& c,
                          const Interval& t1, const Interval& t2);
FormulaParts<Rational> axis_distance_parts(const Rational& d1, const Rational& d2,
                                           const Rational& c, const Rational& t1,
                                           const Rational& t2);
FormulaParts<Interval> axis_distance_parts(const Interval& d1, const Interval& d2,
                                           const Interval& c, const Interval& t1,
                                           const Interval& t2);

// Same quotient in Gram form (inputs d1^2, d2^2 and the anchor inner product
// instead of d1, d2, c); entirely rational, which is what makes lattice
// constructions exactly certifiable:
//   dist^2 = n1 (n1 t2 + n2 t1 - (t1+t2) dot)^2
//          / [(n1 n2 - dot^2)(n1 + t1^2) + (n1 t2 - t1 dot)^2]
Rational axis_distance_sq_gram(const Rational& n1, const Rational& n2, const Rational& dot,
                               const Rational& t1, const Rational& t2);
FormulaParts<Rational> axis_distance_parts_gram(const Rational& n1, const Rational& n2,
                                                const Rational& dot, const Rational& t1,
                                                const Rational& t2);

// --------------------------- separation split -----------------------------

// The margin Delta with dist >= 1 iff Delta >= 0 (den > 0), split into the
// factorization Delta = (1-c) d1 d2 (main + gap). `printed` follows the
// source display including its asymmetric bracket 2d1^2 - 5 d1 d2 + 2d1^2 - 1;
// `symmetric` replaces the second term by 2 d2^2, which is what expanding
// num - den of the ring formula actually yields. Both are reported together
// with their consistency against sign(dist^2 - 1).
struct SeparationSplit {
    Rational margin_printed;
    Rational margin_symmetric;
    Rational main_printed;     // display (2), as printed
    Rational main_symmetric;   // with the d2^2 bracket
    Rational gap_term;         // common factor multiplying (d2-d1)^2 - 1
    bool identity_printed;     // margin == (1-c) d1 d2 (main + gap)
    bool identity_symmetric;
    int sign_dist_minus_one;   // sign of ring num - den (den must be > 0)
    bool printed_consistent;   // sign(margin_printed) == sign_dist_minus_one
    bool symmetric_consistent;
};

// Requires c < 1 and d1 != d2; exact rational K expected.
SeparationSplit separation_split(const Rational& d1, const Rational& d2, const Rational& c,
                                 const Rational& k, const Rational& l);

}  // namespace cylpack
