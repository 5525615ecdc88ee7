#pragma once

// Lines in R^3 and the generic skew-line squared distance, over exact
// rational or interval scalars. The closed-form specializations used by the
// packing constructions live in formulas.hpp.

#include "cylpack/interval.hpp"
#include "cylpack/rational.hpp"

namespace cylpack {

template <class S>
struct Vec3 {
    S x, y, z;
};

template <class S>
Vec3<S> operator+(const Vec3<S>& a, const Vec3<S>& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

template <class S>
Vec3<S> operator-(const Vec3<S>& a, const Vec3<S>& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

template <class S>
Vec3<S> cross(const Vec3<S>& a, const Vec3<S>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class S>
S dot(const Vec3<S>& a, const Vec3<S>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class S>
S norm_sq(const Vec3<S>& a) {
    return dot(a, a);
}

template <class S>
struct Line3 {
    Vec3<S> anchor;
    Vec3<S> dir;
};

using RVec3 = Vec3<Rational>;
using RLine3 = Line3<Rational>;
using IVec3 = Vec3<Interval>;
using ILine3 = Line3<Interval>;

// ------------------------------ exact path --------------------------------

bool are_parallel(const RLine3& l1, const RLine3& l2);

Rational point_line_distance_sq(const RVec3& p, const RLine3& l);

// Squared distance between two lines; exact. Parallel lines fall back to the
// point-to-line distance.
Rational skew_distance_sq(const RLine3& l1, const RLine3& l2);

// Rotation about the z-axis by an exact rational cosine/sine pair
// (c^2 + s^2 must be 1; Pythagorean-style pairs).
RLine3 rotate_z(const RLine3& l, const Rational& c, const Rational& s);

RLine3 scale_line(const RLine3& l, const Rational& lambda);

// ----------------------------- interval path ------------------------------

// kTrue only for exactly representable parallel directions; nearly parallel
// interval data yields kUnknown rather than a guess.
Tri are_parallel(const ILine3& l1, const ILine3& l2);

Interval point_line_distance_sq(const IVec3& p, const ILine3& l);

// Enclosure of the squared line distance. If the cross-product denominator
// cannot be certified nonzero, returns the sound hull
// [0, point-to-line upper bound].
Interval skew_distance_sq(const ILine3& l1, const ILine3& l2);

inline IVec3 to_interval(const RVec3& v, Prec prec) {
    return {Interval::from_rational(v.x, prec), Interval::from_rational(v.y, prec),
            Interval::from_rational(v.z, prec)};
}

inline ILine3 to_interval(const RLine3& l, Prec prec) {
    return {to_interval(l.anchor, prec), to_interval(l.dir, prec)};
}

}  // namespace cylpack
