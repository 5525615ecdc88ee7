#include "cylpack/geom.hpp"

#include <stdexcept>

namespace cylpack {

bool are_parallel(const RLine3& l1, const RLine3& l2) {
    if (norm_sq(l1.dir) == 0 || norm_sq(l2.dir) == 0)
        throw std::invalid_argument("line with zero direction");
    RVec3 c = cross(l1.dir, l2.dir);
    return c.x == 0 && c.y == 0 && c.z == 0;
}

Rational point_line_distance_sq(const RVec3& p, const RLine3& l) {
    RVec3 w = p - l.anchor;
    Rational vv = norm_sq(l.dir);
    Rational wv = dot(w, l.dir);
    return norm_sq(w) - wv * wv / vv;
}

Rational skew_distance_sq(const RLine3& l1, const RLine3& l2) {
    RVec3 n = cross(l1.dir, l2.dir);
    Rational nn = norm_sq(n);
    if (nn == 0) return point_line_distance_sq(l2.anchor, l1);
    RVec3 w = l2.anchor - l1.anchor;
    Rational wn = dot(w, n);
    return wn * wn / nn;
}

RLine3 rotate_z(const RLine3& l, const Rational& c, const Rational& s) {
    if (c * c + s * s != 1) throw std::invalid_argument("rotation pair not on the unit circle");
    auto rot = [&](const RVec3& v) -> RVec3 { return {c * v.x - s * v.y, s * v.x + c * v.y, v.z}; };
    return {rot(l.anchor), rot(l.dir)};
}

RLine3 scale_line(const RLine3& l, const Rational& lambda) {
    return {{lambda * l.anchor.x, lambda * l.anchor.y, lambda * l.anchor.z}, l.dir};
}

Tri are_parallel(const ILine3& l1, const ILine3& l2) {
    IVec3 c = cross(l1.dir, l2.dir);
    Interval nn = iv_sqr(c.x) + iv_sqr(c.y) + iv_sqr(c.z);
    if (nn.sign() > 0) return Tri::kFalse;
    if (nn.is_point() && nn.contains_zero()) return Tri::kTrue;
    return Tri::kUnknown;
}

Interval point_line_distance_sq(const IVec3& p, const ILine3& l) {
    IVec3 w = p - l.anchor;
    Interval vv = norm_sq(l.dir);
    Interval wv = dot(w, l.dir);
    Interval d = norm_sq(w) - iv_sqr(wv) / vv;
    // The exact value is a squared distance; clip the enclosure at zero.
    auto clipped = iv_intersect(
        d, Interval::from_endpoints(rat(0), d.hi() < 0 ? rat(0) : d.hi(), d.precision()));
    return clipped ? *clipped : Interval(0L, d.precision());
}

Interval skew_distance_sq(const ILine3& l1, const ILine3& l2) {
    IVec3 n = cross(l1.dir, l2.dir);
    Interval nn = iv_sqr(n.x) + iv_sqr(n.y) + iv_sqr(n.z);
    IVec3 w = l2.anchor - l1.anchor;
    if (nn.sign() > 0) {
        Interval wn = dot(w, n);
        return iv_sqr(wn) / nn;
    }
    // Parallel or undecided: dist(l1, l2) <= dist(anchor2, l1) always holds.
    Interval upper = point_line_distance_sq(l2.anchor, l1);
    return Interval::from_endpoints(rat(0), upper.hi(), upper.precision());
}

}  // namespace cylpack
