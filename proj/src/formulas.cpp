#include "cylpack/formulas.hpp"

#include <stdexcept>

namespace cylpack {

namespace {

void require_positive(const Rational& den) {
    if (den <= 0) throw std::domain_error("denominator nonpositive");
}

void require_positive(const Interval& den) {
    if (den.sign() <= 0) throw std::domain_error("denominator nonpositive (enclosure reaches <= 0)");
}

}  // namespace

FormulaParts<Rational> ring_distance_parts(const Rational& d1, const Rational& d2,
                                           const Rational& c, const Rational& k,
                                           const Rational& l) {
    return detail::ring_parts<Rational>(d1, d2, c, k, l);
}

FormulaParts<Interval> ring_distance_parts(const Interval& d1, const Interval& d2,
                                           const Interval& c, const Interval& k,
                                           const Interval& l) {
    return detail::ring_parts<Interval>(d1, d2, c, k, l);
}

Rational ring_distance_sq(const Rational& d1, const Rational& d2, const Rational& c,
                          const Rational& k, const Rational& l) {
    auto p = ring_distance_parts(d1, d2, c, k, l);
    require_positive(p.den);
    return p.num / p.den;
}

Interval ring_distance_sq(const Interval& d1, const Interval& d2, const Interval& c,
                          const Interval& k, const Interval& l) {
    auto p = ring_distance_parts(d1, d2, c, k, l);
    require_positive(p.den);
    return p.num / p.den;
}

FormulaParts<Rational> axis_distance_parts(const Rational& d1, const Rational& d2,
                                           const Rational& c, const Rational& t1,
                                           const Rational& t2) {
    return detail::axis_parts<Rational>(d1, d2, c, t1, t2);
}

FormulaParts<Interval> axis_distance_parts(const Interval& d1, const Interval& d2,
                                           const Interval& c, const Interval& t1,
                                           const Interval& t2) {
    return detail::axis_parts<Interval>(d1, d2, c, t1, t2);
}

Rational axis_distance_sq(const Rational& d1, const Rational& d2, const Rational& c,
                          const Rational& t1, const Rational& t2) {
    auto p = axis_distance_parts(d1, d2, c, t1, t2);
    require_positive(p.den);
    return p.num / p.den;
}

Interval axis_distance_sq(const Interval& d1, const Interval& d2, const Interval& c,
                          const Interval& t1, const Interval& t2) {
    auto p = axis_distance_parts(d1, d2, c, t1, t2);
    require_positive(p.den);
    return p.num / p.den;
}

FormulaParts<Rational> axis_distance_parts_gram(const Rational& n1, const Rational& n2,
                                                const Rational& dot, const Rational& t1,
                                                const Rational& t2) {
    Rational root = n1 * t2 + n2 * t1 - (t1 + t2) * dot;
    Rational num = n1 * root * root;
    Rational den = (n1 * n2 - dot * dot) * (n1 + t1 * t1) + (n1 * t2 - t1 * dot) * (n1 * t2 - t1 * dot);
    return {num, den};
}

Rational axis_distance_sq_gram(const Rational& n1, const Rational& n2, const Rational& dot,
                               const Rational& t1, const Rational& t2) {
    auto p = axis_distance_parts_gram(n1, n2, dot, t1, t2);
    require_positive(p.den);
    return p.num / p.den;
}

SeparationSplit separation_split(const Rational& d1, const Rational& d2, const Rational& c,
                                 const Rational& k, const Rational& l) {
    if (c >= 1) throw std::invalid_argument("separation split requires c < 1");
    if (d1 == d2) throw std::invalid_argument("separation split requires d1 != d2");

    const Rational one(1), two(2);
    const Rational g = k * (d1 + d2) + two * l;
    const Rational u = (one - c) * d1 * d2;  // (1-c) d1 d2 > 0
    const Rational gap = (d2 - d1) * (d2 - d1);
    const Rational gap_m1 = gap - one;
    const Rational l2 = l * l;

    const Rational bracket_printed = two * d1 * d1 - 5 * d1 * d2 + two * d1 * d1 - one;
    const Rational bracket_symmetric = two * d1 * d1 - 5 * d1 * d2 + two * d2 * d2 - one;

    SeparationSplit out;
    out.margin_printed = u * u * (one + g * g) + l2 * gap * gap_m1 +
                         two * u * (k * l * (d1 + d2) * gap_m1 + l2 * bracket_printed);
    out.margin_symmetric = u * u * (one + g * g) + l2 * gap * gap_m1 +
                           two * u * (k * l * (d1 + d2) * gap_m1 + l2 * bracket_symmetric);
    out.main_printed = u * (one + g * g) + two * l2 * bracket_printed;
    out.main_symmetric = u * (one + g * g) + two * l2 * bracket_symmetric;
    out.gap_term = (l2 * gap / u + two * k * l * (d2 + d1)) * gap_m1;
    out.identity_printed = out.margin_printed == u * (out.main_printed + out.gap_term);
    out.identity_symmetric = out.margin_symmetric == u * (out.main_symmetric + out.gap_term);

    auto parts = ring_distance_parts(d1, d2, c, k, l);
    if (parts.den <= 0) throw std::domain_error("denominator nonpositive");
    out.sign_dist_minus_one = sgn(parts.num - parts.den);
    out.printed_consistent = sgn(out.margin_printed) == out.sign_dist_minus_one;
    out.symmetric_consistent = sgn(out.margin_symmetric) == out.sign_dist_minus_one;
    return out;
}

}  // namespace cylpack
