#pragma once

// Planar lattices with an exact rational Gram matrix. Basis coordinates may
// carry one square root (p + q*sqrt(disc)), which covers both rational bases
// and the hexagonal lattice; all norms and inner products of lattice points
// are exact rationals regardless.

#include <cstdint>
#include <string>
#include <vector>

#include "cylpack/interval.hpp"
#include "cylpack/rational.hpp"

namespace cylpack {

struct LatticePoint {
    std::int64_t a = 0;  // basis coordinates
    std::int64_t b = 0;
};

class Lattice2 {
  public:
    // Coordinate value p + q*sqrt(disc).
    struct Coord {
        Rational p, q;
    };

    static Lattice2 from_rational_basis(const Rational& b1x, const Rational& b1y,
                                        const Rational& b2x, const Rational& b2y);
    // Basis (m, 0), (m/2, m*sqrt(3)/2).
    static Lattice2 hexagonal(const Rational& min_dist);

    const Rational& g00() const { return g00_; }
    const Rational& g01() const { return g01_; }
    const Rational& g11() const { return g11_; }
    long disc() const { return disc_; }
    bool is_hexagonal() const { return hex_; }
    const Rational& min_dist() const { return min_dist_; }

    Rational norm_sq(const LatticePoint& p) const;
    Rational dot(const LatticePoint& p, const LatticePoint& q) const;

    // Explicit coordinates as enclosures (exact when disc == 0).
    Interval coord_x(const LatticePoint& p, Prec prec) const;
    Interval coord_y(const LatticePoint& p, Prec prec) const;

    // Squared covolume det(B)^2 = g00*g11 - g01^2 (exact).
    Rational covolume_sq() const { return g00_ * g11_ - g01_ * g01_; }
    // Points per unit area, 1/|det B|.
    Interval density(Prec prec = kDefaultPrec) const;

    // All lattice points with 0 < |x| <= radius (the origin is skipped),
    // complete, in lexicographic (a, b) order.
    std::vector<LatticePoint> enumerate_in_ball(const Rational& radius) const;
    // Points with lo < |x| <= hi.
    std::vector<LatticePoint> enumerate_in_annulus(const Rational& lo, const Rational& hi) const;

    // Exact count of points with 0 < |x| <= radius.
    std::uint64_t count_in_ball(const Rational& radius) const;

    // Shortest nonzero vector length squared (exact; search over a bounded
    // coordinate window).
    Rational min_norm_sq() const;

    std::string describe() const;

  private:
    Rational g00_, g01_, g11_;
    Coord b1x_, b1y_, b2x_, b2y_;
    long disc_ = 0;  // square root content of coordinates; 0 = rational basis
    bool hex_ = false;
    Rational min_dist_;  // hexagonal spacing, 0 for general bases

    template <class F>
    void for_each_in_annulus(const Rational& lo_sq, const Rational& hi_sq, F&& f) const;
};

}  // namespace cylpack
