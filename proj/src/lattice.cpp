#include "cylpack/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace cylpack {

namespace {

// Largest integer a with C2 a^2 + C1 a + C0 <= 0 (C2 > 0), or nullopt if no
// integer lies between the real roots. The isqrt estimate is off by at most
// one, so a window of candidates decided by exact substitution suffices.
std::optional<std::int64_t> quad_upper_root(const BigInt& c2, const BigInt& c1, const BigInt& c0) {
    BigInt disc = c1 * c1 - 4 * c2 * c0;
    if (disc < 0) return std::nullopt;
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
    BigInt num = -c1 + s;
    BigInt den = 2 * c2;
    BigInt est;
    mpz_fdiv_q(est.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    auto value = [&](const BigInt& x) -> BigInt { return c2 * x * x + c1 * x + c0; };
    for (BigInt a = est + 2; a >= est - 2; a -= 1) {
        if (value(a) <= 0) {
            if (!a.fits_slong_p()) throw std::range_error("lattice enumeration range too large");
            return static_cast<std::int64_t>(a.get_si());
        }
    }
    return std::nullopt;
}

std::optional<std::int64_t> quad_lower_root(const BigInt& c2, const BigInt& c1, const BigInt& c0) {
    // Smallest a with the quadratic <= 0: reflect a -> -a.
    auto r = quad_upper_root(c2, -c1, c0);
    if (!r) return std::nullopt;
    return -*r;
}

BigInt to_int(const Rational& q) {
    if (q.get_den() != 1) throw std::logic_error("expected an integer rational");
    return q.get_num();
}

}  // namespace

Lattice2 Lattice2::from_rational_basis(const Rational& b1x, const Rational& b1y,
                                       const Rational& b2x, const Rational& b2y) {
    Lattice2 l;
    l.g00_ = b1x * b1x + b1y * b1y;
    l.g01_ = b1x * b2x + b1y * b2y;
    l.g11_ = b2x * b2x + b2y * b2y;
    if (l.covolume_sq() <= 0) throw std::invalid_argument("basis vectors linearly dependent");
    l.b1x_ = {b1x, Rational(0)};
    l.b1y_ = {b1y, Rational(0)};
    l.b2x_ = {b2x, Rational(0)};
    l.b2y_ = {b2y, Rational(0)};
    l.disc_ = 0;
    l.hex_ = false;
    l.min_dist_ = 0;
    return l;
}

Lattice2 Lattice2::hexagonal(const Rational& min_dist) {
    if (min_dist <= 0) throw std::invalid_argument("hexagonal spacing must be positive");
    Lattice2 l;
    Rational m2 = min_dist * min_dist;
    l.g00_ = m2;
    l.g01_ = m2 / 2;
    l.g11_ = m2;
    l.b1x_ = {min_dist, Rational(0)};
    l.b1y_ = {Rational(0), Rational(0)};
    l.b2x_ = {min_dist / 2, Rational(0)};
    l.b2y_ = {Rational(0), min_dist / 2};  // (m/2) * sqrt(3)
    l.disc_ = 3;
    l.hex_ = true;
    l.min_dist_ = min_dist;
    return l;
}

Rational Lattice2::norm_sq(const LatticePoint& p) const {
    Rational a(static_cast<long>(p.a)), b(static_cast<long>(p.b));
    return g00_ * a * a + 2 * g01_ * a * b + g11_ * b * b;
}

Rational Lattice2::dot(const LatticePoint& p, const LatticePoint& q) const {
    Rational pa(static_cast<long>(p.a)), pb(static_cast<long>(p.b));
    Rational qa(static_cast<long>(q.a)), qb(static_cast<long>(q.b));
    return g00_ * pa * qa + g01_ * (pa * qb + pb * qa) + g11_ * pb * qb;
}

Interval Lattice2::coord_x(const LatticePoint& p, Prec prec) const {
    Rational rp = b1x_.p * static_cast<long>(p.a) + b2x_.p * static_cast<long>(p.b);
    Rational rq = b1x_.q * static_cast<long>(p.a) + b2x_.q * static_cast<long>(p.b);
    Interval out = Interval::from_rational(rp, prec);
    if (rq != 0)
        out = out + Interval::from_rational(rq, prec) * iv_sqrt(Interval(disc_, prec));
    return out;
}

Interval Lattice2::coord_y(const LatticePoint& p, Prec prec) const {
    Rational rp = b1y_.p * static_cast<long>(p.a) + b2y_.p * static_cast<long>(p.b);
    Rational rq = b1y_.q * static_cast<long>(p.a) + b2y_.q * static_cast<long>(p.b);
    Interval out = Interval::from_rational(rp, prec);
    if (rq != 0)
        out = out + Interval::from_rational(rq, prec) * iv_sqrt(Interval(disc_, prec));
    return out;
}

Interval Lattice2::density(Prec prec) const {
    return Interval(1, prec) / iv_sqrt(Interval::from_rational(covolume_sq(), prec));
}

template <class F>
void Lattice2::for_each_in_annulus(const Rational& lo_sq, const Rational& hi_sq, F&& f) const {
    if (hi_sq <= 0) return;
    // Scale the Gram matrix to integers: norm_sq * M is an integer quadratic
    // form in (a, b).
    BigInt m = 1;
    mpz_lcm(m.get_mpz_t(), g00_.get_den().get_mpz_t(), g01_.get_den().get_mpz_t());
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), g11_.get_den().get_mpz_t());
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), hi_sq.get_den().get_mpz_t());
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), lo_sq.get_den().get_mpz_t());
    const BigInt G00 = to_int(g00_ * m);
    const BigInt G01 = to_int(g01_ * m);
    const BigInt G11 = to_int(g11_ * m);
    const BigInt HI = to_int(hi_sq * m);
    const BigInt LO = lo_sq > 0 ? to_int(lo_sq * m) : BigInt(0);

    // b range: the quadratic in a has solutions iff
    // b^2 (G01^2 - G00 G11) + G00 HI >= 0.
    const BigInt bq2 = G00 * G11 - G01 * G01;  // > 0
    BigInt bmax_sq = (G00 * HI) / bq2;
    BigInt bmax;
    mpz_sqrt(bmax.get_mpz_t(), bmax_sq.get_mpz_t());
    bmax += 2;  // slack; per-b ranges are exact anyway
    if (!bmax.fits_slong_p()) throw std::range_error("lattice enumeration range too large");
    const std::int64_t bhi = bmax.get_si();

    const bool small = G00.fits_slong_p() && G01.fits_slong_p() && G11.fits_slong_p() &&
                       HI.fits_slong_p() && LO.fits_slong_p() && bhi < (1 << 20) &&
                       HI.get_si() < (std::int64_t{1} << 55);
    if (small) {
        const std::int64_t q00 = G00.get_si(), q01 = G01.get_si(), q11 = G11.get_si();
        const std::int64_t hi = HI.get_si(), lo = LO.get_si();
        for (std::int64_t b = -bhi; b <= bhi; ++b) {
            auto amax = quad_upper_root(G00, 2 * G01 * b, G11 * b * b - HI);
            auto amin = quad_lower_root(G00, 2 * G01 * b, G11 * b * b - HI);
            if (!amax || !amin) continue;
            for (std::int64_t a = *amin; a <= *amax; ++a) {
                if (a == 0 && b == 0) continue;
                std::int64_t v = q00 * a * a + 2 * q01 * a * b + q11 * b * b;
                if (v > lo && v <= hi) f(LatticePoint{a, b});
            }
        }
        return;
    }
    for (std::int64_t b = -bhi; b <= bhi; ++b) {
        auto amax = quad_upper_root(G00, 2 * G01 * BigInt(static_cast<long>(b)),
                                    G11 * BigInt(static_cast<long>(b)) * static_cast<long>(b) - HI);
        auto amin = quad_lower_root(G00, 2 * G01 * BigInt(static_cast<long>(b)),
                                    G11 * BigInt(static_cast<long>(b)) * static_cast<long>(b) - HI);
        if (!amax || !amin) continue;
        for (std::int64_t a = *amin; a <= *amax; ++a) {
            if (a == 0 && b == 0) continue;
            LatticePoint p{a, b};
            Rational v = norm_sq(p);
            if (v > lo_sq && v <= hi_sq) f(p);
        }
    }
}

std::vector<LatticePoint> Lattice2::enumerate_in_ball(const Rational& radius) const {
    return enumerate_in_annulus(Rational(0), radius);
}

std::vector<LatticePoint> Lattice2::enumerate_in_annulus(const Rational& lo, const Rational& hi) const {
    std::vector<LatticePoint> out;
    if (hi <= 0) return out;
    for_each_in_annulus(lo < 0 ? Rational(0) : Rational(lo * lo), Rational(hi * hi),
                        [&](const LatticePoint& p) { out.push_back(p); });
    return out;
}

std::uint64_t Lattice2::count_in_ball(const Rational& radius) const {
    if (radius <= 0) return 0;
    std::uint64_t n = 0;
    for_each_in_annulus(Rational(0), Rational(radius * radius), [&](const LatticePoint&) { ++n; });
    return n;
}

Rational Lattice2::min_norm_sq() const {
    // Window minimum first, then a complete sweep inside that ball.
    Rational best = norm_sq({1, 0});
    for (std::int64_t a = -8; a <= 8; ++a)
        for (std::int64_t b = -8; b <= 8; ++b) {
            if (a == 0 && b == 0) continue;
            Rational v = norm_sq({a, b});
            if (v < best) best = v;
        }
    Rational best_sq = best;
    for_each_in_annulus(Rational(0), best_sq, [&](const LatticePoint& p) {
        Rational v = norm_sq(p);
        if (v < best) best = v;
    });
    return best;
}

std::string Lattice2::describe() const {
    if (hex_) return "hex " + rat_string(min_dist_);
    return "gram " + rat_string(g00_) + " " + rat_string(g01_) + " " + rat_string(g11_);
}

}  // namespace cylpack
