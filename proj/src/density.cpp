#include "cylpack/density.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cylpack/rng.hpp"

namespace cylpack {

Interval disc_ball_area(const Rational& center_norm_sq, const Rational& disc_r,
                        const Rational& ball_r, Prec prec) {
    if (disc_r <= 0 || ball_r <= 0) throw std::invalid_argument("non-positive radius");
    const Rational& nsq = center_norm_sq;
    const Rational sum = disc_r + ball_r;
    if (nsq >= sum * sum) return Interval(0L, prec);
    const Rational diff = ball_r - disc_r;
    if (nsq <= diff * diff) {
        // One circle inside the other.
        const Rational& inner = diff >= 0 ? disc_r : ball_r;
        return iv_pi(prec) * Interval::from_rational(inner * inner, prec);
    }
    // Proper lens. The square-root term is rational under the root:
    // ((R+r)^2 - d^2)(d^2 - (R-r)^2).
    Interval d = iv_sqrt(Interval::from_rational(nsq, prec));
    Interval r = Interval::from_rational(disc_r, prec);
    Interval R = Interval::from_rational(ball_r, prec);
    Interval two(2, prec);
    Interval arg1 = (Interval::from_rational(nsq, prec) + iv_sqr(r) - iv_sqr(R)) / (two * d * r);
    Interval arg2 = (Interval::from_rational(nsq, prec) + iv_sqr(R) - iv_sqr(r)) / (two * d * R);
    Interval root = iv_sqrt(Interval::from_rational((sum * sum - nsq) * (nsq - diff * diff), prec));
    Interval area = iv_sqr(r) * iv_acos(arg1) + iv_sqr(R) * iv_acos(arg2) -
                    root / two;
    // The exact value lies in [0, pi * min(r, R)^2].
    Rational cap_r = std::min(disc_r, ball_r);
    Interval cap = iv_pi(prec) * Interval::from_rational(cap_r * cap_r, prec);
    auto clipped = iv_intersect(area, Interval::from_endpoints(rat(0), cap.hi(), prec));
    return clipped ? *clipped : area;
}

Interval packing_area_in_ball(const CircleSet& circles, const Rational& circle_radius,
                              const Rational& ball_r, Prec prec) {
    Interval total(0L, prec);
    const Rational reach = ball_r + circle_radius;
    const Rational reach_sq = reach * reach;
    const Rational inner = ball_r - circle_radius;
    const Rational inner_sq = inner * inner;
    const bool has_inner = inner > 0;
    Interval full = iv_pi(prec) * Interval::from_rational(circle_radius * circle_radius, prec);
    std::uint64_t fully_inside = 0;
    for (const auto& cls : circles) {
        if (cls.center_norm_sq >= reach_sq) continue;
        if (has_inner && cls.center_norm_sq <= inner_sq) {
            fully_inside += cls.count;
            continue;
        }
        total = total + Interval(static_cast<long>(cls.count), prec) *
                            disc_ball_area(cls.center_norm_sq, circle_radius, ball_r, prec);
    }
    if (fully_inside)
        total = total + Interval::from_rational(Rational(static_cast<long>(fully_inside)), prec) * full;
    return total;
}

Schedule Schedule::powers_of_two(int exp_lo, int exp_hi) {
    if (exp_lo > exp_hi) throw std::invalid_argument("bad schedule range");
    Schedule s;
    s.kind = Kind::kPowersOfTwo;
    s.descriptor = "pow2:" + std::to_string(exp_lo) + ".." + std::to_string(exp_hi);
    for (int e = exp_lo; e <= exp_hi; ++e) s.radii.push_back(rat_pow2(e));
    return s;
}

Schedule Schedule::subsequence(const Rational& c, int exp_lo, int exp_hi) {
    if (exp_lo > exp_hi) throw std::invalid_argument("bad schedule range");
    Schedule s;
    s.kind = Kind::kSubsequence;
    s.descriptor = "subseq c=" + rat_string(c) + " k=" + std::to_string(exp_lo) + ".." +
                   std::to_string(exp_hi);
    for (int e = exp_lo; e <= exp_hi; ++e) s.radii.push_back(rat_pow2(e) * (1 + c));
    return s;
}

Schedule Schedule::explicit_radii(std::vector<Rational> radii) {
    Schedule s;
    s.kind = Kind::kExplicit;
    s.descriptor = "explicit";
    s.radii = std::move(radii);
    return s;
}

DensityProfile density_profile(const CircleSet& circles, const Rational& circle_radius,
                               const Schedule& schedule, Prec prec) {
    for (size_t i = 1; i < schedule.radii.size(); ++i)
        if (!(schedule.radii[i - 1] < schedule.radii[i]))
            throw std::invalid_argument("schedule must be increasing");
    DensityProfile out;
    out.schedule = schedule;
    for (const Rational& r : schedule.radii) {
        Interval area = packing_area_in_ball(circles, circle_radius, r, prec);
        Interval ratio = area / (iv_pi(prec) * Interval::from_rational(r * r, prec));
        auto clipped = iv_intersect(ratio, Interval::from_endpoints(rat(0), rat(1), prec));
        out.values.push_back(clipped ? *clipped : ratio);
    }
    return out;
}

void write_profile_csv(std::ostream& os, const DensityProfile& profile) {
    os << "radius,ratio_lo,ratio_hi\n";
    os.precision(17);
    for (size_t i = 0; i < profile.values.size(); ++i) {
        os << rat_string(profile.schedule.radii[i]) << "," << profile.values[i].lo_d() << ","
           << profile.values[i].hi_d() << "\n";
    }
}

void write_profile_svg(std::ostream& os, const DensityProfile& profile,
                       const std::vector<std::pair<std::string, double>>& rules) {
    const double w = 640, h = 360, ml = 50, mb = 30;
    const size_t n = profile.values.size();
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    double vmax = 0.0;
    for (const auto& v : profile.values) vmax = std::max(vmax, v.hi_d());
    for (const auto& r : rules) vmax = std::max(vmax, r.second);
    vmax = vmax > 0 ? vmax * 1.15 : 1.0;
    auto xpos = [&](size_t i) { return ml + (w - ml - 10) * (n > 1 ? double(i) / (n - 1) : 0.5); };
    auto ypos = [&](double v) { return h - mb - (h - mb - 10) * (v / vmax); };
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < n; ++i) os << xpos(i) << "," << ypos(profile.values[i].mid_d()) << " ";
    os << "\"/>\n";
    for (const auto& [label, v] : rules) {
        os << "<line x1=\"" << ml << "\" y1=\"" << ypos(v) << "\" x2=\"" << w - 10 << "\" y2=\""
           << ypos(v) << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
        os << "<text x=\"" << ml + 4 << "\" y=\"" << ypos(v) - 4 << "\" font-size=\"11\">" << label
           << "</text>\n";
    }
    os << "<text x=\"" << ml << "\" y=\"" << h - 8 << "\" font-size=\"11\">" << profile.schedule.descriptor
       << "</text>\n";
    os << "</svg>\n";
}

Interval upper_density_curve(const Rational& c, const Rational& eps, Prec prec) {
    if (c < 0 || c > 1) throw std::invalid_argument("c outside [0, 1]");
    Rational coeff = (1 + 3 * c) / (6 * (1 + eps) * (1 + c) * (1 + c));
    return iv_pi(prec) * Interval::from_rational(coeff, prec);
}

CurveArgmax curve_argmax(const Rational& eps, Prec prec) {
    // d/dc (1+3c)/(1+c)^2 has numerator 3(1+c) - 2(1+3c) = 1 - 3c after
    // dividing the common (1+c) factor; the critical point solves the
    // linear equation exactly.
    const Rational a(1), b(-3);
    Rational c_star = -a / b;
    CurveArgmax out;
    out.c_star = c_star;
    out.pi_coefficient = (1 + 3 * c_star) / (6 * (1 + eps) * (1 + c_star) * (1 + c_star));
    out.value = iv_pi(prec) * Interval::from_rational(out.pi_coefficient, prec);
    return out;
}

SubsequenceEstimate subsequence_max_estimate(const std::vector<DensityProfile>& families,
                                             const Rational& tolerance) {
    if (families.empty()) throw std::invalid_argument("no families");
    SubsequenceEstimate out;
    bool first = true;
    Rational max_osc(0);
    Rational est_lo, est_hi;
    for (const auto& fam : families) {
        if (fam.values.size() < 2) throw std::invalid_argument("family too short");
        const Interval& last = fam.values.back();
        const Interval& prev = fam.values[fam.values.size() - 2];
        // Oscillation measured between midpoints, plus enclosure widths.
        Rational osc = rat_abs((last.lo() + last.hi()) / 2 - (prev.lo() + prev.hi()) / 2) +
                       last.width() + prev.width();
        if (osc > max_osc) max_osc = osc;
        if (osc > tolerance)
            throw std::runtime_error("non-stabilized family: " + fam.schedule.descriptor);
        if (first || last.lo() > est_lo) est_lo = last.lo();
        if (first || last.hi() > est_hi) est_hi = last.hi();
        first = false;
    }
    out.estimate = Interval::from_endpoints(est_lo, est_hi, kDefaultPrec);
    out.max_oscillation = max_osc;
    out.stabilized = true;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Certified enclosure of the angle of a lattice point in [0, 2 pi).
Interval point_angle(const Lattice2& lattice, const LatticePoint& p, Prec prec) {
    Interval x = lattice.coord_x(p, prec);
    Interval y = lattice.coord_y(p, prec);
    const int sx = x.sign(), sy = y.sign();
    if (sy > 0) return iv_atan2(y, x);
    if (sy < 0) return iv_atan2(y, x) + Interval(2, prec) * iv_pi(prec);
    // y encloses zero: lattice points exactly on the x-axis, or a loose
    // enclosure; the exact-zero case is decidable, the rest is for the
    // caller to refine.
    if (y.is_point() && y.contains_zero()) {
        if (sx > 0) return Interval(0L, prec);
        if (sx < 0) return iv_pi(prec);
        throw std::logic_error("lattice point at the origin");
    }
    if (sx < 0) return iv_atan2(-y, -x) + iv_pi(prec);  // rotate off the cut
    if (sx > 0) {
        // Angle near 0 / 2 pi; without the exact sign of y the value is only
        // known up to the wrap, so return the full conservative range.
        return Interval::from_endpoints(rat(0), (Interval(2, prec) * iv_pi(prec)).hi(), prec);
    }
    throw std::runtime_error("point angle undecidable; raise precision");
}

}  // namespace

SectorCounter::SectorCounter(const Lattice2& lattice, const Rational& radius, Prec prec)
    : lattice_(lattice), radius_(radius), prec_(prec) {
    auto points = lattice.enumerate_in_ball(radius);
    angles_.reserve(points.size());
    const double s3 = std::sqrt(3.0);
    for (const auto& p : points) {
        // Double-precision angle for the screen; decisions near sector
        // boundaries use the certified path.
        double xd, yd;
        if (lattice.is_hexagonal()) {
            const double m = lattice.min_dist().get_d();
            xd = m * (static_cast<double>(p.a) + 0.5 * static_cast<double>(p.b));
            yd = m * (0.5 * s3 * static_cast<double>(p.b));
        } else {
            xd = lattice.coord_x(p, 64).mid_d();
            yd = lattice.coord_y(p, 64).mid_d();
        }
        double ang = std::atan2(yd, xd);
        if (ang < 0) ang += 2 * 3.141592653589793;
        angles_.push_back({ang, p});
    }
    std::sort(angles_.begin(), angles_.end(),
              [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
}

bool SectorCounter::in_sector_exact(const LatticePoint& p, const Rational& theta1,
                                    const Rational& theta2) const {
    for (Prec pr = prec_; pr <= 4096; pr *= 2) {
        Interval a = point_angle(lattice_, p, pr);
        bool lo_ok, hi_ok;
        if (a.lo() >= theta1)
            lo_ok = true;
        else if (a.hi() < theta1)
            lo_ok = false;
        else
            continue;
        if (a.hi() <= theta2)
            hi_ok = true;
        else if (a.lo() > theta2)
            hi_ok = false;
        else
            continue;
        return lo_ok && hi_ok;
    }
    throw std::runtime_error("sector boundary tie unresolved at max precision");
}

std::uint64_t SectorCounter::count(const Rational& theta1, const Rational& theta2) const {
    if (!(theta1 >= 0 && theta1 < theta2)) throw std::invalid_argument("bad sector angles");
    const double margin = 1e-9;
    const double t1d = theta1.get_d(), t2d = theta2.get_d();

    std::uint64_t boundary = 0;
    auto scan_zone = [&](double lo, double hi) {
        auto b = std::lower_bound(angles_.begin(), angles_.end(), lo,
                                  [](const Entry& e, double v) { return e.angle < v; });
        auto e = std::lower_bound(angles_.begin(), angles_.end(), hi,
                                  [](const Entry& en, double v) { return en.angle < v; });
        for (auto it = b; it != e; ++it)
            if (in_sector_exact(it->point, theta1, theta2)) ++boundary;
    };

    if (t2d - t1d < 4 * margin) {
        scan_zone(t1d - margin, t2d + margin);
        return boundary;
    }
    auto lo_it = std::lower_bound(angles_.begin(), angles_.end(), t1d + margin,
                                  [](const Entry& e, double v) { return e.angle < v; });
    auto hi_it = std::lower_bound(angles_.begin(), angles_.end(), t2d - margin,
                                  [](const Entry& e, double v) { return e.angle < v; });
    std::uint64_t sure = hi_it > lo_it ? static_cast<std::uint64_t>(hi_it - lo_it) : 0;
    scan_zone(t1d - margin, t1d + margin);
    scan_zone(t2d - margin, t2d + margin);
    return sure + boundary;
}

Interval SectorCounter::predicted(const Rational& theta1, const Rational& theta2,
                                  Prec prec) const {
    return lattice_.density(prec) *
           Interval::from_rational(radius_ * radius_ * (theta2 - theta1) / 2, prec);
}

// ---------------------------------------------------------------------------

McVolumeResult mc_volume_check(const RLine3& axis, const Rational& radius, const Rational& ball_r,
                               std::uint64_t samples, std::uint64_t seed) {
    McVolumeResult out;
    out.samples = samples;
    out.hypothesis_ok = axis.anchor.z == 0 &&
                        axis.anchor.x * axis.dir.x + axis.anchor.y * axis.dir.y == 0 &&
                        axis.dir.z != 0;

    const double ax = axis.anchor.x.get_d(), ay = axis.anchor.y.get_d(), az = axis.anchor.z.get_d();
    double dx = axis.dir.x.get_d(), dy = axis.dir.y.get_d(), dz = axis.dir.z.get_d();
    const double dn = std::sqrt(dx * dx + dy * dy + dz * dz);
    dx /= dn;
    dy /= dn;
    dz /= dn;
    const double r2 = radius.get_d() * radius.get_d();
    const double R = ball_r.get_d();

    std::uint64_t n10 = 0, n01 = 0;
    SplitMix64 rng(seed, 0x3c5);
    for (std::uint64_t s = 0; s < samples; ++s) {
        double px, py, pz;
        do {
            px = (2 * rng.next_double() - 1) * R;
            py = (2 * rng.next_double() - 1) * R;
            pz = (2 * rng.next_double() - 1) * R;
        } while (px * px + py * py + pz * pz > R * R);
        // distance^2 to the tilted axis
        double wx = px - ax, wy = py - ay, wz = pz - az;
        double t = wx * dx + wy * dy + wz * dz;
        double q = wx * wx + wy * wy + wz * wz - t * t;
        bool in_c = q < r2;
        // distance^2 to the vertical dual axis through the anchor
        double q2 = (px - ax) * (px - ax) + (py - ay) * (py - ay);
        bool in_d = q2 < r2;
        out.hits += in_c;
        out.hits_dual += in_d;
        n10 += (in_c && !in_d);
        n01 += (!in_c && in_d);
    }
    const double vol_ball = 4.0 / 3.0 * 3.141592653589793 * R * R * R;
    const double n = static_cast<double>(samples);
    const double p1 = out.hits / n, p2 = out.hits_dual / n;
    out.volume = p1 * vol_ball;
    out.volume_dual = p2 * vol_ball;
    out.stderr_single =
        vol_ball * std::sqrt(std::max(p1 * (1 - p1), p2 * (1 - p2)) / n);
    const double pd = (n10 + n01) / n;
    const double mean_d = (static_cast<double>(n10) - static_cast<double>(n01)) / n;
    out.stderr_diff = vol_ball * std::sqrt(std::max(pd - mean_d * mean_d, 0.0) / n);
    return out;
}

}  // namespace cylpack
