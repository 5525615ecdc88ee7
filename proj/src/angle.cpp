#include "cylpack/angle.hpp"

#include <stdexcept>

namespace cylpack {

int cmp_rational_vs_pi_multiple(const Rational& q, long m) {
    if (m == 0) return sgn(q);
    for (Prec p = 64; p <= 4096; p *= 2) {
        Interval mpi = Interval(m, p) * iv_pi(p);
        if (q < mpi.lo()) return -1;
        if (q > mpi.hi()) return 1;
    }
    // A nonzero rational is never a rational multiple of pi.
    throw std::runtime_error("rational indistinguishable from a pi multiple at max precision");
}

bool angle_in_range(const AngleSpec& a) {
    Rational t = a.radians();
    if (sgn(t) < 0) return false;
    return cmp_rational_vs_pi_multiple(t, 2) < 0;
}

bool ray_angle_ge(const Rational& theta, const Rational& threshold) {
    Rational t = rat_abs(theta);
    if (cmp_rational_vs_pi_multiple(t, 2) >= 0)
        throw std::invalid_argument("ray_angle_ge expects |theta| < 2*pi");
    // Ray angle is min(t, 2*pi - t).
    if (cmp_rational_vs_pi_multiple(t, 1) <= 0) return t >= threshold;
    return cmp_rational_vs_pi_multiple(t + threshold, 2) <= 0;
}

}  // namespace cylpack
