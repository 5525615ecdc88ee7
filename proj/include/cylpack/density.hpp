#pragma once

// Exact planar area computation (lens formula), density profiles over radius
// schedules, the subsequence-maxima upper-density estimator, certified
// lattice sector counting, and the Monte Carlo volume cross-check.

#include <cstdint>
#include <string>
#include <vector>

#include "cylpack/geom.hpp"
#include "cylpack/interval.hpp"
#include "cylpack/lattice.hpp"
#include "cylpack/packing.hpp"

namespace cylpack {

// ------------------------------ exact areas --------------------------------

// Area of the intersection of a disc (radius disc_r, center at distance
// sqrt(center_norm_sq) from the origin) with the ball B_ball_r(0).
Interval disc_ball_area(const Rational& center_norm_sq, const Rational& disc_r,
                        const Rational& ball_r, Prec prec = kDefaultPrec);

// Sum of lens areas over a grouped circle set (assumes the circles are
// pairwise interior-disjoint, e.g. from a certified packing; overlaps would
// make this an overcount).
Interval packing_area_in_ball(const CircleSet& circles, const Rational& circle_radius,
                              const Rational& ball_r, Prec prec = kDefaultPrec);

// ------------------------------- profiles ----------------------------------

struct Schedule {
    enum class Kind { kPowersOfTwo, kSubsequence, kExplicit };
    Kind kind = Kind::kExplicit;
    std::string descriptor;
    std::vector<Rational> radii;

    static Schedule powers_of_two(int exp_lo, int exp_hi);
    // Radii 2^k (1 + c) for k in [exp_lo, exp_hi].
    static Schedule subsequence(const Rational& c, int exp_lo, int exp_hi);
    static Schedule explicit_radii(std::vector<Rational> radii);
};

struct DensityProfile {
    Schedule schedule;
    std::vector<Interval> values;  // Area(B_r cap packing) / (pi r^2), each in [0, 1]
};

DensityProfile density_profile(const CircleSet& circles, const Rational& circle_radius,
                               const Schedule& schedule, Prec prec = kDefaultPrec);

void write_profile_csv(std::ostream& os, const DensityProfile& profile);
// Minimal line plot with optional horizontal reference rules.
void write_profile_svg(std::ostream& os, const DensityProfile& profile,
                       const std::vector<std::pair<std::string, double>>& rules);

// ------------------------- upper-density machinery -------------------------

// Value of the subsequence-limit curve pi (1+3c) / (6 (1+eps) (1+c)^2).
Interval upper_density_curve(const Rational& c, const Rational& eps, Prec prec = kDefaultPrec);

struct CurveArgmax {
    Rational c_star;          // exact critical point of (1+3c)/(1+c)^2
    Rational pi_coefficient;  // exact value / pi
    Interval value;
};
// Exact critical-point solve (the derivative numerator is linear in c).
CurveArgmax curve_argmax(const Rational& eps, Prec prec = kDefaultPrec);

struct SubsequenceEstimate {
    Interval estimate;          // max over families of the tail value
    Rational max_oscillation;   // max |last - previous| midpoint gap over families
    bool stabilized = false;
};
// Tail maxima across covering subsequence families; throws if a family's
// tail oscillation exceeds the tolerance (non-stabilized family).
SubsequenceEstimate subsequence_max_estimate(const std::vector<DensityProfile>& families,
                                             const Rational& tolerance);

// ----------------------------- sector counting -----------------------------

// Enumerates a lattice ball once and answers certified sector-count queries:
// the count is exact (float screen, interval/exact boundary decisions), the
// prediction is density * r^2 * (theta2 - theta1) / 2.
class SectorCounter {
  public:
    SectorCounter(const Lattice2& lattice, const Rational& radius, Prec prec = 128);

    std::uint64_t total() const { return angles_.size(); }
    std::uint64_t count(const Rational& theta1, const Rational& theta2) const;
    Interval predicted(const Rational& theta1, const Rational& theta2,
                       Prec prec = kDefaultPrec) const;

  private:
    struct Entry {
        double angle;
        LatticePoint point;
    };
    Lattice2 lattice_;
    Rational radius_;
    std::vector<Entry> angles_;  // sorted by double angle in [0, 2 pi)
    Prec prec_;

    bool in_sector_exact(const LatticePoint& p, const Rational& theta1,
                         const Rational& theta2) const;
};

// ------------------------------ Monte Carlo --------------------------------

struct McVolumeResult {
    double volume = 0, volume_dual = 0;
    double stderr_single = 0;  // max of the two per-estimate standard errors
    double stderr_diff = 0;    // paired standard error of (I - I_dual)
    std::uint64_t hits = 0, hits_dual = 0, samples = 0;
    bool hypothesis_ok = false;  // anchor in z=0 plane, in-plane direction
                                 // perpendicular to the anchor ray
};

// Seeded Monte Carlo volumes of cylinder cap B^3_ball_r and of its dual
// (vertical axis through the same anchor), evaluated on one shared sample
// stream. Volume equality is only meaningful when hypothesis_ok.
McVolumeResult mc_volume_check(const RLine3& axis, const Rational& radius,
                               const Rational& ball_r, std::uint64_t samples, std::uint64_t seed);

}  // namespace cylpack
