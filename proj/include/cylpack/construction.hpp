#pragma once

// Generators: the ring construction (anchors on circles of integer radius n
// at grid angles (1+eps)j/2^k, heights K n + L, radius 1/2) and the
// shell/lattice construction (anchors on a lattice inside shells
// 2^(a_k) < |x| <= 2^(2a_k), heights T_k, recursive angle filtering,
// optional rescaling).

#include <cstdint>
#include <vector>

#include "cylpack/lattice.hpp"
#include "cylpack/packing.hpp"
#include "cylpack/params.hpp"

namespace cylpack {

// ------------------------------ ring construction --------------------------

// floor(2*pi*2^k / (1+eps)): the number of anchors on a ring with scale k.
BigInt ring_count_for_scale(long k_scale, const Rational& epsilon);
// Scale k with 2^k <= n < 2^(k+1).
long ring_scale(const BigInt& n);
BigInt ring_count(const BigInt& n, const Rational& epsilon);

std::vector<PolarAnchor> ring_points(const BigInt& n, const Rational& epsilon);

// One cylinder of radius 1/2 per ring point, n in [n_lo, n_hi], height
// coefficient K n + L. Requires n_lo >= params.r0.
Packing build_ring_packing(const RingParams& params, const BigInt& n_lo, const BigInt& n_hi);

// Dual circle classes of the ring construction without materializing the
// packing: one class (n^2, ring_count(n)) per ring.
CircleSet ring_dual_circle_classes(const Rational& epsilon, const BigInt& n_lo, const BigInt& n_hi);

// ------------------------------ shell construction -------------------------

struct ShellFilterResult {
    // kept[k-1] lists the surviving lattice points of shell k, in
    // lexicographic (a, b) order.
    std::vector<std::vector<LatticePoint>> kept;
    std::vector<ShellAudit> audit;
};

// Recursive filtering in increasing k: a candidate x2 survives iff for every
// kept earlier point x1 the cosine of the angle at the origin satisfies
// |c| >= |x2|^(-angle_exponent). Exact (fast float screen, exact fallback;
// undecidable-at-max-precision candidates are removed, which never hurts
// packing validity). Requires lattice min distance >= 1.
ShellFilterResult shell_filter(const Lattice2& lattice, const ShellParams& params);

enum class ShellRadiusRule {
    kShrinkRadius,     // radius (1-eps)/2, anchors unscaled
    kRescaleAnchors,   // radius 1/2, anchors scaled by 1/(1-eps_bracket)
};

struct EpsilonBracket {
    int from_shell = 1;  // applies to shells k >= from_shell (until next bracket)
    Rational eps;
};

struct ShellBuildOptions {
    ShellRadiusRule rule = ShellRadiusRule::kShrinkRadius;
    Rational epsilon = rat(1, 10);          // used by kShrinkRadius
    std::vector<EpsilonBracket> schedule;   // used by kRescaleAnchors
};

// Cylinders on the filtered shell points. With kRescaleAnchors the anchor of
// a shell-k point x becomes x/(1 - eps_bracket(k)) and the line keeps its
// direction, i.e. the canonical height becomes T_k/(1 - eps_bracket(k)).
Packing build_shell_packing(const Lattice2& lattice, const ShellParams& params,
                            const ShellBuildOptions& options);

}  // namespace cylpack
