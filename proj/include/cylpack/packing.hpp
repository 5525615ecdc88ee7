#pragma once

// Cylinder specs and packings. An axis is anchored in the plane z = 0 with
// in-plane direction perpendicular to the anchor ray: direction (y, -x, H).
// Heights are stored as base + coeff*sqrt(ksq) so that ring heights K*n + L
// (K = sqrt(L^2-1)) stay exact; shell heights have coeff = 0.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cylpack/angle.hpp"
#include "cylpack/geom.hpp"
#include "cylpack/interval.hpp"
#include "cylpack/lattice.hpp"
#include "cylpack/rational.hpp"

namespace cylpack {

struct RationalAnchor {
    Rational x, y;
};

struct PolarAnchor {
    Rational norm;  // exact Euclidean norm
    AngleSpec angle;
};

struct LatticeAnchor {
    LatticePoint point;
    Rational scale{1};  // anchor = scale * (basis * point)
};

// Height H = base + k_coeff * sqrt(height_ksq); height_ksq lives on the
// packing (shared construction constant), 0 when unused.
struct AxisHeight {
    Rational base;
    Rational k_coeff{0};

    bool is_rational() const { return k_coeff == 0; }
    Interval enclosure(const Rational& ksq, Prec prec) const;
};

struct Axis {
    std::variant<RationalAnchor, PolarAnchor, LatticeAnchor> anchor;
    AxisHeight height;
    bool vertical = false;  // dual cylinders; direction (0, 0, 1)

    // |anchor|^2, always exact.
    Rational anchor_norm_sq(const Lattice2* lattice) const;
    // Anchor coordinates as enclosures.
    Interval anchor_x(const Lattice2* lattice, Prec prec) const;
    Interval anchor_y(const Lattice2* lattice, Prec prec) const;
    // Full line with interval coordinates.
    ILine3 to_line(const Lattice2* lattice, const Rational& ksq, Prec prec) const;
    // Exact rational line when the anchor and height are rational.
    std::optional<RLine3> to_rational_line(const Lattice2* lattice) const;
};

struct CylinderSpec {
    Axis axis;
    Rational radius;
};

enum class ConstructionKind { kRing, kShell, kExplicit };

struct ShellAudit {
    int shell = 0;
    std::uint64_t candidates = 0;
    std::uint64_t kept = 0;
    std::uint64_t removed = 0;
};

struct Packing {
    std::vector<CylinderSpec> cylinders;
    ConstructionKind kind = ConstructionKind::kExplicit;
    std::string provenance;
    Rational height_ksq{0};            // shared K^2 for symbolic heights
    Rational shell_alpha{0};           // filter angle exponent (shell packings)
    std::optional<Lattice2> lattice;   // for lattice anchors
    std::vector<ShellAudit> shell_audit;
    std::vector<int> shell_of;         // per-cylinder shell index (shell packings)

    const Lattice2* lattice_ptr() const { return lattice ? &*lattice : nullptr; }
    // Common radius; throws if radii differ (packing invariant).
    Rational radius() const;
    void validate() const;
};

// ------------------------------ pair geometry ------------------------------

// Exact ingredients of the closed-form distance for a pair of axes:
// squared norms always; the anchor inner product exactly when representable
// (rational x rational, lattice x lattice, collinear polar), otherwise as the
// exact angle difference for polar pairs.
struct PairGeometry {
    Rational n1, n2;                    // anchor norms squared
    std::optional<Rational> dot;        // exact inner product
    std::optional<Rational> angle_diff; // exact radian difference (polar pairs)
    AxisHeight h1, h2;
};

PairGeometry axis_pair_geometry(const Axis& a1, const Axis& a2, const Lattice2* lattice);

// Squared axis distance: exact rational when representable, otherwise a
// certified enclosure at the given precision.
struct AxisDistanceSq {
    std::optional<Rational> exact;
    Interval enclosure;
};

AxisDistanceSq axis_pair_distance_sq(const Axis& a1, const Axis& a2, const Lattice2* lattice,
                                     const Rational& ksq, Prec prec);

// Exact where anchor kinds allow it; kUnknown must not occur for rational
// inputs (escalates precision internally before giving up).
Tri axes_parallel(const Axis& a1, const Axis& a2, const Lattice2* lattice, const Rational& ksq);

// --------------------------------- duals -----------------------------------

// Circles grouped by squared center norm; the lens area of a circle against
// an origin ball depends only on its center norm, so this is the exact and
// compact dual representation for density work.
struct CircleClass {
    Rational center_norm_sq;
    std::uint64_t count = 1;
};
using CircleSet = std::vector<CircleClass>;

// Dual circle packing of a packing (grouped). Throws if an axis is parallel
// to the plane (cannot happen for Axis-shaped cylinders with H > 0).
CircleSet dual_circle_classes(const Packing& p);

// Dual cylinder: same radius, vertical axis through the anchor.
CylinderSpec dual_cylinder(const CylinderSpec& c);

// ------------------------------ serialization ------------------------------

void write_packing(std::ostream& os, const Packing& p, const std::string& config_hash);
Packing read_packing(std::istream& is);
void write_packing_file(const std::string& path, const Packing& p, const std::string& config_hash);
Packing read_packing_file(const std::string& path);

}  // namespace cylpack
