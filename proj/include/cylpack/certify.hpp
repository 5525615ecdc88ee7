#pragma once

// Machine-checkable verification: pairwise packing certification (exact or
// interval-refined, never guessed), interval branch-and-bound over parameter
// boxes, the equal-height distance bound, and the shell ratio checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cylpack/construction.hpp"
#include "cylpack/formulas.hpp"
#include "cylpack/packing.hpp"
#include "cylpack/params.hpp"

namespace cylpack {

enum class CertStatus { kCertified, kRefuted, kUnknown };

const char* cert_status_name(CertStatus s);

struct PairFailure {
    std::string pair_id;
    std::string reason;
};

struct Certificate {
    std::string scope;
    CertStatus status = CertStatus::kUnknown;
    std::uint64_t pairs_checked = 0;
    std::uint64_t classes_checked = 0;
    std::uint64_t parallel_pairs = 0;
    std::uint64_t touching_pairs = 0;   // exact distance == 2 * threshold
    std::uint64_t unknown_pairs = 0;
    Rational threshold;                  // distance threshold (2 * radius bound)
    std::optional<Interval> min_distance;
    std::vector<PairFailure> failures;
    Prec precision_ceiling = 1024;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::string> notes;

    std::string to_json() const;
};

// ------------------------- pairwise certification --------------------------

struct PairStrategy {
    enum class Kind { kExhaustive, kRingLocal, kExplicitList } kind = Kind::kExhaustive;
    // kRingLocal: all pairs within ring_window rings and angle_window angular
    // steps, plus far_samples random far pairs.
    long ring_window = 1;
    long angle_window = 8;
    std::uint64_t far_samples = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // kExplicitList
};

struct CertifyOptions {
    Rational radius_threshold = rat(1, 2);  // certify dist >= 2 * this
    Prec precision_ceiling = 1024;
    std::uint64_t seed = 1;
    std::string config_hash;
};

// Materialized packings. Ring packings built of complete rings are certified
// through rotation-congruence classes (pair counts computed combinatorially);
// anything else walks pairs directly.
Certificate certify_packing(const Packing& p, const PairStrategy& strategy,
                            const CertifyOptions& options);

// The ring construction over rings [n_lo, n_hi] without materialization:
// exhaustive over congruence classes, plus seeded far pairs drawn from
// [far_n_lo, far_n_hi] when far_samples > 0.
struct RingRangeOptions {
    BigInt far_n_lo, far_n_hi;
    std::uint64_t far_samples = 0;
    Rational radius_threshold = rat(1, 2);
    Prec precision_ceiling = 1024;
    std::uint64_t seed = 1;
    std::string config_hash;
};
Certificate certify_ring_range(const RingParams& params, const BigInt& n_lo, const BigInt& n_hi,
                               const RingRangeOptions& options);

// Shell packings: exhaustive same-shell certification (each shell's pairs
// against 2 * radius) plus a per-shell equal-height precondition note; the
// heights and shell bounds are read off the packing itself.
Certificate certify_shell_within(const Packing& p, const CertifyOptions& options);

// Cross-shell distance report (informational; the asymptotic bound's
// implicit thresholds make desk-scale cross-shell bounds fail honestly).
// For every shell pair: pairs satisfying the |cos| >= d2^-alpha condition,
// those with dist >= (1-eps) * d1, and the minimum squared distance seen.
struct CrossShellReport {
    struct Entry {
        int k1 = 0, k2 = 0;
        std::uint64_t pairs = 0;
        std::uint64_t condition_pairs = 0;
        std::uint64_t bound_holds = 0;
        Rational min_distance_sq;
    };
    std::vector<Entry> entries;
    // Smallest k1 such that every (k1', k2') with k1' >= k1 passes; -1 if none.
    int smallest_passing_shell = -1;
};
CrossShellReport cross_shell_distance_report(const Packing& p, const Rational& eps);

// --------------------------- domain certification --------------------------

struct ParamBox {
    Rational d1_lo, d1_hi;
    Rational d2_lo, d2_hi;
    Rational angle_lo, angle_hi;  // range of the anchor ray angle (radians)
};

enum class DomainPredicate { kRingDistanceGeOne, kAxisDistanceGeFactor };

struct DomainProblem {
    DomainPredicate predicate = DomainPredicate::kRingDistanceGeOne;
    ParamBox box;
    // kRingDistanceGeOne: construction constants; hypothesis clips the
    // cosine to c <= cos((1+eps)/max(d1,d2)) and splits the integer pairs
    // into {d1 = d2} union {|d1 - d2| >= 1}.
    std::optional<RingParams> ring;
    // kAxisDistanceGeFactor: prove dist^2 >= (1-eps)^2 d1^2 over
    // |c| >= d2^(-angle_exponent).
    Rational t1, t2;
    Rational eps;
    Rational angle_exponent = rat(39, 40);
};

struct DomainBoxDesc {
    Rational d1_lo, d1_hi, d2_lo, d2_hi, c_lo, c_hi;
    bool diagonal = false;
};

struct DomainWitness {
    Rational d1, d2, c;
    std::string detail;
};

struct DomainResult {
    CertStatus status = CertStatus::kUnknown;
    std::uint64_t leaves_certified = 0;
    std::uint64_t boxes_pruned = 0;
    int max_depth_reached = 0;
    std::vector<DomainBoxDesc> undecided;
    std::optional<DomainWitness> refutation;
};

DomainResult certify_domain(const DomainProblem& problem, int max_depth, Prec prec = 192);

// ------------------------- equal-height distance bound ---------------------

// Axes through A1, A2 with directions (y_i, -x_i, T). When 8 r^2 T >= R^4
// (and |A1A2| >= 2r, |Ai| <= R), the axis distance is >= 2r (1 - 1/T).
struct EqualHeightBound {
    bool precondition_ok = false;
    bool bound_ok = false;
    Rational distance_sq;
    Rational bound_sq;
    std::string precondition_failure;
};
EqualHeightBound check_equal_height_bound(const Rational& r, const Rational& big_r,
                                          const Rational& t, const RationalAnchor& a1,
                                          const RationalAnchor& a2);

// ------------------------------ shell ratios -------------------------------

// Exact integer verification that across any shell pair the max possible
// norm ratio stays strictly below the height ratio (so no two axes from
// distinct shells can be parallel), plus the same-shell identical-point note.
struct ShellRatioReport {
    struct Entry {
        int k1 = 0, k2 = 0;
        bool pass = false;
    };
    std::vector<Entry> entries;
    bool all_pass = false;
};
ShellRatioReport check_nonparallel_shells(const ShellParams& params);

// ----------------------------------------------------------------------------

// FNV-1a of a canonical config string; embedded in every output file.
std::string config_hash_hex(const std::string& canonical_config);

}  // namespace cylpack
