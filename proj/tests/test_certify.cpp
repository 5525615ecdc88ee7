#include <doctest.h>

#include <cmath>

#include "cylpack/certify.hpp"
#include "cylpack/rng.hpp"
#include "support/oracles.hpp"

using namespace cylpack;

namespace {

CylinderSpec vertical_cylinder(const Rational& x, const Rational& y) {
    CylinderSpec c;
    c.axis.anchor = RationalAnchor{x, y};
    c.axis.vertical = true;
    c.radius = rat(1, 2);
    return c;
}

}  // namespace

TEST_CASE("parallel pair refutes a packing") {
    Packing p;
    p.cylinders.push_back(vertical_cylinder(rat(0), rat(0)));
    p.cylinders.push_back(vertical_cylinder(rat(1), rat(0)));
    Certificate cert = certify_packing(p, PairStrategy{}, CertifyOptions{});
    CHECK(cert.status == CertStatus::kRefuted);
    CHECK(cert.parallel_pairs == 1);
    CHECK(cert.failures.size() == 1);
}

TEST_CASE("explicit close pair is refuted with a confirmed witness") {
    Packing p;
    CylinderSpec a, b;
    a.axis.anchor = RationalAnchor{rat(1), rat(0)};
    a.axis.height = AxisHeight{rat(3), rat(0)};
    a.radius = rat(1, 2);
    b.axis.anchor = RationalAnchor{rat(5, 4), rat(0)};
    b.axis.height = AxisHeight{rat(5), rat(0)};
    b.radius = rat(1, 2);
    p.cylinders = {a, b};
    Certificate cert = certify_packing(p, PairStrategy{}, CertifyOptions{});
    CHECK(cert.status == CertStatus::kRefuted);
    REQUIRE(!cert.failures.empty());
    // Confirm the witness with the generic cross-product route, exactly.
    auto l1 = *a.axis.to_rational_line(nullptr);
    auto l2 = *b.axis.to_rational_line(nullptr);
    CHECK(skew_distance_sq(l1, l2) < 1);
}

TEST_CASE("ring range certification: classes agree with the direct pair walk") {
    RingParams params = select_ring_params(rat(1));
    // Classes over two adjacent rings.
    RingRangeOptions opts;
    opts.config_hash = "test";
    Certificate by_class = certify_ring_range(params, BigInt(64), BigInt(65), opts);
    CHECK(by_class.status == CertStatus::kCertified);
    CHECK(by_class.parallel_pairs == 0);
    REQUIRE(by_class.min_distance.has_value());
    CHECK(by_class.min_distance->lo() >= 1);

    // The same packing materialized and walked pair by pair (the class route
    // triggers automatically; force the direct walk via an explicit list).
    Packing pack = build_ring_packing(params, BigInt(64), BigInt(65));
    const std::size_t n = pack.cylinders.size();
    BigInt expected_pairs = BigInt(static_cast<long>(n)) * static_cast<long>(n - 1) / 2;
    CHECK(BigInt(static_cast<unsigned long>(by_class.pairs_checked)) == expected_pairs);

    PairStrategy direct;
    direct.kind = PairStrategy::Kind::kExplicitList;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) direct.pairs.push_back({i, j});
    Certificate walked = certify_packing(pack, direct, CertifyOptions{});
    CHECK(walked.status == CertStatus::kCertified);
    CHECK(walked.pairs_checked == by_class.pairs_checked);
    CHECK(walked.touching_pairs == by_class.touching_pairs);
    REQUIRE(walked.min_distance.has_value());
    // Same minimum: the enclosures overlap.
    CHECK(walked.min_distance->lo() <= by_class.min_distance->hi());
    CHECK(by_class.min_distance->lo() <= walked.min_distance->hi());

    // Collinear adjacent rings touch at distance exactly 1 = 2 * (1/2).
    CHECK(by_class.touching_pairs > 0);

    // The materialized exhaustive strategy takes the class route and matches.
    Certificate mat = certify_packing(pack, PairStrategy{}, CertifyOptions{});
    CHECK(mat.status == CertStatus::kCertified);
    CHECK(mat.pairs_checked == by_class.pairs_checked);
    CHECK(mat.classes_checked == by_class.classes_checked);
}

TEST_CASE("perturbed ring heights are detected") {
    RingParams params = select_ring_params(rat(1));
    Packing pack = build_ring_packing(params, BigInt(64), BigInt(66));
    // Drop the +L from the heights of rings 64 and 66: their collinear
    // cross-ring pairs get proportional directions (y, -x, K n), i.e. the
    // packing acquires parallel pairs, which the exact class check catches.
    for (auto& c : pack.cylinders) {
        const auto& polar = std::get<PolarAnchor>(c.axis.anchor);
        if (polar.norm != 65) c.axis.height = AxisHeight{rat(0), polar.norm};
    }
    Certificate cert = certify_packing(pack, PairStrategy{}, CertifyOptions{});
    CHECK(cert.status == CertStatus::kRefuted);
    CHECK(cert.parallel_pairs > 0);
    REQUIRE(!cert.failures.empty());
    // Confirm a witness pair by the generic route: same grid angle on rings
    // 64 and 66, directions exactly proportional.
    Axis a1, a2;
    a1.anchor = PolarAnchor{rat(64), AngleSpec{BigInt(1), 6, params.epsilon}};
    a1.height = AxisHeight{rat(0), rat(64)};
    a2.anchor = PolarAnchor{rat(66), AngleSpec{BigInt(1), 6, params.epsilon}};
    a2.height = AxisHeight{rat(0), rat(66)};
    CHECK(axes_parallel(a1, a2, nullptr, params.k_sq) == Tri::kTrue);
}

TEST_CASE("precision ceiling yields unknown, refinement resolves it") {
    // Two polar anchors with an irrational pairwise distance; a threshold
    // within 2^-120 of the true value forces indecision at low ceilings.
    RingParams params = select_ring_params(rat(1));
    Packing pack;
    pack.kind = ConstructionKind::kExplicit;
    pack.height_ksq = params.k_sq;
    CylinderSpec a, b;
    a.axis.anchor = PolarAnchor{rat(64), AngleSpec{BigInt(1), 6, rat(1)}};
    a.axis.height = AxisHeight{params.l, rat(64)};
    a.radius = rat(1, 2);
    b.axis.anchor = PolarAnchor{rat(64), AngleSpec{BigInt(3), 6, rat(1)}};
    b.axis.height = AxisHeight{params.l, rat(64)};
    b.radius = rat(1, 2);
    pack.cylinders = {a, b};

    // Pin the threshold to a dyadic rational inside the distance enclosure.
    AxisDistanceSq d = axis_pair_distance_sq(a.axis, b.axis, nullptr, params.k_sq, 320);
    REQUIRE(!d.exact.has_value());
    Interval dist = iv_sqrt(d.enclosure);
    Rational thr = (dist.lo() + dist.hi()) / 2;

    PairStrategy list;
    list.kind = PairStrategy::Kind::kExplicitList;
    list.pairs = {{0, 1}};
    CertifyOptions low;
    low.radius_threshold = thr / 2;
    low.precision_ceiling = 64;
    Certificate cu = certify_packing(pack, list, low);
    CHECK(cu.status == CertStatus::kUnknown);
    CHECK(cu.unknown_pairs == 1);

    CertifyOptions high = low;
    high.precision_ceiling = 4096;
    Certificate ch = certify_packing(pack, list, high);
    // Monotonicity: more precision only shrinks the unknown set.
    CHECK(ch.unknown_pairs == 0);
    CHECK(ch.status != CertStatus::kUnknown);
}

TEST_CASE("domain certification: ring predicate") {
    RingParams params = select_ring_params(rat(1));
    Rational r0(params.r0);

    // Degenerate box: single point on the diagonal at the angle threshold.
    DomainProblem point;
    point.predicate = DomainPredicate::kRingDistanceGeOne;
    point.ring = params;
    point.box = {r0, r0, r0, r0, (1 + params.epsilon) / r0, (1 + params.epsilon) / r0};
    DomainResult res = certify_domain(point, 10);
    CHECK(res.status == CertStatus::kCertified);

    // A box lying wholly below the admissible angle is a precondition error.
    DomainProblem bad = point;
    bad.box = {r0, 2 * r0, r0, 2 * r0, rat(1, 100000), rat(1, 50000)};
    CHECK_THROWS_AS(certify_domain(bad, 10), std::invalid_argument);

    // A modest box certifies within depth 40, and a dense double-precision
    // falsification grid finds no counterexample on the same scope.
    DomainProblem boxp = point;
    Rational pi_hi = oracles::machin_pi(60).hi;
    boxp.box = {r0, 2 * r0, r0, 2 * r0, (1 + params.epsilon) / (2 * r0), pi_hi};
    DomainResult full = certify_domain(boxp, 40);
    CHECK(full.status == CertStatus::kCertified);
    CHECK(full.undecided.empty());

    const double K = std::sqrt(params.k_sq.get_d());
    const double L = params.l.get_d();
    const double eps = params.epsilon.get_d();
    bool counterexample = false;
    for (long d1 = 64; d1 <= 128 && !counterexample; ++d1)
        for (long d2 = d1; d2 <= 128 && !counterexample; ++d2) {
            if (d1 != d2 && std::abs(d1 - d2) < 1) continue;
            double thr_angle = (1 + eps) / std::max(d1, d2);
            for (double th = thr_angle; th <= 3.1416; th += 1e-2) {
                double c = std::cos(th);
                double g = K * (d1 + d2) + 2 * L;
                double u = (1 - c) * d1 * d2;
                double gap = double(d2 - d1) * (d2 - d1);
                double num = u * u * g * g + 2 * L * u * g * gap + L * L * gap * gap;
                double den = -u * u + 2 * u * (L * L * (1 + double(d1) * d2) + K * L * (d1 + d2)) +
                             L * L * gap;
                if (den > 0 && num < den * 0.999) counterexample = true;
            }
        }
    CHECK(!counterexample);
}

TEST_CASE("domain certification: general-height predicate in its regime") {
    DomainProblem prob;
    prob.predicate = DomainPredicate::kAxisDistanceGeFactor;
    prob.box = {rat(4), rat(16), rat_pow2(20), rat_pow2(21), rat(0), rat(0)};
    prob.t1 = rat_pow2(12);
    prob.t2 = rat_pow2(60);
    prob.eps = rat(1, 2);
    prob.angle_exponent = rat(1, 2);
    // Full cosine range; the |c| >= d2^(-1/2) clip keeps the kept region away
    // from the numerator root, where the bound then holds with a huge margin.
    Rational pi_hi = oracles::machin_pi(60).hi;
    prob.box.angle_lo = rat(0);
    prob.box.angle_hi = pi_hi;
    DomainResult res = certify_domain(prob, 48);
    CHECK(res.status == CertStatus::kCertified);
    CHECK(res.undecided.empty());
}

TEST_CASE("domain depth monotonicity: deeper search only shrinks the unknown set") {
    RingParams params = select_ring_params(rat(1));
    Rational r0(params.r0);
    Rational pi_hi = oracles::machin_pi(60).hi;
    DomainProblem prob;
    prob.predicate = DomainPredicate::kRingDistanceGeOne;
    prob.ring = params;
    prob.box = {r0, 2 * r0, r0, 2 * r0, (1 + params.epsilon) / (2 * r0), pi_hi};
    DomainResult shallow = certify_domain(prob, 4);
    DomainResult deep = certify_domain(prob, 40);
    CHECK(shallow.status != CertStatus::kRefuted);
    CHECK(deep.status == CertStatus::kCertified);
    CHECK(deep.undecided.size() <= shallow.undecided.size());
}

TEST_CASE("equal-height bound: preconditions and the distance inequality") {
    // Shell-1 style parameters fail the precondition (2 T < R^4)...
    EqualHeightBound small = check_equal_height_bound(rat(1, 2), rat(4), rat(1),
                                                      RationalAnchor{rat(2), rat(0)},
                                                      RationalAnchor{rat(-2), rat(0)});
    CHECK(!small.precondition_ok);
    // ... while shell-2 paper values pass it: 2 * 2^1000 >= (2^200)^4.
    ShellParams paper;
    paper.k_max = 2;
    BigInt t2 = paper.t_sequence()[1];
    EqualHeightBound big = check_equal_height_bound(rat(1, 2), Rational(int_pow2(200)), Rational(t2),
                                                    RationalAnchor{rat(7), rat(0)},
                                                    RationalAnchor{rat(-7), rat(0)});
    CHECK(big.precondition_ok);
    CHECK(big.bound_ok);

    // Huge T with antipodal anchors: the bound approaches 2r and holds.
    EqualHeightBound anti = check_equal_height_bound(rat(1, 2), rat(100), rat(100000000),
                                                     RationalAnchor{rat(100), rat(0)},
                                                     RationalAnchor{rat(-100), rat(0)});
    CHECK(anti.precondition_ok);
    CHECK(anti.bound_ok);

    // Grid of admissible tuples: zero violations.
    SplitMix64 rng(41, 7);
    int admissible = 0;
    for (int i = 0; i < 500; ++i) {
        Rational r = rat(1 + static_cast<long>(rng.next_below(4)), 2);
        Rational R(4 + static_cast<long>(rng.next_below(60)));
        // Smallest admissible T, times a random slack.
        Rational t = rat_pow(R, 4) / (8 * r * r) * (1 + static_cast<long>(rng.next_below(4)));
        auto pick = [&]() {
            return rat(static_cast<long>(rng.next_below(2 * R.get_num().get_ui())) -
                           static_cast<long>(R.get_num().get_ui()),
                       1);
        };
        RationalAnchor a1{pick(), pick()}, a2{pick(), pick()};
        EqualHeightBound res = check_equal_height_bound(r, R, t, a1, a2);
        if (!res.precondition_ok) continue;
        ++admissible;
        CHECK(res.bound_ok);
    }
    CHECK(admissible > 100);
}

TEST_CASE("shell ratio checks") {
    ShellParams paper;
    paper.k_max = 3;
    ShellRatioReport rep = check_nonparallel_shells(paper);
    CHECK(rep.all_pass);
    CHECK(rep.entries.size() == 3);

    // Deliberate violation: T grows too slowly for the shell widths.
    ShellParams bad;
    bad.a_growth = 3;
    bad.t_exponent = 1;
    bad.k_max = 2;
    ShellRatioReport brep = check_nonparallel_shells(bad);
    CHECK(!brep.all_pass);
}

TEST_CASE("shell packing: same-shell certification and cross-shell report") {
    Lattice2 hex = Lattice2::hexagonal(rat(4));
    ShellParams params;
    params.a_growth = 2;
    params.t_exponent = 6;
    params.k_max = 2;
    ShellBuildOptions opts;
    opts.epsilon = rat(1, 10);
    Packing p = build_shell_packing(hex, params, opts);

    CertifyOptions copt;
    copt.radius_threshold = p.radius();
    Certificate within = certify_shell_within(p, copt);
    CHECK(within.status == CertStatus::kCertified);
    CHECK(within.parallel_pairs == 0);

    CrossShellReport rep = cross_shell_distance_report(p, opts.epsilon);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].pairs ==
          static_cast<std::uint64_t>(p.shell_audit[0].kept) * p.shell_audit[1].kept);
    // The desk-scale report is informational; the minimum must at least be
    // positive (no intersecting axes among kept pairs here).
    CHECK(rep.entries[0].min_distance_sq > 0);
}

TEST_CASE("certificate serialization carries exact fields") {
    RingParams params = select_ring_params(rat(1));
    RingRangeOptions opts;
    opts.config_hash = config_hash_hex("demo");
    Certificate cert = certify_ring_range(params, BigInt(64), BigInt(64), opts);
    std::string json = cert.to_json();
    CHECK(json.find("\"status\": \"certified\"") != std::string::npos);
    CHECK(json.find("min_distance_lo") != std::string::npos);
    CHECK(json.find(opts.config_hash) != std::string::npos);
}
