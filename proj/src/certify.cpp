#include "cylpack/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cylpack/rng.hpp"

namespace cylpack {

const char* cert_status_name(CertStatus s) {
    switch (s) {
        case CertStatus::kCertified: return "certified";
        case CertStatus::kRefuted: return "refuted";
        default: return "unknown";
    }
}

std::string config_hash_hex(const std::string& canonical_config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_config) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string Certificate::to_json() const {
    nlohmann::json j;
    j["scope"] = scope;
    j["status"] = cert_status_name(status);
    j["pairs_checked"] = pairs_checked;
    j["classes_checked"] = classes_checked;
    j["parallel_pairs"] = parallel_pairs;
    j["touching_pairs"] = touching_pairs;
    j["unknown_pairs"] = unknown_pairs;
    j["threshold"] = rat_string(threshold);
    if (min_distance) {
        j["min_distance_lo"] = rat_string(min_distance->lo());
        j["min_distance_hi"] = rat_string(min_distance->hi());
    }
    j["precision_ceiling"] = static_cast<long>(precision_ceiling);
    j["seed"] = seed;
    j["rng"] = "splitmix64";
    j["config_hash"] = config_hash;
    j["notes"] = notes;
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : failures) fails.push_back({{"pair", f.pair_id}, {"reason", f.reason}});
    j["failures"] = fails;
    return j.dump(2);
}

namespace {

struct MinTracker {
    bool any = false;
    Rational lo, hi;

    void add(const Rational& vlo, const Rational& vhi) {
        if (!any) {
            lo = vlo;
            hi = vhi;
            any = true;
            return;
        }
        if (vlo < lo) lo = vlo;
        if (vhi < hi) hi = vhi;
    }
    void add_exact(const Rational& v) { add(v, v); }

    std::optional<Interval> as_interval(Prec prec) const {
        if (!any) return std::nullopt;
        return Interval::from_endpoints(lo, hi, prec);
    }
};

// Ring metadata for class-based certification.
struct RingMeta {
    BigInt n;       // radius
    long scale;     // k with 2^k <= n < 2^(k+1)
    BigInt count;   // anchors on the ring
    AxisHeight height;
};

enum class ClassOutcome { kPass, kTouch, kFail, kUnknown, kParallel };

struct ClassResult {
    ClassOutcome outcome;
    Rational dsq_lo, dsq_hi;  // enclosure (or exact twice)
    std::string detail;
};

// Distance class for anchors at exact norms n1, n2 whose ray angle
// difference is |m| * (1+eps)/2^scale, heights h1, h2 (base + coeff*sqrt(ksq)).
// m == 0 is the collinear same-ray case: the axes lie in parallel vertical
// planes and the distance is exactly |n2 - n1| unless the directions match.
ClassResult evaluate_pair_class(const BigInt& n1, const AxisHeight& h1, const BigInt& n2,
                                const AxisHeight& h2, const BigInt& m, long scale,
                                const Rational& eps, const Rational& ksq,
                                const Rational& thr_sq, Prec ceiling) {
    ClassResult res{ClassOutcome::kUnknown, Rational(0), Rational(0), ""};
    if (m == 0) {
        if (n1 == n2) throw std::logic_error("pair class of a cylinder with itself");
        // Parallel only if n2*H1 == n1*H2 as elements of Q + Q*sqrt(ksq).
        Rational rb = Rational(n2) * h1.base - Rational(n1) * h2.base;
        Rational rk = Rational(n2) * h1.k_coeff - Rational(n1) * h2.k_coeff;
        bool parallel;
        if (rk == 0) {
            parallel = rb == 0;
        } else if (rb == 0) {
            parallel = ksq == 0;
        } else {
            // rb + rk*sqrt(ksq) == 0 iff ksq == (rb/rk)^2 and signs oppose.
            parallel = sgn(rb) != sgn(rk) && rb * rb == rk * rk * ksq;
        }
        if (parallel) {
            res.outcome = ClassOutcome::kParallel;
            res.detail = "collinear anchors with proportional directions";
            return res;
        }
        Rational gap = Rational(n2) - Rational(n1);
        Rational dsq = gap * gap;
        res.dsq_lo = res.dsq_hi = dsq;
        res.outcome = dsq > thr_sq   ? ClassOutcome::kPass
                      : dsq == thr_sq ? ClassOutcome::kTouch
                                      : ClassOutcome::kFail;
        if (res.outcome == ClassOutcome::kFail) res.detail = "collinear pair below threshold";
        return res;
    }

    Rational dtheta = (1 + eps) * Rational(m < 0 ? BigInt(-m) : m) / rat_pow2(scale);
    Prec p = kDefaultPrec;
    while (true) {
        Interval c = iv_cos(Interval::from_rational(dtheta, p));
        Interval d1 = Interval::from_int(n1, p);
        Interval d2 = Interval::from_int(n2, p);
        Interval t1 = h1.enclosure(ksq, p);
        Interval t2 = h2.enclosure(ksq, p);
        auto parts = axis_distance_parts(d1, d2, c, t1, t2);
        if (parts.den.sign() > 0) {
            Interval dsq = parts.num / parts.den;
            res.dsq_lo = dsq.lo();
            res.dsq_hi = dsq.hi();
            Tri t = iv_ge(dsq, thr_sq);
            if (t == Tri::kTrue) {
                res.outcome = ClassOutcome::kPass;
                return res;
            }
            if (t == Tri::kFalse) {
                res.outcome = ClassOutcome::kFail;
                res.detail = "distance enclosure below threshold";
                return res;
            }
        }
        if (p >= ceiling) break;
        p = std::min<Prec>(p * 2, ceiling);
    }
    res.outcome = ClassOutcome::kUnknown;
    res.detail = "undecided at precision ceiling";
    return res;
}

std::string class_id(const BigInt& n1, const BigInt& n2, const BigInt& m) {
    return "n1=" + n1.get_str() + " n2=" + n2.get_str() + " m=" + m.get_str();
}

struct ClassAccumulator {
    Certificate& cert;
    MinTracker& min_dsq;
    std::uint64_t max_failures = 64;

    void apply(const ClassResult& r, std::uint64_t pair_count, const std::string& id) {
        cert.classes_checked += 1;
        cert.pairs_checked += pair_count;
        switch (r.outcome) {
            case ClassOutcome::kPass:
                min_dsq.add(r.dsq_lo, r.dsq_hi);
                break;
            case ClassOutcome::kTouch:
                min_dsq.add(r.dsq_lo, r.dsq_hi);
                cert.touching_pairs += pair_count;
                break;
            case ClassOutcome::kFail:
                min_dsq.add(r.dsq_lo, r.dsq_hi);
                if (cert.failures.size() < max_failures)
                    cert.failures.push_back({id, r.detail});
                break;
            case ClassOutcome::kParallel:
                cert.parallel_pairs += pair_count;
                if (cert.failures.size() < max_failures)
                    cert.failures.push_back({id, "parallel pair"});
                break;
            case ClassOutcome::kUnknown:
                cert.unknown_pairs += pair_count;
                break;
        }
    }
};

void finalize_status(Certificate& cert) {
    if (!cert.failures.empty() || cert.parallel_pairs > 0)
        cert.status = CertStatus::kRefuted;
    else if (cert.unknown_pairs > 0)
        cert.status = CertStatus::kUnknown;
    else
        cert.status = CertStatus::kCertified;
    if (cert.min_distance) {
        // convert min dist^2 enclosure to min distance
        *cert.min_distance = iv_sqrt(*cert.min_distance);
    }
}

// Exhaustive congruence classes between two complete rings with the same
// angular grid (scale k): same ring: |m| in 1..N-1 with N-m pairs;
// distinct rings: m = 0 (N pairs) and |m| in 1..N-1 with 2(N-m) pairs.
template <class Fn>
void for_each_same_scale_class(const BigInt& count, bool same_ring, Fn&& fn) {
    if (!count.fits_ulong_p()) throw std::range_error("ring too large for class enumeration");
    const std::uint64_t n = count.get_ui();
    if (!same_ring) fn(BigInt(0), static_cast<std::uint64_t>(n));
    for (std::uint64_t m = 1; m < n; ++m)
        fn(BigInt(static_cast<unsigned long>(m)), (same_ring ? 1ULL : 2ULL) * (n - m));
}

// Classes between rings with scales k1 <= k2 on nested grids: the angle
// difference is (1+eps) * (j1 * 2^(k2-k1) - j2) / 2^(k2).
template <class Fn>
void for_each_cross_scale_class(const BigInt& count1, long k1, const BigInt& count2, long k2,
                                Fn&& fn) {
    if (k1 == k2) {
        for_each_same_scale_class(count1, false, std::forward<Fn>(fn));
        return;
    }
    if (!count1.fits_ulong_p() || !count2.fits_ulong_p())
        throw std::range_error("ring too large for class enumeration");
    const long dk = k2 - k1;
    if (dk < 0 || dk > 40) throw std::range_error("scale gap too large");
    const std::int64_t step = std::int64_t{1} << dk;
    const std::int64_t n1 = static_cast<std::int64_t>(count1.get_ui());
    const std::int64_t n2 = static_cast<std::int64_t>(count2.get_ui());
    // m = j1*step - j2 with j1 in [1, n1], j2 in [1, n2]: the j1 with
    // 1 <= j1*step - m <= n2 form [ceil((m+1)/step), floor((m+n2)/step)],
    // clipped to [1, n1]. Iterate the contiguous m range, fold signs.
    auto div_floor = [](std::int64_t x, std::int64_t d) {
        return x >= 0 ? x / d : -((-x + d - 1) / d);
    };
    auto div_ceil = [&](std::int64_t x, std::int64_t d) { return -div_floor(-x, d); };
    std::map<std::int64_t, std::uint64_t> counts;
    const std::int64_t m_lo = step - n2, m_hi = n1 * step - 1;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        std::int64_t j1_lo = std::max<std::int64_t>(div_ceil(m + 1, step), 1);
        std::int64_t j1_hi = std::min<std::int64_t>(div_floor(m + n2, step), n1);
        if (j1_hi < j1_lo) continue;
        counts[std::llabs(m)] += static_cast<std::uint64_t>(j1_hi - j1_lo + 1);
    }
    for (const auto& [m, c] : counts) fn(BigInt(static_cast<long>(m)), c);
}

}  // namespace

Certificate certify_ring_range(const RingParams& params, const BigInt& n_lo, const BigInt& n_hi,
                               const RingRangeOptions& options) {
    if (n_lo < params.r0) throw std::invalid_argument("n_lo below r0");
    Certificate cert;
    cert.threshold = 2 * options.radius_threshold;
    cert.precision_ceiling = options.precision_ceiling;
    cert.seed = options.seed;
    cert.config_hash = options.config_hash;
    {
        std::ostringstream sc;
        sc << "ring construction eps=" << rat_string(params.epsilon) << ", exhaustive n in ["
           << n_lo.get_str() << ", " << n_hi.get_str() << "]";
        if (options.far_samples)
            sc << " plus " << options.far_samples << " far pairs from [" << options.far_n_lo.get_str()
               << ", " << options.far_n_hi.get_str() << "]";
        cert.scope = sc.str();
    }
    const Rational thr_sq = cert.threshold * cert.threshold;
    MinTracker min_dsq;
    ClassAccumulator acc{cert, min_dsq};

    // Ring metadata over the exhaustive range.
    if (n_hi - n_lo > 256) throw std::range_error("exhaustive ring range too wide");
    std::vector<RingMeta> rings;
    for (BigInt n = n_lo; n <= n_hi; n += 1) {
        long k = ring_scale(n);
        rings.push_back({n, k, ring_count_for_scale(k, params.epsilon),
                         AxisHeight{params.l, Rational(n)}});
    }

    for (size_t i = 0; i < rings.size(); ++i) {
        for (size_t j = i; j < rings.size(); ++j) {
            const RingMeta &r1 = rings[i], &r2 = rings[j];
            auto handle = [&](const BigInt& m, std::uint64_t pair_count) {
                ClassResult res = evaluate_pair_class(r1.n, r1.height, r2.n, r2.height, m,
                                                      std::max(r1.scale, r2.scale), params.epsilon,
                                                      params.k_sq, thr_sq, options.precision_ceiling);
                acc.apply(res, pair_count, class_id(r1.n, r2.n, m));
            };
            if (i == j)
                for_each_same_scale_class(r1.count, true, handle);
            else
                for_each_cross_scale_class(r1.count, r1.scale, r2.count, r2.scale, handle);
        }
    }

    // Seeded far pairs.
    if (options.far_samples) {
        if (options.far_n_hi < options.far_n_lo) throw std::invalid_argument("bad far range");
        BigInt span_big = options.far_n_hi - options.far_n_lo + 1;
        if (!span_big.fits_ulong_p()) throw std::range_error("far range too wide");
        const std::uint64_t span = span_big.get_ui();
        SplitMix64 rng(options.seed, /*stream=*/0xFA12);
        std::map<long, BigInt> count_cache;
        auto count_of = [&](long k) {
            auto it = count_cache.find(k);
            if (it == count_cache.end())
                it = count_cache.emplace(k, ring_count_for_scale(k, params.epsilon)).first;
            return it->second;
        };
        for (std::uint64_t s = 0; s < options.far_samples; ++s) {
            BigInt n1 = options.far_n_lo + BigInt(static_cast<unsigned long>(rng.next_below(span)));
            BigInt n2 = options.far_n_lo + BigInt(static_cast<unsigned long>(rng.next_below(span)));
            if (n2 < n1) std::swap(n1, n2);
            long k1 = ring_scale(n1), k2 = ring_scale(n2);
            BigInt c1 = count_of(k1), c2 = count_of(k2);
            std::uint64_t j1 = 1 + rng.next_below(c1.get_ui());
            std::uint64_t j2 = 1 + rng.next_below(c2.get_ui());
            if (n1 == n2 && j1 == j2) continue;  // same cylinder
            // Signed grid difference at the finer scale k2 (k1 <= k2).
            BigInt m = BigInt(static_cast<unsigned long>(j1));
            mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(k2 - k1));
            m -= BigInt(static_cast<unsigned long>(j2));
            ClassResult res = evaluate_pair_class(
                n1, AxisHeight{params.l, Rational(n1)}, n2, AxisHeight{params.l, Rational(n2)}, m,
                k2, params.epsilon, params.k_sq, thr_sq, options.precision_ceiling);
            acc.apply(res, 1, "far " + class_id(n1, n2, m));
        }
    }

    cert.min_distance = min_dsq.as_interval(kDefaultPrec);
    finalize_status(cert);
    return cert;
}

// ---------------------------------------------------------------------------

namespace {

// Complete-rings view of a materialized polar packing, if it has one.
struct MaterializedRings {
    std::vector<RingMeta> rings;
    Rational epsilon;
};

std::optional<MaterializedRings> as_complete_rings(const Packing& p) {
    if (p.cylinders.empty()) return std::nullopt;
    std::map<Rational, std::vector<const CylinderSpec*>> by_norm;
    for (const auto& c : p.cylinders) {
        const auto* polar = std::get_if<PolarAnchor>(&c.axis.anchor);
        if (!polar || c.axis.vertical) return std::nullopt;
        by_norm[polar->norm].push_back(&c);
    }
    MaterializedRings out;
    bool first = true;
    for (auto& [norm, cyls] : by_norm) {
        if (norm.get_den() != 1) return std::nullopt;
        std::vector<bool> seen(cyls.size() + 1, false);
        const auto* p0 = std::get_if<PolarAnchor>(&cyls.front()->axis.anchor);
        RingMeta meta{BigInt(norm.get_num()), p0->angle.k, BigInt(static_cast<long>(cyls.size())),
                      cyls.front()->axis.height};
        for (const auto* c : cyls) {
            const auto* polar = std::get_if<PolarAnchor>(&c->axis.anchor);
            if (polar->angle.k != meta.scale) return std::nullopt;
            if (first) out.epsilon = polar->angle.epsilon;
            first = false;
            if (polar->angle.epsilon != out.epsilon) return std::nullopt;
            if (c->axis.height.base != meta.height.base ||
                c->axis.height.k_coeff != meta.height.k_coeff)
                return std::nullopt;
            if (!polar->angle.j.fits_ulong_p()) return std::nullopt;
            std::uint64_t j = polar->angle.j.get_ui();
            if (j < 1 || j > cyls.size() || seen[j]) return std::nullopt;
            seen[j] = true;
        }
        // Complete ring must match the grid count for its scale.
        if (meta.count != ring_count_for_scale(meta.scale, out.epsilon)) return std::nullopt;
        out.rings.push_back(std::move(meta));
    }
    return out;
}

void direct_pair_check(const Packing& p, std::size_t i, std::size_t j, const Rational& thr_sq,
                       const CertifyOptions& options, Certificate& cert, MinTracker& min_dsq) {
    const auto& a1 = p.cylinders[i].axis;
    const auto& a2 = p.cylinders[j].axis;
    cert.pairs_checked += 1;
    std::string id = "i=" + std::to_string(i) + " j=" + std::to_string(j);

    Tri par = axes_parallel(a1, a2, p.lattice_ptr(), p.height_ksq);
    if (par == Tri::kTrue) {
        cert.parallel_pairs += 1;
        if (cert.failures.size() < 64) cert.failures.push_back({id, "parallel pair"});
        return;
    }
    if (par == Tri::kUnknown) {
        cert.unknown_pairs += 1;
        return;
    }

    for (Prec prec = kDefaultPrec;; prec = std::min<Prec>(prec * 2, options.precision_ceiling)) {
        AxisDistanceSq d = axis_pair_distance_sq(a1, a2, p.lattice_ptr(), p.height_ksq, prec);
        if (d.exact) {
            min_dsq.add_exact(*d.exact);
            if (*d.exact == thr_sq) {
                cert.touching_pairs += 1;
            } else if (*d.exact < thr_sq) {
                if (cert.failures.size() < 64)
                    cert.failures.push_back({id, "exact distance below threshold"});
            }
            return;
        }
        Tri t = iv_ge(d.enclosure, thr_sq);
        if (t == Tri::kTrue) {
            min_dsq.add(d.enclosure.lo(), d.enclosure.hi());
            return;
        }
        if (t == Tri::kFalse) {
            min_dsq.add(d.enclosure.lo(), d.enclosure.hi());
            if (cert.failures.size() < 64)
                cert.failures.push_back({id, "distance enclosure below threshold"});
            return;
        }
        if (prec >= options.precision_ceiling) {
            cert.unknown_pairs += 1;
            return;
        }
    }
}

}  // namespace

Certificate certify_packing(const Packing& p, const PairStrategy& strategy,
                            const CertifyOptions& options) {
    Certificate cert;
    cert.threshold = 2 * options.radius_threshold;
    cert.precision_ceiling = options.precision_ceiling;
    cert.seed = options.seed;
    cert.config_hash = options.config_hash;
    const Rational thr_sq = cert.threshold * cert.threshold;
    MinTracker min_dsq;

    auto mat = (strategy.kind != PairStrategy::Kind::kExplicitList) ? as_complete_rings(p)
                                                                    : std::nullopt;
    if (mat) {
        ClassAccumulator acc{cert, min_dsq};
        cert.scope = "materialized ring packing (" + std::to_string(p.cylinders.size()) +
                     " cylinders), congruence classes";
        const auto& rings = mat->rings;
        for (size_t i = 0; i < rings.size(); ++i) {
            for (size_t j = i; j < rings.size(); ++j) {
                const RingMeta &r1 = rings[i], &r2 = rings[j];
                if (strategy.kind == PairStrategy::Kind::kRingLocal &&
                    (r2.n - r1.n) > strategy.ring_window)
                    continue;
                auto handle = [&](const BigInt& m, std::uint64_t pair_count) {
                    if (strategy.kind == PairStrategy::Kind::kRingLocal &&
                        m > strategy.angle_window)
                        return;
                    ClassResult res = evaluate_pair_class(
                        r1.n, r1.height, r2.n, r2.height, m, std::max(r1.scale, r2.scale),
                        mat->epsilon, p.height_ksq, thr_sq, options.precision_ceiling);
                    acc.apply(res, pair_count, class_id(r1.n, r2.n, m));
                };
                if (i == j)
                    for_each_same_scale_class(r1.count, true, handle);
                else
                    for_each_cross_scale_class(r1.count, r1.scale, r2.count, r2.scale, handle);
            }
        }
        if (strategy.kind == PairStrategy::Kind::kRingLocal && strategy.far_samples > 0) {
            SplitMix64 rng(options.seed, 0xFA12);
            const std::size_t n = p.cylinders.size();
            for (std::uint64_t s = 0; s < strategy.far_samples; ++s) {
                std::size_t i = rng.next_below(n), j = rng.next_below(n);
                if (i == j) continue;
                direct_pair_check(p, std::min(i, j), std::max(i, j), thr_sq, options, cert,
                                  min_dsq);
            }
        }
        cert.min_distance = min_dsq.as_interval(kDefaultPrec);
        finalize_status(cert);
        return cert;
    }

    // Direct pair walks.
    const std::size_t n = p.cylinders.size();
    if (strategy.kind == PairStrategy::Kind::kExplicitList) {
        cert.scope = "explicit pair list (" + std::to_string(strategy.pairs.size()) + " pairs)";
        for (auto [i, j] : strategy.pairs) {
            if (i >= n || j >= n || i == j) throw std::out_of_range("bad pair index");
            direct_pair_check(p, std::min(i, j), std::max(i, j), thr_sq, options, cert, min_dsq);
        }
    } else {
        if (n > 20000 && strategy.kind == PairStrategy::Kind::kExhaustive)
            throw std::range_error("exhaustive pair walk too large; use a structured strategy");
        cert.scope = "exhaustive pairs over " + std::to_string(n) + " cylinders";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                direct_pair_check(p, i, j, thr_sq, options, cert, min_dsq);
    }
    cert.min_distance = min_dsq.as_interval(kDefaultPrec);
    finalize_status(cert);
    return cert;
}

// ---------------------------------------------------------------------------

Certificate certify_shell_within(const Packing& p, const CertifyOptions& options) {
    if (p.shell_of.size() != p.cylinders.size())
        throw std::invalid_argument("packing lacks shell structure");
    Certificate cert;
    cert.threshold = 2 * options.radius_threshold;
    cert.precision_ceiling = options.precision_ceiling;
    cert.seed = options.seed;
    cert.config_hash = options.config_hash;
    cert.scope = "shell packing, exhaustive same-shell pairs";
    const Rational thr_sq = cert.threshold * cert.threshold;
    const Lattice2* lat = p.lattice_ptr();
    if (!lat) throw std::invalid_argument("shell packing without a lattice");
    MinTracker min_dsq;

    std::map<int, std::vector<std::size_t>> by_shell;
    for (std::size_t i = 0; i < p.cylinders.size(); ++i) by_shell[p.shell_of[i]].push_back(i);
    const double thr_sq_d = thr_sq.get_d();

    // Screened pairs are certified above the threshold without an exact
    // value; keep the double-minimum candidate to close the enclosure.
    double best_ratio_d = -1;
    std::pair<std::size_t, std::size_t> best_pair{0, 0};

    for (const auto& [shell, idx] : by_shell) {
        // Equal-height precondition note: 8 r^2 T >= R^4 with r = half the
        // minimum planar separation and T, R read off the shell's cylinders
        // (checked on squares, exactly).
        if (!idx.empty()) {
            const auto& first = p.cylinders[idx.front()];
            const auto& la = std::get<LatticeAnchor>(first.axis.anchor);
            Rational r_sq = lat->min_norm_sq() * la.scale * la.scale / 4;
            Rational t = first.axis.height.base;
            Rational big_r_sq = 0;
            for (std::size_t i : idx)
                big_r_sq = std::max(big_r_sq, p.cylinders[i].axis.anchor_norm_sq(lat));
            bool pre = 8 * r_sq * t >= big_r_sq * big_r_sq;
            cert.notes.push_back("shell " + std::to_string(shell) + ": equal-height precondition " +
                                 std::string(pre ? "holds" : "fails"));
        }
        // Exhaustive same-shell pairs with a float screen and exact fallback.
        // Within a shell all heights and scales are equal, so a pair is
        // parallel only if the two anchors coincide, which the lattice
        // excludes; the distance kernel is entirely rational.
        const std::size_t cnt = idx.size();
        for (std::size_t ii = 0; ii < cnt; ++ii) {
            const auto& c1 = p.cylinders[idx[ii]];
            const auto& l1 = std::get<LatticeAnchor>(c1.axis.anchor);
            const Rational n1 = c1.axis.anchor_norm_sq(lat);
            const double n1_d = n1.get_d();
            const double t_d = c1.axis.height.base.get_d();
            const double a1d = static_cast<double>(l1.point.a), b1d = static_cast<double>(l1.point.b);
            const double s2 = Rational(l1.scale * l1.scale).get_d();
            const double g00 = lat->g00().get_d() * s2, g01 = lat->g01().get_d() * s2,
                         g11 = lat->g11().get_d() * s2;
            for (std::size_t jj = ii + 1; jj < cnt; ++jj) {
                const auto& c2 = p.cylinders[idx[jj]];
                const auto& l2 = std::get<LatticeAnchor>(c2.axis.anchor);
                cert.pairs_checked += 1;
                const double a2d = static_cast<double>(l2.point.a),
                             b2d = static_cast<double>(l2.point.b);
                const double dotd = g00 * a1d * a2d + g01 * (a1d * b2d + b1d * a2d) + g11 * b1d * b2d;
                const double n2_d = g00 * a2d * a2d + 2 * g01 * a2d * b2d + g11 * b2d * b2d;
                const double root = n1_d * t_d + n2_d * t_d - 2 * t_d * dotd;
                const double den =
                    (n1_d * n2_d - dotd * dotd) * (n1_d + t_d * t_d) + (n1_d * t_d - t_d * dotd) * (n1_d * t_d - t_d * dotd);
                const double num = n1_d * root * root;
                // dist^2 = num/den vs thr_sq, decided with a wide relative margin.
                if (den > 0 && num > thr_sq_d * den * (1 + 1e-9)) {
                    const double ratio = num / den;
                    if (best_ratio_d < 0 || ratio < best_ratio_d) {
                        best_ratio_d = ratio;
                        best_pair = {idx[ii], idx[jj]};
                    }
                    continue;
                }
                // Exact fallback.
                AxisDistanceSq d = axis_pair_distance_sq(c1.axis, c2.axis, lat, p.height_ksq,
                                                         kDefaultPrec);
                if (!d.exact) throw std::logic_error("same-shell pair not exactly representable");
                min_dsq.add_exact(*d.exact);
                if (*d.exact == thr_sq) {
                    cert.touching_pairs += 1;
                } else if (*d.exact < thr_sq) {
                    if (cert.failures.size() < 64)
                        cert.failures.push_back({"shell " + std::to_string(shell) + " i=" +
                                                     std::to_string(idx[ii]) + " j=" +
                                                     std::to_string(idx[jj]),
                                                 "exact distance below threshold"});
                }
            }
        }
    }
    // Close the minimum enclosure: every screened pair is certified above the
    // threshold, and the smallest screened ratio is recomputed exactly as an
    // attained upper bound.
    if (best_ratio_d >= 0) {
        AxisDistanceSq d = axis_pair_distance_sq(p.cylinders[best_pair.first].axis,
                                                 p.cylinders[best_pair.second].axis, lat,
                                                 p.height_ksq, kDefaultPrec);
        Rational attained = d.exact ? *d.exact : d.enclosure.hi();
        min_dsq.add(thr_sq, attained);
    }
    cert.min_distance = min_dsq.as_interval(kDefaultPrec);
    finalize_status(cert);
    return cert;
}

CrossShellReport cross_shell_distance_report(const Packing& p, const Rational& eps) {
    if (p.shell_of.size() != p.cylinders.size())
        throw std::invalid_argument("packing lacks shell structure");
    const Lattice2* lat = p.lattice_ptr();
    if (!lat) throw std::invalid_argument("shell packing without a lattice");
    if (p.shell_alpha <= 0) throw std::invalid_argument("packing lacks the filter exponent");
    const unsigned long q = static_cast<unsigned long>(p.shell_alpha.get_den().get_si());
    const unsigned long pe = static_cast<unsigned long>(p.shell_alpha.get_num().get_si());

    std::map<int, std::vector<std::size_t>> by_shell;
    for (std::size_t i = 0; i < p.cylinders.size(); ++i) by_shell[p.shell_of[i]].push_back(i);
    std::vector<int> shells;
    for (const auto& [k, v] : by_shell) shells.push_back(k);

    CrossShellReport report;
    const Rational factor = (1 - eps) * (1 - eps);
    for (size_t i = 0; i < shells.size(); ++i) {
        for (size_t j = i + 1; j < shells.size(); ++j) {
            CrossShellReport::Entry e;
            e.k1 = shells[i];
            e.k2 = shells[j];
            bool first = true;
            for (std::size_t i1 : by_shell[e.k1]) {
                const auto& c1 = p.cylinders[i1];
                const Rational n1 = c1.axis.anchor_norm_sq(lat);
                for (std::size_t i2 : by_shell[e.k2]) {
                    const auto& c2 = p.cylinders[i2];
                    e.pairs += 1;
                    PairGeometry g = axis_pair_geometry(c1.axis, c2.axis, lat);
                    AxisDistanceSq d =
                        axis_pair_distance_sq(c1.axis, c2.axis, lat, p.height_ksq, kDefaultPrec);
                    if (!d.exact || !g.dot) throw std::logic_error("cross-shell pair not exact");
                    if (first || *d.exact < e.min_distance_sq) e.min_distance_sq = *d.exact;
                    first = false;
                    Rational n2 = c2.axis.anchor_norm_sq(lat);
                    bool cond = rat_pow(*g.dot * *g.dot, q) * rat_pow(n2, pe) >= rat_pow(n1 * n2, q);
                    if (!cond) continue;
                    e.condition_pairs += 1;
                    if (*d.exact >= factor * n1) e.bound_holds += 1;
                }
            }
            report.entries.push_back(e);
        }
    }
    // Smallest starting shell from which the bound always holds.
    for (size_t start = 0; start < shells.size(); ++start) {
        bool ok = true;
        for (const auto& e : report.entries)
            if (e.k1 >= shells[start] && e.bound_holds != e.condition_pairs) ok = false;
        if (ok) {
            report.smallest_passing_shell = shells[start];
            break;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

namespace {

struct CBox {
    Rational d1_lo, d1_hi, d2_lo, d2_hi, c_lo, c_hi;
    bool diagonal;
    int depth;
};

Interval iv_of(const Rational& lo, const Rational& hi, Prec prec) {
    return Interval::from_endpoints(lo, hi, prec);
}

// Ring margin num - den with an explicit gap^2 range (the |d1-d2| >= 1
// relaxation) so boxes touching the diagonal stay sound. Written as a
// quadratic in u = (1-c) d1 d2 with single-occurrence coefficients:
//   margin = u^2 (1 + g^2) + 2u (L g G - B) + L^2 G (G - 1),
// g = K(d1+d2) + 2L, B = L^2(1 + d1 d2) + K L (d1+d2), G = gap^2; the
// factored form keeps boxes with c near 1 from blowing up the enclosure.
Interval ring_margin_offdiag(const Interval& d1, const Interval& d2, const Interval& gap_sq,
                             const Interval& c, const Interval& k, const Interval& l) {
    Interval one(1, c.precision());
    Interval two(2, c.precision());
    Interval g = k * (d1 + d2) + two * l;
    Interval big_b = iv_sqr(l) * (one + d1 * d2) + k * l * (d1 + d2);
    Interval u = (one - c) * d1 * d2;
    Interval quad = one + iv_sqr(g);
    Interval lin = l * g * gap_sq - big_b;
    Interval cons = iv_sqr(l) * gap_sq * (gap_sq - one);
    return iv_sqr(u) * quad + two * u * lin + cons;
}

// Diagonal (d1 = d2 = d) specialization: margin = u^2 (1 + g^2) - 2 u B.
Interval ring_margin_diag(const Interval& d, const Interval& c, const Interval& k,
                          const Interval& l) {
    Interval one(1, c.precision());
    Interval two(2, c.precision());
    Interval g = two * k * d + two * l;
    Interval big_b = iv_sqr(l) * (one + iv_sqr(d)) + two * k * l * d;
    Interval u = (one - c) * iv_sqr(d);
    return iv_sqr(u) * (one + iv_sqr(g)) - two * u * big_b;
}

// Axis-distance margin num - (1-eps)^2 d1^2 den.
Interval axis_margin(const Interval& d1, const Interval& d2, const Interval& c, const Interval& t1,
                     const Interval& t2, const Rational& eps, Prec prec) {
    auto parts = axis_distance_parts(d1, d2, c, t1, t2);
    Interval factor = Interval::from_rational((1 - eps) * (1 - eps), prec);
    return parts.num - factor * iv_sqr(d1) * parts.den;
}

}  // namespace

DomainResult certify_domain(const DomainProblem& problem, int max_depth, Prec prec) {
    DomainResult out;
    const ParamBox& box = problem.box;
    if (!(box.d1_lo <= box.d1_hi && box.d2_lo <= box.d2_hi && box.angle_lo <= box.angle_hi) ||
        box.d1_lo <= 0 || box.d2_lo <= 0)
        throw std::invalid_argument("empty or invalid parameter box");

    const bool ring_pred = problem.predicate == DomainPredicate::kRingDistanceGeOne;
    if (ring_pred && !problem.ring) throw std::invalid_argument("ring predicate needs parameters");

    // Cosine range of the angle box (angles in [0, pi] expected).
    Interval c_range = iv_cos(iv_of(box.angle_lo, box.angle_hi, prec));
    const Rational c_lo = c_range.lo() < -1 ? rat(-1) : c_range.lo();
    const Rational c_hi = c_range.hi() > 1 ? rat(1) : c_range.hi();

    // Hypothesis precondition: reject boxes wholly below the admissible angle.
    if (ring_pred) {
        const RingParams& rp = *problem.ring;
        Rational max_d = std::max(box.d1_hi, box.d2_hi);
        Interval thr = iv_cos(Interval::from_rational((1 + rp.epsilon) / max_d, prec));
        if (Rational(c_lo) > thr.hi())
            throw std::invalid_argument(
                "box violates the hypothesis: every angle is below (1+eps)/max(d1,d2)");
    }

    const Interval K = ring_pred ? problem.ring->k_enclosure(prec) : Interval(0L, prec);
    const Interval L = ring_pred ? Interval::from_rational(problem.ring->l, prec) : Interval(0L, prec);
    const Interval T1 = Interval::from_rational(problem.t1, prec);
    const Interval T2 = Interval::from_rational(problem.t2, prec);

    const Rational w_d1 = box.d1_hi - box.d1_lo, w_d2 = box.d2_hi - box.d2_lo;
    const Rational w_c = Rational(c_hi) - Rational(c_lo);

    std::vector<CBox> stack;
    if (ring_pred) {
        // Integer split: the diagonal plus the |d1 - d2| >= 1 relaxation.
        auto diag_lo = std::max(box.d1_lo, box.d2_lo);
        auto diag_hi = std::min(box.d1_hi, box.d2_hi);
        if (diag_lo <= diag_hi)
            stack.push_back({diag_lo, diag_hi, diag_lo, diag_hi, c_lo, c_hi, true, 0});
        stack.push_back({box.d1_lo, box.d1_hi, box.d2_lo, box.d2_hi, c_lo, c_hi, false, 0});
    } else {
        // |c| >= d2^-alpha: split the cosine range into the two signs.
        if (c_lo < 0)
            stack.push_back({box.d1_lo, box.d1_hi, box.d2_lo, box.d2_hi, c_lo,
                             std::min(c_hi, Rational(0)), false, 0});
        if (c_hi > 0)
            stack.push_back({box.d1_lo, box.d1_hi, box.d2_lo, box.d2_hi,
                             std::max(c_lo, Rational(0)), c_hi, false, 0});
    }

    const std::uint64_t kLeafBudget = 40'000'000;
    std::uint64_t visited = 0;

    while (!stack.empty()) {
        CBox b = stack.back();
        stack.pop_back();
        if (++visited > kLeafBudget) throw std::runtime_error("domain search budget exceeded");
        out.max_depth_reached = std::max(out.max_depth_reached, b.depth);

        // ---- feasibility pruning / hypothesis clipping
        Rational clo = b.c_lo, chi = b.c_hi;
        if (ring_pred) {
            if (!b.diagonal) {
                // Off-diagonal relaxation needs max |d1 - d2| >= 1 somewhere.
                if (b.d2_hi - b.d1_lo < 1 && b.d1_hi - b.d2_lo < 1) {
                    out.boxes_pruned += 1;
                    continue;
                }
            }
            Rational max_d = b.diagonal ? b.d1_hi : std::max(b.d1_hi, b.d2_hi);
            Interval thr =
                iv_cos(Interval::from_rational((1 + problem.ring->epsilon) / max_d, prec));
            if (thr.hi() < chi) chi = thr.hi();
            if (clo > chi) {
                out.boxes_pruned += 1;
                continue;
            }
        } else {
            // |c| >= (d2_hi)^-alpha over the box (superset of the per-point region).
            Interval thr = iv_rat_pow(
                b.d2_hi, -static_cast<long>(problem.angle_exponent.get_num().get_si()),
                static_cast<unsigned long>(problem.angle_exponent.get_den().get_si()), prec);
            if (chi <= 0) {
                // negative branch: c <= -thr
                Rational cap = -thr.lo();
                if (chi > cap) chi = cap;
            } else {
                Rational cap = thr.lo();
                if (clo < cap) clo = cap;
            }
            if (clo > chi) {
                out.boxes_pruned += 1;
                continue;
            }
        }

        // ---- leaf evaluation
        Interval margin(0L, prec);
        Interval d1 = iv_of(b.d1_lo, b.d1_hi, prec);
        Interval c = iv_of(clo, chi, prec);
        if (ring_pred && b.diagonal) {
            margin = ring_margin_diag(d1, c, K, L);
        } else if (ring_pred) {
            Interval d2 = iv_of(b.d2_lo, b.d2_hi, prec);
            Rational gap_max = std::max(b.d2_hi - b.d1_lo, b.d1_hi - b.d2_lo);
            Interval gap_sq = iv_of(rat(1), gap_max * gap_max, prec);
            margin = ring_margin_offdiag(d1, d2, gap_sq, c, K, L);
        } else {
            Interval d2 = iv_of(b.d2_lo, b.d2_hi, prec);
            margin = axis_margin(d1, d2, c, T1, T2, problem.eps, prec);
        }

        if (margin.lo() >= 0) {
            out.leaves_certified += 1;
            continue;
        }
        if (margin.hi() < 0) {
            // Candidate refutation at the box midpoint; confirm at high precision.
            Rational d1m = (b.d1_lo + b.d1_hi) / 2;
            Rational d2m = b.diagonal ? d1m : (b.d2_lo + b.d2_hi) / 2;
            Rational cm = (clo + chi) / 2;
            Prec hp = prec * 4;
            Interval confirm =
                ring_pred
                    ? (b.diagonal
                           ? ring_margin_diag(Interval::from_rational(d1m, hp),
                                              Interval::from_rational(cm, hp),
                                              problem.ring->k_enclosure(hp),
                                              Interval::from_rational(problem.ring->l, hp))
                           : ring_margin_offdiag(
                                 Interval::from_rational(d1m, hp), Interval::from_rational(d2m, hp),
                                 iv_sqr(Interval::from_rational(d2m - d1m, hp)),
                                 Interval::from_rational(cm, hp), problem.ring->k_enclosure(hp),
                                 Interval::from_rational(problem.ring->l, hp)))
                    : axis_margin(Interval::from_rational(d1m, hp), Interval::from_rational(d2m, hp),
                                  Interval::from_rational(cm, hp),
                                  Interval::from_rational(problem.t1, hp),
                                  Interval::from_rational(problem.t2, hp), problem.eps, hp);
            if (confirm.hi() < 0) {
                out.refutation = DomainWitness{d1m, d2m, cm, "margin enclosure negative at witness"};
                out.status = CertStatus::kRefuted;
                return out;
            }
        }

        // ---- split or give up at depth
        if (b.depth >= max_depth) {
            out.undecided.push_back({b.d1_lo, b.d1_hi, b.d2_lo, b.d2_hi, clo, chi, b.diagonal});
            if (out.undecided.size() > 4096)
                throw std::runtime_error("undecided set exploding; raise depth or precision");
            continue;
        }
        // Relative widths: d against its own magnitude, c against its
        // distance to +-1 (where (1-c) and (1-c^2) sensitivities explode).
        Rational wd1 = (b.d1_hi - b.d1_lo) / b.d1_lo;
        Rational wd2 = b.diagonal ? Rational(0) : (b.d2_hi - b.d2_lo) / b.d2_lo;
        const Rational floor = rat_pow2(-70);
        Rational hi_gap = 1 - chi;
        Rational lo_gap = clo + 1;
        Rational c_scale = std::max(std::min(hi_gap, lo_gap), floor);
        Rational wc = (chi - clo) / c_scale;
        CBox lobox = b, hibox = b;
        lobox.depth = hibox.depth = b.depth + 1;
        lobox.c_lo = clo;
        lobox.c_hi = chi;
        hibox.c_lo = clo;
        hibox.c_hi = chi;
        if (wd1 >= wd2 && wd1 >= wc) {
            Rational mid = (b.d1_lo + b.d1_hi) / 2;
            lobox.d1_hi = mid;
            hibox.d1_lo = mid;
            if (b.diagonal) {
                lobox.d2_hi = mid;
                hibox.d2_lo = mid;
            }
        } else if (!b.diagonal && wd2 >= wc) {
            Rational mid = (b.d2_lo + b.d2_hi) / 2;
            lobox.d2_hi = mid;
            hibox.d2_lo = mid;
        } else {
            Rational mid = (clo + chi) / 2;
            lobox.c_hi = mid;
            hibox.c_lo = mid;
        }
        stack.push_back(hibox);
        stack.push_back(lobox);
    }

    out.status = out.undecided.empty() ? CertStatus::kCertified : CertStatus::kUnknown;
    return out;
}

// ---------------------------------------------------------------------------

EqualHeightBound check_equal_height_bound(const Rational& r, const Rational& big_r,
                                          const Rational& t, const RationalAnchor& a1,
                                          const RationalAnchor& a2) {
    EqualHeightBound out;
    out.distance_sq = 0;
    out.bound_sq = 0;
    const Rational n1 = a1.x * a1.x + a1.y * a1.y;
    const Rational n2 = a2.x * a2.x + a2.y * a2.y;
    const Rational sep_sq = (a2.x - a1.x) * (a2.x - a1.x) + (a2.y - a1.y) * (a2.y - a1.y);
    if (!(sep_sq >= 4 * r * r)) {
        out.precondition_failure = "|A1 A2| < 2r";
        return out;
    }
    if (!(n1 <= big_r * big_r && n2 <= big_r * big_r)) {
        out.precondition_failure = "anchor norm above R";
        return out;
    }
    if (!(8 * r * r * t >= rat_pow(big_r, 4))) {
        out.precondition_failure = "8 r^2 T < R^4";
        return out;
    }
    out.precondition_ok = true;
    RLine3 l1{{a1.x, a1.y, Rational(0)}, {a1.y, -a1.x, t}};
    RLine3 l2{{a2.x, a2.y, Rational(0)}, {a2.y, -a2.x, t}};
    out.distance_sq = skew_distance_sq(l1, l2);
    const Rational b = 2 * r * (1 - 1 / t);
    out.bound_sq = b * b;
    out.bound_ok = b <= 0 || out.distance_sq >= out.bound_sq;
    return out;
}

ShellRatioReport check_nonparallel_shells(const ShellParams& params) {
    ShellRatioReport report;
    auto a = params.a_sequence();
    auto t = params.t_sequence();
    report.all_pass = true;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = i + 1; j < a.size(); ++j) {
            // Need T_j / T_i >= 2^(2 a_j) / 2^(a_i): with |x2| <= 2^(2 a_j)
            // and |x1| > 2^(a_i), every norm ratio is strictly below it.
            BigInt lhs = t[j] * int_pow2(static_cast<unsigned long>(a[i]));
            BigInt rhs = t[i] * int_pow2(static_cast<unsigned long>(2 * a[j]));
            bool pass = lhs >= rhs;
            report.entries.push_back({static_cast<int>(i + 1), static_cast<int>(j + 1), pass});
            report.all_pass = report.all_pass && pass;
        }
    }
    return report;
}

}  // namespace cylpack
