#include "cylpack/construction.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cylpack {

BigInt ring_count_for_scale(long k_scale, const Rational& epsilon) {
    if (k_scale < 0) throw std::invalid_argument("negative ring scale");
    Rational factor = rat_pow2(k_scale + 1) / (1 + epsilon);  // 2^(k+1)/(1+eps)
    return certified_floor(
        [&](Prec p) { return iv_pi(p) * Interval::from_rational(factor, p); });
}

long ring_scale(const BigInt& n) {
    if (n < 1) throw std::invalid_argument("ring index must be >= 1");
    return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
}

BigInt ring_count(const BigInt& n, const Rational& epsilon) {
    return ring_count_for_scale(ring_scale(n), epsilon);
}

std::vector<PolarAnchor> ring_points(const BigInt& n, const Rational& epsilon) {
    const long k = ring_scale(n);
    const BigInt count = ring_count_for_scale(k, epsilon);
    if (!count.fits_slong_p() || count.get_si() > (1L << 28))
        throw std::range_error("ring too large to materialize");
    std::vector<PolarAnchor> out;
    out.reserve(static_cast<size_t>(count.get_si()));
    for (long j = 1; j <= count.get_si(); ++j)
        out.push_back(PolarAnchor{Rational(n), AngleSpec{BigInt(j), k, epsilon}});
    return out;
}

Packing build_ring_packing(const RingParams& params, const BigInt& n_lo, const BigInt& n_hi) {
    if (n_lo < params.r0) throw std::invalid_argument("n_lo below r0");
    if (n_hi < n_lo) throw std::invalid_argument("empty ring range");
    Packing p;
    p.kind = ConstructionKind::kRing;
    p.height_ksq = params.k_sq;
    {
        std::ostringstream prov;
        prov << "ring eps=" << rat_string(params.epsilon) << " L=" << rat_string(params.l)
             << " n=" << n_lo.get_str() << ".." << n_hi.get_str();
        p.provenance = prov.str();
    }
    for (BigInt n = n_lo; n <= n_hi; n += 1) {
        for (auto& anchor : ring_points(n, params.epsilon)) {
            CylinderSpec c;
            c.axis.anchor = std::move(anchor);
            c.axis.height = AxisHeight{params.l, Rational(n)};  // K n + L
            c.radius = rat(1, 2);
            p.cylinders.push_back(std::move(c));
        }
    }
    p.validate();
    return p;
}

CircleSet ring_dual_circle_classes(const Rational& epsilon, const BigInt& n_lo, const BigInt& n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("bad ring range");
    std::map<long, BigInt> count_by_scale;
    CircleSet out;
    for (BigInt n = n_lo; n <= n_hi; n += 1) {
        long k = ring_scale(n);
        auto it = count_by_scale.find(k);
        if (it == count_by_scale.end())
            it = count_by_scale.emplace(k, ring_count_for_scale(k, epsilon)).first;
        if (!it->second.fits_ulong_p()) throw std::range_error("ring count overflow");
        out.push_back({Rational(n) * Rational(n), it->second.get_ui()});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Exact filter predicate: |cos angle(x1, x2)| >= |x2|^(-alpha), alpha = p/q,
// i.e. (dot^2)^q * n2^p >= (n1 n2)^q with n_i = |x_i|^2.
bool angle_condition_exact(const Rational& dot, const Rational& n1, const Rational& n2,
                           unsigned long p, unsigned long q) {
    return rat_pow(dot * dot, q) * rat_pow(n2, p) >= rat_pow(n1 * n2, q);
}

struct KeptPoint {
    LatticePoint point;
    double a_d, b_d;  // for the float screen (basis coordinates)
    Rational n;       // norm squared
    double n_d;
};

}  // namespace

ShellFilterResult shell_filter(const Lattice2& lattice, const ShellParams& params) {
    if (lattice.min_norm_sq() < 1)
        throw std::invalid_argument("lattice minimum distance below 1");
    if (!params.shells_disjoint()) throw std::invalid_argument("shells not disjoint");
    const unsigned long q = static_cast<unsigned long>(params.angle_exponent.get_den().get_si());
    const unsigned long pe = static_cast<unsigned long>(params.angle_exponent.get_num().get_si());
    if (params.angle_exponent <= 0 || !params.angle_exponent.get_num().fits_slong_p())
        throw std::invalid_argument("bad angle exponent");
    const double alpha_d = params.angle_exponent.get_d();

    // Gram entries for the float screen.
    const double g00 = lattice.g00().get_d();
    const double g01 = lattice.g01().get_d();
    const double g11 = lattice.g11().get_d();

    ShellFilterResult out;
    std::vector<KeptPoint> kept_all;
    for (int k = 1; k <= params.k_max; ++k) {
        Rational lo = params.shell_lo(k), hi = params.shell_hi(k);
        auto candidates = lattice.enumerate_in_annulus(lo, hi);
        ShellAudit audit{k, candidates.size(), 0, 0};
        std::vector<LatticePoint> kept_here;
        for (const auto& cand : candidates) {
            const Rational n2 = lattice.norm_sq(cand);
            const double n2_d = n2.get_d();
            const double thr_d = std::pow(n2_d, -alpha_d);  // threshold on cos^2... see below
            const double ca = static_cast<double>(cand.a), cb = static_cast<double>(cand.b);
            bool keep = true;
            for (const auto& prev : kept_all) {
                // cos^2 = dot^2/(n1 n2) vs n2^(-alpha); screen in doubles with
                // a wide margin, decide exactly near the margin.
                const double dot_d = g00 * prev.a_d * ca + g01 * (prev.a_d * cb + prev.b_d * ca) +
                                     g11 * prev.b_d * cb;
                const double c2_d = dot_d * dot_d / (prev.n_d * n2_d);
                if (c2_d > thr_d * (1 + 1e-9)) continue;  // clearly kept vs prev
                if (c2_d < thr_d * (1 - 1e-9)) {
                    keep = false;
                    break;
                }
                Rational dot = lattice.dot(prev.point, cand);
                if (!angle_condition_exact(dot, prev.n, n2, pe, q)) {
                    keep = false;
                    break;
                }
            }
            if (keep) {
                kept_here.push_back(cand);
                ++audit.kept;
            } else {
                ++audit.removed;
            }
        }
        // New shell's points only constrain later shells.
        for (const auto& pt : kept_here)
            kept_all.push_back({pt, static_cast<double>(pt.a), static_cast<double>(pt.b),
                                lattice.norm_sq(pt), lattice.norm_sq(pt).get_d()});
        out.kept.push_back(std::move(kept_here));
        out.audit.push_back(audit);
    }
    return out;
}

Packing build_shell_packing(const Lattice2& lattice, const ShellParams& params,
                            const ShellBuildOptions& options) {
    auto filtered = shell_filter(lattice, params);
    auto heights = params.t_sequence();

    auto bracket_eps = [&](int shell) -> Rational {
        Rational eps(0);
        for (const auto& b : options.schedule)
            if (shell >= b.from_shell) eps = b.eps;
        return eps;
    };

    Packing p;
    p.kind = ConstructionKind::kShell;
    p.lattice = lattice;
    p.shell_alpha = params.angle_exponent;
    p.shell_audit = filtered.audit;
    {
        std::ostringstream prov;
        prov << "shell a0=" << params.a_base << " growth=" << params.a_growth
             << " texp=" << params.t_exponent << " kmax=" << params.k_max
             << " alpha=" << rat_string(params.angle_exponent) << " lattice=["
             << lattice.describe() << "]"
             << (options.rule == ShellRadiusRule::kShrinkRadius
                     ? " radius=(1-eps)/2 eps=" + rat_string(options.epsilon)
                     : " radius=1/2 rescaled");
        p.provenance = prov.str();
    }

    for (int k = 1; k <= params.k_max; ++k) {
        const BigInt& t = heights[k - 1];
        for (const auto& pt : filtered.kept[k - 1]) {
            CylinderSpec c;
            if (options.rule == ShellRadiusRule::kShrinkRadius) {
                c.axis.anchor = LatticeAnchor{pt, Rational(1)};
                c.axis.height = AxisHeight{Rational(t), Rational(0)};
                c.radius = (1 - options.epsilon) / 2;
            } else {
                Rational eps = bracket_eps(k);
                if (!(eps < 1)) throw std::invalid_argument("bracket epsilon must be < 1");
                Rational scale = 1 / (1 - eps);
                // Line through scale*x with unchanged direction (y, -x, T)
                // has canonical height scale*T at the scaled anchor.
                c.axis.anchor = LatticeAnchor{pt, scale};
                c.axis.height = AxisHeight{scale * Rational(t), Rational(0)};
                c.radius = rat(1, 2);
            }
            p.cylinders.push_back(std::move(c));
            p.shell_of.push_back(k);
        }
    }
    p.validate();
    return p;
}

}  // namespace cylpack
