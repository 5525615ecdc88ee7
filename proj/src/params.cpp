#include "cylpack/params.hpp"

#include <stdexcept>

namespace cylpack {

namespace {

// L-grid conditions; everything is rational in L^2 with K^2 = L^2 - 1.
bool l_grid_admissible(const Rational& eps, const Rational& l_sq) {
    const Rational k_sq = l_sq - 1;
    if (k_sq <= 0) return false;
    // (1): K^2 > (1 + eps/4)/(1 + eps/2) L^2
    if (!((1 + eps / 2) * k_sq > (1 + eps / 4) * l_sq)) return false;
    // (2), h-free reduction: the (2+h)^2/(2(1+h)) factor cancels on both
    // sides, leaving (1 + 2 eps + eps^2/2) K^2 >= (1 + 2 eps) L^2.
    if (!((1 + 2 * eps + eps * eps / 2) * k_sq >= (1 + 2 * eps) * l_sq)) return false;
    // (3): K^2 >= 0.99 L^2
    if (!(k_sq >= rat(99, 100) * l_sq)) return false;
    return true;
}

// Exact check of d >= 4K/(eps L): the quadratic of condition (ii) is
// increasing from its vertex on, so holding at r0 with r0 past the vertex
// gives the condition for every d >= r0.
bool past_height_mix_vertex(const Rational& d, const Rational& eps, const Rational& l_sq,
                            const Rational& k_sq) {
    return eps * eps * l_sq * d * d >= 16 * k_sq;
}

// Condition (ii) at a point: L^2 + 2KLd < (eps/4) L^2 d^2, decided exactly by
// squaring the single K L d term.
bool height_mix_holds_at(const Rational& d, const Rational& eps, const Rational& l_sq,
                         const Rational& k_sq) {
    const Rational rhs_minus = eps / 4 * l_sq * d * d - l_sq;
    if (rhs_minus <= 0) return false;
    return rhs_minus * rhs_minus > 4 * k_sq * l_sq * d * d;
}

}  // namespace

RingConditionThresholds ring_condition_thresholds(const Rational& eps, const Rational& l,
                                                  const Rational& k_sq, const Rational& delta) {
    RingConditionThresholds t;
    // (i) with the 0.5-eps variant the chain actually uses, via the
    // all-x bound 1 - cos x >= x^2/2 - x^4/24:
    //   d^2 >= (1+eps)^4 / (12 [(1+eps)^2 - (1 + eps/2)]).
    const Rational one_eps = 1 + eps;
    t.cos_gap_d_sq = rat_pow(one_eps, 4) / (12 * (one_eps * one_eps - (1 + eps / 2)));
    // (ii): found by scanning the power-of-two candidates below; record the
    // vertex bound (squared) here.
    t.height_mix_d_sq = 16 * k_sq / (eps * eps * l * l);
    // (iii): minimized over h at h -> 0: 4 eps - 2/d^2 >= 3.999 eps.
    t.slack_d_sq = Rational(2000) / eps;
    // (iv): delta^2 (delta^2 d^2 - 1) >= 250.
    t.gap_quartic_d_sq = (250 + delta * delta) / rat_pow(delta, 4);
    return t;
}

RingParams select_ring_params(const Rational& epsilon) {
    if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must be in (0, 1]");

    // Least L on the half-integer grid satisfying (1)-(3).
    constexpr long kGridCeiling = 4'000'000;  // grid steps of 1/2
    Rational l;
    bool found = false;
    for (long g = 3; g <= kGridCeiling; ++g) {
        Rational cand = rat(g, 2);
        if (l_grid_admissible(epsilon, cand * cand)) {
            l = cand;
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("no parameters found below the L search ceiling");
    const Rational k_sq = l * l - 1;

    // delta: for eps < 1/4 a rational under-round of the smaller root of
    // 4h^2 - 2h + eps = 0; any smaller delta keeps both proof cases valid.
    // For eps >= 1/4 the constraint holds for every h and delta = 1.
    Rational delta(1);
    if (epsilon < rat(1, 4)) {
        Interval s = iv_sqrt(Interval::from_rational(1 - 4 * epsilon, 128));
        delta = (1 - s.hi()) / 4;
        if (delta <= 0) throw std::logic_error("delta under-round collapsed");
        // Sanity: on [0, 1/4] the quadratic 4h^2 - 2h + eps decreases, so
        // nonnegativity at delta <= 1/4 certifies delta is at or below the
        // smaller root, i.e. 4h^2 - 2h >= -eps holds on all of [0, delta].
        if (!(delta <= rat(1, 4) && 4 * delta * delta - 2 * delta + epsilon >= 0))
            throw std::logic_error("delta outside the admissible root interval");
    }

    const RingConditionThresholds thr = ring_condition_thresholds(epsilon, l, k_sq, delta);

    // Least power of two at which every condition holds for all d >= r0.
    BigInt r0 = 1;
    for (int e = 0; e <= 60; ++e, r0 *= 2) {
        const Rational d(r0);
        const Rational d_sq = d * d;
        if (!(d_sq > thr.cos_gap_d_sq)) continue;           // (i), strict
        if (!(d_sq >= thr.slack_d_sq)) continue;            // (iii)
        if (!(d_sq >= thr.gap_quartic_d_sq)) continue;      // (iv)
        if (!past_height_mix_vertex(d, epsilon, l * l, k_sq)) continue;
        if (!height_mix_holds_at(d, epsilon, l * l, k_sq)) continue;  // (ii)
        return RingParams{epsilon, l, k_sq, r0, delta};
    }
    throw std::runtime_error("no parameters found below the r0 search ceiling");
}

std::vector<long> ShellParams::a_sequence() const {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (a_base < 1 || a_growth < 2) throw std::invalid_argument("bad a-sequence parameters");
    std::vector<long> a;
    a.reserve(k_max);
    long v = a_base;
    for (int k = 0; k < k_max; ++k) {
        a.push_back(v);
        if (v > (1L << 40) / a_growth) throw std::range_error("a_k exceeds the size guard");
        v *= a_growth;
    }
    return a;
}

std::vector<BigInt> ShellParams::t_sequence() const {
    auto a = a_sequence();
    std::vector<BigInt> t;
    t.reserve(a.size());
    BigInt cur = 1;
    long bits = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        if (k > 0) {
            long add = t_exponent * a[k];
            bits += add;
            if (bits > max_t_bits)
                throw std::range_error("T_k needs " + std::to_string(bits) +
                                       " bits, above the configured guard of " +
                                       std::to_string(max_t_bits));
            BigInt factor;
            mpz_ui_pow_ui(factor.get_mpz_t(), 2, static_cast<unsigned long>(add));
            cur *= factor;
        }
        t.push_back(cur);
    }
    return t;
}

Rational ShellParams::shell_lo(int k) const {
    auto a = a_sequence();
    if (k < 1 || k > k_max) throw std::out_of_range("shell index");
    return Rational(int_pow2(static_cast<unsigned long>(a[k - 1])));
}

Rational ShellParams::shell_hi(int k) const {
    auto a = a_sequence();
    if (k < 1 || k > k_max) throw std::out_of_range("shell index");
    return Rational(int_pow2(static_cast<unsigned long>(2 * a[k - 1])));
}

bool ShellParams::shells_disjoint() const {
    auto a = a_sequence();
    for (size_t k = 1; k < a.size(); ++k)
        if (a[k] < 2 * a[k - 1]) return false;
    return true;
}

std::vector<std::pair<long, BigInt>> shell_sequences(const ShellParams& p) {
    auto a = p.a_sequence();
    auto t = p.t_sequence();
    std::vector<std::pair<long, BigInt>> out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], t[i]);
    return out;
}

}  // namespace cylpack
