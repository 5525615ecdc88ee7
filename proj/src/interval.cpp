#include "cylpack/interval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cylpack {

namespace {

Prec clamp_prec(Prec p) {
    if (p < MPFR_PREC_MIN) return MPFR_PREC_MIN;
    if (p > kMaxPrec) throw std::invalid_argument("precision above ceiling");
    return p;
}

Rational mpfr_to_rational(const mpfr_t x) {
    if (!mpfr_number_p(x)) throw std::range_error("non-finite interval endpoint");
    if (mpfr_zero_p(x)) return Rational(0);
    BigInt mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
    Rational q(mant);
    if (e >= 0) {
        mpz_mul_2exp(q.get_num().get_mpz_t(), q.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    } else {
        q /= Rational(int_pow2(static_cast<unsigned long>(-e)));
    }
    q.canonicalize();
    return q;
}

}  // namespace

Interval::Interval(Raw, Prec prec) : prec_(clamp_prec(prec)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
}

Interval::Interval(long v, Prec prec) : Interval(Raw{}, prec) {
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const Interval& o) : Interval(Raw{}, o.prec_) {
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    lo_[0] = o.lo_[0];
    hi_[0] = o.hi_[0];
    // Leave the source valid for destruction.
    mpfr_init2(o.lo_, MPFR_PREC_MIN);
    mpfr_init2(o.hi_, MPFR_PREC_MIN);
    o.prec_ = MPFR_PREC_MIN;
}

Interval& Interval::operator=(const Interval& o) {
    if (this == &o) return *this;
    if (prec_ != o.prec_) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
    }
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    if (this == &o) return *this;
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

void Interval::set_endpoints_q(const Rational& lo, const Rational& hi) {
    mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_rational(const Rational& q, Prec prec) {
    Interval r(Interval::Raw{}, prec);
    r.set_endpoints_q(q, q);
    return r;
}

Interval Interval::from_endpoints(const Rational& lo, const Rational& hi, Prec prec) {
    if (lo > hi) throw std::invalid_argument("interval endpoints out of order");
    Interval r(Interval::Raw{}, prec);
    r.set_endpoints_q(lo, hi);
    return r;
}

Interval Interval::from_int(const BigInt& z, Prec prec) {
    Interval r(Interval::Raw{}, prec);
    mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_doubles(double lo, double hi, Prec prec) {
    if (!(lo <= hi)) throw std::invalid_argument("interval endpoints out of order");
    Interval r(Interval::Raw{}, prec);
    mpfr_set_d(r.lo_, lo, MPFR_RNDD);
    mpfr_set_d(r.hi_, hi, MPFR_RNDU);
    return r;
}

Rational Interval::lo() const { return mpfr_to_rational(lo_); }
Rational Interval::hi() const { return mpfr_to_rational(hi_); }

bool Interval::contains(const Rational& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

int Interval::sign() const {
    if (mpfr_sgn(hi_) < 0) return -1;
    if (mpfr_sgn(lo_) > 0) return 1;
    return 0;
}

std::string Interval::str(int digits) const {
    char* s = nullptr;
    int n = mpfr_asprintf(&s, "[%.*Rg, %.*Rg]", digits, lo_, digits, hi_);
    if (n < 0) return "[?, ?]";
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(Interval::Raw{}, std::max(a.prec_, b.prec_));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(Interval::Raw{}, std::max(a.prec_, b.prec_));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a) {
    Interval r(Interval::Raw{}, a.prec_);
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    Interval r(Interval::Raw{}, std::max(a.prec_, b.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    const mpfr_srcptr av[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bv[2] = {b.lo_, b.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_mul(t, av[i], bv[j], MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, av[i], bv[j], MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("interval division by enclosure containing zero");
    Interval r(Interval::Raw{}, std::max(a.prec_, b.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    const mpfr_srcptr av[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bv[2] = {b.lo_, b.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_div(t, av[i], bv[j], MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, av[i], bv[j], MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval iv_sqr(const Interval& a) {
    Interval r(Interval::Raw{}, a.prec_);
    if (a.contains_zero()) {
        mpfr_set_zero(r.lo_, 1);
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
        mpfr_sqr(t, a.hi_, MPFR_RNDU);
        if (mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
    } else if (mpfr_sgn(a.lo_) > 0) {
        mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
    } else {
        mpfr_sqr(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
    }
    return r;
}

Interval iv_sqrt(const Interval& a) {
    if (mpfr_sgn(a.hi_) < 0) throw std::domain_error("sqrt of negative interval");
    Interval r(Interval::Raw{}, a.prec_);
    if (mpfr_sgn(a.lo_) <= 0) {
        mpfr_set_zero(r.lo_, 1);
    } else {
        mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    }
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval iv_abs(const Interval& a) {
    Interval r(Interval::Raw{}, a.prec_);
    if (a.contains_zero()) {
        mpfr_set_zero(r.lo_, 1);
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        mpfr_abs(r.hi_, a.lo_, MPFR_RNDU);
        mpfr_abs(t, a.hi_, MPFR_RNDU);
        if (mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
    } else if (mpfr_sgn(a.lo_) > 0) {
        mpfr_set(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_set(r.hi_, a.hi_, MPFR_RNDU);
    } else {
        mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    }
    return r;
}

Interval iv_hull(const Interval& a, const Interval& b) {
    Interval r(Interval::Raw{}, std::max(a.prec_, b.prec_));
    mpfr_set(r.lo_, mpfr_less_p(a.lo_, b.lo_) ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_greater_p(a.hi_, b.hi_) ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

std::optional<Interval> iv_intersect(const Interval& a, const Interval& b) {
    Interval r(Interval::Raw{}, std::max(a.precision(), b.precision()));
    mpfr_set(r.lo_, mpfr_greater_p(a.lo_, b.lo_) ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_less_p(a.hi_, b.hi_) ? a.hi_ : b.hi_, MPFR_RNDU);
    if (mpfr_greater_p(r.lo_, r.hi_)) return std::nullopt;
    return r;
}

Interval iv_pi(Prec prec) {
    prec = clamp_prec(prec);
    static std::map<Prec, Interval> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(prec);
    if (it != cache.end()) return it->second;
    Interval r(Interval::Raw{}, prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    cache.emplace(prec, r);
    return r;
}

namespace {

// Whether m*pi possibly intersects x (conservative).
bool multiple_of_pi_may_hit(long m, const Interval& pi, const Interval& x) {
    Interval mpi = Interval(m, pi.precision()) * pi;
    return !(mpi.hi() < x.lo() || mpi.lo() > x.hi());
}

}  // namespace

Interval iv_cos(const Interval& x) {
    const Prec prec = x.precision();
    const Prec work = clamp_prec(prec + 16);
    Interval full = Interval::from_endpoints(rat(-1), rat(1), prec);
    if (!mpfr_number_p(x.lo_) || !mpfr_number_p(x.hi_)) return full;

    const double lod = mpfr_get_d(x.lo_, MPFR_RNDD);
    const double hid = mpfr_get_d(x.hi_, MPFR_RNDU);
    if (!(std::isfinite(lod) && std::isfinite(hid)) || hid - lod >= 6.283185307179586 ||
        std::fabs(lod) > 1e15 || std::fabs(hid) > 1e15)
        return full;

    Interval pi = iv_pi(work);
    Interval r(Interval::Raw{}, prec);

    // Endpoint values, outward.
    mpfr_t t, rlo, rhi;
    mpfr_init2(t, work);
    mpfr_init2(rlo, work);
    mpfr_init2(rhi, work);
    mpfr_cos(rlo, x.lo_, MPFR_RNDD);
    mpfr_cos(t, x.hi_, MPFR_RNDD);
    if (mpfr_less_p(t, rlo)) mpfr_set(rlo, t, MPFR_RNDD);
    mpfr_cos(rhi, x.lo_, MPFR_RNDU);
    mpfr_cos(t, x.hi_, MPFR_RNDU);
    if (mpfr_greater_p(t, rhi)) mpfr_set(rhi, t, MPFR_RNDU);

    // Critical points: integer multiples of pi inside the range flip the
    // corresponding extremum on. Candidate list from a double estimate,
    // each candidate confirmed with a rigorous (conservative) test.
    const long m_lo = static_cast<long>(std::floor(lod / 3.141592653589793)) - 1;
    const long m_hi = static_cast<long>(std::ceil(hid / 3.141592653589793)) + 1;
    for (long m = m_lo; m <= m_hi; ++m) {
        if (!multiple_of_pi_may_hit(m, pi, x)) continue;
        if ((m % 2 + 2) % 2 == 0)
            mpfr_set_si(rhi, 1, MPFR_RNDU);
        else
            mpfr_set_si(rlo, -1, MPFR_RNDD);
    }

    if (mpfr_cmp_si(rlo, -1) < 0) mpfr_set_si(rlo, -1, MPFR_RNDD);
    if (mpfr_cmp_si(rhi, 1) > 0) mpfr_set_si(rhi, 1, MPFR_RNDU);
    mpfr_set(r.lo_, rlo, MPFR_RNDD);
    mpfr_set(r.hi_, rhi, MPFR_RNDU);
    mpfr_clear(t);
    mpfr_clear(rlo);
    mpfr_clear(rhi);
    return r;
}

Interval iv_sin(const Interval& x) {
    // sin x = cos(pi/2 - x); the pi/2 enclosure adds < 2^(1-prec) width.
    const Prec work = clamp_prec(x.precision() + 16);
    Interval half_pi = iv_pi(work) * Interval::from_rational(rat(1, 2), work);
    Interval shifted = half_pi - iv_round(x, work);
    return iv_round(iv_cos(shifted), x.precision());
}

Interval iv_acos(const Interval& x) {
    auto clamped = iv_intersect(x, Interval::from_endpoints(rat(-1), rat(1), x.precision()));
    if (!clamped) throw std::domain_error("acos of interval outside [-1, 1]");
    Interval r(Interval::Raw{}, x.precision());
    // acos is decreasing.
    mpfr_acos(r.lo_, clamped->hi_, MPFR_RNDD);
    mpfr_acos(r.hi_, clamped->lo_, MPFR_RNDU);
    return r;
}

Interval iv_atan2(const Interval& y, const Interval& x) {
    // atan2 has no interior critical points away from the origin, and on a
    // box avoiding the branch cut (x <= 0, y = 0) every edge is monotone, so
    // the corner hull is the exact range.
    if (!(y.sign() != 0 || x.sign() > 0))
        throw std::domain_error("atan2 box meets the branch cut");
    Interval r(Interval::Raw{}, std::max(x.prec_, y.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    const mpfr_srcptr yv[2] = {y.lo_, y.hi_};
    const mpfr_srcptr xv[2] = {x.lo_, x.hi_};
    bool first = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            mpfr_atan2(t, yv[i], xv[j], MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_atan2(t, yv[i], xv[j], MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval iv_rootn(const Interval& x, unsigned long n) {
    if (mpfr_sgn(x.hi_) < 0) throw std::domain_error("rootn of negative interval");
    Interval r(Interval::Raw{}, x.prec_);
    if (mpfr_sgn(x.lo_) <= 0)
        mpfr_set_zero(r.lo_, 1);
    else
        mpfr_rootn_ui(r.lo_, x.lo_, n, MPFR_RNDD);
    mpfr_rootn_ui(r.hi_, x.hi_, n, MPFR_RNDU);
    return r;
}

Interval iv_rat_pow(const Rational& q, long p_num, unsigned long p_den, Prec prec) {
    if (sgn(q) <= 0) throw std::domain_error("rational power of non-positive base");
    if (p_den == 0) throw std::invalid_argument("zero power denominator");
    const bool neg = p_num < 0;
    const unsigned long e = static_cast<unsigned long>(neg ? -p_num : p_num);
    Rational base_pow = rat_pow(q, e);
    Interval r = iv_rootn(Interval::from_rational(base_pow, prec), p_den);
    if (neg) r = Interval(1, prec) / r;
    return r;
}

Interval iv_round(const Interval& x, Prec prec) {
    Interval r(Interval::Raw{}, clamp_prec(prec));
    mpfr_set(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Tri iv_ge(const Interval& a, const Rational& thr) {
    if (a.lo() >= thr) return Tri::kTrue;
    if (a.hi() < thr) return Tri::kFalse;
    return Tri::kUnknown;
}

Tri iv_gt(const Interval& a, const Rational& thr) {
    if (a.lo() > thr) return Tri::kTrue;
    if (a.hi() <= thr) return Tri::kFalse;
    return Tri::kUnknown;
}

Tri iv_ge(const Interval& a, const Interval& b) {
    if (a.lo() >= b.hi()) return Tri::kTrue;
    if (a.hi() < b.lo()) return Tri::kFalse;
    return Tri::kUnknown;
}

RefineResult refine_until(const std::function<Interval(Prec)>& evaluate,
                          const Rational& target_width, Prec start_prec, Prec max_prec) {
    RefineResult out;
    Prec p = std::max<Prec>(start_prec, MPFR_PREC_MIN);
    while (true) {
        out.value = evaluate(p);
        out.precision_used = p;
        if (out.value.width() <= target_width) {
            out.converged = true;
            return out;
        }
        if (p >= max_prec) {
            out.converged = false;
            return out;
        }
        p = std::min<Prec>(p * 2, max_prec);
    }
}

BigInt certified_floor(const std::function<Interval(Prec)>& evaluate, Prec start_prec,
                       Prec max_prec) {
    Prec p = start_prec;
    while (true) {
        Interval v = evaluate(p);
        BigInt flo = rat_floor(v.lo());
        BigInt fhi = rat_floor(v.hi());
        if (flo == fhi) return flo;
        if (p >= max_prec)
            throw std::runtime_error("certified_floor: precision exhausted (value too close to an integer)");
        p *= 2;
    }
}

}  // namespace cylpack
