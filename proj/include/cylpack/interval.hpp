#pragma once

// Outward-rounded interval arithmetic on MPFR endpoints. Every operation
// returns an enclosure of the exact real result; precision is a per-value
// property and binary operations work at the max precision of the operands.

#include <mpfr.h>

#include <functional>
#include <optional>
#include <string>

#include "cylpack/rational.hpp"

namespace cylpack {

using Prec = mpfr_prec_t;

inline constexpr Prec kDefaultPrec = 64;
inline constexpr Prec kMaxPrec = 1 << 20;

// Three-valued outcome of an interval predicate.
enum class Tri { kTrue, kFalse, kUnknown };

inline const char* tri_name(Tri t) {
    switch (t) {
        case Tri::kTrue: return "certified-true";
        case Tri::kFalse: return "certified-false";
        default: return "unknown";
    }
}

class Interval {
  public:
    Interval() : Interval(0L, kDefaultPrec) {}
    explicit Interval(long v, Prec prec = kDefaultPrec);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval from_rational(const Rational& q, Prec prec = kDefaultPrec);
    static Interval from_endpoints(const Rational& lo, const Rational& hi, Prec prec);
    static Interval from_int(const BigInt& z, Prec prec = kDefaultPrec);
    // Raw hull of two already-rounded doubles; used only by fast screens.
    static Interval from_doubles(double lo, double hi, Prec prec = kDefaultPrec);

    Prec precision() const { return prec_; }

    // Exact dyadic endpoints.
    Rational lo() const;
    Rational hi() const;
    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const { return 0.5 * (lo_d() + hi_d()); }

    Rational width() const { return hi() - lo(); }
    bool is_point() const { return mpfr_equal_p(lo_, hi_); }
    bool contains(const Rational& q) const;
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    // -1 if hi < 0, +1 if lo > 0, 0 otherwise (zero in or on the interval).
    int sign() const;

    std::string str(int digits = 17) const;

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a);

    friend Interval iv_sqr(const Interval& a);
    friend Interval iv_sqrt(const Interval& a);
    friend Interval iv_abs(const Interval& a);
    friend Interval iv_hull(const Interval& a, const Interval& b);
    friend std::optional<Interval> iv_intersect(const Interval& a, const Interval& b);
    friend Interval iv_pi(Prec prec);
    friend Interval iv_cos(const Interval& x);
    friend Interval iv_sin(const Interval& x);
    friend Interval iv_acos(const Interval& x);
    friend Interval iv_atan2(const Interval& y, const Interval& x);
    friend Interval iv_rootn(const Interval& x, unsigned long n);
    friend Interval iv_round(const Interval& x, Prec prec);

  private:
    struct Raw {};
    Interval(Raw, Prec prec);
    void set_endpoints_q(const Rational& lo, const Rational& hi);

    mpfr_t lo_;
    mpfr_t hi_;
    Prec prec_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

inline Interval operator+(const Interval& a, const Rational& q) { return a + Interval::from_rational(q, a.precision()); }
inline Interval operator+(const Rational& q, const Interval& a) { return Interval::from_rational(q, a.precision()) + a; }
inline Interval operator-(const Interval& a, const Rational& q) { return a - Interval::from_rational(q, a.precision()); }
inline Interval operator-(const Rational& q, const Interval& a) { return Interval::from_rational(q, a.precision()) - a; }
inline Interval operator*(const Interval& a, const Rational& q) { return a * Interval::from_rational(q, a.precision()); }
inline Interval operator*(const Rational& q, const Interval& a) { return Interval::from_rational(q, a.precision()) * a; }
inline Interval operator/(const Interval& a, const Rational& q) { return a / Interval::from_rational(q, a.precision()); }
inline Interval operator/(const Rational& q, const Interval& a) { return Interval::from_rational(q, a.precision()) / a; }

Interval iv_sqr(const Interval& a);
Interval iv_sqrt(const Interval& a);  // domain error if a.hi < 0; lo clamped to 0
Interval iv_abs(const Interval& a);
Interval iv_hull(const Interval& a, const Interval& b);
std::optional<Interval> iv_intersect(const Interval& a, const Interval& b);

// Certified enclosure of pi at the given precision (cached per precision).
Interval iv_pi(Prec prec);

Interval iv_cos(const Interval& x);
Interval iv_sin(const Interval& x);
Interval iv_acos(const Interval& x);
// Corner hull; sound away from the branch cut (requires y strictly signed or
// x strictly positive), throws otherwise.
Interval iv_atan2(const Interval& y, const Interval& x);
Interval iv_rootn(const Interval& x, unsigned long n);

// Enclosure of q^(p_num/p_den) for q > 0, p_den > 0.
Interval iv_rat_pow(const Rational& q, long p_num, unsigned long p_den, Prec prec);

// Re-round an interval outward to a (usually lower) precision.
Interval iv_round(const Interval& x, Prec prec);

// a >= thr / a > thr decided from the enclosure alone.
Tri iv_ge(const Interval& a, const Rational& thr);
Tri iv_gt(const Interval& a, const Rational& thr);
// a >= b as intervals (certified when the enclosures separate).
Tri iv_ge(const Interval& a, const Interval& b);

// ---------------------------------------------------------------------------
// Monotone refinement driver: re-evaluates an enclosure at doubling precision
// until its width is <= target_width or max_prec is reached. "Precision
// exhausted" is reported distinctly from success via `converged`.
struct RefineResult {
    Interval value;
    Prec precision_used = 0;
    bool converged = false;
};

RefineResult refine_until(const std::function<Interval(Prec)>& evaluate,
                          const Rational& target_width,
                          Prec start_prec = kDefaultPrec,
                          Prec max_prec = 4096);

// Exact floor of the real number enclosed by `evaluate` (refines until the
// enclosure pins a single integer). Throws if max precision cannot decide.
BigInt certified_floor(const std::function<Interval(Prec)>& evaluate,
                       Prec start_prec = kDefaultPrec, Prec max_prec = 65536);

}  // namespace cylpack
