#pragma once

// Exact rational scalars (GMP). Everything certified in this library
// bottoms out in either a Rational or an outward-rounded Interval.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace cylpack {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "num/den" or a bare integer "num".
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
        throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

// Canonical serialization, always "num/den".
inline std::string rat_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline int sgn(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline BigInt rat_floor(const Rational& q) {
    BigInt z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return z;
}

inline BigInt rat_ceil(const Rational& q) {
    BigInt z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return z;
}

inline Rational rat_pow(const Rational& q, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), e);
    // num/den coprime implies num^e/den^e coprime
    return r;
}

inline BigInt int_pow2(unsigned long e) {
    BigInt z = 1;
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), e);
    return z;
}

// 2^e for integer e (possibly negative).
inline Rational rat_pow2(long e) {
    if (e >= 0) return Rational(int_pow2(static_cast<unsigned long>(e)));
    return rat(BigInt(1), int_pow2(static_cast<unsigned long>(-e)));
}

}  // namespace cylpack
