#include "support/oracles.hpp"

#include <stdexcept>

namespace cylpack::oracles {

RationalBounds taylor_cos(const Rational& x, long bits) {
    if (rat_abs(x) >= 8) throw std::invalid_argument("taylor_cos domain |x| < 8");
    const Rational x2 = x * x;
    const Rational tol = rat_pow2(-bits);
    Rational sum(1);
    Rational term(1);
    long n = 0;
    while (true) {
        // term_{n+1} = term_n * x^2 / ((2n+1)(2n+2))
        term = term * x2 / ((2 * n + 1) * (2 * n + 2));
        ++n;
        // Once the terms decrease, the alternating remainder is bounded by
        // the first omitted term.
        if (term < tol && x2 < (2 * n + 1) * (2 * n + 2)) break;
        sum += (n % 2 ? -term : term);
        if (n > 200) throw std::logic_error("taylor_cos failed to converge");
    }
    return {sum - term, sum + term};
}

RationalBounds taylor_sin(const Rational& x, long bits) {
    if (rat_abs(x) >= 8) throw std::invalid_argument("taylor_sin domain |x| < 8");
    const Rational x2 = x * x;
    const Rational tol = rat_pow2(-bits);
    Rational sum = x;
    Rational term = x;
    long n = 0;
    while (true) {
        term = term * x2 / ((2 * n + 2) * (2 * n + 3));
        ++n;
        if (rat_abs(term) < tol && x2 < (2 * n + 2) * (2 * n + 3)) break;
        sum += (n % 2 ? -term : term);
        if (n > 200) throw std::logic_error("taylor_sin failed to converge");
    }
    Rational rem = rat_abs(term);
    return {sum - rem, sum + rem};
}

namespace {

// atan(1/m) with the alternating-series remainder bound.
RationalBounds atan_inv(long m, long bits) {
    const Rational tol = rat_pow2(-bits);
    const Rational m2(m * m);
    Rational term = rat(1, m);
    Rational sum = term;
    long n = 0;
    while (true) {
        term = term / m2 * (2 * n + 1) / (2 * n + 3);
        ++n;
        if (term < tol) break;
        sum += (n % 2 ? -term : term);
        if (n > 4000) throw std::logic_error("atan series failed to converge");
    }
    return {sum - term, sum + term};
}

}  // namespace

RationalBounds machin_pi(long bits) {
    RationalBounds a5 = atan_inv(5, bits + 8);
    RationalBounds a239 = atan_inv(239, bits + 8);
    return {16 * a5.lo - 4 * a239.hi, 16 * a5.hi - 4 * a239.lo};
}

RationalBounds integer_sqrt(const Rational& q, long bits) {
    if (sgn(q) < 0) throw std::invalid_argument("sqrt of a negative rational");
    // sqrt(num/den) = sqrt(num*den)/den, scaled by 2^bits:
    // isqrt(num*den*4^bits) pins the root to one integer step.
    BigInt scaled = q.get_num() * q.get_den();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(2 * bits));
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    BigInt denom = q.get_den() * int_pow2(static_cast<unsigned long>(bits));
    return {rat(root, denom), rat(root + 1, denom)};
}

}  // namespace cylpack::oracles
