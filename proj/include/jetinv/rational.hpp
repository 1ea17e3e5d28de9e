#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace jetinv {

/// Exact arbitrary-precision rational, the only coefficient type used by the
/// symbolic core. GMP keeps values canonical (reduced, positive denominator).
using Rational = mpq_class;

inline Rational rat(long n) { return Rational(n); }

inline Rational rat(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Exact conversion: every binary64 value is a rational.
inline Rational rational_from_double(double x) { return Rational(x); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Renders as "p" or "p/q".
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational pow(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    mpz_class num = base.get_num(), den = base.get_den();
    if (exp < 0) {
        std::swap(num, den);
        exp = -exp;
        if (den < 0) { den = -den; num = -num; }
    }
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(exp));
    return Rational(pn) / Rational(pd);
}

inline mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline mpz_class lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

}  // namespace jetinv
