#pragma once

#include <gmpxx.h>

#include <string>

#include "partq/errors.hpp"

namespace partq {

using BigInt = mpz_class;

/// Arbitrary-precision rational. GMP's canonical form (gcd-reduced,
/// positive denominator) is maintained by all arithmetic operators;
/// only raw constructions need an explicit canonicalize, which
/// make_rational takes care of.
using BigRational = mpq_class;

/// Number of bits in |z| (0 for z == 0).
inline long bit_length(const BigInt& z) {
    if (z == 0) return 0;
    return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

/// Build a canonical rational num/den. Throws DomainError if den == 0.
inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DomainError("make_rational: zero denominator");
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

/// 2^-bits as an exact rational.
inline BigRational dyadic_ulp(long bits) {
    if (bits < 0) throw DomainError("dyadic_ulp: negative bit count");
    BigInt den = 1;
    den <<= static_cast<unsigned long>(bits);
    return make_rational(1, den);
}

/// Mediant (a/b, c/d) -> (a+c)/(b+d). Requires l < r.
inline BigRational mediant(const BigRational& l, const BigRational& r) {
    if (!(l < r)) throw DomainError("mediant: arguments not ordered");
    return make_rational(l.get_num() + r.get_num(), l.get_den() + r.get_den());
}

/// floor(x) as an integer.
inline BigInt floor_rational(const BigRational& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline std::string to_string(const BigRational& x) { return x.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

} // namespace partq
