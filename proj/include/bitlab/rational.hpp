// Exact arithmetic base types. Thin layer over GMP's C++ classes plus the
// handful of helpers the rest of the library needs (dyadic rounding, string
// round-trips, hashing of canonical forms).

#ifndef BITLAB_RATIONAL_HPP
#define BITLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bitlab {

using ZZ = mpz_class;
using QQ = mpq_class;

inline QQ qq_of(long num, long den = 1) {
    QQ q(num, den);
    q.canonicalize();
    return q;
}

// Parses "num", "num/den" or "-num/den". Throws on malformed input.
QQ qq_parse(const std::string& s);

// Canonical "num/den" with den > 0 and gcd(num,den) = 1.
std::string qq_str(const QQ& q);

inline double qq_double(const QQ& q) { return q.get_d(); }

inline int qq_sign(const QQ& q) { return sgn(q); }

// 2^e as an exact rational (e may be negative).
QQ qq_pow2(long e);

// q^e for e >= 0.
QQ qq_pow(const QQ& q, unsigned long e);

// Nearest dyadic a/2^bits enclosure [lo,hi] of q with lo <= q <= hi.
void qq_dyadic_enclosure(const QQ& q, unsigned bits, QQ& lo, QQ& hi);

// Rational from double, exact (doubles are dyadic).
QQ qq_from_double(double x);

// log2 of |q| rounded up, 0 for q == 0.
long qq_ceil_log2_abs(const QQ& q);

}  // namespace bitlab

#endif
