// Exact real-root isolation for univariate polynomials over the rationals:
// Descartes / Vincent-Collins-Akritas bisection on integer coefficient
// vectors, plus Sturm chains used as an independent counting oracle.

#ifndef BITLAB_REALROOT_HPP
#define BITLAB_REALROOT_HPP

#include <vector>

#include "bitlab/interval.hpp"
#include "bitlab/poly.hpp"

namespace bitlab {

// Isolating intervals for all real roots of a squarefree univariate
// polynomial, pairwise disjoint, each containing exactly one root. A
// degenerate interval [r,r] certifies an exact rational root. Throws on the
// zero polynomial and on non-squarefree input (detected via gcd).
std::vector<QInterval> isolate_real_roots(const Poly& p);

// Same on an ascending rational coefficient vector.
std::vector<QInterval> isolate_real_roots(const std::vector<QQ>& coeffs);

// Shrinks an isolating interval below `width` by sign bisection.
void refine_root(const std::vector<QQ>& coeffs, QInterval& iv, const QQ& width);

// Number of distinct real roots in (a, b] by Sturm's theorem.
long sturm_count(const std::vector<QQ>& coeffs, const QQ& a, const QQ& b);
// Number of distinct real roots on the whole line.
long sturm_count_all(const std::vector<QQ>& coeffs);

// Exact sign of p at a rational point.
int sign_at(const std::vector<QQ>& coeffs, const QQ& x);

// Strict power-of-two bound on the absolute value of all complex roots.
QQ root_bound(const std::vector<QQ>& coeffs);

}  // namespace bitlab

#endif
