// Sparse multivariate polynomials over exact rationals, and their
// double-precision shadow used by the numerical path tracker.
//
// Poly is the universal carrier of the library: curve equations, k-sections,
// bitangency systems and restrictions to lines all live here. Coefficients
// are exact so that "is this coefficient zero" is always decidable.

#ifndef BITLAB_POLY_HPP
#define BITLAB_POLY_HPP

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bitlab/rational.hpp"

namespace bitlab {

using Expo = std::vector<uint32_t>;

class Poly;
struct PolyDivRem;

class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    // Constant polynomial in the given variables.
    static Poly constant(std::vector<std::string> vars, const QQ& c);
    // The monomial c * prod vars[i]^e[i].
    static Poly monomial(std::vector<std::string> vars, const QQ& c, Expo e);
    // x_i as a polynomial.
    static Poly var(std::vector<std::string> vars, size_t index);

    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    const std::map<Expo, QQ>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    // Max total degree, or nullopt for the zero polynomial ("minus infinity").
    std::optional<long> degree() const;
    long degree_in(size_t var) const;  // -1 for zero polynomial

    size_t var_index(const std::string& name) const;  // throws if unknown

    const QQ& coeff(const Expo& e) const;  // 0 if absent
    void set_coeff(const Expo& e, const QQ& c);

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    bool operator==(const Poly& o) const;

    Poly scaled(const QQ& c) const;
    Poly pow(unsigned e) const;

    QQ evaluate(const std::vector<QQ>& point) const;
    std::complex<double> evaluate(const std::vector<std::complex<double>>& point) const;

    // Formal partial derivative.
    Poly partial(size_t var) const;
    Poly partial(const std::string& var) const;

    // Substitute each variable by the given polynomial (all in the codomain
    // ring of `images`, which must share one variable list).
    Poly substitute(const std::vector<Poly>& images) const;

    // Coefficients of the polynomial viewed as univariate in `var`; entry i
    // is a Poly in the same variable list with var-degree 0.
    std::vector<Poly> coeffs_in(size_t var) const;
    // Rebuild from coefficients in `var`.
    static Poly from_coeffs_in(const std::vector<std::string>& vars, size_t var,
                               const std::vector<Poly>& cs);

    // Division with remainder by a divisor whose leading coefficient in `var`
    // is a nonzero rational constant: p = q*d + r with deg_var(r) < deg_var(d).
    PolyDivRem divrem(const Poly& d, size_t var) const;

    // Exact division: throws if `d` does not divide.
    Poly divexact(const Poly& d) const;

    // Content (gcd of coefficient numerators / lcm of denominators signs
    // folded so that the result has coprime integer coefficients and positive
    // leading coefficient in lex order).
    Poly primitive_part() const;
    QQ max_abs_coeff() const;

    // Map to a polynomial over a different variable list; names must match
    // positionally via `positions[i]` = index of vars()[i] in `newvars`.
    Poly renamed(std::vector<std::string> newvars, const std::vector<size_t>& positions) const;

    std::string str() const;  // human-readable "c * x^i y^j" sum

  private:
    void prune();
    std::vector<std::string> vars_;
    std::map<Expo, QQ> terms_;
};

struct PolyDivRem {
    Poly quot, rem;
};

// Convex hull of exponent vectors of a bivariate polynomial, counterclockwise
// vertex list starting from the lexicographically smallest vertex.
std::vector<std::pair<long, long>> newton_polygon(const Poly& p);

// Sylvester resultant in `var`; the other variables survive. Both inputs must
// have positive degree in `var`. Fraction-free Bareiss elimination over the
// polynomial ring.
Poly resultant(const Poly& p, const Poly& q, size_t var);
Poly resultant(const Poly& p, const Poly& q, const std::string& var);

// Remainder coefficients of g upon division by (x^2 - e1*x + e2)^2 in `xvar`:
// four polynomials (degrees 0..3 in x) over the remaining variables together
// with e1, e2. `g` must have x-degree >= 4. Variables named `e1name`/`e2name`
// are appended to the ring if not already present.
struct QuadRemainder {
    Poly quotient;          // q with g = q*(x^2-e1*x+e2)^2 + r
    std::vector<Poly> rem;  // r coefficients, index = degree in x, size 4
};
QuadRemainder rem_by_quadratic_square(const Poly& g, const std::string& xvar,
                                      const std::string& e1name = "e1",
                                      const std::string& e2name = "e2");

// Univariate helpers (polynomials in one declared variable).
Poly uni_gcd(const Poly& a, const Poly& b);        // monic gcd
Poly squarefree_part(const Poly& p);               // p / gcd(p, p')
std::vector<QQ> uni_coeff_vector(const Poly& p);   // ascending degree

// double-precision shadow of a Poly; conversion rounds each coefficient.
struct FloatTerm {
    std::vector<uint32_t> e;
    double c;
};
class FloatPoly {
  public:
    FloatPoly() = default;
    explicit FloatPoly(const Poly& p);
    const std::vector<FloatTerm>& terms() const { return terms_; }
    size_t nvars() const { return nvars_; }
    long total_degree() const;
    std::complex<double> eval(const std::complex<double>* x) const;
    double eval(const double* x) const;
    // Sum of |c| * prod |x_i|^e_i, for relative-residual scaling.
    double eval_abs(const std::complex<double>* x) const;

  private:
    size_t nvars_ = 0;
    std::vector<FloatTerm> terms_;
};

}  // namespace bitlab

#endif
