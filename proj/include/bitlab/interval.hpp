// Interval arithmetic with exact rational endpoints, used for certified sign
// exclusion during curve subdivision. Coefficients of a polynomial may be
// pre-enclosed in dyadic intervals of bounded height so that deep
// subdivisions stay cheap while remaining sound.

#ifndef BITLAB_INTERVAL_HPP
#define BITLAB_INTERVAL_HPP

#include <cmath>
#include <vector>

#include "bitlab/poly.hpp"

namespace bitlab {

struct QInterval {
    QQ lo, hi;

    QInterval() : lo(0), hi(0) {}
    QInterval(QQ a) : lo(a), hi(std::move(a)) { lo.canonicalize(); hi.canonicalize(); }
    QInterval(QQ a, QQ b) : lo(std::move(a)), hi(std::move(b)) {
        lo.canonicalize();
        hi.canonicalize();
        if (lo > hi) throw std::invalid_argument("interval: lo > hi");
    }

    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool contains(const QQ& x) const { return lo <= x && hi >= x; }
    QQ width() const { return hi - lo; }
    QQ mid() const { return (lo + hi) / 2; }

    QInterval operator+(const QInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    QInterval operator-(const QInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    QInterval operator*(const QInterval& o) const;
    QInterval pow(uint32_t e) const;  // sharp for even powers
};

struct IntervalBox {
    std::vector<QInterval> coords;

    IntervalBox() = default;
    explicit IntervalBox(std::vector<QInterval> c) : coords(std::move(c)) {}
    size_t dim() const { return coords.size(); }
};

// Encloses {p(x) : x in box}. Monotone in box inclusion.
QInterval interval_evaluate(const Poly& p, const IntervalBox& box);

// Same polynomial with each rational coefficient replaced by a dyadic
// enclosure of `bits` precision; evaluation is then sound for the original
// polynomial but avoids dragging huge numerators through every cell.
class EnclosedPoly {
  public:
    EnclosedPoly() = default;
    EnclosedPoly(const Poly& p, unsigned bits = 64);
    QInterval evaluate(const IntervalBox& box) const;
    size_t nvars() const { return nvars_; }

  private:
    struct Term {
        Expo e;
        QInterval c;
    };
    size_t nvars_ = 0;
    std::vector<Term> terms_;
};

// Directed-rounding double intervals: every operation widens the result by
// one ulp outward, so enclosures remain sound at machine speed. Endpoints of
// dyadic subdivision boxes are exact doubles, so no precision is lost on the
// geometry itself.
struct DInterval {
    double lo = 0.0, hi = 0.0;

    DInterval() = default;
    DInterval(double a) : lo(a), hi(a) {}
    DInterval(double a, double b) : lo(a), hi(b) {}

    bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
    bool defined() const { return lo <= hi && std::isfinite(lo) && std::isfinite(hi); }

    static double down(double v);
    static double up(double v);

    DInterval operator+(const DInterval& o) const {
        return {down(lo + o.lo), up(hi + o.hi)};
    }
    DInterval operator*(const DInterval& o) const;
    DInterval pow(uint32_t e) const;
};

// Double-interval shadow of a polynomial with coefficient enclosures.
class FastPoly {
  public:
    FastPoly() = default;
    explicit FastPoly(const Poly& p);
    DInterval evaluate(const DInterval* box) const;  // box: nvars entries
    // Certified sign at an exactly-representable point via double-double
    // evaluation with a rigorous error bound: +1/-1, or 0 when undecided.
    int sign_at_point(const double* x) const;
    // Double-double value with a rigorous absolute error bound.
    void eval_point_bound(const double* x, double* value, double* bound) const;
    size_t nvars() const { return nvars_; }

  private:
    struct Term {
        Expo e;
        double clo, chi;
    };
    size_t nvars_ = 0;
    std::vector<Term> terms_;
};

}  // namespace bitlab

#endif
