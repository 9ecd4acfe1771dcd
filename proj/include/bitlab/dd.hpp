// Double-double arithmetic (~31 significant digits) for endpoint polishing
// and borderline reality classification. Error-free transforms via FMA.

#ifndef BITLAB_DD_HPP
#define BITLAB_DD_HPP

#include <cmath>

namespace bitlab {

struct DD {
    double hi = 0.0, lo = 0.0;

    DD() = default;
    DD(double h) : hi(h), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    static DD two_sum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }
    static DD two_prod(double a, double b) {
        double p = a * b;
        double err = std::fma(a, b, -p);
        return {p, err};
    }
    static DD renorm(double h, double l) {
        double s = h + l;
        double e = l - (s - h);
        return {s, e};
    }

    DD operator+(const DD& o) const {
        DD s = two_sum(hi, o.hi);
        double l = s.lo + lo + o.lo;
        return renorm(s.hi, l);
    }
    DD operator-(const DD& o) const { return *this + DD(-o.hi, -o.lo); }
    DD operator-() const { return {-hi, -lo}; }
    DD operator*(const DD& o) const {
        DD p = two_prod(hi, o.hi);
        double l = p.lo + hi * o.lo + lo * o.hi;
        return renorm(p.hi, l);
    }
    DD operator/(const DD& o) const {
        double q1 = hi / o.hi;
        DD r = *this - o * DD(q1);
        double q2 = r.hi / o.hi;
        r = r - o * DD(q2);
        double q3 = r.hi / o.hi;
        return renorm(q1, q2) + DD(q3);
    }
    bool operator<(const DD& o) const { return hi < o.hi || (hi == o.hi && lo < o.lo); }
    double to_double() const { return hi + lo; }
};

inline DD abs(const DD& a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }

struct CDD {
    DD re, im;

    CDD() = default;
    CDD(DD r) : re(r) {}
    CDD(DD r, DD i) : re(r), im(i) {}
    CDD(double r, double i = 0.0) : re(r), im(i) {}

    CDD operator+(const CDD& o) const { return {re + o.re, im + o.im}; }
    CDD operator-(const CDD& o) const { return {re - o.re, im - o.im}; }
    CDD operator*(const CDD& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CDD operator/(const CDD& o) const {
        DD d = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
    double abs2_double() const { return (re * re + im * im).to_double(); }
};

}  // namespace bitlab

#endif
