#include "bitlab/interval.hpp"

#include <algorithm>
#include <limits>

#include "bitlab/dd.hpp"

namespace bitlab {

QInterval QInterval::operator*(const QInterval& o) const {
    QQ a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    QQ mn = a, mx = a;
    for (const QQ* v : {&b, &c, &d}) {
        if (*v < mn) mn = *v;
        if (*v > mx) mx = *v;
    }
    return {mn, mx};
}

QInterval QInterval::pow(uint32_t e) const {
    if (e == 0) return {QQ(1), QQ(1)};
    if (e == 1) return *this;
    if (e % 2 == 1) {
        QQ a = qq_pow(lo, e), b = qq_pow(hi, e);
        return {a, b};
    }
    QQ al = abs(lo), ah = abs(hi);
    QQ mx = qq_pow(std::max(al, ah), e);
    if (contains_zero()) return {QQ(0), mx};
    QQ mn = qq_pow(std::min(al, ah), e);
    return {mn, mx};
}

QInterval interval_evaluate(const Poly& p, const IntervalBox& box) {
    if (box.dim() != p.nvars()) throw std::invalid_argument("interval_evaluate: dimension mismatch");
    QInterval acc(QQ(0));
    for (const auto& [e, c] : p.terms()) {
        QInterval t{c, c};
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = t * box.coords[i].pow(e[i]);
        acc = acc + t;
    }
    return acc;
}

EnclosedPoly::EnclosedPoly(const Poly& p, unsigned bits) : nvars_(p.nvars()) {
    terms_.reserve(p.term_count());
    for (const auto& [e, c] : p.terms()) {
        QQ lo, hi;
        qq_dyadic_enclosure(c, bits, lo, hi);
        terms_.push_back({e, QInterval(std::move(lo), std::move(hi))});
    }
}

QInterval EnclosedPoly::evaluate(const IntervalBox& box) const {
    if (box.dim() != nvars_) throw std::invalid_argument("EnclosedPoly: dimension mismatch");
    QInterval acc(QQ(0));
    for (const auto& t : terms_) {
        QInterval m = t.c;
        for (size_t i = 0; i < t.e.size(); ++i)
            if (t.e[i]) m = m * box.coords[i].pow(t.e[i]);
        acc = acc + m;
    }
    return acc;
}

double DInterval::down(double v) {
    return std::nextafter(v, -std::numeric_limits<double>::infinity());
}
double DInterval::up(double v) {
    return std::nextafter(v, std::numeric_limits<double>::infinity());
}

DInterval DInterval::operator*(const DInterval& o) const {
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    double mn = std::min(std::min(a, b), std::min(c, d));
    double mx = std::max(std::max(a, b), std::max(c, d));
    return {down(mn), up(mx)};
}

DInterval DInterval::pow(uint32_t e) const {
    if (e == 0) return {1.0, 1.0};
    if (e == 1) return *this;
    if (e % 2 == 0) {
        // |x|^e is monotone on [mn, mx] with mn, mx >= 0.
        double al = std::abs(lo), ah = std::abs(hi);
        double mx = std::max(al, ah);
        double mn = contains_zero() ? 0.0 : std::min(al, ah);
        double plo = 1.0, phi = 1.0;
        for (uint32_t k = 0; k < e; ++k) {
            plo = down(plo * mn);
            phi = up(phi * mx);
        }
        return {std::max(plo, 0.0), phi};
    }
    // Chained interval products are sound (and sharp off zero) for odd e.
    DInterval r = *this;
    for (uint32_t k = 1; k < e; ++k) r = r * (*this);
    return r;
}

FastPoly::FastPoly(const Poly& p) : nvars_(p.nvars()) {
    terms_.reserve(p.term_count());
    for (const auto& [e, c] : p.terms()) {
        double d = qq_double(c);
        // One ulp outward covers the rounding of the rational coefficient.
        terms_.push_back({e, DInterval::down(d), DInterval::up(d)});
    }
}

void FastPoly::eval_point_bound(const double* x, double* value, double* bound) const {
    DD acc(0.0);
    double absacc = 0.0;
    for (const auto& t : terms_) {
        DD m(t.chi);  // chi and clo differ by an ulp; folded into the bound
        double am = std::abs(t.chi);
        for (size_t i = 0; i < t.e.size(); ++i)
            for (uint32_t k = 0; k < t.e[i]; ++k) {
                m = m * DD(x[i]);
                am *= std::abs(x[i]);
            }
        acc = acc + m;
        absacc += am;
    }
    *value = acc.to_double();
    // DD keeps ~2^-105 relative accuracy per operation; 2^-80 times the
    // magnitude sum is a generous rigorous slack including the coefficient
    // enclosure width.
    *bound = absacc * 0x1p-80 + 0x1p-300;
    if (!std::isfinite(*value) || !std::isfinite(absacc)) {
        *value = 0.0;
        *bound = std::numeric_limits<double>::infinity();
    }
}

int FastPoly::sign_at_point(const double* x) const {
    double v, b;
    eval_point_bound(x, &v, &b);
    if (v > b) return 1;
    if (v < -b) return -1;
    return 0;
}

DInterval FastPoly::evaluate(const DInterval* box) const {
    DInterval acc(0.0, 0.0);
    for (const auto& t : terms_) {
        DInterval m(t.clo, t.chi);
        for (size_t i = 0; i < t.e.size(); ++i)
            if (t.e[i]) m = m * box[i].pow(t.e[i]);
        acc = acc + m;
    }
    return acc;
}

}  // namespace bitlab
