#include "bitlab/realroot.hpp"

#include <algorithm>

namespace bitlab {

namespace {

// Ascending integer coefficients with content removed.
std::vector<ZZ> to_integer(const std::vector<QQ>& coeffs) {
    ZZ den_lcm = 1;
    for (const auto& c : coeffs)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<ZZ> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) {
        QQ v = c * QQ(den_lcm);
        out.push_back(v.get_num());
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

int sgn_z(const ZZ& z) { return mpz_sgn(z.get_mpz_t()); }

long sign_variations(const std::vector<ZZ>& c) {
    long v = 0;
    int last = 0;
    for (const auto& z : c) {
        int s = sgn_z(z);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

// p(x) -> p(x+1), in place. Classic synthetic Taylor shift.
void shift_by_one(std::vector<ZZ>& c) {
    size_t n = c.size();
    for (size_t i = 1; i < n; ++i)
        for (size_t j = n - 1; j >= i; --j) c[j - 1] += c[j];
}

// Sign variation bound on the number of roots of p in (0,1):
// variations of (1+x)^n p(1/(1+x)) = reverse(p) shifted by one.
long var_01(const std::vector<ZZ>& c) {
    std::vector<ZZ> r(c.rbegin(), c.rend());
    shift_by_one(r);
    return sign_variations(r);
}

ZZ eval_at_one(const std::vector<ZZ>& c) {
    ZZ s = 0;
    for (const auto& z : c) s += z;
    return s;
}

// p(x) -> 2^n p(x/2): a_i <- a_i * 2^(n-i).
std::vector<ZZ> left_half(const std::vector<ZZ>& c) {
    std::vector<ZZ> out(c);
    size_t n = out.size();
    for (size_t i = 0; i < n; ++i) out[i] <<= (n - 1 - i);
    return out;
}

struct Emitter {
    std::vector<QInterval>* out;
    void root(const QQ& lo, const QQ& hi) { out->push_back(QInterval(lo, hi)); }
    void exact(const QQ& r) { out->push_back(QInterval(r, r)); }
};

// Roots of c in the open interval (lo, hi); c is c0 rescaled so its (0,1)
// roots are exactly the (lo,hi) roots of the original.
void vca(std::vector<ZZ> c, const QQ& lo, const QQ& hi, Emitter& em, int depth) {
    if (depth > 4000) throw std::runtime_error("isolate_real_roots: bisection depth exhausted");
    long v = var_01(c);
    if (v == 0) return;
    if (v == 1) {
        em.root(lo, hi);
        return;
    }
    QQ mid = (lo + hi) / 2;
    std::vector<ZZ> l = left_half(c);
    std::vector<ZZ> r(l);
    shift_by_one(r);
    // Exact root at the midpoint shows up as r(0) = l(1) = 0.
    if (eval_at_one(l) == 0) em.exact(mid);
    vca(std::move(l), lo, mid, em, depth + 1);
    vca(std::move(r), mid, hi, em, depth + 1);
}

std::vector<QQ> derivative(const std::vector<QQ>& c) {
    std::vector<QQ> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
    return d;
}

// Rational polynomial remainder, ascending coefficients.
std::vector<QQ> poly_rem(std::vector<QQ> a, const std::vector<QQ>& b) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    std::vector<QQ> bb(b);
    while (!bb.empty() && bb.back() == 0) bb.pop_back();
    if (bb.empty()) throw std::invalid_argument("poly_rem: zero divisor");
    while (a.size() >= bb.size()) {
        QQ f = a.back() / bb.back();
        size_t off = a.size() - bb.size();
        for (size_t i = 0; i < bb.size(); ++i) a[off + i] -= f * bb[i];
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

}  // namespace

QQ root_bound(const std::vector<QQ>& coeffs) {
    std::vector<QQ> c(coeffs);
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) throw std::invalid_argument("root_bound: zero polynomial");
    QQ m = 0;
    for (size_t i = 0; i + 1 < c.size(); ++i) m += abs(c[i] / c.back());
    QQ bound = 1 + m;
    // Round up to a power of two, strictly above.
    long e = qq_ceil_log2_abs(bound) + 1;
    return qq_pow2(e);
}

int sign_at(const std::vector<QQ>& coeffs, const QQ& x) {
    QQ acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return qq_sign(acc);
}

std::vector<QInterval> isolate_real_roots(const std::vector<QQ>& coeffs) {
    std::vector<QQ> c(coeffs);
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
    if (c.size() == 1) return {};
    // Squarefree gate.
    std::vector<QQ> g = c, h = derivative(c);
    while (true) {
        while (!h.empty() && h.back() == 0) h.pop_back();
        if (h.empty()) break;
        auto r = poly_rem(g, h);
        g = std::move(h);
        h = std::move(r);
    }
    if (g.size() > 1) throw std::invalid_argument("isolate_real_roots: non-squarefree input");

    std::vector<QInterval> out;
    Emitter em{&out};
    // Exact zero root.
    size_t shift = 0;
    while (shift < c.size() && c[shift] == 0) ++shift;
    if (shift > 0) {
        em.exact(QQ(0));
        c.erase(c.begin(), c.begin() + shift);
    }
    QQ bound = root_bound(c);
    auto zc = to_integer(c);
    // Positive roots: scale (0, bound) to (0, 1).
    {
        std::vector<ZZ> pc(zc);
        ZZ bnum = QQ(bound).get_num();
        ZZ scale = 1;
        for (size_t i = 0; i < pc.size(); ++i) {
            pc[i] *= scale;
            scale *= bnum;
        }
        vca(std::move(pc), QQ(0), bound, em, 0);
    }
    // Negative roots: x -> -bound * x.
    {
        std::vector<ZZ> nc(zc);
        ZZ bnum = QQ(bound).get_num();
        ZZ scale = 1;
        for (size_t i = 0; i < nc.size(); ++i) {
            nc[i] *= scale;
            if (i % 2 == 1) nc[i] = -nc[i];
            scale *= bnum;
        }
        std::vector<QInterval> neg;
        Emitter nem{&neg};
        vca(std::move(nc), QQ(0), bound, nem, 0);
        for (auto& iv : neg) out.push_back(QInterval(-iv.hi, -iv.lo));
    }
    std::sort(out.begin(), out.end(),
              [](const QInterval& a, const QInterval& b) { return a.lo < b.lo; });

    // Post-pass: make endpoints sign-definite and intervals strictly
    // disjoint. vca may emit intervals whose endpoint is another interval's
    // exact root, or two intervals sharing a bisection point.
    auto snug = [&c](QInterval& iv) {
        if (iv.lo == iv.hi) return;
        int shi = sign_at(c, iv.hi);
        if (shi == 0) {
            // Root of p at hi but not the root of this interval: pull in.
            QQ lo = iv.lo, hi = iv.hi;
            while (true) {
                QQ probe = (lo + hi) / 2;
                int s = sign_at(c, probe);
                if (s == 0) {
                    iv = QInterval(probe, probe);
                    return;
                }
                if (s != sign_at(c, lo)) {
                    iv = QInterval(lo, probe);
                    break;
                }
                lo = probe;
            }
        }
        int slo = sign_at(c, iv.lo);
        if (slo == 0) {
            QQ lo = iv.lo, hi = iv.hi;
            while (true) {
                QQ probe = (lo + hi) / 2;
                int s = sign_at(c, probe);
                if (s == 0) {
                    iv = QInterval(probe, probe);
                    return;
                }
                if (s != sign_at(c, hi)) {
                    iv = QInterval(probe, hi);
                    break;
                }
                hi = probe;
            }
        }
    };
    for (auto& iv : out) snug(iv);
    for (size_t i = 0; i + 1 < out.size(); ++i) {
        while (out[i].hi >= out[i + 1].lo) {
            QQ w = std::min(out[i].width(), out[i + 1].width());
            if (w == 0) w = out[i].hi - out[i].lo + out[i + 1].hi - out[i + 1].lo + 1;
            refine_root(c, out[i], w / 4);
            refine_root(c, out[i + 1], w / 4);
        }
    }
    return out;
}

std::vector<QInterval> isolate_real_roots(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
    return isolate_real_roots(uni_coeff_vector(p));
}

void refine_root(const std::vector<QQ>& coeffs, QInterval& iv, const QQ& width) {
    if (iv.lo == iv.hi) return;
    int slo = sign_at(coeffs, iv.lo);
    if (slo == 0) {
        iv = QInterval(iv.lo, iv.lo);
        return;
    }
    while (iv.width() > width) {
        QQ mid = iv.mid();
        int sm = sign_at(coeffs, mid);
        if (sm == 0) {
            iv = QInterval(mid, mid);
            return;
        }
        if (sm == slo)
            iv = QInterval(mid, iv.hi);
        else
            iv = QInterval(iv.lo, mid);
    }
}

long sturm_count(const std::vector<QQ>& coeffs, const QQ& a, const QQ& b) {
    std::vector<QQ> c(coeffs);
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) throw std::invalid_argument("sturm_count: zero polynomial");
    std::vector<std::vector<QQ>> chain;
    chain.push_back(c);
    chain.push_back(derivative(c));
    while (true) {
        auto& last = chain.back();
        while (!last.empty() && last.back() == 0) last.pop_back();
        if (last.empty()) {
            chain.pop_back();
            break;
        }
        if (last.size() == 1) break;
        auto r = poly_rem(chain[chain.size() - 2], last);
        for (auto& q : r) q = -q;
        chain.push_back(std::move(r));
    }
    auto vars_at = [&chain](const QQ& x) {
        long v = 0;
        int lastsgn = 0;
        for (const auto& p : chain) {
            int s = sign_at(p, x);
            if (s == 0) continue;
            if (lastsgn != 0 && s != lastsgn) ++v;
            lastsgn = s;
        }
        return v;
    };
    return vars_at(a) - vars_at(b);
}

long sturm_count_all(const std::vector<QQ>& coeffs) {
    QQ b = root_bound(coeffs);
    return sturm_count(coeffs, -b, b);
}

}  // namespace bitlab
