#include "bitlab/census.hpp"

#include <algorithm>
#include <stdexcept>

namespace bitlab {

namespace {
std::pair<int, int> ordered(int a, int b) { return a <= b ? std::make_pair(a, b) : std::make_pair(b, a); }
}

std::vector<long long> Census::buckets(const std::vector<bool>& is_oval) const {
    std::vector<long long> b(5, 0);
    // Tangent-line contributions per oval, to split the mixed bucket.
    std::map<int, long long> mixed_pairline, mixed_tangent;
    for (const auto& r : records) {
        if (!r.real) continue;
        bool oa = r.comp_a >= 0 && r.comp_a < static_cast<int>(is_oval.size()) && is_oval[r.comp_a];
        bool ob = r.comp_b >= 0 && r.comp_b < static_cast<int>(is_oval.size()) && is_oval[r.comp_b];
        if (oa && ob) {
            if (r.comp_a == r.comp_b)
                b[0] += r.count;
            else
                b[2] += r.count;
        } else if (!oa && !ob) {
            b[1] += r.count;
        } else {
            int oval = oa ? r.comp_a : r.comp_b;
            if (r.origin == CensusRecord::Origin::pair_line)
                mixed_pairline[oval] += r.count;
            else
                mixed_tangent[oval] += r.count;
        }
    }
    for (const auto& [oval, cnt] : mixed_pairline) {
        if (mixed_tangent.count(oval))
            b[4] += cnt + mixed_tangent[oval];
        else
            b[3] += cnt;
    }
    for (const auto& [oval, cnt] : mixed_tangent)
        if (!mixed_pairline.count(oval)) b[4] += cnt;
    return b;
}

Census census_predict(const std::vector<TangentFiber>& fibers, int k, int sign_t) {
    if (sign_t != 1 && sign_t != -1) throw std::invalid_argument("census: sign_t must be +-1");
    int d = 2 * k;
    long long m = static_cast<long long>(d) * (d - 2);
    if (static_cast<long long>(fibers.size()) != m)
        throw std::invalid_argument("census: fiber count mismatch, expected d(d-2)");
    for (const auto& f : fibers) {
        if (static_cast<int>(f.others.size()) != k - 2)
            throw std::invalid_argument("census: each fiber carries k-2 extra points");
        if (!f.is_real && (f.conj_partner < 0 || f.conj_partner >= static_cast<int>(fibers.size())))
            throw std::invalid_argument("census: non-real fiber without conjugate partner");
    }

    Census c;
    c.k = k;
    c.sign_t = sign_t;
    c.grand_total = m * (m - 1) / 2 + 2LL * (k - 2) * m;

    // Lines through two distinct fiber points of the conic: one bitangent
    // each, real iff both fibers real or mutually conjugate.
    for (size_t i = 0; i < fibers.size(); ++i) {
        for (size_t j = i + 1; j < fibers.size(); ++j) {
            CensusRecord r;
            r.origin = CensusRecord::Origin::pair_line;
            r.i = static_cast<int>(i);
            r.j = static_cast<int>(j);
            r.count = 1;
            const auto& a = fibers[i];
            const auto& b = fibers[j];
            r.real = (a.is_real && b.is_real) ||
                     (!a.is_real && !b.is_real && a.conj_partner == static_cast<int>(j));
            r.comp_a = a.component;
            r.comp_b = b.component;
            c.records.push_back(r);
        }
    }
    // Tangent lines of the conic at fiber points: two bitangents per extra
    // fiber point, real exactly when the sign of t matches the position.
    for (size_t i = 0; i < fibers.size(); ++i) {
        const auto& f = fibers[i];
        for (int l = 0; l < k - 2; ++l) {
            const auto& q = f.others[l];
            CensusRecord r;
            r.origin = CensusRecord::Origin::tangent_line;
            r.i = static_cast<int>(i);
            r.j = l;
            r.count = 2;
            bool both_real = f.is_real && q.is_real;
            r.real = both_real && ((sign_t > 0 && q.critical_above) ||
                                   (sign_t < 0 && !q.critical_above));
            r.comp_a = f.component;
            r.comp_b = q.component;
            c.records.push_back(r);
        }
    }

    for (const auto& r : c.records) {
        if (r.real) {
            c.real_total += r.count;
            c.attribution[ordered(r.comp_a, r.comp_b)] += r.count;
        } else {
            c.conj_pairs += r.count;  // each non-real bitangent pairs up
        }
    }
    if (c.conj_pairs % 2 != 0) throw std::logic_error("census: odd non-real count");
    c.conj_pairs /= 2;
    if (c.real_total + 2 * c.conj_pairs != c.grand_total)
        throw std::logic_error("census: totals do not add up");
    return c;
}

bool sextic_scheme_realizable(int p, int n) {
    if (p < 0 || n < 0) return false;
    if (p == 0 && n == 0) return false;  // empty curve handled by Klein alone
    if (n == 0) return p >= 1 && p <= 10;
    // One non-empty oval enclosing n empty ovals next to a = p-1 outer ones.
    int a = p - 1, b = n;
    if (a < 0 || a + b > 10) return false;
    if (a + b == 10 && (a - b) % 8 != 0) return false;
    if (a + b == 9 && ((a - b - 1) % 8 != 0 && (a - b + 1) % 8 != 0)) return false;
    return true;
}

long long sextic_bound(int p, int n) {
    if (!sextic_scheme_realizable(p, n))
        throw std::invalid_argument("sextic_bound: no sextic realizes this scheme");
    return 2LL * (p - n) + 298;
}

long long harnack_nonreal_pairs(int k) {
    if (k < 2) throw std::invalid_argument("harnack_nonreal_pairs: k >= 2 required");
    return 2LL * k * (k - 1) * (k - 2) / 3;
}

}  // namespace bitlab
