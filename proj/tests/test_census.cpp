#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bitlab/census.hpp"
#include "bitlab/invariants.hpp"

using namespace bitlab;

namespace {

std::vector<TangentFiber> all_real_fibers(int k, int components) {
    int m = 2 * k * (2 * k - 2);
    std::vector<TangentFiber> fibers(m);
    for (int i = 0; i < m; ++i) {
        fibers[i].index = i;
        fibers[i].is_real = true;
        fibers[i].u = i;
        fibers[i].component = i % components;
        fibers[i].others.resize(k - 2);
        for (auto& o : fibers[i].others) {
            o.is_real = true;
            o.critical_above = false;
            o.component = (i + 1) % components;
        }
    }
    return fibers;
}

// The fiber layout of the Harnack/Hilbert 3-section: components 0..9 are the
// ten ovals, component 10 is the long one. Ovals 0..8 sit below the long
// component, oval 9 above it; the four zig-zag fibers split 2/2.
std::vector<TangentFiber> harnack_3section_fibers() {
    std::vector<TangentFiber> fibers(24);
    int idx = 0;
    auto add = [&](int comp, int other_comp, bool crit_above) {
        TangentFiber& f = fibers[idx];
        f.index = idx;
        f.is_real = true;
        f.u = idx;
        f.component = comp;
        FiberPoint q;
        q.is_real = true;
        q.component = other_comp;
        q.critical_above = crit_above;
        f.others.push_back(q);
        ++idx;
    };
    for (int oval = 0; oval < 9; ++oval) {
        add(oval, 10, false);  // top of a low oval: long strand above it
        add(oval, 10, false);
    }
    add(9, 10, true);  // the high oval: critical points above the long strand
    add(9, 10, true);
    add(10, 10, false);  // zig-zag extrema
    add(10, 10, false);
    add(10, 10, true);
    add(10, 10, true);
    return fibers;
}

}  // namespace

TEST_CASE("quartic census: 8 real fibers give 28 real bitangents either sign") {
    auto fibers = all_real_fibers(2, 4);
    for (int sign : {-1, 1}) {
        Census c = census_predict(fibers, 2, sign);
        CHECK(c.real_total == 28);
        CHECK(c.conj_pairs == 0);
        CHECK(c.grand_total == 28);
    }
}

TEST_CASE("Harnack and Hilbert sextic tallies") {
    auto fibers = harnack_3section_fibers();
    std::vector<bool> is_oval(11, true);
    is_oval[10] = false;

    Census harnack = census_predict(fibers, 3, -1);
    CHECK(harnack.real_total == 316);
    CHECK(harnack.conj_pairs == 4);
    CHECK(harnack.grand_total == 324);
    auto hb = harnack.buckets(is_oval);
    CHECK(hb == std::vector<long long>{10, 10, 180, 8, 108});

    Census hilbert = census_predict(fibers, 3, +1);
    CHECK(hilbert.real_total == 284);
    CHECK(hilbert.conj_pairs == 20);
    CHECK(hilbert.grand_total == 324);
    auto gb = hilbert.buckets(is_oval);
    CHECK(gb == std::vector<long long>{10, 10, 180, 72, 12});
}

TEST_CASE("grand total identity on synthetic fiber data, k <= 5") {
    std::mt19937_64 rng(11);
    for (int k = 2; k <= 5; ++k) {
        int m = 2 * k * (2 * k - 2);
        for (int round = 0; round < 8; ++round) {
            std::vector<TangentFiber> fibers(m);
            // Random reality pattern with an even number of complex fibers.
            std::vector<int> idx(m);
            for (int i = 0; i < m; ++i) idx[i] = i;
            std::shuffle(idx.begin(), idx.end(), rng);
            int pairs = static_cast<int>(rng() % (m / 4));
            for (int i = 0; i < m; ++i) {
                TangentFiber& f = fibers[i];
                f.index = i;
                f.is_real = true;
                f.component = static_cast<int>(rng() % 5);
                f.others.resize(k - 2);
                for (auto& o : f.others) {
                    o.is_real = rng() % 2;
                    o.critical_above = rng() % 2;
                    o.component = static_cast<int>(rng() % 5);
                }
            }
            for (int pp = 0; pp < pairs; ++pp) {
                TangentFiber& a = fibers[idx[2 * pp]];
                TangentFiber& b = fibers[idx[2 * pp + 1]];
                a.is_real = false;
                b.is_real = false;
                a.conj_partner = b.index;
                b.conj_partner = a.index;
                for (auto& o : a.others) o.is_real = false;
                for (auto& o : b.others) o.is_real = false;
            }
            Census c = census_predict(fibers, k, rng() % 2 ? 1 : -1);
            long long m2 = m;
            CHECK(c.grand_total == m2 * (m2 - 1) / 2 + 2 * (k - 2) * m2);
            CHECK(c.real_total + 2 * c.conj_pairs == c.grand_total);
            CHECK(c.grand_total ==
                  pluecker(2 * k).bitangents);
        }
    }
}

TEST_CASE("sextic bound") {
    CHECK(sextic_bound(10, 0) == 318);
    CHECK(sextic_bound(10, 1) == 316);
    CHECK(sextic_bound(6, 5) == 300);
    CHECK(sextic_bound(2, 9) == 284);
    CHECK_THROWS(sextic_bound(0, 0));
    CHECK_THROWS(sextic_bound(12, 0));   // beyond any sextic
    CHECK_THROWS(sextic_bound(11, 0));   // <11> is not realizable
    CHECK_THROWS(sextic_bound(8, 3));    // a+b = 10 needs a = b mod 8
}

TEST_CASE("sextic census totals match the closed form when all fibers are real") {
    // With all 24 fibers real, the census real total at the Harnack sign is
    // 276 + 2 * (#below fibers); for the 3-section layout this is the bound
    // formula at (p, n) = (10, 1).
    auto fibers = harnack_3section_fibers();
    Census c = census_predict(fibers, 3, -1);
    CHECK(c.real_total == sextic_bound(10, 1));
}

TEST_CASE("harnack_nonreal_pairs") {
    CHECK(harnack_nonreal_pairs(2) == 0);
    CHECK(harnack_nonreal_pairs(3) == 4);
    CHECK(harnack_nonreal_pairs(5) == 40);
    // Direct evaluation of the defining sum.
    for (int k = 2; k <= 9; ++k) {
        long long s = 0;
        for (int i = 1; i <= k - 2; ++i) s += 4LL * i * (k - 1 - i);
        CHECK(s == harnack_nonreal_pairs(k));
    }
    CHECK_THROWS(harnack_nonreal_pairs(1));
}
