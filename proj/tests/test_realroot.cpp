#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bitlab/realroot.hpp"

using namespace bitlab;

namespace {
std::vector<QQ> qv(std::initializer_list<long> c) {
    std::vector<QQ> out;
    for (long v : c) out.push_back(QQ(v));
    return out;
}
}  // namespace

TEST_CASE("isolate: sqrt(2)") {
    auto roots = isolate_real_roots(qv({-2, 0, 1}));  // x^2 - 2
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].hi < roots[1].lo);
    auto coeffs = qv({-2, 0, 1});
    for (auto& iv : roots) {
        refine_root(coeffs, iv, qq_pow2(-20));
        CHECK(iv.width() <= qq_pow2(-20));
    }
    CHECK(qq_double(roots[0].mid()) == doctest::Approx(-1.41421356).epsilon(1e-5));
    CHECK(qq_double(roots[1].mid()) == doctest::Approx(1.41421356).epsilon(1e-5));
}

TEST_CASE("isolate: no real roots / zero / non-squarefree / degenerate") {
    CHECK(isolate_real_roots(qv({1, 0, 1})).empty());  // x^2 + 1
    CHECK_THROWS(isolate_real_roots(qv({})));
    CHECK_THROWS(isolate_real_roots(qv({1, 2, 1})));  // (x+1)^2
}

TEST_CASE("isolate: eight integer roots") {
    // prod_{i=0..7} (x - i)
    std::vector<QQ> p{QQ(1)};
    for (int i = 0; i <= 7; ++i) {
        std::vector<QQ> q(p.size() + 1, QQ(0));
        for (size_t j = 0; j < p.size(); ++j) {
            q[j + 1] += p[j];
            q[j] -= QQ(i) * p[j];
        }
        p = std::move(q);
    }
    auto roots = isolate_real_roots(p);
    REQUIRE(roots.size() == 8);
    for (int i = 0; i <= 7; ++i) {
        CHECK(roots[i].lo <= QQ(i));
        CHECK(roots[i].hi >= QQ(i));
        if (i > 0) CHECK(roots[i - 1].hi < roots[i].lo);
    }
}

TEST_CASE("isolation count equals the Sturm count on random squarefree polys") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> deg(1, 12);
    int done = 0;
    while (done < 100) {
        int d = deg(rng);
        std::vector<QQ> c(d + 1);
        for (auto& v : c) v = coef(rng);
        if (c.back() == 0) continue;
        std::vector<QInterval> roots;
        try {
            roots = isolate_real_roots(c);
        } catch (const std::invalid_argument&) {
            continue;  // not squarefree; draw again
        }
        CHECK(static_cast<long>(roots.size()) == sturm_count_all(c));
        ++done;
    }
}

TEST_CASE("rational roots come out exact or isolated") {
    // (2x - 3)(x + 5)(x^2 + x + 7)
    std::vector<QQ> c{QQ(-105), QQ(-31), QQ(6), QQ(16), QQ(2)};
    // Expand  (2x-3)(x+5) = 2x^2 + 7x - 15; times (x^2 + x + 7):
    // 2x^4 + 9x^3 + 6x^2 + 34x - 105.
    c = {QQ(-105), QQ(34), QQ(6), QQ(9), QQ(2)};
    auto roots = isolate_real_roots(c);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].contains(QQ(-5)));
    CHECK(roots[1].contains(QQ(3, 2)));
}

TEST_CASE("sign_at and root_bound") {
    auto c = qv({-2, 0, 1});
    CHECK(sign_at(c, QQ(0)) == -1);
    CHECK(sign_at(c, QQ(2)) == 1);
    QQ b = root_bound(c);
    CHECK(b >= 2);
}
