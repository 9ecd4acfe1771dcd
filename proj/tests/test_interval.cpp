#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bitlab/interval.hpp"

using namespace bitlab;

namespace {
const std::vector<std::string> kXY{"x", "y"};
}

TEST_CASE("interval evaluation basics") {
    Poly x = Poly::var(kXY, 0), y = Poly::var(kXY, 1);
    IntervalBox box({QInterval(QQ(-1), QQ(1)), QInterval(QQ(-1), QQ(1))});

    QInterval r = interval_evaluate(x, box);
    CHECK(r.lo == -1);
    CHECK(r.hi == 1);

    // x^2 on [-1,1]: the power-aware enclosure is exactly [0,1].
    QInterval r2 = interval_evaluate(x * x, box);
    CHECK(r2.lo == 0);
    CHECK(r2.hi == 1);

    IntervalBox pos({QInterval(QQ(0), QQ(1)), QInterval(QQ(0), QQ(1))});
    QInterval r3 = interval_evaluate(x + y, pos);
    CHECK(r3.lo == 0);
    CHECK(r3.hi == 2);

    CHECK_THROWS(interval_evaluate(x, IntervalBox({QInterval(QQ(0), QQ(1))})));
}

TEST_CASE("degenerate box encloses the exact value") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int round = 0; round < 25; ++round) {
        Poly p(kXY);
        for (int t = 0; t < 6; ++t) {
            Expo e{static_cast<uint32_t>(rng() % 5), static_cast<uint32_t>(rng() % 5)};
            p.set_coeff(e, p.coeff(e) + coef(rng));
        }
        QQ vx(coef(rng), 7), vy(coef(rng), 5);
        IntervalBox box({QInterval(vx), QInterval(vy)});
        QInterval r = interval_evaluate(p, box);
        QQ exact = p.evaluate({vx, vy});
        CHECK(r.contains(exact));
    }
}

TEST_CASE("monotone in box inclusion") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> coef(-9, 9);
    Poly p(kXY);
    for (int t = 0; t < 8; ++t) {
        Expo e{static_cast<uint32_t>(rng() % 4), static_cast<uint32_t>(rng() % 4)};
        p.set_coeff(e, p.coeff(e) + coef(rng));
    }
    IntervalBox big({QInterval(QQ(-2), QQ(2)), QInterval(QQ(-1), QQ(3))});
    IntervalBox small({QInterval(QQ(0), QQ(1)), QInterval(QQ(0), QQ(1))});
    QInterval rb = interval_evaluate(p, big);
    QInterval rs = interval_evaluate(p, small);
    CHECK(rb.lo <= rs.lo);
    CHECK(rb.hi >= rs.hi);
}

TEST_CASE("EnclosedPoly stays sound on huge coefficients") {
    Poly p(kXY);
    // A coefficient whose numerator does not fit a double exactly.
    QQ huge = qq_parse("123456789012345678901234567/1000000007");
    p.set_coeff({2, 1}, huge);
    p.set_coeff({0, 0}, QQ(-3, 7));
    EnclosedPoly ep(p, 64);
    IntervalBox box({QInterval(QQ(1, 3), QQ(1, 2)), QInterval(QQ(-1), QQ(1))});
    QInterval enc = ep.evaluate(box);
    QInterval exact = interval_evaluate(p, box);
    CHECK(enc.lo <= exact.lo);
    CHECK(enc.hi >= exact.hi);
    // And the dyadic enclosure is not absurdly loose.
    CHECK(enc.width() <= exact.width() * QQ(3, 2) + 1);
}
