#include <doctest.h>

#include <cmath>
#include <random>

#include "bkmoments/error.hpp"
#include "bkmoments/extrapolation.hpp"

using namespace bkm;

TEST_CASE("first-order examples") {
    CHECK(extrapolate1({0.3, 0.3, 9, 10}) == 0.3);
    CHECK(extrapolate1({1.1, 1.05, 10, 20}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("second-order examples") {
    CHECK(extrapolate2({0.3, 0.3, 9, 10}) == 0.3);
    CHECK(extrapolate2({1.01, 1.0025, 10, 20}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dispatch and errors") {
    const EstimatePair p{1.1, 1.05, 10, 20};
    CHECK(extrapolate(p, 1) == extrapolate1(p));
    CHECK(extrapolate(p, 2) == extrapolate2(p));
    CHECK_THROWS_AS(extrapolate(p, 3), InvalidArgument);
    CHECK_THROWS_AS(extrapolate1({1.0, 2.0, 5, 5}), InvalidArgument);
    CHECK_THROWS_AS(extrapolate2({1.0, 2.0, 5, 5}), InvalidArgument);
    CHECK_THROWS_AS(extrapolate1({1.0, 2.0, 0, 5}), InvalidArgument);
}

TEST_CASE("exact on pure power-law errors") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> limit(-5.0, 5.0);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    std::uniform_int_distribution<int> steps(1, 200);
    for (int trial = 0; trial < 100; ++trial) {
        const double target = limit(rng);
        const double C = c(rng);
        const int M1 = steps(rng);
        int M2 = steps(rng);
        if (M2 == M1) M2 = M1 + 1;
        const EstimatePair p1{target + C / M1, target + C / M2, M1, M2};
        const EstimatePair p2{target + C / (double(M1) * M1), target + C / (double(M2) * M2), M1, M2};
        const double scale = std::max(std::abs(target), std::abs(C));
        CHECK(std::abs(extrapolate1(p1) - target) <= 1e-12 * scale);
        CHECK(std::abs(extrapolate2(p2) - target) <= 1e-12 * scale);
    }
}

TEST_CASE("straddling estimates still use the formula") {
    // m1 below and m2 above the limit; the result is simply the formula value.
    const EstimatePair p{0.9, 1.05, 10, 20};
    CHECK(extrapolate1(p) == doctest::Approx(1.05 - 10 * (0.9 - 1.05) / 10));
}
