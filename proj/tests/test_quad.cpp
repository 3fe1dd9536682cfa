#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msforge/errors.hpp"
#include "msforge/quad.hpp"
#include "oracle.hpp"

#include <cmath>
#include <random>

using msforge::NumericError;
using msforge::ValidationError;
using namespace msforge::quad;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("tanh-sinh handles the square-root endpoint singularities") {
    AlgebraicIntegrand f{-0.5, -0.5, [](double) { return 1.0; }, 0.0, 1.0};
    const auto r = integrate(f);
    CHECK(r.value == doctest::Approx(kPi).epsilon(1e-13));

    AlgebraicIntegrand one{0.0, 0.0, [](double) { return 1.0; }, 0.0, 1.0};
    CHECK(integrate(one).value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("first genus-family integral against the substitution+Simpson oracle") {
    // (1/3) int dt/sqrt(t(1-t^2)), the gamma=1 period integrand
    AlgebraicIntegrand f{-0.5, -0.5,
                         [](double t) { return std::pow(1.0 + t, -0.5) / 3.0; },
                         0.0, 1.0};
    const double ours = integrate(f).value;
    const double ref = oracle::integrate(-0.5, -0.5,
        [](double t) { return std::pow(1.0 + t, -0.5) / 3.0; }, 2, 2);
    CHECK(ours == doctest::Approx(ref).epsilon(1e-11));
    CHECK(ours == doctest::Approx(0.87401918476403994).epsilon(1e-13));
}

TEST_CASE("beta function values and recurrence") {
    CHECK(beta(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-14));
    // B(x, y+1) = y/(x+y) B(x, y) at (1/3, 2/3)
    const double x = 1.0 / 3.0, y = 2.0 / 3.0;
    CHECK(beta(x, y + 1.0) == doctest::Approx(y / (x + y) * beta(x, y)).epsilon(1e-14));
    CHECK_THROWS_AS(beta(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(beta(1.0, -2.0), ValidationError);
}

TEST_CASE("integrate with h == 1 reproduces the beta function") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> expo(-0.95, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = expo(rng), b = expo(rng);
        AlgebraicIntegrand f{a, b, [](double) { return 1.0; }, 0.0, 1.0};
        const auto r = integrate(f, 1e-12);
        CHECK(r.value == doctest::Approx(beta(a + 1.0, b + 1.0)).epsilon(1e-11));
    }
}

TEST_CASE("affine substitution invariance") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.1, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double lo = -U(rng), hi = lo + U(rng) + 0.2;
        const double a = U(rng) - 1.05, b = U(rng) - 1.05;
        auto h = [](double t) { return 1.0 / (2.0 + std::sin(3.0 * t)); };
        AlgebraicIntegrand unit{a, b, h, 0.0, 1.0};
        AlgebraicIntegrand mapped{a, b, h, lo, hi};
        const double scale = std::pow(hi - lo, a + b + 1.0);
        CHECK(integrate(mapped).value ==
              doctest::Approx(scale * integrate(unit).value).epsilon(1e-11));
    }
}

TEST_CASE("error estimate is conservative") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> expo(-0.9, 1.5);
    std::uniform_real_distribution<double> amp(0.2, 2.0);
    int good = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const double a = expo(rng), b = expo(rng), s = amp(rng);
        auto h = [s](double t) { return std::exp(s * t) / (1.5 + std::cos(t)); };
        AlgebraicIntegrand f{a, b, h, 0.0, 1.0};
        const auto coarse = integrate(f, 1e-7);
        const auto fine = integrate(f, 1e-13);
        if (std::abs(coarse.value - fine.value) <= coarse.error) ++good;
    }
    CHECK(good >= trials * 99 / 100);
}

TEST_CASE("gauss-jacobi cross-check") {
    // nodes/weights against the beta normalization
    for (auto [a, b] : {std::pair{-0.5, -0.5}, {0.25, -0.75}, {1.5, 0.0}}) {
        const auto rule = gauss_jacobi(24, a, b);
        double mass = 0.0;
        for (auto [t, w] : rule) { (void)t; mass += w; }
        CHECK(mass == doctest::Approx(beta(a + 1.0, b + 1.0)).epsilon(1e-12));
    }
    // nontrivial h: agree with tanh-sinh
    AlgebraicIntegrand f{-2.0 / 3.0, 2.0 / 3.0,
                         [](double t) { return std::pow(2.0 - t, -1.0 / 3.0); },
                         0.0, 1.0};
    CHECK(integrate_gauss_jacobi(f, 40) ==
          doctest::Approx(integrate(f).value).epsilon(1e-12));
}

TEST_CASE("period defect bounds bracket the true defect") {
    // a -> 1: lower bound tends to 2 B(2/(k+1), (2k+1)/(k+1)) > 0
    for (int k : {2, 4}) {
        const auto [lo1, hi1] = period_defect_bounds(k, 1.0 + 1e-9);
        const double lim = 2.0 * beta(2.0 / (k + 1.0), (2.0 * k + 1.0) / (k + 1.0));
        CHECK(lo1 == doctest::Approx(lim).epsilon(1e-6));
        CHECK(lo1 > 0.0);
        CHECK(lo1 <= hi1);
        // a large: the upper bound goes negative
        const auto [lo2, hi2] = period_defect_bounds(k, 1e6);
        CHECK(hi2 < 0.0);
        CHECK(lo2 <= hi2);
    }
    // sandwich property against direct quadrature of the A-integrals
    for (int k : {2, 4})
        for (double a : {1.2, 1.8, 3.0, 7.5}) {
            const double kp1 = k + 1.0;
            AlgebraicIntegrand f1{-2.0 / kp1, 1.0 / kp1,
                [a, kp1](double t) { return std::pow(a - t, -1.0 / kp1); }, 0, 1};
            AlgebraicIntegrand f2{-2.0 / kp1, -k / kp1,
                [a, k, kp1](double t) { return std::pow(a - t, k / kp1); }, 0, 1};
            AlgebraicIntegrand f3{-(k - 1.0) / kp1, k / kp1,
                [a, k, kp1](double t) { return std::pow(a - t, -k / kp1); }, 0, 1};
            const double defect = k * integrate(f1).value +
                                  2.0 * std::pow(a, (k - 2.0) / kp1) * integrate(f3).value -
                                  integrate(f2).value;
            const auto [lo, hi] = period_defect_bounds(k, a);
            CHECK(lo <= defect);
            CHECK(defect <= hi);
        }
    CHECK_THROWS_AS(period_defect_bounds(3, 2.0), ValidationError);
    CHECK_THROWS_AS(period_defect_bounds(2, 0.5), ValidationError);
}

TEST_CASE("invalid inputs are rejected") {
    AlgebraicIntegrand bad{-1.0, 0.0, [](double) { return 1.0; }, 0.0, 1.0};
    CHECK_THROWS_AS(integrate(bad), ValidationError);
    AlgebraicIntegrand f{0.0, 0.0, [](double) { return 1.0; }, 0.0, 1.0};
    CHECK_THROWS_AS(integrate(f, -1.0), ValidationError);
    AlgebraicIntegrand rev{0.0, 0.0, [](double) { return 1.0; }, 1.0, 0.0};
    CHECK_THROWS_AS(integrate(rev), ValidationError);
}
