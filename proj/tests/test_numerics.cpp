#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "wigbell/numerics.hpp"

namespace {

// reference series in extended precision, independent of the implementation
long double erf_taylor(long double x) {
    long double term = x, sum = 0.0L;
    for (int n = 0; n < 400; ++n) {
        sum += term / (2 * n + 1);
        term *= -x * x / (n + 1);
        if (std::abs(term) < 1e-25L) break;
    }
    return sum * 2.0L / std::sqrt(3.14159265358979323846264338327950288L);
}

// backward evaluation of the tail continued fraction for erfc
long double erfc_fraction_backward(long double x) {
    long double t = 0.0L;
    for (int k = 120; k >= 1; --k) t = (0.5L * k) / (x + t);
    const long double pi = 3.14159265358979323846264338327950288L;
    return std::exp(-x * x) / std::sqrt(pi) / (x + t);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("erf at pinned points") {
    CHECK(wigbell::erf(0.0) == 0.0);
    CHECK(std::abs(wigbell::erf(1.0) - 0.8427007929497149) <= 2e-16);
    CHECK(std::abs(wigbell::erf(0.5) - 0.5204998778130465) <= 2e-16);
    CHECK(std::abs(wigbell::erf(2.0) - 0.9953222650189527) <= 2e-16);
    CHECK(std::abs(wigbell::erf(3.0) - 0.9999779095030014) <= 2e-16);
    CHECK_THROWS_AS(wigbell::erf(std::numeric_limits<double>::quiet_NaN()),
                    std::domain_error);
    CHECK_THROWS_AS(wigbell::erf(std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("erf matches extended-precision series on the core range") {
    for (double x = -3.5; x <= 3.5; x += 0.05) {
        const double ref = static_cast<double>(erf_taylor(x));
        CHECK(std::abs(wigbell::erf(x) - ref) <= 1e-13);
    }
}

TEST_CASE("erf matches backward continued fraction on the tail") {
    for (double x = 3.0; x <= 8.0; x += 0.1) {
        const double ref =
            static_cast<double>(1.0L - erfc_fraction_backward(x));
        CHECK(std::abs(wigbell::erf(x) - ref) <= 1e-13);
    }
    // branch crossover: the jump is just the true increment, about
    // erf'(3) * 2e-6 = 2.8e-10
    CHECK(std::abs(wigbell::erf(2.999999) - wigbell::erf(3.000001)) < 1e-9);
}

TEST_CASE("erf grid properties") {
    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = -6.0 + 12.0 * i / 10000.0;
        const double y = wigbell::erf(x);
        CHECK(y == -wigbell::erf(-x));
        CHECK(std::abs(y) <= 1.0);
        if (std::abs(x) <= 5.0) CHECK(std::abs(y) < 1.0);
        CHECK(y >= prev);
        prev = y;
        CHECK(std::abs(y - std::erf(x)) <= 1e-14);
    }
}

TEST_CASE("integrate_1d is exact on polynomials") {
    const auto r1 = wigbell::integrate_1d([](double x) { return x; }, 0.0, 1.0);
    CHECK(std::abs(r1.value - 0.5) <= 1e-15);
    CHECK(r1.evaluations >= 22);

    // degree 7, antiderivative x^8/8 - x^6/2 + 2x^3/3 - x
    auto p = [](double x) {
        return x * x * x * x * x * x * x - 3.0 * std::pow(x, 5) +
               2.0 * x * x - 1.0;
    };
    auto antideriv = [](double x) {
        return std::pow(x, 8) / 8.0 - std::pow(x, 6) / 2.0 +
               2.0 * x * x * x / 3.0 - x;
    };
    const double exact = antideriv(3.0) - antideriv(-2.0);
    const auto r2 = wigbell::integrate_1d(p, -2.0, 3.0);
    CHECK(std::abs(r2.value - exact) <= 1e-13 * std::abs(exact));
}

TEST_CASE("integrate_1d on gaussians") {
    const auto r = wigbell::integrate_1d(
        [](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(std::abs(r.value - std::sqrt(std::numbers::pi)) <= 1e-12);
    // converged once below max(abs_tol, rel_tol |I|) = 1e-10 sqrt(pi)
    CHECK(r.error_estimate <= 2e-10);

    // int_0^inf q e^{-(q-1)^2} dq = e^{-1}/2 + sqrt(pi)/2 (1 + erf(1))
    const double exact = 0.5 * std::exp(-1.0) +
                         0.5 * std::sqrt(std::numbers::pi) *
                             (1.0 + wigbell::erf(1.0));
    CHECK(std::abs(exact - 1.816990778850906) <= 1e-14);
    const auto r2 = wigbell::integrate_1d(
        [](double q) { return q * std::exp(-(q - 1.0) * (q - 1.0)); }, 0.0,
        8.1);
    CHECK(std::abs(r2.value - exact) <= 1e-10);
}

TEST_CASE("integrate_1d argument and budget errors") {
    auto f = [](double x) { return std::exp(-x * x); };
    CHECK_THROWS_AS(wigbell::integrate_1d(f, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(wigbell::integrate_1d(f, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(
        wigbell::integrate_1d(f, 0.0, std::numeric_limits<double>::infinity()),
        std::invalid_argument);
    CHECK_THROWS_AS(wigbell::integrate_1d(
                        [](double) { return std::nan(""); }, 0.0, 1.0),
                    std::domain_error);

    wigbell::QuadratureOptions tight;
    tight.abs_tol = 0.0;
    tight.rel_tol = 0.0;
    tight.max_evaluations = 44;
    try {
        wigbell::integrate_1d(f, -8.0, 8.0, tight);
        CHECK(false);
    } catch (const wigbell::ConvergenceError& e) {
        CHECK(e.best().evaluations >= 22);
        CHECK(e.best().evaluations <= 44);
        CHECK(e.best().value > 1.0);
        CHECK(e.best().value < 3.0);
        CHECK(e.best().error_estimate > 0.0);
    }
}

TEST_CASE("integrate_2d") {
    const auto unit = wigbell::integrate_2d(
        [](double, double) { return 1.0; }, 0.0, 1.0, 0.0, 1.0);
    CHECK(std::abs(unit.value - 1.0) <= 1e-13);

    const auto gauss = wigbell::integrate_2d(
        [](double x, double y) {
            return std::numbers::inv_pi * std::exp(-x * x - y * y);
        },
        -8.0, 8.0, -8.0, 8.0);
    CHECK(std::abs(gauss.value - 1.0) <= 1e-10);

    // opposite-quadrant mass of the standard bivariate normal is 1/4 per
    // quadrant; both off-diagonal quadrants together give 1/2
    const auto quadrant = wigbell::integrate_2d(
        [](double x, double y) {
            return std::exp(-0.5 * (x * x + y * y)) /
                   (2.0 * std::numbers::pi);
        },
        0.0, 8.0, -8.0, 0.0);
    CHECK(std::abs(2.0 * quadrant.value - 0.5) <= 1e-9);
}

TEST_CASE("rng streams are deterministic and sliceable") {
    wigbell::RngStream a{42, 7, 0};
    wigbell::RngStream b{42, 7, 0};
    for (int i = 0; i < 100; ++i) CHECK(a.next_raw() == b.next_raw());

    wigbell::RngStream u{3, 0, 0};
    for (int i = 0; i < 100000; ++i) {
        const double x = u.next_uniform();
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }

    // interleaving another stream does not disturb a stream's sequence
    wigbell::RngStream solo{1, 0, 0};
    double ref[10];
    for (double& r : ref) r = solo.next_normal();
    wigbell::RngStream again{1, 0, 0};
    wigbell::RngStream other{1, 1, 0};
    for (double r : ref) {
        CHECK(again.next_normal() == r);
        (void)other.next_normal();
    }
    CHECK(again.position == 20);  // two uniforms per normal

    // position is the whole state: a copy resumes identically
    wigbell::RngStream base{9, 2, 0};
    (void)base.next_raw();
    wigbell::RngStream copy = base;
    CHECK(base.next_raw() == copy.next_raw());
}

TEST_CASE("gaussian_sample moments and edge cases") {
    wigbell::RngStream s{2026, 0, 0};
    CHECK(wigbell::gaussian_sample(s, 3.7, 0.0) == 3.7);
    CHECK(s.position == 2);
    CHECK_THROWS_AS(wigbell::gaussian_sample(s, 0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(
        wigbell::gaussian_sample(s, std::nan(""), 1.0), std::domain_error);

    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    wigbell::RngStream t{11, 4, 0};
    for (int i = 0; i < n; ++i) {
        const double x = wigbell::gaussian_sample(t, 2.0, 0.5);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    // 5 sigma bands
    CHECK(std::abs(mean - 2.0) <= 5.0 * 0.5 / 1000.0);
    CHECK(std::abs(var - 0.25) <= 5.0 * 0.25 * std::numbers::sqrt2 / 1000.0);
}

}  // TEST_SUITE
