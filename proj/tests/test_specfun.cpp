#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "frbe/specfun.hpp"
#include "oracles.hpp"

using namespace frbe;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = lo * std::exp(i * step);
    out.back() = hi;
    return out;
}
}  // namespace

TEST_CASE("sinpi is exact at integers and symmetric around them") {
    CHECK(sinpi(0.0) == 0.0);
    CHECK(sinpi(1.0) == 0.0);
    CHECK(sinpi(-3.0) == 0.0);
    CHECK(sinpi(1e10) == 0.0);
    CHECK(sinpi(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sinpi(-0.5) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(sinpi(100.25) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(sinpi(1e15 + 0.5) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("reciprocal gamma agrees with gamma and vanishes at the poles") {
    CHECK(rgamma(1.0) == doctest::Approx(1.0));
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-1.0) == 0.0);
    CHECK(rgamma(-7.0) == 0.0);
    for (double x : {0.1, 0.5, 1.7, 4.3, 11.0, 35.5, 120.0})
        CHECK(rgamma(x) == doctest::Approx(1.0 / std::tgamma(x)).epsilon(1e-14));
    for (double x : {-0.5, -1.3, -6.7, -23.4})
        CHECK(rgamma(x) * std::tgamma(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rgamma(200.0) == 0.0);
}

TEST_CASE("scaled complementary error function matches quadrature") {
    for (double x : {0.0, 0.1, 0.7, 1.0, 3.0, 5.0, 5.5, 8.0, 20.0, 100.0, 1e4}) {
        double ref = static_cast<double>(oracle::erfcx_quad(x));
        CHECK(erfcx(x) == doctest::Approx(ref).epsilon(2e-12));
    }
}

TEST_CASE("relaxation function matches the extended-precision series") {
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        double s_cap = std::min(6.0, std::pow(12.0, beta));
        for (double s : log_space(1e-3, s_cap, 9)) {
            auto ev = mittag_leffler_neg(beta, s);
            double ref = static_cast<double>(oracle::mittag_leffler_series(beta, s));
            CHECK(ev.value == doctest::Approx(ref).epsilon(5e-11));
            CHECK(std::abs(ev.value - ref) <= ev.abs_err_bound + 5e-13);
        }
    }
}

TEST_CASE("relaxation function matches the spectral representation beyond the series range") {
    for (double beta : {0.1, 0.35, 0.62, 0.85}) {
        for (double s : {1.2, 2.0, 3.5, 8.0, 40.0, 1e4}) {
            auto ev = mittag_leffler_neg(beta, s);
            double ref = static_cast<double>(oracle::mittag_leffler_spectral(beta, s));
            CHECK(std::abs(ev.value - ref) <= std::max(1e-10, ev.abs_err_bound + 1e-11));
        }
    }
}

TEST_CASE("relaxation function special cases") {
    CHECK(mittag_leffler_neg(0.5, 0.0).value == 1.0);
    CHECK(mittag_leffler_neg(1.0, 2.5).value == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
    for (double s : {1e-4, 0.3, 2.0, 50.0, 4e3}) {
        double ref = static_cast<double>(oracle::erfcx_quad(s));
        CHECK(mittag_leffler_neg(0.5, s).value == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("relaxation function is monotone and stays in (0, 1]") {
    for (double beta : {0.15, 0.5, 0.85}) {
        double prev = 1.0;
        for (double s : log_space(1e-6, 1e8, 60)) {
            double v = mittag_leffler_neg(beta, s).value;
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("relaxation function bounds sandwich the value strictly") {
    for (double beta : {0.1, 0.4, 0.6, 0.9}) {
        for (double s : log_space(1e-3, 1e4, 25)) {
            double v = mittag_leffler_neg(beta, s).value;
            CHECK(mittag_leffler_lower(beta, s) < v);
            CHECK(v < mittag_leffler_upper(beta, s));
        }
    }
    CHECK_THROWS_AS(mittag_leffler_lower(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler_upper(1.5, 1.0), std::domain_error);
}

TEST_CASE("relaxation function error bounds are honest and small") {
    for (double beta : {0.2, 0.5, 0.8}) {
        for (double s : log_space(1e-4, 1e6, 40)) {
            auto ev = mittag_leffler_neg(beta, s);
            CHECK(ev.abs_err_bound <= 1e-10);
            CHECK(ev.abs_err_bound >= 0.0);
        }
    }
}

TEST_CASE("relaxation function rejects bad arguments") {
    CHECK_THROWS_AS(mittag_leffler_neg(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler_neg(1.2, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler_neg(-0.3, 1.0), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler_neg(0.5, -1e-9), std::domain_error);
    CHECK_THROWS_AS(mittag_leffler_neg(0.5, std::nan("")), std::domain_error);
}

TEST_CASE("modified Bessel K matches quadrature on generic orders") {
    for (double nu : {0.0, 0.2, 0.8, 1.7, 3.3, 7.9}) {
        for (double z : {1e-6, 0.01, 0.5, 2.0, 10.0, 80.0, 400.0}) {
            double ref = static_cast<double>(oracle::bessel_k_quad(nu, z));
            CHECK(bessel_k(nu, z) == doctest::Approx(ref).epsilon(5e-10));
        }
    }
}

TEST_CASE("modified Bessel K half-integer closed forms") {
    for (double z : {1e-4, 0.3, 1.0, 7.0, 300.0}) {
        double k_half = std::sqrt(0.5 * kPi / z) * std::exp(-z);
        CHECK(bessel_k(0.5, z) == doctest::Approx(k_half).epsilon(1e-13));
        CHECK(bessel_k(1.5, z) == doctest::Approx(k_half * (1.0 + 1.0 / z)).epsilon(1e-13));
        CHECK(bessel_k(2.5, z) ==
              doctest::Approx(k_half * (1.0 + 3.0 / z + 3.0 / (z * z))).epsilon(1e-13));
    }
}

TEST_CASE("modified Bessel K symmetry and domain") {
    CHECK(bessel_k(-0.8, 2.0) == bessel_k(0.8, 2.0));
    CHECK(bessel_k(-2.5, 0.7) == bessel_k(2.5, 0.7));
    CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(0.5, -1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(5.0, 1e-300), std::overflow_error);
    CHECK_THROWS_AS(bessel_k(45.5, 1e-6), std::overflow_error);
}
