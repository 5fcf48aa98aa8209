#include "doctest.h"

#include <cmath>

#include "frbe/errors.hpp"
#include "frbe/quadrature.hpp"

using namespace frbe;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("adaptive rule reproduces closed-form integrals") {
    auto poly = integrate_gk([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 3.0);
    CHECK(poly.value == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(poly.abs_err < 1e-10);

    auto osc = integrate_gk([](double x) { return std::cos(40.0 * x); }, 0.0, 2.0);
    CHECK(osc.value == doctest::Approx(std::sin(80.0) / 40.0).epsilon(1e-10));

    QuadOptions tight;
    tight.abs_tol = 1e-13;
    tight.rel_tol = 1e-13;
    auto gauss = integrate_gk([](double x) { return std::exp(-x * x); }, -8.0, 8.0, tight);
    CHECK(gauss.value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("adaptive rule honors the panel-width cap") {
    QuadOptions opt;
    opt.max_panel = 0.05;
    long evals_capped;
    {
        auto r = integrate_gk([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0, opt);
        CHECK(r.value == doctest::Approx(std::sin(200.0) / 200.0).epsilon(1e-9));
        evals_capped = r.evals;
    }
    CHECK(evals_capped >= 15 * 20);
}

TEST_CASE("adaptive rule reports failure instead of a silent bad value") {
    QuadOptions opt;
    opt.abs_tol = 1e-16;
    opt.rel_tol = 1e-16;
    opt.max_panels = 30;
    CHECK_THROWS_AS(integrate_gk([](double x) { return std::cos(300.0 * x * x); }, 0.0, 20.0, opt),
                    ToleranceError);
}

TEST_CASE("double-exponential rule absorbs endpoint singularities") {
    auto sqrt_sing = integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(sqrt_sing.value == doctest::Approx(2.0).epsilon(1e-11));

    auto log_sing = integrate_tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(log_sing.value == doctest::Approx(-1.0).epsilon(1e-11));

    auto power = integrate_tanh_sinh([](double x) { return std::pow(x, -0.8); }, 0.0, 2.0);
    CHECK(power.value == doctest::Approx(std::pow(2.0, 0.2) / 0.2).epsilon(1e-10));

    auto both_ends =
        integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0);
    CHECK(both_ends.value == doctest::Approx(kPi).epsilon(5e-8));

    auto reversed =
        integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 1.0, 0.0);
    CHECK(reversed.value == doctest::Approx(-2.0).epsilon(1e-11));
}

TEST_CASE("exp-sinh rule handles decaying integrands on the half line") {
    auto expo = integrate_exp_sinh([](double x) { return std::exp(-x); }, 1.0);
    CHECK(expo.value == doctest::Approx(1.0).epsilon(1e-11));

    auto gamma_15 = integrate_exp_sinh([](double x) { return std::sqrt(x) * std::exp(-x); }, 1.0);
    CHECK(gamma_15.value == doctest::Approx(std::tgamma(1.5)).epsilon(1e-11));

    auto scaled = integrate_exp_sinh([](double x) { return std::exp(-50.0 * x); }, 1.0 / 51.0);
    CHECK(scaled.value == doctest::Approx(0.02).epsilon(1e-10));
}

TEST_CASE("half-line extension closes power-law tails") {
    auto cauchy =
        integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 2.0, 1e-12);
    CHECK(cauchy.value == doctest::Approx(0.5 * kPi).epsilon(1e-9));

    auto shifted =
        integrate_to_infinity([](double x) { return std::pow(1.0 + x, -3.0); }, 1.0, 2.0, 1e-13);
    CHECK(shifted.value == doctest::Approx(0.125).epsilon(1e-9));

    CHECK_THROWS_AS(
        integrate_to_infinity([](double x) { return 1.0 / (1.0 + x); }, 0.0, 1.0, 1e-10),
        ToleranceError);
}

TEST_CASE("reported error bounds cover the true error") {
    auto r1 = integrate_gk([](double x) { return std::sin(3.0 * x); }, 0.0, 5.0);
    double exact1 = (1.0 - std::cos(15.0)) / 3.0;
    CHECK(std::abs(r1.value - exact1) <= std::max(r1.abs_err, 5e-15));

    auto r2 = integrate_tanh_sinh([](double x) { return std::pow(x, -0.5); }, 0.0, 4.0);
    CHECK(std::abs(r2.value - 4.0) <= std::max(r2.abs_err, 1e-12));
}
