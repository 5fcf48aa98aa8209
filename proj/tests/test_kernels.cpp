#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "frbe/kernels.hpp"
#include "frbe/quadrature.hpp"

#include "reference_setups.hpp"

using frbe::KernelFamily;
using frbe::KernelSpec;

namespace {

KernelSpec matern_spec(double nu, double a) {
    KernelSpec s;
    s.family = KernelFamily::Matern;
    s.nu = nu;
    s.a = a;
    return s;
}

constexpr double kSqrtPi = 1.7724538509055160272981674833411451828;

}  // namespace

TEST_CASE("kernel specification validation") {
    CHECK_NOTHROW(refsetup::kernel_half().validate());

    KernelSpec s = matern_spec(0.0, 1.0);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = matern_spec(1.5, -2.0);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = matern_spec(std::numeric_limits<double>::quiet_NaN(), 1.0);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    KernelSpec custom;
    custom.family = KernelFamily::Custom;
    CHECK_THROWS_AS(custom.validate(), std::invalid_argument);

    custom.custom_ft = [](double lambda) { return 2.0 / (1.0 + lambda * lambda); };
    CHECK_NOTHROW(custom.validate());

    custom.custom_ft = [](double lambda) { return lambda; };
    CHECK_THROWS_AS(custom.validate(), std::invalid_argument);

    custom.custom_ft = [](double lambda) { return 1.0 / std::abs(lambda); };
    CHECK_THROWS_AS(custom.validate(), std::invalid_argument);
}

TEST_CASE("matern correlation closed forms at half-integer smoothness") {
    const KernelSpec half = matern_spec(0.5, 1.0);
    const KernelSpec three_half = matern_spec(1.5, 2.0);

    CHECK(frbe::matern(half, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(frbe::matern(three_half, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

    for (double x : {0.05, 0.7, 1.0, 3.3, 12.0}) {
        CHECK(frbe::matern(half, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        const double z = 2.0 * x;
        CHECK(frbe::matern(three_half, x) ==
              doctest::Approx((1.0 + z) * std::exp(-z)).epsilon(1e-12));
        CHECK(frbe::matern(half, -x) == doctest::Approx(frbe::matern(half, x)).epsilon(1e-15));
    }

    CHECK(frbe::matern(half, 800.0) == 0.0);

    const KernelSpec rough = matern_spec(0.8, 1.0);
    double prev = 1.0;
    for (double x : {0.2, 0.6, 1.4, 3.0, 8.0}) {
        const double h = frbe::matern(rough, x);
        CHECK(h > 0.0);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("matern transform closed forms") {
    const KernelSpec half = matern_spec(0.5, 1.0);
    const KernelSpec three_half = matern_spec(1.5, 1.0);

    for (double lam : {0.0, 0.4, 1.0, 2.5, 9.0}) {
        CHECK(frbe::matern_ft(half, lam) ==
              doctest::Approx(2.0 / (1.0 + lam * lam)).epsilon(1e-13));
        const double d = 1.0 + lam * lam;
        CHECK(frbe::matern_ft(three_half, lam) ==
              doctest::Approx(4.0 / (d * d)).epsilon(1e-13));
    }

    const KernelSpec scaled = matern_spec(0.5, 3.0);
    for (double lam : {0.0, 1.0, 4.0}) {
        CHECK(frbe::matern_ft(scaled, lam) ==
              doctest::Approx(2.0 * 3.0 / (9.0 + lam * lam)).epsilon(1e-13));
    }

    const KernelSpec rough = matern_spec(0.8, 1.3);
    const double at_zero = 2.0 * kSqrtPi * std::tgamma(1.3) / std::tgamma(0.8) *
                           std::pow(1.3, 2.0 * 0.8) * std::pow(1.3 * 1.3, -1.3);
    CHECK(frbe::matern_ft(rough, 0.0) == doctest::Approx(at_zero).epsilon(1e-13));
}

TEST_CASE("matern transform agrees with the numeric cosine transform") {
    const KernelSpec spec = matern_spec(0.8, 1.3);
    frbe::QuadOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-11;

    for (double lam : {0.0, 0.7, 2.1}) {
        opt.max_panel = lam > 0.0 ? 1.5 / lam : std::numeric_limits<double>::infinity();
        auto f = [&](double x) { return frbe::matern(spec, x) * std::cos(lam * x); };
        const double numeric = 2.0 * frbe::integrate_gk(f, 0.0, 30.0 / spec.a, opt).value;
        CHECK(frbe::matern_ft(spec, lam) == doctest::Approx(numeric).epsilon(1e-8));
    }
}

TEST_CASE("radial transform dispatches on the kernel family") {
    const KernelSpec half = matern_spec(0.5, 1.0);
    CHECK(frbe::kernel_ft_radial(half, 1.2) ==
          doctest::Approx(frbe::matern_ft(half, 1.2)).epsilon(1e-15));

    KernelSpec custom;
    custom.family = KernelFamily::Custom;
    custom.custom_ft = [](double lambda) { return std::exp(-lambda * lambda); };
    CHECK(frbe::kernel_ft_radial(custom, 0.9) ==
          doctest::Approx(std::exp(-0.81)).epsilon(1e-15));

    CHECK_THROWS_AS(frbe::matern(custom, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(frbe::matern_ft(custom, 1.0), std::invalid_argument);

    CHECK(frbe::kernel_ft(half, 1.2, 2.0) ==
          doctest::Approx(std::cos(2.4) * frbe::matern_ft(half, 1.2)).epsilon(1e-14));
}
