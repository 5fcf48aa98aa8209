#include "doctest.h"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "frbe/diagnostics.hpp"
#include "frbe/rng.hpp"

#include "reference_setups.hpp"

using frbe::Axis;
using frbe::DependenceReport;
using frbe::DependenceVerdict;
using frbe::EstimateSE;
using frbe::FieldSample;
using frbe::HolderReport;
using frbe::KernelFamily;
using frbe::KernelSpec;
using frbe::ModelParams;
using frbe::SpectralSpec;

namespace {

ModelParams model_with(double alpha, double beta) {
    ModelParams mp;
    mp.alpha = alpha;
    mp.beta = beta;
    mp.gamma_b = 1.0;
    mp.mu = 1.0;
    return mp;
}

KernelSpec matern_kernel(double nu, double a) {
    KernelSpec ks;
    ks.family = KernelFamily::Matern;
    ks.nu = nu;
    ks.a = a;
    return ks;
}

SpectralSpec origin_heavy_spectrum(double kappa0) {
    SpectralSpec sp;
    sp.kappa = {kappa0, 0.3};
    sp.w = {0.0, 1.0};
    sp.A = {0.6, 0.4};
    return sp;
}

/// Fractional Brownian realizations on a uniform positive axis, drawn through
/// the Cholesky factor of the exact covariance 0.5 (s^{2H} + t^{2H} -
/// |s - t|^{2H}); the variogram of lag h is |h|^{2H} exactly, so the fitted
/// regularity order is H up to sampling noise.
std::vector<FieldSample> fbm_ensemble(double hurst, int n_samples, int n_points, double step,
                                      std::uint64_t seed_base) {
    Eigen::VectorXd x(n_points);
    for (int i = 0; i < n_points; ++i) x[i] = step * static_cast<double>(i + 1);
    Eigen::MatrixXd cov(n_points, n_points);
    for (int i = 0; i < n_points; ++i)
        for (int j = 0; j < n_points; ++j)
            cov(i, j) = 0.5 * (std::pow(x[i], 2.0 * hurst) + std::pow(x[j], 2.0 * hurst) -
                               std::pow(std::abs(x[i] - x[j]), 2.0 * hurst));
    cov.diagonal().array() += 1e-12;
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    REQUIRE(llt.info() == Eigen::Success);
    const Eigen::MatrixXd lower = llt.matrixL();

    Eigen::VectorXd t_grid(1);
    t_grid[0] = 1.0;
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    Eigen::VectorXd g(n_points);
    for (int m = 0; m < n_samples; ++m) {
        for (int i = 0; i < n_points; ++i)
            g[i] = frbe::standard_normal_for_node(seed_base + static_cast<std::uint64_t>(m),
                                                  static_cast<std::uint64_t>(i));
        FieldSample s;
        s.t_grid = t_grid;
        s.x_grid = x;
        s.values = (lower * g).transpose();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FieldSample> flat_ensemble(int n_samples, int n_points) {
    Eigen::VectorXd x(n_points);
    for (int i = 0; i < n_points; ++i) x[i] = 0.1 * static_cast<double>(i);
    Eigen::VectorXd t_grid(1);
    t_grid[0] = 1.0;
    std::vector<FieldSample> out(static_cast<std::size_t>(n_samples));
    for (FieldSample& s : out) {
        s.t_grid = t_grid;
        s.x_grid = x;
        s.values = Eigen::MatrixXd::Zero(1, n_points);
    }
    return out;
}

}  // namespace

TEST_CASE("holder exponent formulas for a purely cyclic spectrum") {
    const HolderReport r = frbe::holder_exponents_matern(
        model_with(4.0, 0.5), matern_kernel(0.5, 1.0), refsetup::spectrum_cyclic());
    CHECK(r.eta_star == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(r.gamma_t_sup == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(r.theta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(r.eta_tilde_star.has_value());
    CHECK_FALSE(r.theta_star.has_value());
    CHECK_FALSE(r.empirical_gamma_t.has_value());
    CHECK_FALSE(r.empirical_gamma_x.has_value());
}

TEST_CASE("holder exponent formulas with an origin component") {
    SUBCASE("temporal orders below saturation") {
        const HolderReport r = frbe::holder_exponents_matern(
            model_with(2.0, 0.8), matern_kernel(0.1, 2.0), origin_heavy_spectrum(0.9));
        CHECK(r.eta_star == doctest::Approx(0.35).epsilon(1e-14));
        REQUIRE(r.eta_tilde_star.has_value());
        CHECK(*r.eta_tilde_star == doctest::Approx(0.375).epsilon(1e-14));
        CHECK(r.gamma_t_sup == doctest::Approx(0.3).epsilon(1e-14));
        CHECK(r.theta == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(r.theta_star.has_value());
        CHECK(*r.theta_star == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("spatial orders below saturation") {
        const HolderReport r = frbe::holder_exponents_matern(
            model_with(0.2, 1.0), matern_kernel(0.1, 1.0), origin_heavy_spectrum(0.9));
        CHECK(r.eta_star == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(r.eta_tilde_star.has_value());
        CHECK(*r.eta_tilde_star == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.gamma_t_sup == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.theta == doctest::Approx(0.9).epsilon(1e-14));
        REQUIRE(r.theta_star.has_value());
        CHECK(*r.theta_star == doctest::Approx(0.95).epsilon(1e-14));
    }
}

TEST_CASE("holder exponent computation rejects unsupported inputs") {
    KernelSpec custom;
    custom.family = KernelFamily::Custom;
    custom.custom_ft = [](double) { return 1.0; };
    CHECK_THROWS_AS(frbe::holder_exponents_matern(refsetup::model_half(), custom,
                                                  refsetup::spectrum_cyclic()),
                    std::invalid_argument);
    CHECK_THROWS_AS(frbe::holder_exponents_matern(model_with(0.0, 0.5), matern_kernel(0.5, 1.0),
                                                  refsetup::spectrum_cyclic()),
                    std::invalid_argument);
}

TEST_CASE("variogram regression recovers the fractional Brownian exponent") {
    SUBCASE("rough path") {
        const auto ensemble = fbm_ensemble(0.3, 1200, 64, 0.05, 40000);
        const EstimateSE est = frbe::estimate_holder_from_samples(ensemble, Axis::space);
        CHECK_FALSE(est.degenerate);
        CHECK(est.estimate == doctest::Approx(0.3).epsilon(0.15));
        CHECK(est.std_err > 0.0);
        CHECK(est.std_err < 0.05);
    }
    SUBCASE("smooth path") {
        const auto ensemble = fbm_ensemble(0.7, 1200, 64, 0.05, 50000);
        const EstimateSE est = frbe::estimate_holder_from_samples(ensemble, Axis::space);
        CHECK_FALSE(est.degenerate);
        CHECK(est.estimate == doctest::Approx(0.7).epsilon(0.07));
        CHECK(est.std_err > 0.0);
        CHECK(est.std_err < 0.05);
    }
}

TEST_CASE("variogram regression flags a flat ensemble as degenerate") {
    const auto ensemble = flat_ensemble(1000, 16);
    const EstimateSE est = frbe::estimate_holder_from_samples(ensemble, Axis::space);
    CHECK(est.degenerate);
    CHECK(est.estimate == 1.0);
    CHECK(est.std_err == 0.0);
}

TEST_CASE("variogram regression input validation") {
    CHECK_THROWS_AS(frbe::estimate_holder_from_samples(flat_ensemble(999, 16), Axis::space),
                    std::invalid_argument);

    const auto ensemble = flat_ensemble(1000, 16);
    CHECK_THROWS_AS(frbe::estimate_holder_from_samples(ensemble, Axis::time),
                    std::invalid_argument);

    auto jagged = flat_ensemble(1000, 16);
    for (FieldSample& s : jagged) s.x_grid[15] += 0.05;
    CHECK_THROWS_AS(frbe::estimate_holder_from_samples(jagged, Axis::space),
                    std::invalid_argument);

    auto reversed = flat_ensemble(1000, 16);
    for (FieldSample& s : reversed) s.x_grid.reverseInPlace();
    CHECK_THROWS_AS(frbe::estimate_holder_from_samples(reversed, Axis::space),
                    std::invalid_argument);

    auto mixed = flat_ensemble(1000, 16);
    mixed[500].x_grid = Eigen::VectorXd::LinSpaced(17, 0.0, 1.6);
    mixed[500].values = Eigen::MatrixXd::Zero(1, 17);
    CHECK_THROWS_AS(frbe::estimate_holder_from_samples(mixed, Axis::space),
                    std::invalid_argument);
}

TEST_CASE("dependence probe validates its arguments") {
    const ModelParams mp = refsetup::model_half();
    const SpectralSpec sp = refsetup::spectrum_cyclic();
    const KernelSpec ks = refsetup::kernel_half();
    const std::vector<double> ok{1.0};

    CHECK_THROWS_AS(frbe::dependence_probe(mp, sp, ks, 0.0, 0.0, ok, ok),
                    std::invalid_argument);
    CHECK_THROWS_AS(frbe::dependence_probe(mp, sp, ks, 1.0, 0.0, {}, ok),
                    std::invalid_argument);
    CHECK_THROWS_AS(frbe::dependence_probe(mp, sp, ks, 1.0, 0.0, ok, {2.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(frbe::dependence_probe(mp, sp, ks, 1.0, 0.0, {-1.0, 2.0}, ok),
                    std::invalid_argument);
    CHECK_THROWS_AS(frbe::dependence_probe(mp, sp, ks, 1.0, 0.0, ok, ok, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(frbe::dependence_probe(mp, sp, ks, 1.0, 0.0, ok, ok, 5.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("slow temporal decay registers as long-range dependence") {
    const DependenceReport rep = frbe::dependence_probe(
        refsetup::model_half(), refsetup::spectrum_cyclic(), refsetup::kernel_half(), 1.0, 0.0,
        {4.0, 40.0, 400.0}, {1.0, 2.0}, 4.0, 1e-6);

    REQUIRE(rep.time_partial_integrals.size() == 3);
    CHECK(rep.time_partial_integrals[0].first == 4.0);
    CHECK(rep.time_partial_integrals[2].first == 400.0);
    CHECK(rep.time_partial_integrals[0].second > 0.0);
    CHECK(rep.time_partial_integrals[1].second > rep.time_partial_integrals[0].second);
    CHECK(rep.time_partial_integrals[2].second > rep.time_partial_integrals[1].second);
    CHECK(rep.verdict_time == DependenceVerdict::LRD);
    CHECK(rep.time_growth_exponent > 0.3);
    CHECK(rep.time_growth_exponent < 0.95);
}

TEST_CASE("integrable spatial tail registers as short-range dependence") {
    const DependenceReport rep = frbe::dependence_probe(
        model_with(1.0, 1.0), refsetup::spectrum_cyclic(), refsetup::kernel_half(), 1.0, 0.0,
        {1.0, 2.0}, {5.0, 10.0, 20.0, 40.0, 49.99, 50.0}, 5.0, 1e-4);

    REQUIRE(rep.space_partial_integrals.size() == 6);
    CHECK(rep.space_partial_integrals.back().first == 50.0);
    for (std::size_t k = 1; k < rep.space_partial_integrals.size(); ++k)
        CHECK(rep.space_partial_integrals[k].second >=
              rep.space_partial_integrals[k - 1].second);
    CHECK(rep.verdict_space == DependenceVerdict::SRD);
    CHECK(rep.space_tail_exponent > 1.7);
    CHECK(rep.space_tail_exponent < 2.3);
}

TEST_CASE("origin singularity registers as long-range spatial dependence") {
    const DependenceReport rep = frbe::dependence_probe(
        model_with(1.0, 1.0), refsetup::spectrum_origin(), refsetup::kernel_half(), 1.0, 0.0,
        {1.0, 2.0}, {2.0, 5.0, 12.0, 30.0}, 3.0, 1e-4);

    REQUIRE(rep.space_partial_integrals.size() == 4);
    CHECK(rep.verdict_space == DependenceVerdict::LRD);
    CHECK(rep.space_tail_exponent > 0.05);
    CHECK(rep.space_tail_exponent < 0.45);
}
