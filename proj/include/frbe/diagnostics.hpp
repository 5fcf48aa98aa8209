#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "frbe/covariance.hpp"
#include "frbe/kernels.hpp"
#include "frbe/simulate.hpp"
#include "frbe/spectral.hpp"

namespace frbe {

struct EstimateSE {
    double estimate = 0.0;
    double std_err = 0.0;
    bool degenerate = false;
};

/// Holder regularity orders of the limit fields for the Matern kernel.
/// eta_star = min(1, (4 nu + 1) / (2 alpha)) and, when the origin component
/// is present, eta_tilde_star = min(1, (4 nu + 2 - kappa_0) / (2 alpha));
/// temporal order gamma_t_sup = beta * eta (of the active case); spatial
/// orders theta = min(1, alpha + 2 nu + 1/2) and
/// theta_star = min(1, alpha + 2 nu + 1 - kappa_0 / 2).
struct HolderReport {
    double eta_star = 0.0;
    std::optional<double> eta_tilde_star;
    double gamma_t_sup = 0.0;
    double theta = 0.0;
    std::optional<double> theta_star;
    std::optional<EstimateSE> empirical_gamma_t;
    std::optional<EstimateSE> empirical_gamma_x;
};

HolderReport holder_exponents_matern(const ModelParams& mp, const KernelSpec& ks,
                                     const SpectralSpec& sp);

enum class Axis { time, space };
enum class DependenceVerdict { LRD, SRD, inconclusive };

/// Finite-horizon evidence for the range of dependence: partial integrals of
/// the absolute covariance in time lag (up to each T) and in space lag (up to
/// each H), with fitted growth/decay exponents.
struct DependenceReport {
    std::vector<std::pair<double, double>> time_partial_integrals;
    std::vector<std::pair<double, double>> space_partial_integrals;
    DependenceVerdict verdict_time = DependenceVerdict::inconclusive;
    DependenceVerdict verdict_space = DependenceVerdict::inconclusive;
    /// Least-squares slope of log partial integral vs log T.
    double time_growth_exponent = 0.0;
    /// Fitted decay exponent p of the spatial increments (integrand ~ h^{-p}).
    double space_tail_exponent = 0.0;
};

/// Variogram regression estimate of the Holder order along one lattice axis:
/// fits log E|U(. + h) - U(.)|^2 against 2 gamma log h over the smallest
/// decade of lags. Requires an ensemble of at least 1000 realizations sharing
/// a lattice with at least 11 points on the chosen axis.
EstimateSE estimate_holder_from_samples(const std::vector<FieldSample>& ensemble, Axis axis);

/// Partial dependence integrals at (t0, x0): int_0^T |Cov(h)| dh over time
/// lags and int_{|h| <= H} |Cov(h)| dh over space lags, with the covariance
/// taken as the spatial-lag form of the limit covariance. The time verdict is
/// LRD when the partial integrals increase monotonically by at least
/// growth_factor overall; the space verdict is SRD when successive
/// differences fall below cauchy_tol.
DependenceReport dependence_probe(const ModelParams& mp, const SpectralSpec& sp,
                                  const KernelSpec& ks, double t0, double x0,
                                  const std::vector<double>& T_list,
                                  const std::vector<double>& H_list,
                                  double growth_factor = 5.0, double cauchy_tol = 1e-6);

}
