#pragma once

#include <vector>

#include "frbe/kernels.hpp"
#include "frbe/simulate.hpp"
#include "frbe/spectral.hpp"

namespace frbe {

enum class CovarianceCase { cyclic, origin };

struct CovarianceQuery {
    double t = 1.0;
    double x = 0.0;
    double t2 = 1.0;
    double x2 = 0.0;
    CovarianceCase covariance_case = CovarianceCase::cyclic;

    void validate() const;
};

/// Covariance of the cyclic limit field between (t, x) and (t2, x2):
/// c_cyclic * int h_hat(lambda)^2 cos(lambda x) cos(lambda x2)
/// E_beta(-mu t^beta |lambda|^alpha) E_beta(-mu t2^beta |lambda|^alpha) dlambda,
/// computed as the half sum of the two spatial-lag integrals at |x - x2| and
/// x + x2. Absolute tolerance abs_tol (default 1e-8).
double covariance_limit_cyclic(const ModelParams& mp, const SpectralSpec& sp,
                               const KernelSpec& ks, const CovarianceQuery& q,
                               double abs_tol = 1e-8);

/// Same with the origin singular weight |lambda|^{kappa_0 - 1} and the
/// origin amplitude constant; the quadrature grades toward the singularity.
double covariance_limit_origin(const ModelParams& mp, const SpectralSpec& sp,
                               const KernelSpec& ks, const CovarianceQuery& q,
                               double abs_tol = 1e-8);

/// Spatial-lag form of the limit covariance,
/// c * int h_hat^2 [singular] cos(lambda h) E_t E_t2 dlambda, the function of
/// the separation h that the dependence-range integrals consume. Coincides
/// with covariance_limit_* whenever one spatial argument is 0.
double covariance_spatial_lag(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks,
                              CovarianceCase covariance_case, double t, double t2, double h,
                              double abs_tol = 1e-8);

/// Closed-form benchmark at alpha = beta = a = 1: C * (P ** G_nu)(h) with
/// P(u) = 4 mu t0 / ((2 mu t0)^2 + u^2), G_nu(y) = (2 sqrt(pi) / Gamma(2nu + 1))
/// (|y|/2)^{2nu + 1/2} K_{2nu + 1/2}(|y|), and C = c_cyclic * 2 Gamma(nu + 1/2)^2
/// / Gamma(nu)^2 fixed by the spectral form of the same covariance.
double covariance_closed_form_special(double mu, double t0, double nu, double h, double c_cyclic);

struct McEstimate {
    double estimate = 0.0;
    double std_err = 0.0;
};

/// Sample covariance between the lattice points nearest (q.t, q.x) and
/// (q.t2, q.x2) over an ensemble of realizations sharing one lattice, with a
/// jackknife standard error. Requires at least 100 samples.
McEstimate mc_covariance(const std::vector<FieldSample>& samples, const CovarianceQuery& q);

}
