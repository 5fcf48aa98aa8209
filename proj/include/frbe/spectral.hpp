#pragma once

#include <vector>

namespace frbe {

/// Exponents and diffusivity of the fractional evolution equation
/// d^beta u / dt^beta = -mu (I - Laplacian)^{gamma/2} (-Laplacian)^{alpha/2} u.
struct ModelParams {
    double alpha = 1.0;    ///< Riesz exponent, >= 0
    double beta = 0.5;     ///< fractional time order, in (0, 1]
    double gamma_b = 1.0;  ///< Bessel exponent, > 0
    double mu = 1.0;       ///< diffusivity, > 0

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Spectral model of the initial condition: a unit-mass mixture of components
/// centered at frequencies +-w_j with local singularity exponents kappa_j.
/// Index j = 0 is the component at the origin (w[0] = 0); its weight A[0] may
/// be zero, in which case the model has cyclic singularities only.
struct SpectralSpec {
    std::vector<double> kappa;  ///< kappa_j in (0, 1), j = 0..n
    std::vector<double> w;      ///< w_0 = 0; w_j > 0 pairwise distinct for j >= 1
    std::vector<double> A;      ///< nonnegative weights summing to 1

    void validate() const;
    std::size_t n() const { return kappa.size() - 1; }
    bool has_origin_component() const { return A.at(0) > 0.0; }
};

/// Constants entering the limit fields. c_origin is A_0 / (Gamma(kappa_0)
/// cos(kappa_0 pi / 2)); by the duplication and reflection formulas the
/// spectral density behaves like (c_origin / 2) |lambda|^{kappa_0 - 1} as
/// lambda -> 0, so the usable local amplitude is origin_amplitude = c_origin/2.
struct LimitConstants {
    double c_cyclic = 0.0;
    double c_origin = 0.0;
    double origin_amplitude = 0.0;
    std::vector<double> c1;
};

/// Covariance of the initial condition,
/// r(x) = sum_j A_j cos(w_j x) (1 + x^2)^{-kappa_j / 2}; equals 1 at x = 0.
double covariance_init(const SpectralSpec& spec, double x);

/// Spectral density f_xi(lambda): even, nonnegative, unit mass, with
/// integrable singularities at +-w_j (when A_j > 0) and at 0 (when A_0 > 0).
/// Returns +infinity exactly at those points.
double spectral_density(const SpectralSpec& spec, double lambda);

/// Spectral density at lambda = w[j] + y with component j's near branch
/// formed from the exact offset y. Quadrature panels that touch w[j] must
/// use this form: reconstructing the offset as lambda - w[j] in floating
/// point rounds distances below ulp(w[j]) away and loses the sliver of mass
/// next to the singularity.
double spectral_density_near(const SpectralSpec& spec, std::size_t j, double y);

LimitConstants limit_constants(const SpectralSpec& spec);

/// Fourier multiplier of the Green function:
/// E_beta(-mu t^beta |lambda|^alpha (1 + lambda^2)^{gamma/2}), in (0, 1].
double green_ft(const ModelParams& params, double t, double lambda);

}
