#include "frbe/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "frbe/specfun.hpp"

namespace frbe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.7724538509055160272981674833411451828;

// c1(kappa_j) = 2^{[j=0]} 2^{(1-kappa)/2} / (sqrt(pi) Gamma(kappa/2))
double c1_factor(std::size_t j, double kappa) {
    const double p = 0.5 * (1.0 - kappa) + (j == 0 ? 1.0 : 0.0);
    return std::pow(2.0, p) / (kSqrtPi * gamma_fn(0.5 * kappa));
}

// K_{(kappa-1)/2}(|u|) |u|^{(kappa-1)/2}, the radial profile of one spectral
// component; diverges like |u|^{kappa-1} as u -> 0
double singular_branch(double kappa, double u) {
    const double au = std::abs(u);
    if (au == 0.0) return std::numeric_limits<double>::infinity();
    if (au > 740.0) return 0.0;
    const double p = 0.5 * (kappa - 1.0);
    return bessel_k(p, au) * std::pow(au, p);
}

}  // namespace

void ModelParams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("model.alpha must be finite and >= 0");
    if (!(beta > 0.0) || beta > 1.0 || !std::isfinite(beta))
        throw std::invalid_argument("model.beta must lie in (0, 1]");
    if (!(gamma_b > 0.0) || !std::isfinite(gamma_b))
        throw std::invalid_argument("model.gamma must be finite and > 0");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("model.mu must be finite and > 0");
}

void SpectralSpec::validate() const {
    if (kappa.empty() || kappa.size() != w.size() || kappa.size() != A.size())
        throw std::invalid_argument(
            "spectrum.kappa, spectrum.w, spectrum.A must have equal nonzero length");
    if (w[0] != 0.0) throw std::invalid_argument("spectrum.w[0] must be 0");
    double mass = 0.0;
    for (std::size_t j = 0; j < kappa.size(); ++j) {
        if (!(kappa[j] > 0.0 && kappa[j] < 1.0))
            throw std::invalid_argument("spectrum.kappa[" + std::to_string(j) +
                                        "] must lie in (0, 1)");
        if (!(A[j] >= 0.0) || !std::isfinite(A[j]))
            throw std::invalid_argument("spectrum.A[" + std::to_string(j) +
                                        "] must be finite and >= 0");
        if (j >= 1 && !(w[j] > 0.0))
            throw std::invalid_argument("spectrum.w[" + std::to_string(j) + "] must be > 0");
        for (std::size_t i = 0; i < j; ++i)
            if (w[i] == w[j])
                throw std::invalid_argument("spectrum.w entries must be pairwise distinct");
        mass += A[j];
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw std::invalid_argument("spectrum.A must sum to 1");
}

double covariance_init(const SpectralSpec& spec, double x) {
    spec.validate();
    double r = 0.0;
    for (std::size_t j = 0; j < spec.kappa.size(); ++j) {
        if (spec.A[j] == 0.0) continue;
        r += spec.A[j] * std::cos(spec.w[j] * x) *
             std::pow(1.0 + x * x, -0.5 * spec.kappa[j]);
    }
    return r;
}

double spectral_density(const SpectralSpec& spec, double lambda) {
    spec.validate();
    double f = 0.0;
    for (std::size_t j = 1; j < spec.kappa.size(); ++j) {
        if (spec.A[j] == 0.0) continue;
        f += 0.5 * c1_factor(j, spec.kappa[j]) * spec.A[j] *
             (singular_branch(spec.kappa[j], lambda + spec.w[j]) +
              singular_branch(spec.kappa[j], lambda - spec.w[j]));
    }
    if (spec.has_origin_component())
        f += 0.5 * c1_factor(0, spec.kappa[0]) * spec.A[0] *
             singular_branch(spec.kappa[0], lambda);
    return f;
}

double spectral_density_near(const SpectralSpec& spec, std::size_t j, double y) {
    spec.validate();
    if (j >= spec.kappa.size())
        throw std::invalid_argument("spectrum component index out of range");
    const double lambda = spec.w[j] + y;
    double f = 0.0;
    for (std::size_t k = 1; k < spec.kappa.size(); ++k) {
        if (spec.A[k] == 0.0) continue;
        const double up = (k == j) ? 2.0 * spec.w[j] + y : lambda + spec.w[k];
        const double down = (k == j) ? y : lambda - spec.w[k];
        f += 0.5 * c1_factor(k, spec.kappa[k]) * spec.A[k] *
             (singular_branch(spec.kappa[k], up) + singular_branch(spec.kappa[k], down));
    }
    if (spec.has_origin_component())
        f += 0.5 * c1_factor(0, spec.kappa[0]) * spec.A[0] *
             singular_branch(spec.kappa[0], (j == 0) ? y : lambda);
    return f;
}

LimitConstants limit_constants(const SpectralSpec& spec) {
    spec.validate();
    LimitConstants lc;
    lc.c1.resize(spec.kappa.size());
    for (std::size_t j = 0; j < spec.kappa.size(); ++j)
        lc.c1[j] = c1_factor(j, spec.kappa[j]);
    lc.c_cyclic = 0.0;
    for (std::size_t j = 1; j < spec.kappa.size(); ++j) {
        if (spec.A[j] == 0.0) continue;
        const double p = 0.5 * (spec.kappa[j] - 1.0);
        lc.c_cyclic += lc.c1[j] * spec.A[j] * bessel_k(p, spec.w[j]) * std::pow(spec.w[j], p);
    }
    lc.c_origin = 0.0;
    lc.origin_amplitude = 0.0;
    if (spec.has_origin_component()) {
        // Combining the duplication and reflection formulas,
        //   (c1(k)/2) Gamma((1-k)/2) 2^{(1-k)/2 - 1} = 1/(2 Gamma(k) cos(k pi/2)),
        // the density behaves like origin_amplitude * |lambda|^{kappa0 - 1}
        // near zero, which is half of the conventional constant c_origin.
        lc.c_origin = spec.A[0] /
                      (gamma_fn(spec.kappa[0]) * std::cos(0.5 * kPi * spec.kappa[0]));
        lc.origin_amplitude = 0.5 * lc.c_origin;
    }
    return lc;
}

double green_ft(const ModelParams& params, double t, double lambda) {
    params.validate();
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("green_ft: t must be finite and positive");
    if (!std::isfinite(lambda)) throw std::invalid_argument("green_ft: lambda must be finite");
    const double al = std::abs(lambda);
    const double s = params.mu * std::pow(t, params.beta) * std::pow(al, params.alpha) *
                     std::pow(1.0 + lambda * lambda, 0.5 * params.gamma_b);
    return mittag_leffler_neg(params.beta, s).value;
}

}
