#pragma once

#include <functional>

namespace frbe {

enum class KernelFamily { Matern, Custom };

/// Smoothing kernel specification. The Matern family is built in; custom
/// kernels are supplied through their radial Fourier transform h_hat, which
/// is all the downstream formulas consume.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern;
    double nu = 0.5;  ///< Matern smoothness, > 0
    double a = 1.0;   ///< Matern inverse scale, > 0
    std::function<double(double)> custom_ft;

    /// Validates parameters; custom transforms are checked numerically for
    /// evenness and finiteness on a probe grid.
    void validate() const;
};

/// Matern correlation h(x) = (a|x|)^nu K_nu(a|x|) / (2^{nu-1} Gamma(nu)),
/// with h(0) = 1.
double matern(const KernelSpec& spec, double x);

/// Fourier transform of the Matern correlation:
/// h_hat(lambda) = 2 sqrt(pi) a^{2nu} Gamma(nu + 1/2) / Gamma(nu) * (a^2 + lambda^2)^{-(nu + 1/2)}.
double matern_ft(const KernelSpec& spec, double lambda);

/// Radial transform h_hat(lambda) for either family.
double kernel_ft_radial(const KernelSpec& spec, double lambda);

/// Real form of the smoothing kernel's transform at location x:
/// cos(lambda x) * h_hat(lambda).
double kernel_ft(const KernelSpec& spec, double lambda, double x);

}
