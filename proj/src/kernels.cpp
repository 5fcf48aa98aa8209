#include "frbe/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "frbe/specfun.hpp"

namespace frbe {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411451828;

}  // namespace

void KernelSpec::validate() const {
    if (family == KernelFamily::Matern) {
        if (!(nu > 0.0) || !std::isfinite(nu))
            throw std::invalid_argument("kernel.nu must be finite and > 0");
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("kernel.a must be finite and > 0");
        return;
    }
    if (!custom_ft)
        throw std::invalid_argument("kernel.custom_ft must be set for the custom family");
    static const double probes[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    for (double lambda : probes) {
        const double plus = custom_ft(lambda);
        const double minus = custom_ft(-lambda);
        if (!std::isfinite(plus) || !std::isfinite(minus))
            throw std::invalid_argument("kernel.custom_ft must be finite at probe frequencies");
        if (std::abs(plus - minus) > 1e-9 * (1.0 + std::abs(plus)))
            throw std::invalid_argument("kernel.custom_ft must be an even function");
    }
}

double matern(const KernelSpec& spec, double x) {
    spec.validate();
    if (spec.family != KernelFamily::Matern)
        throw std::invalid_argument("matern: kernel family must be Matern");
    const double z = spec.a * std::abs(x);
    if (z < 1e-8) return 1.0;
    if (z > 700.0) return 0.0;
    return std::pow(z, spec.nu) * bessel_k(spec.nu, z) /
           (std::pow(2.0, spec.nu - 1.0) * gamma_fn(spec.nu));
}

double matern_ft(const KernelSpec& spec, double lambda) {
    spec.validate();
    if (spec.family != KernelFamily::Matern)
        throw std::invalid_argument("matern_ft: kernel family must be Matern");
    const double ratio = gamma_fn(spec.nu + 0.5) / gamma_fn(spec.nu);
    return 2.0 * kSqrtPi * ratio * std::pow(spec.a, 2.0 * spec.nu) *
           std::pow(spec.a * spec.a + lambda * lambda, -(spec.nu + 0.5));
}

double kernel_ft_radial(const KernelSpec& spec, double lambda) {
    spec.validate();
    if (spec.family == KernelFamily::Matern) return matern_ft(spec, lambda);
    return spec.custom_ft(lambda);
}

double kernel_ft(const KernelSpec& spec, double lambda, double x) {
    return std::cos(lambda * x) * kernel_ft_radial(spec, lambda);
}

}
