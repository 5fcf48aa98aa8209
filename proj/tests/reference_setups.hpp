#pragma once

#include "frbe/kernels.hpp"
#include "frbe/simulate.hpp"
#include "frbe/spectral.hpp"

namespace refsetup {

// Shared worked example: alpha = 1, beta = 1/2, gamma = 1, mu = 1, with a
// three-component cyclic spectrum and a Matern(1/2, 1) response kernel.
inline frbe::ModelParams model_half() {
    frbe::ModelParams mp;
    mp.alpha = 1.0;
    mp.beta = 0.5;
    mp.gamma_b = 1.0;
    mp.mu = 1.0;
    return mp;
}

inline frbe::SpectralSpec spectrum_cyclic() {
    frbe::SpectralSpec s;
    s.kappa = {0.2, 0.2, 0.6, 0.8};
    s.w = {0.0, 0.8, 1.2, 2.0};
    s.A = {0.0, 0.40, 0.35, 0.25};
    return s;
}

inline frbe::SpectralSpec spectrum_origin() {
    frbe::SpectralSpec s;
    s.kappa = {0.2, 0.2, 0.6, 0.8};
    s.w = {0.0, 0.8, 1.2, 2.0};
    s.A = {0.40, 0.24, 0.21, 0.15};
    return s;
}

inline frbe::KernelSpec kernel_half() {
    frbe::KernelSpec k;
    k.family = frbe::KernelFamily::Matern;
    k.nu = 0.5;
    k.a = 1.0;
    return k;
}

inline frbe::FrequencyGrid grid_cyclic() { return frbe::make_grid(0.01, 1000, 0.0); }
inline frbe::FrequencyGrid grid_origin() { return frbe::make_grid(0.01, 1000, 0.5); }

// Limit constants for the two spectra above, frozen from an independent
// high-precision evaluation of the defining integrals.
inline constexpr double kCyclicConstantA = 0.05157129539755134;
inline constexpr double kCyclicConstantB = 0.030942777238530797;
inline constexpr double kOriginConstantB = 0.09161385489905706;

}  // namespace refsetup
