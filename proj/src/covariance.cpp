#include "frbe/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "frbe/errors.hpp"
#include "frbe/quadrature.hpp"
#include "frbe/specfun.hpp"

namespace frbe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.7724538509055160272981674833411451828;

double oscillation_cap(double h) {
    return std::abs(h) > 1e-9 ? 0.25 * kPi / std::abs(h)
                              : std::numeric_limits<double>::infinity();
}

// 2 c int_0^inf h_hat(lambda)^2 [lambda^{kappa0 - 1}] cos(lambda h)
// E_beta(-mu t^beta lambda^alpha) E_beta(-mu t2^beta lambda^alpha) dlambda
double lag_integral(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks,
                    CovarianceCase covariance_case, double t, double t2, double h,
                    double abs_tol) {
    mp.validate();
    sp.validate();
    ks.validate();
    if (!(t >= 0.0) || !(t2 >= 0.0) || !std::isfinite(t) || !std::isfinite(t2))
        throw std::invalid_argument("covariance times must be finite and >= 0");
    if (!std::isfinite(h)) throw std::invalid_argument("covariance lag must be finite");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("covariance abs_tol must be > 0");

    const bool origin = covariance_case == CovarianceCase::origin;
    if (origin && !sp.has_origin_component())
        throw std::invalid_argument("origin covariance requires a spectrum with A[0] > 0");
    if (!origin && sp.has_origin_component())
        throw std::invalid_argument("cyclic covariance requires a spectrum with A[0] = 0");

    const LimitConstants lc = limit_constants(sp);
    const double c = origin ? lc.origin_amplitude : lc.c_cyclic;
    if (c == 0.0) return 0.0;
    const double kappa0 = origin ? sp.kappa[0] : 0.0;
    const double tb = std::pow(t, mp.beta);
    const double t2b = std::pow(t2, mp.beta);

    auto integrand = [&](double l) {
        const double hh = kernel_ft_radial(ks, l);
        if (hh == 0.0) return 0.0;
        const double la = std::pow(l, mp.alpha);
        const double e1 = mittag_leffler_neg(mp.beta, mp.mu * la * tb).value;
        const double e2 = mittag_leffler_neg(mp.beta, mp.mu * la * t2b).value;
        const double sing = origin ? std::pow(l, kappa0 - 1.0) : 1.0;
        return hh * hh * sing * e1 * e2 * std::cos(l * h);
    };

    const double inner_tol = abs_tol / (2.0 * c);
    QuadOptions opt;
    opt.abs_tol = 0.25 * inner_tol;
    opt.rel_tol = 0.0;
    opt.max_panel = oscillation_cap(h);

    double integral = 0.0;
    double lo = 0.0;
    if (origin) {
        QuadOptions ts;
        ts.abs_tol = 0.25 * inner_tol;
        ts.rel_tol = 0.0;
        integral += integrate_tanh_sinh(integrand, 0.0, 1.0, ts).value;
        lo = 1.0;
    }
    integral += integrate_to_infinity(integrand, lo, 2.0, 0.125 * inner_tol, opt).value;
    return 2.0 * c * integral;
}

}  // namespace

void CovarianceQuery::validate() const {
    if (!(t > 0.0) || !(t2 > 0.0) || !std::isfinite(t) || !std::isfinite(t2))
        throw std::invalid_argument("covariance query times must be finite and > 0");
    if (!std::isfinite(x) || !std::isfinite(x2))
        throw std::invalid_argument("covariance query positions must be finite");
}

double covariance_limit_cyclic(const ModelParams& mp, const SpectralSpec& sp,
                               const KernelSpec& ks, const CovarianceQuery& q,
                               double abs_tol) {
    q.validate();
    if (q.covariance_case != CovarianceCase::cyclic)
        throw std::invalid_argument("covariance_limit_cyclic expects a cyclic-case query");
    const double half_tol = 0.5 * abs_tol;
    const double diff = lag_integral(mp, sp, ks, CovarianceCase::cyclic, q.t, q.t2,
                                     std::abs(q.x - q.x2), half_tol);
    const double sum = lag_integral(mp, sp, ks, CovarianceCase::cyclic, q.t, q.t2,
                                    q.x + q.x2, half_tol);
    return 0.5 * (diff + sum);
}

double covariance_limit_origin(const ModelParams& mp, const SpectralSpec& sp,
                               const KernelSpec& ks, const CovarianceQuery& q,
                               double abs_tol) {
    q.validate();
    if (q.covariance_case != CovarianceCase::origin)
        throw std::invalid_argument("covariance_limit_origin expects an origin-case query");
    const double half_tol = 0.5 * abs_tol;
    const double diff = lag_integral(mp, sp, ks, CovarianceCase::origin, q.t, q.t2,
                                     std::abs(q.x - q.x2), half_tol);
    const double sum = lag_integral(mp, sp, ks, CovarianceCase::origin, q.t, q.t2,
                                    q.x + q.x2, half_tol);
    return 0.5 * (diff + sum);
}

double covariance_spatial_lag(const ModelParams& mp, const SpectralSpec& sp,
                              const KernelSpec& ks, CovarianceCase covariance_case, double t,
                              double t2, double h, double abs_tol) {
    return lag_integral(mp, sp, ks, covariance_case, t, t2, h, abs_tol);
}

double covariance_closed_form_special(double mu, double t0, double nu, double h,
                                      double c_cyclic) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("closed form requires mu > 0");
    if (!(t0 > 0.0) || !std::isfinite(t0))
        throw std::invalid_argument("closed form requires t0 > 0");
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw std::invalid_argument("closed form requires nu > 0");
    if (!(c_cyclic >= 0.0) || !std::isfinite(c_cyclic))
        throw std::invalid_argument("closed form requires c_cyclic >= 0");
    if (!std::isfinite(h)) throw std::invalid_argument("closed form requires finite h");

    const double scale =
        c_cyclic * 2.0 * std::pow(gamma_fn(nu + 0.5) / gamma_fn(nu), 2.0);
    const double p = 2.0 * nu + 0.5;
    const double g_at_zero = kSqrtPi * gamma_fn(2.0 * nu + 0.5) / gamma_fn(2.0 * nu + 1.0);
    const double g_front = 2.0 * kSqrtPi / gamma_fn(2.0 * nu + 1.0);
    auto smoothing = [&](double y) {
        const double ay = std::abs(y);
        if (ay < 1e-7) return g_at_zero;
        if (ay > 745.0) return 0.0;
        return g_front * std::pow(0.5 * ay, p) * bessel_k(p, ay);
    };
    const double m = 2.0 * mu * t0;
    auto heat_factor = [&](double u) { return 2.0 * m / (m * m + u * u); };
    auto integrand = [&](double u) { return heat_factor(u) * smoothing(h - u); };

    std::vector<double> breaks{std::min(0.0, h) - 80.0, std::max(0.0, h) + 80.0};
    for (double b : {0.0, h})
        if (b > breaks.front() && b < breaks.back()) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());

    QuadOptions opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-9;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += integrate_gk(integrand, breaks[i], breaks[i + 1], opt).value;
    return scale * total;
}

McEstimate mc_covariance(const std::vector<FieldSample>& samples, const CovarianceQuery& q) {
    q.validate();
    const std::size_t m = samples.size();
    if (m < 100) throw std::invalid_argument("mc_covariance requires at least 100 samples");
    const FieldSample& first = samples.front();
    auto nearest = [](const Eigen::VectorXd& grid, double target) {
        Eigen::Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            const double d = std::abs(grid[i] - target);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    };
    const Eigen::Index it = nearest(first.t_grid, q.t);
    const Eigen::Index ix = nearest(first.x_grid, q.x);
    const Eigen::Index it2 = nearest(first.t_grid, q.t2);
    const Eigen::Index ix2 = nearest(first.x_grid, q.x2);

    std::vector<double> u(m), v(m);
    for (std::size_t i = 0; i < m; ++i) {
        const FieldSample& s = samples[i];
        if (s.t_grid.size() != first.t_grid.size() || s.x_grid.size() != first.x_grid.size() ||
            s.t_grid != first.t_grid || s.x_grid != first.x_grid)
            throw std::invalid_argument("mc_covariance samples must share one lattice");
        u[i] = s.values(it, ix);
        v[i] = s.values(it2, ix2);
    }

    const double n = static_cast<double>(m);
    double um = 0.0, vm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        um += u[i];
        vm += v[i];
    }
    um /= n;
    vm /= n;
    double sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) sxy += (u[i] - um) * (v[i] - vm);
    McEstimate out;
    out.estimate = sxy / (n - 1.0);

    // leave-one-out covariances from the centered sufficient statistics
    std::vector<double> loo(m);
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double du = u[i] - um;
        const double dv = v[i] - vm;
        const double sub = sxy - du * dv - (-du) * (-dv) / (n - 1.0);
        loo[i] = sub / (n - 2.0);
        loo_mean += loo[i];
    }
    loo_mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += (loo[i] - loo_mean) * (loo[i] - loo_mean);
    out.std_err = std::sqrt((n - 1.0) / n * ss);
    return out;
}

}
