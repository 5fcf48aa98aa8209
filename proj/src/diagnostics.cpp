#include "frbe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "frbe/errors.hpp"
#include "frbe/quadrature.hpp"

namespace frbe {

namespace {

struct OlsFit {
    double slope = 0.0;
    double slope_se = 0.0;
};

OlsFit ols_slope(const std::vector<double>& z, const std::vector<double>& y) {
    const std::size_t n = z.size();
    double zm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        zm += z[i];
        ym += y[i];
    }
    zm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double szz = 0.0, szy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        szz += (z[i] - zm) * (z[i] - zm);
        szy += (z[i] - zm) * (y[i] - ym);
    }
    OlsFit fit;
    fit.slope = szy / szz;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - ym - fit.slope * (z[i] - zm);
            rss += r * r;
        }
        fit.slope_se = std::sqrt(rss / (static_cast<double>(n) - 2.0) / szz);
    }
    return fit;
}

}  // namespace

HolderReport holder_exponents_matern(const ModelParams& mp, const KernelSpec& ks,
                                     const SpectralSpec& sp) {
    mp.validate();
    ks.validate();
    sp.validate();
    if (ks.family != KernelFamily::Matern)
        throw std::invalid_argument("holder exponents require the Matern kernel family");
    if (!(mp.alpha > 0.0))
        throw std::invalid_argument("holder exponents require alpha > 0");
    const double nu = ks.nu;
    HolderReport r;
    r.eta_star = std::min(1.0, (4.0 * nu + 1.0) / (2.0 * mp.alpha));
    r.theta = std::min(1.0, mp.alpha + 2.0 * nu + 0.5);
    if (sp.has_origin_component()) {
        const double kappa0 = sp.kappa[0];
        r.eta_tilde_star = std::min(1.0, (4.0 * nu + 2.0 - kappa0) / (2.0 * mp.alpha));
        r.theta_star = std::min(1.0, mp.alpha + 2.0 * nu + 1.0 - 0.5 * kappa0);
        r.gamma_t_sup = mp.beta * *r.eta_tilde_star;
    } else {
        r.gamma_t_sup = mp.beta * r.eta_star;
    }
    return r;
}

EstimateSE estimate_holder_from_samples(const std::vector<FieldSample>& ensemble, Axis axis) {
    if (ensemble.size() < 1000)
        throw std::invalid_argument(
            "holder estimation requires an ensemble of at least 1000 realizations");
    const FieldSample& first = ensemble.front();
    const Eigen::VectorXd& grid = axis == Axis::time ? first.t_grid : first.x_grid;
    if (grid.size() < 11)
        throw std::invalid_argument(
            "holder estimation requires at least 11 lattice points on the chosen axis");
    const double d = grid[1] - grid[0];
    if (!(d > 0.0))
        throw std::invalid_argument("lattice must be strictly increasing on the chosen axis");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i] - grid[i - 1] - d) > 1e-9 * d)
            throw std::invalid_argument(
                "holder estimation requires uniform lattice spacing on the chosen axis");

    constexpr int kLags = 10;
    std::vector<double> vario(kLags, 0.0);
    std::vector<long long> counts(kLags, 0);
    for (const FieldSample& s : ensemble) {
        if (s.t_grid.size() != first.t_grid.size() || s.x_grid.size() != first.x_grid.size())
            throw std::invalid_argument("ensemble realizations must share one lattice");
        const Eigen::MatrixXd& v = s.values;
        for (int k = 1; k <= kLags; ++k) {
            if (axis == Axis::time) {
                for (Eigen::Index c = 0; c < v.cols(); ++c)
                    for (Eigen::Index i = 0; i + k < v.rows(); ++i) {
                        const double inc = v(i + k, c) - v(i, c);
                        vario[k - 1] += inc * inc;
                        ++counts[k - 1];
                    }
            } else {
                for (Eigen::Index r = 0; r < v.rows(); ++r)
                    for (Eigen::Index j = 0; j + k < v.cols(); ++j) {
                        const double inc = v(r, j + k) - v(r, j);
                        vario[k - 1] += inc * inc;
                        ++counts[k - 1];
                    }
            }
        }
    }
    double vmax = 0.0;
    for (int k = 0; k < kLags; ++k) {
        vario[k] /= static_cast<double>(counts[k]);
        vmax = std::max(vmax, vario[k]);
    }
    if (vmax < 1e-28) return {1.0, 0.0, true};

    std::vector<double> z(kLags), y(kLags);
    for (int k = 0; k < kLags; ++k) {
        z[k] = std::log(static_cast<double>(k + 1) * d);
        y[k] = std::log(vario[k]);
    }
    const OlsFit fit = ols_slope(z, y);
    return {0.5 * fit.slope, 0.5 * fit.slope_se, false};
}

namespace {

void check_probe_list(const std::vector<double>& list, const char* name) {
    if (list.empty()) throw std::invalid_argument(std::string(name) + " must not be empty");
    double prev = 0.0;
    for (double v : list) {
        if (!(v > prev) || !std::isfinite(v))
            throw std::invalid_argument(std::string(name) +
                                        " must be strictly increasing and positive");
        prev = v;
    }
}

OlsFit fit_loglog(const std::vector<std::pair<double, double>>& pts) {
    std::vector<double> z, y;
    for (const auto& [arg, val] : pts)
        if (val > 0.0) {
            z.push_back(std::log(arg));
            y.push_back(std::log(val));
        }
    if (z.size() < 2) return {};
    return ols_slope(z, y);
}

}  // namespace

DependenceReport dependence_probe(const ModelParams& mp, const SpectralSpec& sp,
                                  const KernelSpec& ks, double t0, double x0,
                                  const std::vector<double>& T_list,
                                  const std::vector<double>& H_list, double growth_factor,
                                  double cauchy_tol) {
    mp.validate();
    sp.validate();
    ks.validate();
    if (!(t0 > 0.0) || !std::isfinite(t0))
        throw std::invalid_argument("dependence probe requires t0 > 0");
    if (!std::isfinite(x0))
        throw std::invalid_argument("dependence probe requires finite x0");
    check_probe_list(T_list, "T_list");
    check_probe_list(H_list, "H_list");
    if (!(growth_factor > 1.0))
        throw std::invalid_argument("growth_factor must exceed 1");
    if (!(cauchy_tol > 0.0)) throw std::invalid_argument("cauchy_tol must be > 0");

    const CovarianceCase cc =
        sp.has_origin_component() ? CovarianceCase::origin : CovarianceCase::cyclic;
    DependenceReport report;

    QuadOptions outer;
    outer.abs_tol = 1e-7;
    outer.rel_tol = 1e-6;

    auto time_integrand = [&](double h) {
        return std::abs(covariance_spatial_lag(mp, sp, ks, cc, t0, t0 + h, 0.0, 1e-10));
    };
    double acc = 0.0, prev = 0.0;
    for (double T : T_list) {
        acc += integrate_gk(time_integrand, prev, T, outer).value;
        prev = T;
        report.time_partial_integrals.emplace_back(T, acc);
    }

    auto space_integrand = [&](double h) {
        return std::abs(covariance_spatial_lag(mp, sp, ks, cc, t0, t0, h, 1e-10));
    };
    acc = 0.0;
    prev = 0.0;
    for (double H : H_list) {
        acc += 2.0 * integrate_gk(space_integrand, prev, H, outer).value;
        prev = H;
        report.space_partial_integrals.emplace_back(H, acc);
    }

    auto verdict_of = [&](const std::vector<std::pair<double, double>>& partial) {
        const double last = partial.back().second;
        const double first_val = partial.front().second;
        if (last < 1e-12) return DependenceVerdict::SRD;
        if (partial.size() >= 2) {
            const double last_step = last - partial[partial.size() - 2].second;
            if (first_val > 0.0 && last / first_val >= growth_factor && last_step > cauchy_tol)
                return DependenceVerdict::LRD;
            if (last_step < cauchy_tol) return DependenceVerdict::SRD;
        }
        return DependenceVerdict::inconclusive;
    };
    report.verdict_time = verdict_of(report.time_partial_integrals);
    report.verdict_space = verdict_of(report.space_partial_integrals);

    report.time_growth_exponent = fit_loglog(report.time_partial_integrals).slope;

    // decay exponent of the spatial integrand from consecutive increments
    std::vector<std::pair<double, double>> incr;
    for (std::size_t k = 1; k < report.space_partial_integrals.size(); ++k) {
        const auto& [h0, s0] = report.space_partial_integrals[k - 1];
        const auto& [h1, s1] = report.space_partial_integrals[k];
        const double rate = (s1 - s0) / (2.0 * (h1 - h0));
        incr.emplace_back(std::sqrt(h0 * h1), rate);
    }
    report.space_tail_exponent = -fit_loglog(incr).slope;
    return report;
}

}
