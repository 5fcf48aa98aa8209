#include "frbe/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "frbe/errors.hpp"
#include "frbe/parallel.hpp"
#include "frbe/quadrature.hpp"
#include "frbe/rng.hpp"
#include "frbe/specfun.hpp"

namespace frbe {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242096981;

void check_lattice(const Eigen::VectorXd& t_grid, const Eigen::VectorXd& x_grid) {
    if (t_grid.size() == 0 || x_grid.size() == 0)
        throw std::invalid_argument("lattice must contain at least one t and one x value");
    for (Eigen::Index i = 0; i < t_grid.size(); ++i)
        if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i]))
            throw std::invalid_argument("lattice t values must be finite and >= 0");
    for (Eigen::Index k = 0; k < x_grid.size(); ++k)
        if (!std::isfinite(x_grid[k]))
            throw std::invalid_argument("lattice x values must be finite");
}

}  // namespace

std::size_t FrequencyGrid::n_nonnegative() const {
    return offset == 0.0 ? static_cast<std::size_t>(n_modes) + 1
                         : static_cast<std::size_t>(n_modes);
}

double FrequencyGrid::nonnegative_node(std::size_t i) const {
    return (static_cast<double>(i) + offset) * delta;
}

FrequencyGrid make_grid(double delta, int n_modes, double offset) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("grid.delta must be finite and > 0");
    if (n_modes < 1) throw std::invalid_argument("grid.n_modes must be >= 1");
    if (offset != 0.0 && offset != 0.5)
        throw std::invalid_argument("grid.offset must be 0 or 0.5");
    FrequencyGrid g;
    g.delta = delta;
    g.n_modes = n_modes;
    g.offset = offset;
    const int n = n_modes;
    if (offset == 0.0) {
        g.nodes.reserve(2 * static_cast<std::size_t>(n) + 1);
        for (int j = -n; j <= n; ++j) g.nodes.push_back(j * delta);
    } else {
        g.nodes.reserve(2 * static_cast<std::size_t>(n));
        for (int j = -n; j < n; ++j) g.nodes.push_back((j + 0.5) * delta);
    }
    return g;
}

NoiseDraw draw_noise(const FrequencyGrid& grid, std::uint64_t seed) {
    NoiseDraw nd;
    nd.seed = seed;
    const std::size_t m = grid.n_nonnegative();
    nd.increments.resize(m);
    const double root_delta = std::sqrt(grid.delta);
    for (std::size_t i = 0; i < m; ++i)
        nd.increments[i] = root_delta * standard_normal_for_node(seed, i);
    return nd;
}

ScalingParams make_scaling(ScalingCase scaling_case, double rho3, const ModelParams& mp,
                           const SpectralSpec& sp) {
    mp.validate();
    sp.validate();
    if (!(rho3 > 0.0) || !std::isfinite(rho3))
        throw std::invalid_argument("scaling rho3 must be finite and > 0");
    ScalingParams sc;
    sc.rho3 = rho3;
    sc.scaling_case = scaling_case;
    if (scaling_case == ScalingCase::origin) {
        if (!sp.has_origin_component())
            throw std::invalid_argument(
                "origin scaling requires a spectrum with A[0] > 0");
        sc.rho1 = -0.5 * sp.kappa[0] * rho3;
    } else {
        sc.rho1 = -0.5 * rho3;
    }
    sc.rho2 = mp.alpha * rho3 / mp.beta;
    return sc;
}

namespace {

// Frequency-domain representation of one synthesized field: the value at
// (t, x) is sum_j coef[j] W[j] E_beta(-rate[j] t^beta) cos(lambda[j] x).
struct SpectralSum {
    std::vector<double> lambda;
    std::vector<double> rate;
    std::vector<double> coef;
};

double pair_weight(const FrequencyGrid& grid, std::size_t i) {
    return (grid.offset == 0.5 || i > 0) ? kSqrt2 : 1.0;
}

SpectralSum build_cyclic_sum(const ModelParams& mp, const SpectralSpec& sp,
                             const KernelSpec& ks, const FrequencyGrid& grid) {
    const LimitConstants lc = limit_constants(sp);
    const double sc = std::sqrt(lc.c_cyclic);
    const std::size_t m = grid.n_nonnegative();
    SpectralSum sum;
    sum.lambda.resize(m);
    sum.rate.resize(m);
    sum.coef.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double lambda = grid.nonnegative_node(i);
        sum.lambda[i] = lambda;
        sum.rate[i] = mp.mu * std::pow(lambda, mp.alpha);
        sum.coef[i] = sc * kernel_ft_radial(ks, lambda) * pair_weight(grid, i);
    }
    return sum;
}

SpectralSum build_origin_sum(const ModelParams& mp, const SpectralSpec& sp,
                             const KernelSpec& ks, const FrequencyGrid& grid) {
    const LimitConstants lc = limit_constants(sp);
    const double amp_root = std::sqrt(lc.origin_amplitude);
    const double kappa0 = sp.kappa[0];
    const std::size_t m = grid.n_nonnegative();
    SpectralSum sum;
    sum.lambda.resize(m);
    sum.rate.resize(m);
    sum.coef.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double a = static_cast<double>(i) * grid.delta;
        const double b = a + grid.delta;
        // exact cell mass and mass centroid of |lambda|^{kappa0 - 1}
        const double mass =
            (std::pow(b, kappa0) - std::pow(a, kappa0)) / kappa0;
        const double centroid = (std::pow(b, kappa0 + 1.0) - std::pow(a, kappa0 + 1.0)) /
                                ((kappa0 + 1.0) * mass);
        sum.lambda[i] = centroid;
        sum.rate[i] = mp.mu * std::pow(centroid, mp.alpha);
        sum.coef[i] = amp_root * kernel_ft_radial(ks, centroid) *
                      std::sqrt(mass / grid.delta) * kSqrt2;
    }
    return sum;
}

// Cell boundaries of the nonnegative node i: midpoint cells for offset 0
// (the node-0 cell is folded onto [0, delta/2]) and ordinary cells
// [i delta, (i+1) delta] for offset 1/2.
void cell_bounds(const FrequencyGrid& grid, std::size_t i, double& a, double& b,
                 double& fold) {
    if (grid.offset == 0.5) {
        a = static_cast<double>(i) * grid.delta;
        b = a + grid.delta;
        fold = 1.0;
        return;
    }
    if (i == 0) {
        a = 0.0;
        b = 0.5 * grid.delta;
        fold = 2.0;
        return;
    }
    a = (static_cast<double>(i) - 0.5) * grid.delta;
    b = a + grid.delta;
    fold = 1.0;
}

// Mass of the scaled density over one panel [p, q] of the frequency grid.
// Panels whose edge sits at (or within rounding slop of) a singular frequency
// are integrated in the offset variable z = lambda * e - w_j; forming the
// offset from the already-rounded panel edge instead would misplace the
// singularity by ~ulp(w_j) and lose an |z|^kappa-sized sliver of mass.
double density_panel_mass(const SpectralSpec& sp, double e, double p, double q,
                          const QuadOptions& opt) {
    int near = -1;
    double near_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sp.w.size(); ++j) {
        if (sp.A[j] == 0.0) continue;
        const double zp = std::fma(p, e, -sp.w[j]);
        const double zq = std::fma(q, e, -sp.w[j]);
        const double dist =
            (zp <= 0.0 && zq >= 0.0) ? 0.0 : std::min(std::abs(zp), std::abs(zq));
        const double slop = 1e-12 * std::max(1.0, sp.w[j]);
        if (dist <= slop && dist < near_dist) {
            near = static_cast<int>(j);
            near_dist = dist;
        }
    }
    if (near < 0) {
        auto fe = [&](double l) { return spectral_density(sp, l * e); };
        return integrate_tanh_sinh(fe, p, q, opt).value;
    }
    const auto j = static_cast<std::size_t>(near);
    const double zp = std::fma(p, e, -sp.w[j]);
    const double zq = std::fma(q, e, -sp.w[j]);
    auto g = [&](double z) { return spectral_density_near(sp, j, z); };
    double v;
    if (zp < 0.0 && zq > 0.0)
        v = integrate_tanh_sinh(g, zp, 0.0, opt).value +
            integrate_tanh_sinh(g, 0.0, zq, opt).value;
    else
        v = integrate_tanh_sinh(g, zp, zq, opt).value;
    return v / e;
}

SpectralSum build_prelimit_sum(const ModelParams& mp, const SpectralSpec& sp,
                               const KernelSpec& ks, const FrequencyGrid& grid,
                               const ScalingParams& scaling, double eps) {
    const double e = std::pow(eps, scaling.rho3);
    const double norm = scaling.scaling_case == ScalingCase::origin
                            ? std::pow(eps, scaling.rho3 * (1.0 - sp.kappa[0]))
                            : 1.0;
    const std::size_t m = grid.n_nonnegative();

    // grid-variable positions of the spectral singularities
    std::vector<double> sing;
    for (std::size_t j = 1; j < sp.w.size(); ++j)
        if (sp.A[j] > 0.0) sing.push_back(sp.w[j] / e);
    if (sp.has_origin_component()) sing.push_back(0.0);
    std::sort(sing.begin(), sing.end());

    std::vector<std::vector<double>> cell_sing(m);
    for (double s : sing) {
        const double pos = s / grid.delta + (grid.offset == 0.0 ? 0.5 : 0.0);
        const auto idx = static_cast<std::ptrdiff_t>(std::floor(pos));
        if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(m))
            cell_sing[static_cast<std::size_t>(idx)].push_back(s);
    }

    QuadOptions cell_opt;
    cell_opt.abs_tol = 1e-15;
    cell_opt.rel_tol = 1e-9;

    SpectralSum sum;
    sum.lambda.resize(m);
    sum.rate.resize(m);
    sum.coef.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double lambda = grid.nonnegative_node(i);
        sum.lambda[i] = lambda;
        sum.rate[i] = mp.mu * std::pow(lambda, mp.alpha) *
                      std::pow(1.0 + lambda * lambda * e * e, 0.5 * mp.gamma_b);
        double ffac;
        if (cell_sing[i].empty()) {
            ffac = spectral_density(sp, lambda * e) * norm;
        } else {
            double a, b, fold;
            cell_bounds(grid, i, a, b, fold);
            bool prev_sing = false;
            std::vector<double> edges{a};
            for (double s : cell_sing[i]) {
                if (s <= a || s >= b) {
                    prev_sing = prev_sing || s == a;
                    continue;
                }
                if (prev_sing) edges.push_back(0.5 * (edges.back() + s));
                edges.push_back(s);
                prev_sing = true;
            }
            edges.push_back(b);
            double mass = 0.0;
            for (std::size_t k = 0; k + 1 < edges.size(); ++k)
                mass += density_panel_mass(sp, e, edges[k], edges[k + 1], cell_opt);
            ffac = fold * mass / grid.delta * norm;
        }
        sum.coef[i] = kernel_ft_radial(ks, lambda) * std::sqrt(ffac) * pair_weight(grid, i);
    }
    return sum;
}

double lattice_variance(const SpectralSum& sum, const ModelParams& mp, double tb,
                        double delta) {
    double v = 0.0;
    for (std::size_t i = 0; i < sum.coef.size(); ++i) {
        const double ml = mittag_leffler_neg(mp.beta, sum.rate[i] * tb).value;
        const double c = sum.coef[i] * ml;
        v += c * c * delta;
    }
    return v;
}

double checked_tail_fraction(double tail, double main_var, double cov) {
    const double total = tail + main_var;
    if (!(total > 0.0)) return 0.0;
    const double fraction = tail / total;
    if (!(fraction <= 0.01))
        throw ToleranceError(
            "frequency grid coverage " + std::to_string(cov) + " leaves " +
            std::to_string(fraction * 100.0) +
            "% of the target variance outside the grid; increase n_modes or delta");
    return fraction;
}

// Share of the target variance beyond the covered frequency interval,
// evaluated at the smallest requested time (slowest spectral decay).
double tail_fraction_of(const SpectralSum& sum, const FrequencyGrid& grid,
                        const ModelParams& mp,
                        const std::function<double(double)>& density_bound, double t_min) {
    const double tb = std::pow(t_min, mp.beta);
    const double main_var = lattice_variance(sum, mp, tb, grid.delta);
    auto tail_integrand = [&](double l) {
        const double s = mp.mu * std::pow(l, mp.alpha) * tb;
        const double ml = mittag_leffler_neg(mp.beta, s).value;
        return 2.0 * density_bound(l) * ml * ml;
    };
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-6;
    const double cov = grid.coverage();
    const double tail =
        integrate_to_infinity(tail_integrand, cov, std::max(cov, 1.0), 1e-14, opt).value;
    return checked_tail_fraction(tail, main_var, cov);
}

Eigen::MatrixXd time_factor_matrix(const ModelParams& mp, const SpectralSum& sum,
                                   const Eigen::VectorXd& t_grid) {
    const auto rows = t_grid.size();
    const auto cols = static_cast<Eigen::Index>(sum.rate.size());
    Eigen::MatrixXd e(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double tb = std::pow(t_grid[i], mp.beta);
        for (Eigen::Index j = 0; j < cols; ++j)
            e(i, j) = mittag_leffler_neg(mp.beta, sum.rate[static_cast<std::size_t>(j)] * tb)
                          .value;
    }
    return e;
}

Eigen::MatrixXd space_factor_matrix(const SpectralSum& sum, const Eigen::VectorXd& x_grid) {
    const auto rows = static_cast<Eigen::Index>(sum.lambda.size());
    const auto cols = x_grid.size();
    Eigen::MatrixXd b(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j)
        for (Eigen::Index k = 0; k < cols; ++k)
            b(j, k) = std::cos(sum.lambda[static_cast<std::size_t>(j)] * x_grid[k]);
    return b;
}

FieldSample assemble_field(const SpectralSum& sum, const ModelParams& mp,
                           const NoiseDraw& noise, const Eigen::VectorXd& t_grid,
                           const Eigen::VectorXd& x_grid, Provenance prov) {
    if (noise.increments.size() != sum.coef.size())
        throw std::invalid_argument("noise draw does not match the frequency grid");
    const Eigen::MatrixXd e = time_factor_matrix(mp, sum, t_grid);
    const Eigen::MatrixXd b = space_factor_matrix(sum, x_grid);
    Eigen::VectorXd cw(static_cast<Eigen::Index>(sum.coef.size()));
    for (std::size_t j = 0; j < sum.coef.size(); ++j)
        cw[static_cast<Eigen::Index>(j)] = sum.coef[j] * noise.increments[j];
    FieldSample out;
    out.t_grid = t_grid;
    out.x_grid = x_grid;
    out.values = (e.array().rowwise() * cw.transpose().array()).matrix() * b;
    out.provenance = std::move(prov);
    return out;
}

Provenance make_provenance(const ModelParams& mp, const SpectralSpec& sp,
                           const KernelSpec& ks, const FrequencyGrid& grid,
                           std::uint64_t seed, FieldKind kind) {
    Provenance p;
    p.model = mp;
    p.spectrum = sp;
    p.kernel = ks;
    p.grid_delta = grid.delta;
    p.grid_n_modes = grid.n_modes;
    p.grid_offset = grid.offset;
    p.seed = seed;
    p.field_kind = kind;
    return p;
}

void check_cyclic_inputs(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks) {
    mp.validate();
    sp.validate();
    ks.validate();
    if (sp.has_origin_component())
        throw std::invalid_argument(
            "cyclic limit field requires a spectrum with A[0] = 0");
}

void check_origin_inputs(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks,
                         const FrequencyGrid& grid) {
    mp.validate();
    sp.validate();
    ks.validate();
    if (!sp.has_origin_component())
        throw std::invalid_argument(
            "origin limit field requires a spectrum with A[0] > 0");
    if (grid.offset != 0.5)
        throw std::invalid_argument(
            "origin limit field requires an offset = 0.5 frequency grid");
}

double min_time(const Eigen::VectorXd& t_grid) { return t_grid.minCoeff(); }

}  // namespace

FieldSample simulate_limit_cyclic(const ModelParams& mp, const SpectralSpec& sp,
                                  const KernelSpec& ks, const FrequencyGrid& grid,
                                  const NoiseDraw& noise, const Eigen::VectorXd& t_grid,
                                  const Eigen::VectorXd& x_grid) {
    check_cyclic_inputs(mp, sp, ks);
    check_lattice(t_grid, x_grid);
    const SpectralSum sum = build_cyclic_sum(mp, sp, ks, grid);
    Provenance prov = make_provenance(mp, sp, ks, grid, noise.seed, FieldKind::limit_cyclic);
    const LimitConstants lc = limit_constants(sp);
    prov.tail_fraction = tail_fraction_of(
        sum, grid, mp,
        [&](double l) {
            const double h = kernel_ft_radial(ks, l);
            return lc.c_cyclic * h * h;
        },
        min_time(t_grid));
    return assemble_field(sum, mp, noise, t_grid, x_grid, std::move(prov));
}

FieldSample simulate_limit_origin(const ModelParams& mp, const SpectralSpec& sp,
                                  const KernelSpec& ks, const FrequencyGrid& grid,
                                  const NoiseDraw& noise, const Eigen::VectorXd& t_grid,
                                  const Eigen::VectorXd& x_grid) {
    check_origin_inputs(mp, sp, ks, grid);
    check_lattice(t_grid, x_grid);
    const SpectralSum sum = build_origin_sum(mp, sp, ks, grid);
    Provenance prov = make_provenance(mp, sp, ks, grid, noise.seed, FieldKind::limit_origin);
    const LimitConstants lc = limit_constants(sp);
    const double kappa0 = sp.kappa[0];
    prov.tail_fraction = tail_fraction_of(
        sum, grid, mp,
        [&](double l) {
            const double h = kernel_ft_radial(ks, l);
            return lc.origin_amplitude * std::pow(l, kappa0 - 1.0) * h * h;
        },
        min_time(t_grid));
    return assemble_field(sum, mp, noise, t_grid, x_grid, std::move(prov));
}

namespace {

void check_prelimit_inputs(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks,
                           const FrequencyGrid& grid, const ScalingParams& scaling,
                           double eps) {
    mp.validate();
    sp.validate();
    ks.validate();
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("prelimit eps must be finite and > 0");
    if (!(scaling.rho3 > 0.0) || !std::isfinite(scaling.rho3))
        throw std::invalid_argument("scaling rho3 must be finite and > 0");
    if (scaling.scaling_case == ScalingCase::origin) {
        if (!sp.has_origin_component())
            throw std::invalid_argument(
                "origin scaling requires a spectrum with A[0] > 0");
        if (grid.offset != 0.5)
            throw std::invalid_argument(
                "origin-case prelimit field requires an offset = 0.5 frequency grid");
    } else if (sp.has_origin_component()) {
        throw std::invalid_argument(
            "cyclic scaling requires a spectrum with A[0] = 0");
    }
}

// Tail share for the pre-limit field. The rescaled density keeps algebraic
// singularities at w_j / e, which fall beyond the covered interval once
// e < w_j / coverage; each such point gets an offset-variable window so the
// tail estimate never integrates across a singularity.
double prelimit_tail_fraction(const SpectralSum& sum, const FrequencyGrid& grid,
                              const ModelParams& mp, const SpectralSpec& sp,
                              const KernelSpec& ks, double e, double norm, double t_min) {
    const double tb = std::pow(t_min, mp.beta);
    const double main_var = lattice_variance(sum, mp, tb, grid.delta);

    auto weight = [&](double l) {
        const double h = kernel_ft_radial(ks, l);
        const double s = mp.mu * std::pow(l, mp.alpha) * tb;
        const double ml = mittag_leffler_neg(mp.beta, s).value;
        return 2.0 * norm * h * h * ml * ml;
    };
    auto integrand = [&](double l) { return weight(l) * spectral_density(sp, l * e); };

    const double cov = grid.coverage();
    std::vector<std::pair<double, std::size_t>> sing;
    for (std::size_t j = 1; j < sp.w.size(); ++j) {
        if (sp.A[j] == 0.0) continue;
        const double s = sp.w[j] / e;
        if (s > cov) sing.emplace_back(s, j);
    }
    std::sort(sing.begin(), sing.end());

    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-6;
    QuadOptions ts;
    ts.abs_tol = 1e-14;
    ts.rel_tol = 1e-8;

    double tail = 0.0;
    double lo = cov;
    for (std::size_t k = 0; k < sing.size(); ++k) {
        const double s = sing[k].first;
        const std::size_t j = sing[k].second;
        double win = std::min(1.0, 0.5 * (s - lo));
        if (k + 1 < sing.size()) win = std::min(win, 0.25 * (sing[k + 1].first - s));
        if (s - win > lo) tail += integrate_gk(integrand, lo, s - win, opt).value;
        auto near_window = [&](double y) {
            return weight((sp.w[j] + y) / e) * spectral_density_near(sp, j, y);
        };
        tail += integrate_tanh_sinh(near_window, -win * e, 0.0, ts).value / e;
        tail += integrate_tanh_sinh(near_window, 0.0, win * e, ts).value / e;
        lo = s + win;
    }
    tail += integrate_to_infinity(integrand, lo, std::max(lo, 1.0), 1e-14, opt).value;

    return checked_tail_fraction(tail, main_var, cov);
}

}  // namespace

FieldSample simulate_prelimit_field(const ModelParams& mp, const SpectralSpec& sp,
                                    const KernelSpec& ks, const FrequencyGrid& grid,
                                    const NoiseDraw& noise, const ScalingParams& scaling,
                                    double eps, const Eigen::VectorXd& t_grid,
                                    const Eigen::VectorXd& x_grid) {
    check_prelimit_inputs(mp, sp, ks, grid, scaling, eps);
    check_lattice(t_grid, x_grid);
    const SpectralSum sum = build_prelimit_sum(mp, sp, ks, grid, scaling, eps);
    Provenance prov = make_provenance(mp, sp, ks, grid, noise.seed, FieldKind::prelimit);
    prov.epsilon = eps;
    prov.rho3 = scaling.rho3;
    const double e = std::pow(eps, scaling.rho3);
    const double norm = scaling.scaling_case == ScalingCase::origin
                            ? std::pow(eps, scaling.rho3 * (1.0 - sp.kappa[0]))
                            : 1.0;
    prov.tail_fraction =
        prelimit_tail_fraction(sum, grid, mp, sp, ks, e, norm, min_time(t_grid));
    return assemble_field(sum, mp, noise, t_grid, x_grid, std::move(prov));
}

double simulate_prelimit(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks,
                         const FrequencyGrid& grid, const NoiseDraw& noise,
                         const ScalingParams& scaling, double eps, double t, double x) {
    Eigen::VectorXd tg(1), xg(1);
    tg[0] = t;
    xg[0] = x;
    return simulate_prelimit_field(mp, sp, ks, grid, noise, scaling, eps, tg, xg).values(0, 0);
}

double mean_square_gap(const ModelParams& mp, const SpectralSpec& sp, const KernelSpec& ks,
                       const FrequencyGrid& grid, const ScalingParams& scaling, double eps,
                       double t, double x) {
    mp.validate();
    sp.validate();
    ks.validate();
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("mean_square_gap: eps must be finite and >= 0");
    if (!(t >= 0.0) || !std::isfinite(t) || !std::isfinite(x))
        throw std::invalid_argument("mean_square_gap: (t, x) must be finite with t >= 0");
    const bool origin_case = scaling.scaling_case == ScalingCase::origin;
    if (origin_case && !sp.has_origin_component())
        throw std::invalid_argument("origin scaling requires a spectrum with A[0] > 0");
    if (!origin_case && sp.has_origin_component())
        throw std::invalid_argument("cyclic scaling requires a spectrum with A[0] = 0");
    if (eps == 0.0) return 0.0;

    const double e = std::pow(eps, scaling.rho3);
    const double norm =
        origin_case ? std::pow(eps, scaling.rho3 * (1.0 - sp.kappa[0])) : 1.0;
    const LimitConstants lc = limit_constants(sp);
    const double c_root = std::sqrt(origin_case ? lc.origin_amplitude : lc.c_cyclic);
    const double kappa0 = origin_case ? sp.kappa[0] : 0.0;
    const double tb = std::pow(t, mp.beta);

    auto gap_at = [&](double l, double density) {
        const double gh = kernel_ft_radial(ks, l) * std::cos(l * x);
        if (gh == 0.0) return 0.0;
        const double s0 = mp.mu * std::pow(l, mp.alpha) * tb;
        const double se = s0 * std::pow(1.0 + l * l * e * e, 0.5 * mp.gamma_b);
        const double e0 = mittag_leffler_neg(mp.beta, s0).value;
        const double ee = mittag_leffler_neg(mp.beta, se).value;
        const double limit_part =
            c_root * e0 * (origin_case ? std::pow(l, 0.5 * (kappa0 - 1.0)) : 1.0);
        const double pre_part = ee * std::sqrt(density * norm);
        const double d = pre_part - limit_part;
        return 2.0 * gh * gh * d * d;
    };
    auto integrand = [&](double l) { return gap_at(l, spectral_density(sp, l * e)); };
    auto majorant = [&](double l) {
        const double h = kernel_ft_radial(ks, l);
        const double s0 = mp.mu * std::pow(l, mp.alpha) * tb;
        const double e0 = mittag_leffler_neg(mp.beta, s0).value;
        const double limit_sq =
            c_root * c_root * (origin_case ? std::pow(l, kappa0 - 1.0) : 1.0);
        return 2.0 * h * h * e0 * e0 * (spectral_density(sp, l * e) * norm + limit_sq);
    };

    std::vector<std::pair<double, std::size_t>> sing;
    for (std::size_t j = 1; j < sp.w.size(); ++j)
        if (sp.A[j] > 0.0) sing.emplace_back(sp.w[j] / e, j);
    std::sort(sing.begin(), sing.end());

    QuadOptions osc;
    osc.abs_tol = 1e-13;
    osc.rel_tol = 1e-7;
    osc.max_panel = std::abs(x) > 1e-9 ? 0.25 * 3.141592653589793 / std::abs(x)
                                       : std::numeric_limits<double>::infinity();
    QuadOptions ts;
    ts.abs_tol = 1e-14;
    ts.rel_tol = 1e-8;

    double acc = 0.0;
    double lo = 0.0;
    if (origin_case) {
        const double d0 = sing.empty() ? 1.0 : std::min(1.0, 0.5 * sing.front().first);
        acc += integrate_tanh_sinh(integrand, 0.0, d0, ts).value;
        lo = d0;
    }
    for (std::size_t k = 0; k < sing.size(); ++k) {
        const double s = sing[k].first;
        const std::size_t j = sing[k].second;
        double win = std::min(1.0, 0.5 * (s - lo));
        if (k + 1 < sing.size()) win = std::min(win, 0.25 * (sing[k + 1].first - s));
        if (s - win > lo) acc += integrate_gk(integrand, lo, s - win, osc).value;
        // The window integrals run in the offset variable y = lambda e - w_j,
        // which pins the density singularity exactly at the endpoint 0; in
        // the lambda variable it sits at w_j / e, where tanh-sinh nodes stop
        // one ulp short and an |y|^kappa sliver of mass would be lost.
        auto near_window = [&](double y) {
            const double l = (sp.w[j] + y) / e;
            return gap_at(l, spectral_density_near(sp, j, y));
        };
        acc += integrate_tanh_sinh(near_window, -win * e, 0.0, ts).value / e;
        acc += integrate_tanh_sinh(near_window, 0.0, win * e, ts).value / e;
        lo = s + win;
    }

    double span = std::max(4.0, 0.5 * grid.coverage());
    int quiet = 0;
    while (quiet < 2) {
        if (lo > 1e7)
            throw ToleranceError("mean_square_gap: oscillatory tail did not settle");
        const double p = integrate_gk(integrand, lo, lo + span, osc).value;
        acc += p;
        lo += span;
        if (std::abs(p) <= 1e-6 * std::abs(acc) + 1e-14)
            ++quiet;
        else
            quiet = 0;
        span *= 2.0;
    }
    QuadOptions tail_opt;
    tail_opt.abs_tol = 1e-13;
    tail_opt.rel_tol = 1e-5;
    const double tail_bound =
        integrate_to_infinity(majorant, lo, span, 1e-14, tail_opt).value;
    if (!(tail_bound <= 1e-3 * std::abs(acc) + 1e-12))
        throw ToleranceError("mean_square_gap: spectral tail beyond the quadrature window "
                             "is not negligible");
    return acc;
}

GapMonteCarlo mc_mean_square_gap(const ModelParams& mp, const SpectralSpec& sp,
                                 const KernelSpec& ks, const FrequencyGrid& grid,
                                 const ScalingParams& scaling, double eps, double t, double x,
                                 int n_seeds, std::uint64_t base_seed, int threads) {
    check_prelimit_inputs(mp, sp, ks, grid, scaling, eps);
    if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(x))
        throw std::invalid_argument("mc_mean_square_gap: (t, x) must be finite with t > 0");
    if (n_seeds < 2)
        throw std::invalid_argument("mc_mean_square_gap: n_seeds must be >= 2");
    const SpectralSum pre = build_prelimit_sum(mp, sp, ks, grid, scaling, eps);
    const SpectralSum lim = scaling.scaling_case == ScalingCase::origin
                                ? build_origin_sum(mp, sp, ks, grid)
                                : build_cyclic_sum(mp, sp, ks, grid);
    const double tb = std::pow(t, mp.beta);
    const std::size_t m = pre.coef.size();
    std::vector<double> damp(m);
    GapMonteCarlo out;
    for (std::size_t j = 0; j < m; ++j) {
        const double ap = pre.coef[j] *
                          mittag_leffler_neg(mp.beta, pre.rate[j] * tb).value *
                          std::cos(pre.lambda[j] * x);
        const double al = lim.coef[j] *
                          mittag_leffler_neg(mp.beta, lim.rate[j] * tb).value *
                          std::cos(lim.lambda[j] * x);
        damp[j] = ap - al;
        out.lattice_exact += damp[j] * damp[j] * grid.delta;
    }
    std::vector<double> sq(static_cast<std::size_t>(n_seeds));
    parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
        const NoiseDraw noise = draw_noise(grid, base_seed + i);
        double d = 0.0;
        for (std::size_t j = 0; j < m; ++j) d += damp[j] * noise.increments[j];
        sq[i] = d * d;
    });
    for (double v : sq) out.mean += v;
    out.mean /= static_cast<double>(n_seeds);
    double ss = 0.0;
    for (double v : sq) ss += (v - out.mean) * (v - out.mean);
    out.std_err = std::sqrt(ss / (static_cast<double>(n_seeds) - 1.0) /
                            static_cast<double>(n_seeds));
    return out;
}

std::vector<FieldSample> simulate_ensemble(FieldKind kind, const ModelParams& mp,
                                           const SpectralSpec& sp, const KernelSpec& ks,
                                           const FrequencyGrid& grid, std::uint64_t base_seed,
                                           int count, const Eigen::VectorXd& t_grid,
                                           const Eigen::VectorXd& x_grid, int threads) {
    if (kind == FieldKind::prelimit)
        throw std::invalid_argument(
            "simulate_ensemble supports the limit field kinds only");
    if (count < 1) throw std::invalid_argument("ensemble count must be >= 1");
    check_lattice(t_grid, x_grid);

    SpectralSum sum;
    std::function<double(double)> bound;
    const LimitConstants lc = limit_constants(sp);
    if (kind == FieldKind::limit_cyclic) {
        check_cyclic_inputs(mp, sp, ks);
        sum = build_cyclic_sum(mp, sp, ks, grid);
        bound = [&lc, &ks](double l) {
            const double h = kernel_ft_radial(ks, l);
            return lc.c_cyclic * h * h;
        };
    } else {
        check_origin_inputs(mp, sp, ks, grid);
        sum = build_origin_sum(mp, sp, ks, grid);
        const double kappa0 = sp.kappa[0];
        bound = [&lc, &ks, kappa0](double l) {
            const double h = kernel_ft_radial(ks, l);
            return lc.origin_amplitude * std::pow(l, kappa0 - 1.0) * h * h;
        };
    }
    const double tail = tail_fraction_of(sum, grid, mp, bound, min_time(t_grid));
    const Eigen::MatrixXd e = time_factor_matrix(mp, sum, t_grid);
    const Eigen::MatrixXd b = space_factor_matrix(sum, x_grid);
    const auto n_nodes = static_cast<Eigen::Index>(sum.coef.size());

    std::vector<FieldSample> out(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), resolve_threads(threads),
                 [&](std::size_t m) {
                     const std::uint64_t seed = base_seed + m;
                     Eigen::VectorXd cw(n_nodes);
                     const double root_delta = std::sqrt(grid.delta);
                     for (Eigen::Index j = 0; j < n_nodes; ++j)
                         cw[j] = sum.coef[static_cast<std::size_t>(j)] * root_delta *
                                 standard_normal_for_node(seed, static_cast<std::size_t>(j));
                     FieldSample fs;
                     fs.t_grid = t_grid;
                     fs.x_grid = x_grid;
                     fs.values = (e.array().rowwise() * cw.transpose().array()).matrix() * b;
                     fs.provenance = make_provenance(mp, sp, ks, grid, seed, kind);
                     fs.provenance.tail_fraction = tail;
                     out[m] = std::move(fs);
                 });
    return out;
}

}
