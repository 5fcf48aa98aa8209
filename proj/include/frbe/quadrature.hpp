#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "frbe/errors.hpp"

namespace frbe {

/// Outcome of a quadrature call: the integral estimate, a certified absolute
/// error estimate, and the number of integrand evaluations spent.
struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    long evals = 0;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Upper bound on a single panel width; pre-splits the interval. Used to
    /// keep oscillatory integrands resolved (a cos(lambda*x) factor needs
    /// panels no wider than a fraction of its period).
    double max_panel = std::numeric_limits<double>::infinity();
    std::size_t max_panels = 40000;
};

namespace detail_quad {

// 15-point Kronrod nodes with embedded 7-point Gauss rule.
inline constexpr double gk_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15_panel(F&& f, double a, double b, double& value, double& err, long& evals) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - r * gk_x[i]);
        fv[14 - i] = f(c + r * gk_x[i]);
    }
    fv[7] = f(c);
    evals += 15;

    double resk = gk_wk[7] * fv[7];
    double resabs = std::abs(resk);
    for (int i = 0; i < 7; ++i) {
        resk += gk_wk[i] * (fv[i] + fv[14 - i]);
        resabs += gk_wk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    }
    double resg = gk_wg[3] * fv[7];
    for (int i = 0; i < 3; ++i) resg += gk_wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);

    const double mean = 0.5 * resk;
    double resasc = gk_wk[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += gk_wk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

    value = resk * r;
    resabs *= std::abs(r);
    resasc *= std::abs(r);
    err = std::abs((resk - resg) * r);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(err, eps50 * resabs);
}

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail_quad

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
/// The integrand must be finite on the open interval; endpoint singularities
/// belong in integrate_tanh_sinh instead.
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, const QuadOptions& opt = {}) {
    QuadResult out;
    if (a == b) return out;

    std::priority_queue<detail_quad::Panel> heap;
    double total_value = 0.0, total_err = 0.0;
    std::size_t n_panels = 0;

    auto push_panel = [&](double lo, double hi) {
        detail_quad::Panel p{lo, hi, 0.0, 0.0};
        detail_quad::gk15_panel(f, lo, hi, p.value, p.err, out.evals);
        total_value += p.value;
        total_err += p.err;
        heap.push(p);
        ++n_panels;
    };

    const double width = b - a;
    std::size_t n_init = 1;
    if (std::isfinite(opt.max_panel) && opt.max_panel > 0.0)
        n_init = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(width) / opt.max_panel)));
    n_init = std::min(n_init, opt.max_panels);
    for (std::size_t i = 0; i < n_init; ++i)
        push_panel(a + width * static_cast<double>(i) / static_cast<double>(n_init),
                   a + width * static_cast<double>(i + 1) / static_cast<double>(n_init));

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total_value)); };

    while (total_err > target() && n_panels < opt.max_panels) {
        detail_quad::Panel worst = heap.top();
        heap.pop();
        total_value -= worst.value;
        total_err -= worst.err;
        --n_panels;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
            total_value += worst.value;
            total_err += worst.err;
            ++n_panels;
            heap.push(worst);
            break;
        }
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
    }

    out.value = total_value;
    out.abs_err = total_err;
    if (total_err > 10.0 * target())
        throw ToleranceError("adaptive Gauss-Kronrod stalled: error " + std::to_string(total_err) +
                             " exceeds tolerance " + std::to_string(target()));
    return out;
}

/// Tanh-sinh (double exponential) integration over [a, b]. Converges
/// geometrically for analytic integrands and tolerates integrable endpoint
/// singularities; the endpoints themselves are never evaluated. Nodes can
/// approach an endpoint only down to ulp(endpoint), so a singularity at a
/// nonzero endpoint is resolved to roughly sqrt(ulp) absolute accuracy;
/// shift the variable so the singular endpoint is 0 when full accuracy of
/// the sliver next to it matters.
template <class F>
QuadResult integrate_tanh_sinh(F&& f, double a, double b, const QuadOptions& opt = {}) {
    QuadResult out;
    if (a == b) return out;
    const double sign = (b > a) ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double r = 0.5 * (hi - lo);
    const double half_pi = 1.5707963267948966;

    // Nodes are placed by their distance from the nearer endpoint; forming
    // them as midpoint + r*tanh(..) instead would round that distance away
    // and cap the attainable accuracy near an endpoint singularity.
    auto pair_term = [&](double u) -> double {
        const double sh = half_pi * std::sinh(u);
        const double em = std::exp(-2.0 * sh);
        const double den = 1.0 + em;
        const double d = r * 2.0 * em / den;
        const double w = half_pi * std::cosh(u) * 4.0 * em / (den * den);
        if (d == 0.0 || w == 0.0) return 0.0;
        double acc = 0.0;
        const double xl = lo + d;
        if (xl > lo && xl < hi) {
            const double fl = f(xl);
            if (std::isfinite(fl)) acc += fl * w;  // integrable blow-up rounded to the rim
        }
        const double xr = hi - d;
        if (xr > lo && xr < hi) {
            const double fr = f(xr);
            if (std::isfinite(fr)) acc += fr * w;
        }
        return acc;
    };

    const int max_level = 12;
    double h = 1.0;
    double center = f(lo + r);
    if (!std::isfinite(center)) center = 0.0;
    double sum = half_pi * center;
    ++out.evals;

    int dead = 0;
    for (int k = 1; k <= 400 && dead < 3; ++k) {
        const double t = pair_term(k * h);
        out.evals += 2;
        sum += t;
        dead = (std::abs(t) < 1e-18 * (1.0 + std::abs(sum))) ? dead + 1 : 0;
    }
    double integral = sum * h * r;

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        dead = 0;
        for (long k = 1; k <= (1L << 22) && dead < 3; k += 2) {  // odd multiples are new nodes
            const double t = pair_term(k * h);
            out.evals += 2;
            add += t;
            dead = (std::abs(t) < 1e-18 * (1.0 + std::abs(sum + add))) ? dead + 1 : 0;
        }
        sum += add;
        const double prev = integral;
        integral = sum * h * r;
        const double diff = std::abs(integral - prev);
        out.abs_err = diff;
        if (level >= 3 && diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(integral))) break;
    }
    out.value = sign * integral;
    if (out.abs_err > 10.0 * std::max(opt.abs_tol, opt.rel_tol * std::abs(integral)) &&
        std::abs(integral) > opt.abs_tol)
        throw ToleranceError("tanh-sinh did not converge to tolerance");
    return out;
}

/// Exp-sinh (double exponential) integration over (0, inf), with nodes
/// clustered around `scale`. `h0` sets the initial step of the trapezoid in
/// the transformed variable; it is halved until two successive refinements
/// agree.
template <class F>
QuadResult integrate_exp_sinh(F&& f, double scale, const QuadOptions& opt = {}, double h0 = 0.05) {
    QuadResult out;
    const double half_pi = 1.5707963267948966;

    auto sweep = [&](double h) -> double {
        auto term = [&](double u) -> double {
            const double sh = half_pi * std::sinh(u);
            if (sh > 700.0 || sh < -700.0) return 0.0;
            const double x = scale * std::exp(sh);
            const double w = x * half_pi * std::cosh(u);
            const double fx = f(x);
            ++out.evals;
            if (!std::isfinite(fx)) return 0.0;
            return fx * w;
        };
        double s = term(0.0);
        double peak = std::abs(s);
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            int dead = 0;
            for (int k = 1; k <= 40000; ++k) {
                const double t = term(sgn * k * h);
                s += t;
                peak = std::max(peak, std::abs(t));
                if (std::abs(t) < 1e-18 * (peak + std::abs(s))) {
                    if (++dead >= 4) break;
                } else {
                    dead = 0;
                }
            }
        }
        return s * h;
    };

    double h = h0;
    double integral = sweep(h);
    for (int it = 0; it < 10; ++it) {
        h *= 0.5;
        const double refined = sweep(h);
        out.abs_err = std::abs(refined - integral);
        integral = refined;
        if (out.abs_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(integral))) break;
    }
    out.value = integral;
    if (out.abs_err > 10.0 * std::max(opt.abs_tol, opt.rel_tol * std::abs(integral)) &&
        std::abs(integral) > opt.abs_tol)
        throw ToleranceError("exp-sinh did not converge to tolerance");
    return out;
}

/// Integrates f over [a, inf) for integrands that decay at least like a
/// power: after an adaptive pass over [a, a + first_span], panels of doubling
/// width are appended until three consecutive panels contribute less than
/// tail_tol each.
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, double first_span, double tail_tol,
                                 const QuadOptions& opt = {}) {
    QuadResult out = integrate_gk(f, a, a + first_span, opt);
    double lo = a + first_span;
    double span = first_span;
    int quiet = 0;
    for (int it = 0; it < 60 && quiet < 3; ++it) {
        span *= 2.0;
        QuadResult piece = integrate_gk(f, lo, lo + span, opt);
        out.value += piece.value;
        out.abs_err += piece.abs_err;
        out.evals += piece.evals;
        lo += span;
        if (std::abs(piece.value) < tail_tol)
            ++quiet;
        else
            quiet = 0;
    }
    if (quiet < 3)
        throw ToleranceError("semi-infinite tail failed to close below tolerance");
    out.abs_err += tail_tol;
    return out;
}

}
