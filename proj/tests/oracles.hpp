#pragma once

#include <cmath>
#include <stdexcept>

namespace oracle {

// Extended-precision Taylor sum for E_beta(-s).  Cancellation grows with the
// largest term, roughly exp(s^(1/beta)), so callers must keep s^(1/beta)
// small; the guard below turns misuse into a thrown error instead of a
// silently wrong reference value.
inline long double mittag_leffler_series(long double beta, long double s) {
    if (s < 0.0L) throw std::invalid_argument("oracle series needs s >= 0");
    if (s == 0.0L) return 1.0L;
    long double sum = 0.0L;
    long double log_s = std::log(s);
    bool converged = false;
    for (int k = 0; k <= 4000; ++k) {
        long double log_mag = k * log_s - std::lgammal(1.0L + beta * k);
        if (log_mag > 16.0L)
            throw std::invalid_argument("oracle series out of its safe range");
        long double term = std::exp(log_mag);
        sum += (k % 2 == 0) ? term : -term;
        if (k > 2 * s && term < 1e-28L * std::fabs(sum)) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::invalid_argument("oracle series did not converge");
    return sum;
}

// E_beta(-s) through the spectral (complete monotonicity) representation
// E_beta(-t^beta) = int_0^inf exp(-r t) g_beta(r) dr evaluated with t =
// s^(1/beta), by composite Simpson in the log variable r = e^y.
inline long double mittag_leffler_spectral(long double beta, long double s) {
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double u = std::pow(s, 1.0L / beta);
    const long double sb = std::sin(beta * pi);
    const long double cb = std::cos(beta * pi);
    auto f = [&](long double y) -> long double {
        const long double expo = beta * y - u * std::exp(y);
        if (expo < -11400.0L) return 0.0L;
        const long double rb = std::exp(beta * y);
        return (sb / pi) * std::exp(expo) / (rb * rb + 2.0L * rb * cb + 1.0L);
    };
    const long double y_lo = -70.0L / static_cast<long double>(beta);
    const long double y_hi = std::log(11400.0L / u) * 1.02L + 2.0L;
    const int n = 1 << 20;
    const long double h = (y_hi - y_lo) / n;
    long double acc = f(y_lo) + f(y_hi);
    for (int i = 1; i < n; ++i) acc += f(y_lo + i * h) * (i % 2 ? 4.0L : 2.0L);
    return acc * h / 3.0L;
}

// erfcx(s) = (2/sqrt(pi)) * int_0^inf exp(-u^2 - 2 s u) du by composite
// Simpson on a truncated interval sized to the integrand's decay scale.
inline long double erfcx_quad(long double s) {
    const long double u_max = std::min(30.0L, 42.0L / std::max(s, 0.01L));
    const int n = 1 << 16;
    const long double h = u_max / n;
    auto f = [&](long double u) { return std::exp(-u * u - 2.0L * s * u); };
    long double acc = f(0.0L) + f(u_max);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0L : 2.0L);
    const long double pi = 3.14159265358979323846264338327950288L;
    return acc * h / 3.0L * 2.0L / std::sqrt(pi);
}

// K_nu(z) = (1/2) int_{-U}^{U} exp(nu u - z cosh u) du with U chosen so the
// discarded tail is below the working precision, then composite Simpson.
inline long double bessel_k_quad(long double nu, long double z) {
    long double u_end = 2.0L;
    for (int it = 0; it < 200; ++it) {
        if (z * std::cosh(u_end) - std::fabs(nu) * u_end > 760.0L) break;
        u_end += 0.5L;
    }
    const int n = 1 << 17;
    const long double h = 2.0L * u_end / n;
    auto f = [&](long double u) { return std::exp(nu * u - z * std::cosh(u)); };
    long double acc = f(-u_end) + f(u_end);
    for (int i = 1; i < n; ++i) acc += f(-u_end + i * h) * (i % 2 ? 4.0L : 2.0L);
    return acc * h / 3.0L * 0.5L;
}

}  // namespace oracle
