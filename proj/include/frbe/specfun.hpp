#pragma once

namespace frbe {

/// Evaluation record for the Mittag-Leffler function on the negative half
/// line: value = E_beta(-s) together with a certified absolute error bound.
struct MittagLefflerEval {
    double beta;
    double s;
    double value;
    double abs_err_bound;
};

/// Gamma function. Throws std::domain_error at the poles (x = 0, -1, -2, ...).
double gamma_fn(double x);

/// Reciprocal gamma 1/Gamma(x); entire, returns 0 at the poles of Gamma.
double rgamma(double x);

/// sin(pi * x) with exact argument reduction at integers.
double sinpi(double x);

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

/// E_beta(-s) for beta in (0, 1] and s >= 0, absolute error below 1e-10 for
/// s up to 1e6. beta = 1 reduces to exp(-s) and beta = 1/2 to erfcx(s).
MittagLefflerEval mittag_leffler_neg(double beta, double s);

/// Two-sided bounds 1/(1 + Gamma(1-beta) s) <= E_beta(-s) <= 1/(1 + s/Gamma(1+beta)),
/// valid for beta in (0, 1). Throws std::domain_error at beta = 1 where the
/// upper bound degenerates.
double mittag_leffler_lower(double beta, double s);
double mittag_leffler_upper(double beta, double s);

/// Modified Bessel function of the second kind K_nu(z) for real order and
/// z > 0; satisfies K_nu = K_{-nu}. Throws std::domain_error for z <= 0 and
/// std::overflow_error when the value exceeds the double range.
double bessel_k(double nu, double z);

namespace detail {

/// Series / asymptotic / Laplace-transform evaluation of E_beta(-s) that
/// never takes the beta = 1/2 or beta = 1 closed-form shortcuts. Exposed so
/// tests can compare the generic path against the closed forms.
MittagLefflerEval mittag_leffler_generic(double beta, double s);

/// Direct quadrature of the defining integral of K_nu(z), bypassing the
/// half-integer closed forms.
double bessel_k_integral(double nu, double z);

}  // namespace detail

}
