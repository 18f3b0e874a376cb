#pragma once

#include "qanova/probability.hpp"

namespace qanova {

// ln Gamma(x) for x > 0 (Lanczos, g = 671/128). Throws DomainError for x <= 0.
double ln_gamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double ln_beta(double a, double b);

// Regularized incomplete beta function I_x(a, b), i.e. the Beta(a, b) CDF.
//
// Evaluated with the modified Lentz continued fraction, switching to
// 1 - I_{1-x}(b, a) when x > (a + 1) / (a + b + 2). Throws DomainError
// outside 0 <= x <= 1, a > 0, b > 0 and ConvergenceError if the fraction has
// not converged to kIncBetaTolerance within kIncBetaMaxIterations terms.
Probability reg_inc_beta(double x, double a, double b);

// Smallest x in [0, 1] with I_x(a, b) >= p, located by bisection on
// reg_inc_beta. Used for Clopper-Pearson bounds.
double inv_reg_inc_beta(double p, double a, double b);

inline constexpr double kIncBetaTolerance = 1e-14;
inline constexpr int kIncBetaMaxIterations = 300;

}  // namespace qanova
