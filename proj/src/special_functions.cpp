#include "qanova/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qanova/error.hpp"

namespace qanova {

namespace {

constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz. Valid (fast) for
// x < (a + 1) / (a + b + 2).
double inc_beta_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kIncBetaMaxIterations; ++m) {
    const double dm = m;
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kIncBetaTolerance) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge (x=" +
                         std::to_string(x) + ", a=" + std::to_string(a) +
                         ", b=" + std::to_string(b) + ")");
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma requires x > 0, got " + std::to_string(x));
  }
  double y = x;
  double tmp = x + 671.0 / 128.0;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double series = 0.999999999999997092;
  for (double c : kLanczos) series += c / ++y;
  return tmp + std::log(2.5066282746310005 * series / x);
}

double ln_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("ln_beta requires a > 0 and b > 0");
  }
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

Probability reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("reg_inc_beta requires a > 0 and b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("reg_inc_beta requires 0 <= x <= 1, got " + std::to_string(x));
  }
  if (x == 0.0) return Probability(0.0);
  if (x == 1.0) return Probability(1.0);

  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b);
  double result;
  if (x > (a + 1.0) / (a + b + 2.0)) {
    result = 1.0 - std::exp(log_front) * inc_beta_fraction(1.0 - x, b, a) / b;
  } else {
    result = std::exp(log_front) * inc_beta_fraction(x, a, b) / a;
  }
  if (result < 0.0) result = 0.0;
  if (result > 1.0) result = 1.0;
  return Probability(result);
}

double inv_reg_inc_beta(double p, double a, double b) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("inv_reg_inc_beta requires 0 <= p <= 1");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  // I is monotone in x; keep I(lo) < p <= I(hi).
  for (int iter = 0; iter < 200 && hi - lo > std::numeric_limits<double>::epsilon() * hi;
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (reg_inc_beta(mid, a, b).value() >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace qanova
