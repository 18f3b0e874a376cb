#include "qanova/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qanova/special_functions.hpp"

namespace qanova {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("sample must be nonempty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
  }
}

std::vector<double> Sample::sorted() const {
  std::vector<double> out(values_);
  std::sort(out.begin(), out.end());
  return out;
}

HdWeights::HdWeights(std::size_t n, QuantileLevel q) : q_(q), weights_(n) {
  if (n == 0) throw std::invalid_argument("Harrell-Davis weights need n >= 1");
  const double a = static_cast<double>(n + 1) * q.value();
  const double b = static_cast<double>(n + 1) * (1.0 - q.value());
  const double dn = static_cast<double>(n);

  double previous = 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double cdf = i == n ? 1.0 : reg_inc_beta(static_cast<double>(i) / dn, a, b).value();
    const double w = std::max(cdf - previous, 0.0);
    weights_[i - 1] = w;
    total += w;
    previous = cdf;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::runtime_error("Harrell-Davis weights sum to " + std::to_string(total));
  }
  for (double& w : weights_) w /= total;
}

double HdWeights::apply_sorted(std::span<const double> sorted_values) const {
  if (sorted_values.size() != weights_.size()) {
    throw std::invalid_argument("weight/sample size mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * sorted_values[i];
  // Rounding can push a constant sample a hair outside its range.
  return std::clamp(acc, sorted_values.front(), sorted_values.back());
}

double sorted_median(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[(n - 1) / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double sample_median(const Sample& x) {
  const auto sorted = x.sorted();
  return sorted_median(sorted);
}

double hd_estimate(const Sample& x, QuantileLevel q) {
  return hd_estimate(x, HdWeights(x.size(), q));
}

double hd_estimate(const Sample& x, const HdWeights& weights) {
  const auto sorted = x.sorted();
  return weights.apply_sorted(sorted);
}

Fourths ideal_fourths_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  if (n < 3) {
    throw std::invalid_argument("ideal fourths need at least 3 values, got " +
                                std::to_string(n));
  }
  // n/4 + 5/12 = (3n + 5)/12, never an integer.
  const std::size_t j = (3 * n + 5) / 12;
  const double h = static_cast<double>((3 * n + 5) % 12) / 12.0;

  // 0-based positions: x_(j) -> j-1, x_(j+1) -> j, x_(k) -> n-j, x_(k-1) -> n-j-1.
  std::nth_element(v.begin(), v.begin() + (j - 1), v.end());
  const double lo_j = v[j - 1];
  const double lo_j1 = *std::min_element(v.begin() + j, v.end());

  std::nth_element(v.begin(), v.begin() + (n - j), v.end());
  const double up_k = v[n - j];
  const double up_k1 = *std::max_element(v.begin(), v.begin() + (n - j));

  return {lo_j + h * (lo_j1 - lo_j), up_k + h * (up_k1 - up_k)};
}

Fourths ideal_fourths(const Sample& x) {
  std::vector<double> scratch(x.values().begin(), x.values().end());
  return ideal_fourths_inplace(scratch);
}

}  // namespace qanova
