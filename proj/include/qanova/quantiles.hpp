#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qanova/probability.hpp"

namespace qanova {

// A nonempty sample of finite reals. Insertion order is preserved; the order
// statistics are available through sorted().
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::vector<double> sorted() const;

 private:
  std::vector<double> values_;
};

// Harrell-Davis weights for samples of size n at quantile level q:
// w_i = P((i-1)/n <= Y <= i/n) with Y ~ Beta((n+1)q, (n+1)(1-q)).
class HdWeights {
 public:
  HdWeights(std::size_t n, QuantileLevel q);

  std::size_t n() const { return weights_.size(); }
  QuantileLevel q() const { return q_; }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  // Sum of w_i * x_(i) over an already sorted range of length n().
  double apply_sorted(std::span<const double> sorted_values) const;

 private:
  QuantileLevel q_;
  std::vector<double> weights_;
};

struct Fourths {
  double lower;
  double upper;
};

double sample_median(const Sample& x);

// Median of values already in ascending order.
double sorted_median(std::span<const double> sorted_values);

inline HdWeights hd_weights(std::size_t n, QuantileLevel q) { return HdWeights(n, q); }

double hd_estimate(const Sample& x, QuantileLevel q);

// Same estimate with caller-supplied weights; weights.n() must equal x.size().
double hd_estimate(const Sample& x, const HdWeights& weights);

// Ideal fourths. With j = floor(n/4 + 5/12) and h = n/4 + 5/12 - j:
//   lower = (1-h) x_(j) + h x_(j+1),  upper = (1-h) x_(k) + h x_(k-1),
// k = n - j + 1. Requires n >= 3 (for n = 2 the index j is 0).
Fourths ideal_fourths(const Sample& x);

// As above, for a scratch buffer that may be reordered in place.
Fourths ideal_fourths_inplace(std::span<double> values);

}  // namespace qanova
