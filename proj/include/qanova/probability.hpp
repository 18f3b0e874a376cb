#pragma once

#include <compare>

namespace qanova {

// A real in [0, 1]. Construction validates the range.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }  // NOLINT

  friend constexpr auto operator<=>(Probability, Probability) = default;

 private:
  double value_ = 0.0;
};

// A quantile level q strictly inside (0, 1).
class QuantileLevel {
 public:
  explicit QuantileLevel(double q);

  constexpr double value() const { return q_; }

  friend constexpr bool operator==(QuantileLevel, QuantileLevel) = default;

 private:
  double q_;
};

}  // namespace qanova
