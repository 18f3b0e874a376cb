#include "qanova/probability.hpp"

#include <stdexcept>
#include <string>

#include "qanova/error.hpp"

namespace qanova {

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability outside [0, 1]: " + std::to_string(value));
  }
}

QuantileLevel::QuantileLevel(double q) : q_(q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("quantile level must lie strictly in (0, 1), got " +
                                std::to_string(q));
  }
}

}  // namespace qanova
