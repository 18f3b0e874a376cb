#pragma once

#include <stdexcept>
#include <string>

namespace qanova {

// Argument outside the mathematical domain of a function (ln_gamma(-1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative kernel ran out of iterations before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every projection direction of a cloud was inadmissible: all rows sit on the
// center, or every direction has a zero interquartile scale.
class DegenerateCloudError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qanova
