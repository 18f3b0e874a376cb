#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qanova/probability.hpp"
#include "qanova/quantiles.hpp"
#include "qanova/random.hpp"

namespace qanova {

struct GhParams {
  double g = 0.0;
  double h = 0.0;
};

struct BetaBinomialParams {
  int m = 1;
  double r = 1.0;
  double s = 1.0;
};

enum class TailVariant { flattened, reversed };

// Probability mass on 0..m with its cumulative sums.
class DiscretePmf {
 public:
  // Renormalizes when the mass is within 1e-9 of 1; throws otherwise.
  explicit DiscretePmf(std::vector<double> probs);

  int max_value() const { return static_cast<int>(probs_.size()) - 1; }
  std::span<const double> probs() const { return probs_; }
  std::span<const double> cdf() const { return cdf_; }
  double operator[](int x) const { return probs_[static_cast<std::size_t>(x)]; }

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Standard normal quantile: Acklam's rational approximation refined by one
// Halley step against erfc.
double normal_quantile(double p);

double gh_transform(double z, GhParams p);

Sample sample_gh(std::size_t n, GhParams p, RngStream& rng);
Sample sample_gh(std::size_t n, GhParams p, RngSeed seed);

DiscretePmf beta_binomial_pmf(BetaBinomialParams p);

// Smallest x with CDF(x) >= prob, for 0 < prob < 1.
int discrete_quantile(const DiscretePmf& pmf, double prob);

Sample sample_discrete(const DiscretePmf& pmf, std::size_t n, RngStream& rng);
Sample sample_discrete(const DiscretePmf& pmf, std::size_t n, RngSeed seed);

// Beta-binomial with its upper tail x >= cut replaced: either spread evenly
// over the tail atoms (flattened) or with the tail probabilities in reverse
// order (reversed). The CDF below `cut` is untouched. Requires 0 < cut <= m.
DiscretePmf tail_modified_pmf(BetaBinomialParams base, TailVariant variant, int cut);

// Simulation sources.
struct GhSource {
  GhParams params;
};
struct BetaBinomialSource {
  BetaBinomialParams params;
};
struct TailModifiedSource {
  BetaBinomialParams base;
  TailVariant variant = TailVariant::flattened;
  int cut = 1;
};

using DistributionSpec = std::variant<GhSource, BetaBinomialSource, TailModifiedSource>;

// Text form used by config files, e.g.
//   gh g=0.2 h=0
//   betabinom m=20 r=3 s=3
//   betabinom-tail m=20 r=3 s=3 cut=15 variant=flattened
DistributionSpec parse_distribution(std::string_view text);
std::string to_string(const DistributionSpec& spec);

// Draws samples for one DistributionSpec; the pmf of discrete sources is built
// once at construction.
class SourceSampler {
 public:
  explicit SourceSampler(DistributionSpec spec);

  const DistributionSpec& spec() const { return spec_; }
  Sample draw(std::size_t n, RngStream& rng) const;

 private:
  DistributionSpec spec_;
  std::vector<double> cdf_;  // empty for continuous sources
};

}  // namespace qanova
