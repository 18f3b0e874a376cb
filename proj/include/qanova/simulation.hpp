#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qanova/distributions.hpp"
#include "qanova/method_q.hpp"
#include "qanova/probability.hpp"
#include "qanova/random.hpp"

namespace qanova {

inline constexpr std::size_t kDefaultReplications = 1000;

// One Monte Carlo cell. `sources` holds either one shared source or one per
// group; J is sample_sizes.size().
struct SimConfig {
  std::string name;
  std::vector<std::size_t> sample_sizes;
  std::vector<DistributionSpec> sources;
  QuantileLevel q{0.5};
  double alpha = 0.05;
  std::size_t replications = kDefaultReplications;
  std::size_t nboot = kDefaultBootstrapSamples;
  RngSeed seed = kDefaultSeed;
  double ci_level = 0.95;
  std::optional<double> reference;  // published estimate, carried to the output

  std::size_t groups() const { return sample_sizes.size(); }
  const DistributionSpec& source(std::size_t group) const;
  void validate() const;
};

struct SimResult {
  Probability alpha_hat;
  std::size_t rejections = 0;
  std::size_t replications = 0;
  // Replications whose delta cloud had no admissible direction; counted as
  // non-rejections.
  std::size_t degenerate = 0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  bool bradley_ok = false;
  double wall_seconds = 0.0;
  std::vector<double> p_values;  // NaN for degenerate replications
};

struct ConfidenceInterval {
  double low;
  double high;
};

// Exact Clopper-Pearson interval for a binomial proportion.
ConfidenceInterval binomial_ci(std::size_t successes, std::size_t trials, double level);

// alpha/2 <= alpha_hat <= 1.5 alpha; at alpha = .05 this is the [.025, .075] band.
bool bradley_check(double alpha_hat, double alpha);

// Replication r draws group j from stream derive(seed, replication, r,
// group_data, j) and tests with seed derive(seed, replication, r,
// test_statistic). Replications run in parallel; the result does not depend
// on the thread count.
SimResult estimate_type1(const SimConfig& cfg, ExecutionPolicy exec = {});

struct CellOutcome {
  SimConfig config;
  std::optional<SimResult> result;
  std::string error;
};

using CellCallback = std::function<void(std::size_t index, const CellOutcome&)>;

// Runs every cell in order; a failing cell records its error and the grid
// continues. `on_cell` (optional) is called as each cell finishes.
std::vector<CellOutcome> run_grid(const std::vector<SimConfig>& configs,
                                  ExecutionPolicy exec = {}, const CellCallback& on_cell = {});

// Config file parsing. Throws ConfigError carrying the 1-based line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<SimConfig> parse_sim_config(std::istream& in);
std::vector<SimConfig> load_sim_config(const std::string& path);

// Output formats.
void write_tsv_header(std::ostream& out);
void write_tsv_row(std::ostream& out, const CellOutcome& cell);
std::string to_json_line(const CellOutcome& cell);

}  // namespace qanova
