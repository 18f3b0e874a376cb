#include "qanova/simulation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qanova/error.hpp"
#include "qanova/parallel.hpp"
#include "qanova/special_functions.hpp"

namespace qanova {

const DistributionSpec& SimConfig::source(std::size_t group) const {
  return sources.size() == 1 ? sources.front() : sources.at(group);
}

void SimConfig::validate() const {
  if (groups() < 2) throw std::invalid_argument(name + ": need at least 2 groups");
  for (std::size_t n : sample_sizes) {
    if (n < 2) throw std::invalid_argument(name + ": every sample size must be >= 2");
  }
  if (sources.size() != 1 && sources.size() != groups()) {
    throw std::invalid_argument(name + ": need one shared source or one source per group");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument(name + ": alpha must be in (0, 1)");
  if (replications < 1) throw std::invalid_argument(name + ": replications must be >= 1");
  if (nboot < 2) throw std::invalid_argument(name + ": nboot must be >= 2");
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw std::invalid_argument(name + ": ci_level must be in (0, 1)");
  }
}

ConfidenceInterval binomial_ci(std::size_t successes, std::size_t trials, double level) {
  if (trials == 0 || successes > trials) {
    throw std::invalid_argument("binomial_ci needs 0 <= successes <= trials and trials >= 1");
  }
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  const double tail = (1.0 - level) / 2.0;
  const double x = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  const double low = successes == 0 ? 0.0 : inv_reg_inc_beta(tail, x, n - x + 1.0);
  const double high = successes == trials ? 1.0 : inv_reg_inc_beta(1.0 - tail, x + 1.0, n - x);
  return {low, high};
}

bool bradley_check(double alpha_hat, double alpha) {
  return alpha_hat >= alpha / 2.0 && alpha_hat <= 1.5 * alpha;
}

SimResult estimate_type1(const SimConfig& cfg, ExecutionPolicy exec) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<SourceSampler> samplers;
  samplers.reserve(cfg.groups());
  for (std::size_t j = 0; j < cfg.groups(); ++j) samplers.emplace_back(cfg.source(j));

  std::vector<double> p_values(cfg.replications);
  parallel_for(cfg.replications, exec.threads, [&](std::size_t r) {
    const RngSeed rep = derive(cfg.seed, tag(StreamTag::replication), r);
    std::vector<Sample> groups;
    groups.reserve(cfg.groups());
    for (std::size_t j = 0; j < cfg.groups(); ++j) {
      RngStream rng(derive(rep, tag(StreamTag::group_data), j));
      groups.push_back(samplers[j].draw(cfg.sample_sizes[j], rng));
    }
    try {
      const auto result = qanova(GroupedData(std::move(groups)), cfg.q, cfg.nboot,
                                 derive(rep, tag(StreamTag::test_statistic)));
      p_values[r] = result.p_value.value();
    } catch (const DegenerateCloudError&) {
      p_values[r] = std::numeric_limits<double>::quiet_NaN();
    }
  });

  SimResult out;
  out.replications = cfg.replications;
  for (double p : p_values) {
    if (std::isnan(p)) {
      ++out.degenerate;
    } else if (p <= cfg.alpha) {
      ++out.rejections;
    }
  }
  out.alpha_hat = Probability(static_cast<double>(out.rejections) /
                              static_cast<double>(out.replications));
  const auto ci = binomial_ci(out.rejections, out.replications, cfg.ci_level);
  out.ci_low = ci.low;
  out.ci_high = ci.high;
  out.bradley_ok = bradley_check(out.alpha_hat.value(), cfg.alpha);
  out.p_values = std::move(p_values);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<CellOutcome> run_grid(const std::vector<SimConfig>& configs, ExecutionPolicy exec,
                                  const CellCallback& on_cell) {
  if (configs.empty()) throw std::invalid_argument("simulation grid is empty");
  std::vector<CellOutcome> outcomes;
  outcomes.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    CellOutcome cell{configs[i], std::nullopt, {}};
    try {
      cell.result = estimate_type1(configs[i], exec);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    if (on_cell) on_cell(i, cell);
    outcomes.push_back(std::move(cell));
  }
  return outcomes;
}

}  // namespace qanova
