#include "qanova/method_q.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qanova/error.hpp"
#include "qanova/parallel.hpp"

namespace qanova {

namespace {

std::vector<std::uint64_t> positional_keys(std::size_t n) {
  std::vector<std::uint64_t> keys(n);
  for (std::size_t j = 0; j < n; ++j) keys[j] = j;
  return keys;
}

// Per-group state shared by every bootstrap replicate.
struct GroupPlan {
  std::vector<double> sorted;
  HdWeights weights;
  std::uint64_t stream_key;
};

// Harrell-Davis estimate of one with-replacement resample. The source values
// are sorted, so tallying how often each index is drawn yields the sorted
// resample directly.
double resampled_estimate(const GroupPlan& g, RngStream& rng, std::vector<std::uint32_t>& counts) {
  const std::size_t n = g.sorted.size();
  counts.assign(n, 0);
  for (std::size_t draw = 0; draw < n; ++draw) ++counts[rng.below(n)];

  double acc = 0.0;
  std::size_t position = 0;
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::uint32_t c = counts[idx];
    if (c == 0) continue;
    first = std::min(first, idx);
    last = idx;
    double w = 0.0;
    for (std::uint32_t r = 0; r < c; ++r) w += g.weights[position++];
    acc += w * g.sorted[idx];
  }
  return std::clamp(acc, g.sorted[first], g.sorted[last]);
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

}  // namespace

GroupedData::GroupedData(std::vector<Sample> groups)
    : GroupedData(std::move(groups), positional_keys(0)) {}

GroupedData::GroupedData(std::vector<Sample> groups, std::vector<std::uint64_t> stream_keys)
    : groups_(std::move(groups)), stream_keys_(std::move(stream_keys)) {
  if (groups_.size() < 2) {
    throw std::invalid_argument("need at least 2 groups, got " + std::to_string(groups_.size()));
  }
  if (stream_keys_.empty()) stream_keys_ = positional_keys(groups_.size());
  if (stream_keys_.size() != groups_.size()) {
    throw std::invalid_argument("one stream key per group required");
  }
  auto sorted_keys = stream_keys_;
  std::sort(sorted_keys.begin(), sorted_keys.end());
  if (std::adjacent_find(sorted_keys.begin(), sorted_keys.end()) != sorted_keys.end()) {
    throw std::invalid_argument("group stream keys must be distinct");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> group_pairs(std::size_t groups) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(groups * (groups - 1) / 2);
  for (std::size_t j = 0; j < groups; ++j) {
    for (std::size_t k = j + 1; k < groups; ++k) pairs.emplace_back(j, k);
  }
  return pairs;
}

DeltaCloud::DeltaCloud(std::size_t groups, std::size_t nboot)
    : groups_(groups), cloud_(nboot + 1, groups * (groups - 1) / 2) {
  if (groups < 2) throw std::invalid_argument("delta cloud needs at least 2 groups");
  if (nboot < 1) throw std::invalid_argument("delta cloud needs B >= 1");
}

void DeltaCloud::write_tsv(std::ostream& out) const {
  std::string line;
  for (std::size_t i = 0; i < cloud_.rows(); ++i) {
    line.clear();
    for (std::size_t k = 0; k < cloud_.cols(); ++k) {
      if (k > 0) line.push_back('\t');
      append_double(line, cloud_(i, k));
    }
    line.push_back('\n');
    out << line;
  }
}

DeltaCloud bootstrap_deltas(const GroupedData& data, QuantileLevel q, std::size_t nboot,
                            RngSeed seed, ExecutionPolicy exec) {
  if (nboot < 1) throw std::invalid_argument("number of bootstrap samples must be >= 1");
  const std::size_t groups = data.size();
  std::vector<GroupPlan> plan;
  plan.reserve(groups);
  for (std::size_t j = 0; j < groups; ++j) {
    if (data[j].size() < 2) {
      throw std::invalid_argument("group " + std::to_string(j + 1) +
                                  " has fewer than 2 observations");
    }
    plan.push_back({data[j].sorted(), HdWeights(data[j].size(), q), data.stream_key(j)});
  }

  DeltaCloud cloud(groups, nboot);
  Cloud& g = cloud.matrix();
  parallel_for_chunks(nboot, exec.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<double> theta(groups);
    std::vector<std::uint32_t> counts;
    for (std::size_t b = begin; b < end; ++b) {
      for (std::size_t j = 0; j < groups; ++j) {
        RngStream rng(derive(seed, tag(StreamTag::bootstrap), plan[j].stream_key, b));
        theta[j] = resampled_estimate(plan[j], rng, counts);
      }
      auto row = g.row(b);
      std::size_t col = 0;
      for (std::size_t j = 0; j < groups; ++j) {
        for (std::size_t k = j + 1; k < groups; ++k) row[col++] = theta[j] - theta[k];
      }
    }
  });
  return cloud;
}

QTestResult qanova(const GroupedData& data, QuantileLevel q, std::size_t nboot, RngSeed seed,
                   ExecutionPolicy exec) {
  if (nboot < 2) {
    throw std::invalid_argument("method Q needs at least 2 bootstrap samples (cloud of B+1 >= 3 rows)");
  }
  const DeltaCloud cloud = bootstrap_deltas(data, q, nboot, seed, exec);

  DepthReport depth;
  try {
    depth = projection_distances(cloud.matrix(), exec.threads);
  } catch (const DegenerateCloudError& e) {
    throw DegenerateCloudError(std::string(e.what()) +
                               "; the bootstrap differences show no usable spread. Check for "
                               "heavily tied or constant groups and consider larger samples");
  }

  const std::span<const double> all(depth.distances);
  const double null_distance = all.back();
  const Probability p = depth_pvalue(all.first(nboot), null_distance);

  std::vector<double> estimates(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) estimates[j] = hd_estimate(data[j], q);
  std::vector<double> deltas;
  for (auto [j, k] : group_pairs(data.size())) deltas.push_back(estimates[j] - estimates[k]);

  return QTestResult{q, std::move(estimates), std::move(deltas), p, nboot, seed,
                     depth.skipped_directions};
}

RngSeed seed_for_level(RngSeed seed, QuantileLevel q) {
  return derive(seed, tag(StreamTag::quantile_level), std::bit_cast<std::uint64_t>(q.value()));
}

std::vector<QTestResult> qanova_multi(const GroupedData& data,
                                      std::span<const QuantileLevel> levels, std::size_t nboot,
                                      RngSeed seed, ExecutionPolicy exec) {
  if (levels.empty()) throw std::invalid_argument("need at least one quantile level");
  for (std::size_t a = 0; a < levels.size(); ++a) {
    for (std::size_t b = a + 1; b < levels.size(); ++b) {
      if (levels[a] == levels[b]) throw std::invalid_argument("quantile levels must be distinct");
    }
  }
  std::vector<QTestResult> results;
  results.reserve(levels.size());
  for (QuantileLevel q : levels) {
    results.push_back(qanova(data, q, nboot, seed_for_level(seed, q), exec));
  }
  return results;
}

}  // namespace qanova
