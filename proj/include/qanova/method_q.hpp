#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qanova/depth.hpp"
#include "qanova/probability.hpp"
#include "qanova/quantiles.hpp"
#include "qanova/random.hpp"

namespace qanova {

inline constexpr std::size_t kDefaultBootstrapSamples = 600;

// J >= 2 independent samples. Each group carries a stream key that selects its
// bootstrap random stream; by default the key is the group's position, but a
// caller may pin keys so that a group keeps its stream when groups are
// reordered.
class GroupedData {
 public:
  explicit GroupedData(std::vector<Sample> groups);
  GroupedData(std::vector<Sample> groups, std::vector<std::uint64_t> stream_keys);

  std::size_t size() const { return groups_.size(); }
  const Sample& operator[](std::size_t j) const { return groups_[j]; }
  const std::vector<Sample>& groups() const { return groups_; }
  std::uint64_t stream_key(std::size_t j) const { return stream_keys_[j]; }

 private:
  std::vector<Sample> groups_;
  std::vector<std::uint64_t> stream_keys_;
};

// Pairs (j, k), j < k, in lexicographic order; the column order of a DeltaCloud.
std::vector<std::pair<std::size_t, std::size_t>> group_pairs(std::size_t groups);

// (B + 1) x L matrix of bootstrap pairwise differences; the last row is zero.
class DeltaCloud {
 public:
  DeltaCloud(std::size_t groups, std::size_t nboot);

  std::size_t groups() const { return groups_; }
  std::size_t nboot() const { return cloud_.rows() - 1; }
  std::size_t pairs() const { return cloud_.cols(); }

  const Cloud& matrix() const { return cloud_; }
  Cloud& matrix() { return cloud_; }

  // One row per line, tab-separated, shortest round-trip formatting.
  void write_tsv(std::ostream& out) const;

 private:
  std::size_t groups_;
  Cloud cloud_;
};

struct QTestResult {
  QuantileLevel q;
  std::vector<double> estimates;
  std::vector<double> deltas;
  Probability p_value;
  std::size_t nboot = 0;
  RngSeed seed;
  std::size_t skipped_directions = 0;
};

struct ExecutionPolicy {
  unsigned threads = 1;
};

DeltaCloud bootstrap_deltas(const GroupedData& data, QuantileLevel q, std::size_t nboot,
                            RngSeed seed, ExecutionPolicy exec = {});

QTestResult qanova(const GroupedData& data, QuantileLevel q,
                   std::size_t nboot = kDefaultBootstrapSamples, RngSeed seed = kDefaultSeed,
                   ExecutionPolicy exec = {});

// Seed used for level q inside qanova_multi.
RngSeed seed_for_level(RngSeed seed, QuantileLevel q);

// One independent qanova run per level, each with seed_for_level(seed, q).
std::vector<QTestResult> qanova_multi(const GroupedData& data,
                                      std::span<const QuantileLevel> levels,
                                      std::size_t nboot = kDefaultBootstrapSamples,
                                      RngSeed seed = kDefaultSeed, ExecutionPolicy exec = {});

}  // namespace qanova
