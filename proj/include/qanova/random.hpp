#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qanova {

struct RngSeed {
  std::uint64_t value = 0;
  friend constexpr bool operator==(RngSeed, RngSeed) = default;
};

// Documented default for every entry point that takes an optional seed.
inline constexpr RngSeed kDefaultSeed{20130601};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for `key` under `parent`. Distinct keys give unrelated seeds, so
// a tree of keys (purpose, group, replicate, ...) names one stream each.
constexpr RngSeed derive(RngSeed parent, std::uint64_t key) {
  return {mix64(mix64(parent.value ^ 0x6a09e667f3bcc909ULL) + 0x9e3779b97f4a7c15ULL * (key + 1))};
}

template <class... Keys>
constexpr RngSeed derive(RngSeed parent, std::uint64_t key, Keys... rest) {
  return derive(derive(parent, key), static_cast<std::uint64_t>(rest)...);
}

// Stream purposes used as the first derivation key.
enum class StreamTag : std::uint64_t {
  bootstrap = 1,
  quantile_level = 2,
  replication = 3,
  group_data = 4,
  test_statistic = 5,
};

constexpr std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

// xoshiro256** seeded through splitmix64. Satisfies
// UniformRandomBitGenerator; all helpers below are defined bit-exactly so
// streams reproduce across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(RngSeed seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on the open interval (0, 1).
  double uniform_open();
  // Uniform integer in [0, bound), bound > 0 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace qanova
