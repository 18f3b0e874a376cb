#include "qanova/distributions.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qanova/special_functions.hpp"

namespace qanova {

DiscretePmf::DiscretePmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("pmf needs at least one atom");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("pmf entries must be >= 0");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::runtime_error("pmf mass is " + std::to_string(total) + ", expected 1");
  }
  for (double& p : probs_) p /= total;
  cdf_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < probs_.size(); ++x) {
    acc += probs_[x];
    cdf_[x] = acc;
  }
  cdf_.back() = 1.0;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile requires 0 < p < 1");
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  // The upper half is reflected onto the lower one, where 1 - p is exact.
  if (p > 0.5) return -normal_quantile(1.0 - p);

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  // Halley refinement.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double gh_transform(double z, GhParams p) {
  const double tail = p.h == 0.0 ? 1.0 : std::exp(p.h * z * z / 2.0);
  if (p.g > 0.0) return std::expm1(p.g * z) / p.g * tail;
  return z * tail;
}

Sample sample_gh(std::size_t n, GhParams p, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  std::vector<double> out(n);
  for (double& v : out) v = gh_transform(normal_quantile(rng.uniform_open()), p);
  return Sample(std::move(out));
}

Sample sample_gh(std::size_t n, GhParams p, RngSeed seed) {
  RngStream rng(seed);
  return sample_gh(n, p, rng);
}

DiscretePmf beta_binomial_pmf(BetaBinomialParams p) {
  if (p.m < 1 || !(p.r > 0.0) || !(p.s > 0.0)) {
    throw std::invalid_argument("beta-binomial needs m >= 1, r > 0, s > 0");
  }
  // P(x) = B(x + r, m - x + s) / ((m + 1) B(m - x + 1, x + 1) B(r, s)); r weights the
  // count x, so r = 1, s = 3 puts the mass near 0.
  const double m = p.m;
  const double log_norm = std::log(m + 1.0) + ln_beta(p.r, p.s);
  std::vector<double> probs(static_cast<std::size_t>(p.m) + 1);
  for (int xi = 0; xi <= p.m; ++xi) {
    const double x = xi;
    probs[static_cast<std::size_t>(xi)] =
        std::exp(ln_beta(x + p.r, m - x + p.s) - ln_beta(m - x + 1.0, x + 1.0) - log_norm);
  }
  return DiscretePmf(std::move(probs));
}

int discrete_quantile(const DiscretePmf& pmf, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("discrete_quantile requires 0 < prob < 1");
  }
  const auto cdf = pmf.cdf();
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), prob);
  return static_cast<int>(it - cdf.begin());
}

namespace {

int draw_inverse_cdf(std::span<const double> cdf, RngStream& rng) {
  const double u = rng.uniform();
  // Smallest x with u < CDF(x); CDF(m) == 1 > u.
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(it - cdf.begin());
}

}  // namespace

Sample sample_discrete(const DiscretePmf& pmf, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  std::vector<double> out(n);
  for (double& v : out) v = draw_inverse_cdf(pmf.cdf(), rng);
  return Sample(std::move(out));
}

Sample sample_discrete(const DiscretePmf& pmf, std::size_t n, RngSeed seed) {
  RngStream rng(seed);
  return sample_discrete(pmf, n, rng);
}

DiscretePmf tail_modified_pmf(BetaBinomialParams base, TailVariant variant, int cut) {
  if (cut <= 0 || cut > base.m) {
    throw std::invalid_argument("tail cut must satisfy 0 < cut <= m, got " + std::to_string(cut));
  }
  const DiscretePmf pmf = beta_binomial_pmf(base);
  std::vector<double> f(pmf.probs().begin(), pmf.probs().end());
  const auto first = f.begin() + cut;
  if (variant == TailVariant::flattened) {
    double mass = 0.0;
    for (auto it = first; it != f.end(); ++it) mass += *it;
    const double each = mass / static_cast<double>(f.end() - first);
    std::fill(first, f.end(), each);
  } else {
    std::reverse(first, f.end());
  }
  return DiscretePmf(std::move(f));
}

// Config text form.

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    if (ch == ' ' || ch == '\t') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

double parse_number(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw std::invalid_argument("bad number for '" + key + "': '" + value + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("bad integer for '" + key + "': '" + value + "'");
  }
  return out;
}

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

DistributionSpec parse_distribution(std::string_view text) {
  const auto words = split_words(text);
  if (words.empty()) throw std::invalid_argument("empty distribution");
  const std::string& kind = words.front();

  struct Field {
    std::string value;
    bool seen = false;
  };
  std::vector<std::pair<std::string, Field>> fields;
  auto expect = [&](std::initializer_list<const char*> names) {
    for (const char* n : names) fields.push_back({n, {}});
  };
  if (kind == "gh") {
    expect({"g", "h"});
  } else if (kind == "betabinom") {
    expect({"m", "r", "s"});
  } else if (kind == "betabinom-tail") {
    expect({"m", "r", "s", "cut", "variant"});
  } else {
    throw std::invalid_argument("unknown distribution kind '" + kind +
                                "' (expected gh, betabinom or betabinom-tail)");
  }

  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto eq = words[i].find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected key=value, got '" + words[i] + "'");
    }
    const std::string key = words[i].substr(0, eq);
    auto it = std::find_if(fields.begin(), fields.end(), [&](auto& f) { return f.first == key; });
    if (it == fields.end()) throw std::invalid_argument("unknown parameter '" + key + "' for " + kind);
    if (it->second.seen) throw std::invalid_argument("duplicate parameter '" + key + "'");
    it->second = {words[i].substr(eq + 1), true};
  }
  for (const auto& [name, f] : fields) {
    if (!f.seen) throw std::invalid_argument("missing parameter '" + name + "' for " + kind);
  }
  auto get = [&](const char* name) -> const std::string& {
    for (const auto& [n, f] : fields) {
      if (n == name) return f.value;
    }
    throw std::logic_error("unreachable");
  };

  if (kind == "gh") {
    GhParams p{parse_number("g", get("g")), parse_number("h", get("h"))};
    if (p.g < 0.0 || p.h < 0.0) throw std::invalid_argument("g-and-h needs g >= 0 and h >= 0");
    return GhSource{p};
  }
  BetaBinomialParams bb{parse_int("m", get("m")), parse_number("r", get("r")),
                        parse_number("s", get("s"))};
  if (bb.m < 1 || !(bb.r > 0.0) || !(bb.s > 0.0)) {
    throw std::invalid_argument("beta-binomial needs m >= 1, r > 0, s > 0");
  }
  if (kind == "betabinom") return BetaBinomialSource{bb};

  TailModifiedSource t{bb, TailVariant::flattened, parse_int("cut", get("cut"))};
  const std::string& v = get("variant");
  if (v == "flattened") {
    t.variant = TailVariant::flattened;
  } else if (v == "reversed") {
    t.variant = TailVariant::reversed;
  } else {
    throw std::invalid_argument("variant must be 'flattened' or 'reversed', got '" + v + "'");
  }
  if (t.cut <= 0 || t.cut > bb.m) throw std::invalid_argument("cut must satisfy 0 < cut <= m");
  return t;
}

std::string to_string(const DistributionSpec& spec) {
  struct Visitor {
    std::string operator()(const GhSource& s) const {
      return "gh g=" + format_number(s.params.g) + " h=" + format_number(s.params.h);
    }
    std::string operator()(const BetaBinomialSource& s) const {
      return "betabinom m=" + std::to_string(s.params.m) + " r=" + format_number(s.params.r) +
             " s=" + format_number(s.params.s);
    }
    std::string operator()(const TailModifiedSource& s) const {
      return "betabinom-tail m=" + std::to_string(s.base.m) + " r=" + format_number(s.base.r) +
             " s=" + format_number(s.base.s) + " cut=" + std::to_string(s.cut) + " variant=" +
             (s.variant == TailVariant::flattened ? "flattened" : "reversed");
    }
  };
  return std::visit(Visitor{}, spec);
}

SourceSampler::SourceSampler(DistributionSpec spec) : spec_(std::move(spec)) {
  if (const auto* bb = std::get_if<BetaBinomialSource>(&spec_)) {
    const auto pmf = beta_binomial_pmf(bb->params);
    cdf_.assign(pmf.cdf().begin(), pmf.cdf().end());
  } else if (const auto* t = std::get_if<TailModifiedSource>(&spec_)) {
    const auto pmf = tail_modified_pmf(t->base, t->variant, t->cut);
    cdf_.assign(pmf.cdf().begin(), pmf.cdf().end());
  }
}

Sample SourceSampler::draw(std::size_t n, RngStream& rng) const {
  if (const auto* gh = std::get_if<GhSource>(&spec_)) return sample_gh(n, gh->params, rng);
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  std::vector<double> out(n);
  for (double& v : out) v = draw_inverse_cdf(cdf_, rng);
  return Sample(std::move(out));
}

}  // namespace qanova
