// Grid config files and result writers for the simulation harness.
//
// Config format: '#' starts a comment; `key = value` lines before the first
// `[name]` header are defaults shared by every cell, and each `[name]` header
// opens a cell. A file without headers describes one cell.
//
//   replications = 1000
//   nboot = 600
//
//   [normal-median-n20]
//   groups = 4
//   size = 20              # or: sizes = 20, 20, 40, 40
//   source = gh g=0 h=0    # shared; source.2 = ... overrides group 2
//   q = 0.5
//   alpha = 0.05
//   seed = 1
//   reference = 0.059

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <type_traits>

#include <json.hpp>

#include "qanova/simulation.hpp"

namespace qanova {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_value(const Entry& e, const std::string& key) {
  T out{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(e.line, "cannot parse '" + e.value + "' as a value for '" + key + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ConfigError(e.line, "'" + key + "' must be finite");
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const Entry& e) {
  std::vector<std::size_t> sizes;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    sizes.push_back(parse_value<std::size_t>(Entry{token, e.line}, "sizes"));
    token.clear();
  };
  for (char ch : e.value) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  if (sizes.empty()) throw ConfigError(e.line, "'sizes' is empty");
  return sizes;
}

SimConfig build_cell(const std::string& name, std::size_t header_line, const Section& defaults,
                     const Section& own) {
  Section merged = defaults;
  for (const auto& [k, v] : own) merged[k] = v;

  SimConfig cfg;
  cfg.name = name;
  std::optional<std::size_t> groups;
  std::optional<std::size_t> size;
  std::optional<DistributionSpec> shared;
  std::map<std::size_t, std::pair<DistributionSpec, std::size_t>> per_group;

  for (const auto& [key, entry] : merged) {
    try {
      if (key == "groups") {
        groups = parse_value<std::size_t>(entry, key);
      } else if (key == "size") {
        size = parse_value<std::size_t>(entry, key);
      } else if (key == "sizes") {
        cfg.sample_sizes = parse_sizes(entry);
      } else if (key == "source") {
        shared = parse_distribution(entry.value);
      } else if (key.rfind("source.", 0) == 0) {
        const auto idx = parse_value<std::size_t>(Entry{key.substr(7), entry.line}, key);
        if (idx == 0) throw ConfigError(entry.line, "group numbers start at 1");
        per_group.insert_or_assign(idx, std::pair{parse_distribution(entry.value), entry.line});
      } else if (key == "q") {
        cfg.q = QuantileLevel(parse_value<double>(entry, key));
      } else if (key == "alpha") {
        cfg.alpha = parse_value<double>(entry, key);
      } else if (key == "replications") {
        cfg.replications = parse_value<std::size_t>(entry, key);
      } else if (key == "nboot") {
        cfg.nboot = parse_value<std::size_t>(entry, key);
      } else if (key == "seed") {
        cfg.seed = RngSeed{parse_value<std::uint64_t>(entry, key)};
      } else if (key == "ci_level") {
        cfg.ci_level = parse_value<double>(entry, key);
      } else if (key == "reference") {
        cfg.reference = parse_value<double>(entry, key);
      } else {
        throw ConfigError(entry.line, "unknown key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(entry.line, e.what());
    }
  }

  if (cfg.sample_sizes.empty()) {
    if (!groups || !size) {
      throw ConfigError(header_line, "cell '" + name + "' needs 'sizes' or both 'groups' and 'size'");
    }
    cfg.sample_sizes.assign(*groups, *size);
  } else if (groups && *groups != cfg.sample_sizes.size()) {
    throw ConfigError(merged.at("groups").line, "'groups' disagrees with the length of 'sizes'");
  }

  if (per_group.empty()) {
    if (!shared) throw ConfigError(header_line, "cell '" + name + "' has no 'source'");
    cfg.sources = {*shared};
  } else {
    for (const auto& [idx, spec] : per_group) {
      if (idx > cfg.groups()) {
        throw ConfigError(spec.second, "source." + std::to_string(idx) + " exceeds the group count");
      }
    }
    for (std::size_t j = 1; j <= cfg.groups(); ++j) {
      auto it = per_group.find(j);
      if (it != per_group.end()) {
        cfg.sources.push_back(it->second.first);
      } else if (shared) {
        cfg.sources.push_back(*shared);
      } else {
        throw ConfigError(header_line, "cell '" + name + "' has no source for group " +
                                           std::to_string(j));
      }
    }
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(header_line, e.what());
  }
  return cfg;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes[i]);
  }
  return out;
}

std::string join_sources(const SimConfig& cfg) {
  std::string out;
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    if (i) out += " | ";
    out += to_string(cfg.sources[i]);
  }
  return out;
}

}  // namespace

std::vector<SimConfig> parse_sim_config(std::istream& in) {
  Section defaults;
  std::vector<std::tuple<std::string, std::size_t, Section>> cells;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(line_no, "empty cell name");
      for (const auto& c : cells) {
        if (std::get<0>(c) == name) throw ConfigError(line_no, "duplicate cell name '" + name + "'");
      }
      cells.emplace_back(name, line_no, Section{});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    Section& target = cells.empty() ? defaults : std::get<2>(cells.back());
    if (target.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    target.emplace(key, Entry{value, line_no});
  }

  std::vector<SimConfig> out;
  if (cells.empty()) {
    if (defaults.empty()) throw ConfigError(line_no == 0 ? 1 : line_no, "config describes no cells");
    out.push_back(build_cell("cell", 1, {}, defaults));
    return out;
  }
  for (const auto& [name, line, section] : cells) out.push_back(build_cell(name, line, defaults, section));
  return out;
}

std::vector<SimConfig> load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_sim_config(in);
}

void write_tsv_header(std::ostream& out) {
  out << "cell\tJ\tsizes\tsources\tq\talpha\treplications\tnboot\tseed\trejections\tdegenerate"
         "\talpha_hat\tci_low\tci_high\tbradley_ok\treference\twall_seconds\terror\n";
}

void write_tsv_row(std::ostream& out, const CellOutcome& cell) {
  const SimConfig& c = cell.config;
  out << c.name << '\t' << c.groups() << '\t' << join_sizes(c.sample_sizes) << '\t'
      << join_sources(c) << '\t' << format_double(c.q.value()) << '\t' << format_double(c.alpha)
      << '\t' << c.replications << '\t' << c.nboot << '\t' << c.seed.value << '\t';
  if (cell.result) {
    const SimResult& r = *cell.result;
    out << r.rejections << '\t' << r.degenerate << '\t' << format_double(r.alpha_hat.value())
        << '\t' << format_double(r.ci_low) << '\t' << format_double(r.ci_high) << '\t'
        << (r.bradley_ok ? "yes" : "no") << '\t';
  } else {
    out << "\t\t\t\t\t\t";
  }
  out << (c.reference ? format_double(*c.reference) : "") << '\t';
  out << (cell.result ? format_double(cell.result->wall_seconds) : "") << '\t';
  std::string err = cell.error;
  for (char& ch : err) {
    if (ch == '\t' || ch == '\n') ch = ' ';
  }
  out << err << '\n';
}

std::string to_json_line(const CellOutcome& cell) {
  const SimConfig& c = cell.config;
  nlohmann::json j;
  j["cell"] = c.name;
  j["J"] = c.groups();
  j["sizes"] = c.sample_sizes;
  std::vector<std::string> sources;
  for (const auto& s : c.sources) sources.push_back(to_string(s));
  j["sources"] = sources;
  j["q"] = c.q.value();
  j["alpha"] = c.alpha;
  j["replications"] = c.replications;
  j["nboot"] = c.nboot;
  j["seed"] = c.seed.value;
  j["ci_level"] = c.ci_level;
  j["reference"] = c.reference ? nlohmann::json(*c.reference) : nlohmann::json(nullptr);
  if (cell.result) {
    const SimResult& r = *cell.result;
    j["rejections"] = r.rejections;
    j["degenerate"] = r.degenerate;
    j["alpha_hat"] = r.alpha_hat.value();
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["bradley_ok"] = r.bradley_ok;
    j["wall_seconds"] = r.wall_seconds;
    j["error"] = nullptr;
  } else {
    j["error"] = cell.error;
  }
  return j.dump();
}

}  // namespace qanova
