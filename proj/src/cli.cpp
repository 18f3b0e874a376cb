#include "qanova/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qanova/error.hpp"
#include "qanova/parallel.hpp"
#include "qanova/quantiles.hpp"
#include "qanova/simulation.hpp"

namespace qanova::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
      current.push_back(ch);
    } else if (ch == ',' && !quoted) {
      fields.push_back(unquote(trim(current)));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(unquote(trim(current)));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = first + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::vector<QuantileLevel> to_levels(const std::vector<double>& qs) {
  std::vector<QuantileLevel> levels;
  for (double q : qs) levels.emplace_back(q);
  return levels;
}

}  // namespace

GroupedData InputTable::to_grouped() const {
  std::vector<Sample> samples;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j].empty()) throw InputError("group '" + labels[j] + "' is empty");
    samples.emplace_back(values[j]);
  }
  return GroupedData(std::move(samples));
}

InputTable read_table(std::istream& in, bool allow_single_column) {
  InputTable table;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    auto fields = split_csv(line);

    if (!header_seen) {
      header_seen = true;
      columns = fields.size();
      double probe = 0.0;
      if (columns == 1 && allow_single_column) {
        table.labels.push_back("all");
        table.values.emplace_back();
        if (!parse_double(fields[0], probe)) continue;  // header line
      } else if (columns == 2) {
        if (parse_double(fields[1], probe)) {
          throw InputError("line " + std::to_string(line_no) +
                           ": expected a header line 'group,value'");
        }
        continue;
      } else if (columns > 2) {
        throw InputError("line " + std::to_string(line_no) + ": found " +
                         std::to_string(columns) +
                         " columns; wide format is not supported, use long format 'group,value'");
      } else {
        throw InputError("line " + std::to_string(line_no) +
                         ": expected two columns 'group,value'");
      }
    }

    if (fields.size() != columns) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " fields, found " +
                       std::to_string(fields.size()));
    }
    double value = 0.0;
    const std::string& text = fields[columns - 1];
    if (!parse_double(text, value) || !std::isfinite(value)) {
      throw InputError("line " + std::to_string(line_no) + ": '" + text +
                       "' is not a finite number");
    }
    if (columns == 1) {
      table.values.front().push_back(value);
      continue;
    }
    const std::string& label = fields[0];
    if (label.empty()) throw InputError("line " + std::to_string(line_no) + ": empty group label");
    auto it = std::find(table.labels.begin(), table.labels.end(), label);
    if (it == table.labels.end()) {
      table.labels.push_back(label);
      table.values.emplace_back();
      it = table.labels.end() - 1;
    }
    table.values[static_cast<std::size_t>(it - table.labels.begin())].push_back(value);
  }
  if (!header_seen) throw InputError("input is empty");
  for (std::size_t j = 0; j < table.values.size(); ++j) {
    if (table.values[j].empty()) throw InputError("group '" + table.labels[j] + "' is empty");
  }
  return table;
}

InputTable read_table_file(const std::string& path, bool allow_single_column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_table(in, allow_single_column);
}

int cmd_test(const TestOptions& opts, std::ostream& out, std::ostream& err) {
  InputTable table;
  std::vector<QuantileLevel> levels;
  try {
    table = read_table_file(opts.file);
    if (table.labels.size() < 2) {
      err << "error: need at least 2 groups, found " << table.labels.size() << "\n";
      return kUsageError;
    }
    levels = to_levels(opts.levels);
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw InputError("--alpha must be in (0, 1)");
    if (opts.nboot < 2) throw InputError("--nboot must be at least 2");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  std::vector<QTestResult> results;
  try {
    const GroupedData data = table.to_grouped();
    results = qanova_multi(data, levels, opts.nboot, RngSeed{opts.seed},
                           ExecutionPolicy{opts.threads});
  } catch (const DegenerateCloudError& e) {
    err << "error: degenerate depth computation: " << e.what() << "\n";
    return kComputationError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }

  const auto pairs = group_pairs(table.labels.size());
  for (const auto& r : results) {
    const bool reject = r.p_value.value() <= opts.alpha;
    if (opts.format == OutputFormat::json_lines) {
      nlohmann::json j;
      j["q"] = r.q.value();
      j["groups"] = table.labels;
      std::vector<std::size_t> sizes;
      for (const auto& v : table.values) sizes.push_back(v.size());
      j["n"] = sizes;
      j["estimates"] = r.estimates;
      nlohmann::json deltas = nlohmann::json::array();
      for (std::size_t c = 0; c < pairs.size(); ++c) {
        deltas.push_back({{"j", table.labels[pairs[c].first]},
                          {"k", table.labels[pairs[c].second]},
                          {"delta", r.deltas[c]}});
      }
      j["deltas"] = deltas;
      j["p_value"] = r.p_value.value();
      j["alpha"] = opts.alpha;
      j["reject"] = reject;
      j["nboot"] = r.nboot;
      j["seed"] = opts.seed;
      j["level_seed"] = r.seed.value;
      j["skipped_directions"] = r.skipped_directions;
      out << j.dump() << "\n";
      continue;
    }
    out << "q = " << format_double(r.q.value()) << "  (nboot " << r.nboot << ", seed "
        << opts.seed << ")\n";
    std::size_t width = 5;
    for (const auto& l : table.labels) width = std::max(width, l.size());
    for (std::size_t j = 0; j < table.labels.size(); ++j) {
      out << "  " << std::left << std::setw(static_cast<int>(width)) << table.labels[j]
          << std::right << "  n=" << std::setw(5) << table.values[j].size()
          << "  estimate " << fixed(r.estimates[j], 6) << "\n";
    }
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      out << "  delta " << table.labels[pairs[c].first] << " - " << table.labels[pairs[c].second]
          << " = " << fixed(r.deltas[c], 6) << "\n";
    }
    out << "  p-value " << fixed(r.p_value.value(), 4) << "  ("
        << (reject ? "reject" : "do not reject") << " at alpha " << format_double(opts.alpha)
        << ")\n\n";
  }
  return kSuccess;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<SimConfig> configs;
  try {
    configs = load_sim_config(opts.config);
  } catch (const std::exception& e) {
    err << "error: " << opts.config << ": " << e.what() << "\n";
    return kUsageError;
  }

  std::ofstream tsv;
  std::ofstream jsonl;
  try {
    std::filesystem::create_directories(opts.out_dir);
    const auto dir = std::filesystem::path(opts.out_dir);
    tsv.open(dir / "results.tsv");
    jsonl.open(dir / "results.jsonl");
    if (!tsv || !jsonl) throw std::runtime_error("cannot write to '" + opts.out_dir + "'");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  write_tsv_header(tsv);
  std::size_t completed = 0;
  const auto outcomes = run_grid(
      configs, ExecutionPolicy{opts.threads}, [&](std::size_t i, const CellOutcome& cell) {
        write_tsv_row(tsv, cell);
        tsv.flush();
        jsonl << to_json_line(cell) << "\n";
        jsonl.flush();
        out << "[" << (i + 1) << "/" << configs.size() << "] " << cell.config.name << ": ";
        if (cell.result) {
          ++completed;
          const SimResult& r = *cell.result;
          out << "alpha_hat " << fixed(r.alpha_hat.value(), 4) << "  CI [" << fixed(r.ci_low, 4)
              << ", " << fixed(r.ci_high, 4) << "]";
          if (cell.config.reference) out << "  reference " << format_double(*cell.config.reference);
          if (r.degenerate > 0) out << "  degenerate " << r.degenerate;
          out << "  (" << fixed(r.wall_seconds, 1) << " s)\n";
        } else {
          out << "FAILED: " << cell.error << "\n";
        }
        out.flush();
      });
  return completed > 0 ? kSuccess : kComputationError;
}

int cmd_hd(const HdOptions& opts, std::ostream& out, std::ostream& err) {
  InputTable table;
  std::vector<QuantileLevel> levels;
  try {
    table = read_table_file(opts.file, true);
    levels = to_levels(opts.levels);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    for (std::size_t j = 0; j < table.labels.size(); ++j) {
      const Sample x(table.values[j]);
      out << table.labels[j] << "  n=" << x.size() << "\n";
      for (QuantileLevel q : levels) {
        out << "  hd(" << format_double(q.value()) << ") = " << format_double(hd_estimate(x, q))
            << "\n";
      }
      if (x.size() >= 3) {
        const Fourths f = ideal_fourths(x);
        out << "  ideal fourths = " << format_double(f.lower) << ", " << format_double(f.upper)
            << "\n";
      } else {
        out << "  ideal fourths = n/a (need n >= 3)\n";
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global comparison of quantiles across independent groups (method Q)"};
  app.require_subcommand(1);

  TestOptions test;
  std::string format = "text";
  unsigned threads = default_thread_count();
  auto* test_cmd = app.add_subcommand("test", "Test equal quantiles across groups in a CSV file");
  test_cmd->add_option("--file", test.file, "Long-format CSV with header group,value")->required();
  test_cmd->add_option("--q", test.levels, "Quantile levels")->delimiter(',');
  test_cmd->add_option("--nboot", test.nboot, "Bootstrap samples")->capture_default_str();
  test_cmd->add_option("--seed", test.seed, "Master seed")->capture_default_str();
  test_cmd->add_option("--alpha", test.alpha, "Significance level")->capture_default_str();
  test_cmd->add_option("--out", format, "Output format")
      ->check(CLI::IsMember({"text", "json-lines"}))
      ->capture_default_str();
  test_cmd->add_option("--threads", threads, "Worker threads");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Type I error simulation grid");
  sim_cmd->add_option("--config", sim.config, "Grid config file")->required();
  sim_cmd->add_option("--out-dir", sim.out_dir, "Directory for results.tsv and results.jsonl")
      ->required();
  sim_cmd->add_option("--threads", threads, "Worker threads");

  HdOptions hd;
  auto* hd_cmd = app.add_subcommand("hd", "Harrell-Davis estimates and ideal fourths per group");
  hd_cmd->add_option("--file", hd.file, "CSV file (single column or group,value)")->required();
  hd_cmd->add_option("--q", hd.levels, "Quantile levels")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  }

  if (test_cmd->parsed()) {
    test.format = format == "json-lines" ? OutputFormat::json_lines : OutputFormat::text;
    test.threads = threads;
    return cmd_test(test, out, err);
  }
  if (sim_cmd->parsed()) {
    sim.threads = threads;
    return cmd_simulate(sim, out, err);
  }
  return cmd_hd(hd, out, err);
}

}  // namespace qanova::cli
