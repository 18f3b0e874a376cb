#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qanova/method_q.hpp"

namespace qanova::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kComputationError = 2 };

// Long-format grouped data. Groups are kept in order of first appearance.
struct InputTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;

  GroupedData to_grouped() const;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads `group,value` records under a header line. With `allow_single_column`
// a one-column file (optional header) is accepted as a single group "all".
InputTable read_table(std::istream& in, bool allow_single_column = false);
InputTable read_table_file(const std::string& path, bool allow_single_column = false);

enum class OutputFormat { text, json_lines };

struct TestOptions {
  std::string file;
  std::vector<double> levels{0.25, 0.5, 0.75};
  std::size_t nboot = kDefaultBootstrapSamples;
  std::uint64_t seed = kDefaultSeed.value;
  double alpha = 0.05;
  OutputFormat format = OutputFormat::text;
  unsigned threads = 1;
};

struct SimulateOptions {
  std::string config;
  std::string out_dir;
  unsigned threads = 1;
};

struct HdOptions {
  std::string file;
  std::vector<double> levels{0.25, 0.5, 0.75};
};

int cmd_test(const TestOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_hd(const HdOptions& opts, std::ostream& out, std::ostream& err);

// Full command line: `test`, `simulate` or `hd` subcommand plus flags.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qanova::cli
