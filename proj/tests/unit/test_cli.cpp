#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qanova/cli.hpp"
#include "qanova/quantiles.hpp"

using namespace qanova;
using namespace qanova::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("qanova_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qanova");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string grouped_csv(double shift) {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::string text = "group,value\n";
  const char* labels[] = {"west", "east", "north"};
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 15; ++i) {
      const double v = norm(gen) + (j == 0 ? shift : 0.0);
      text += std::string(labels[j]) + "," + std::to_string(v) + "\n";
    }
  }
  return text;
}

}  // namespace

TEST_CASE("reading long-format tables") {
  std::istringstream in("group,value\nb,1\na,2\n\"b\",3.5\na, 4\n");
  const InputTable t = read_table(in);
  CHECK(t.labels == std::vector<std::string>{"b", "a"});
  CHECK(t.values[0] == std::vector<double>{1.0, 3.5});
  CHECK(t.values[1] == std::vector<double>{2.0, 4.0});

  std::istringstream wide("g1,g2,g3\n1,2,3\n");
  CHECK_THROWS_AS(read_table(wide), InputError);
  std::istringstream no_header("a,1\nb,2\n");
  CHECK_THROWS_AS(read_table(no_header), InputError);
  std::istringstream bad_number("group,value\na,1\nb,abc\n");
  CHECK_THROWS_WITH(read_table(bad_number), Catch::Matchers::ContainsSubstring("line 3"));
  std::istringstream infinite("group,value\na,inf\n");
  CHECK_THROWS_AS(read_table(infinite), InputError);
  std::istringstream ragged("group,value\na,1,2\n");
  CHECK_THROWS_AS(read_table(ragged), InputError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_table(empty), InputError);

  std::istringstream single("x\n3\n1\n2\n");
  const InputTable s = read_table(single, true);
  CHECK(s.labels == std::vector<std::string>{"all"});
  CHECK(s.values[0] == std::vector<double>{3.0, 1.0, 2.0});
  std::istringstream bare("3\n1\n");
  CHECK(read_table(bare, true).values[0].size() == 2);
}

TEST_CASE("test subcommand: one group is a usage error") {
  TempDir dir;
  const auto file = dir.write("one.csv", "group,value\na,1\na,2\na,3\n");
  const Run r = invoke({"test", "--file", file});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("need at least 2 groups") != std::string::npos);
}

TEST_CASE("test subcommand: missing or malformed input") {
  TempDir dir;
  CHECK(invoke({"test", "--file", (dir.path / "absent.csv").string()}).code == kUsageError);
  CHECK(invoke({"test"}).code == kUsageError);
  CHECK(invoke({}).code == kUsageError);
  const auto file = dir.write("g.csv", grouped_csv(0.0));
  CHECK(invoke({"test", "--file", file, "--q", "1.5"}).code == kUsageError);
  CHECK(invoke({"test", "--file", file, "--out", "xml"}).code == kUsageError);
  CHECK(invoke({"test", "--file", file, "--nboot", "1"}).code == kUsageError);
}

TEST_CASE("test subcommand: constant groups report a degenerate computation") {
  TempDir dir;
  const auto file = dir.write("c.csv", "group,value\na,2\na,2\na,2\nb,2\nb,2\nb,2\n");
  const Run r = invoke({"test", "--file", file, "--nboot", "50"});
  CHECK(r.code == kComputationError);
  CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("test subcommand: deterministic text report") {
  TempDir dir;
  const auto file = dir.write("g.csv", grouped_csv(0.0));
  const Run a = invoke({"test", "--file", file, "--nboot", "200"});
  const Run b = invoke({"test", "--file", file, "--nboot", "200", "--threads", "3"});
  REQUIRE(a.code == kSuccess);
  CHECK(a.out == b.out);
  CHECK(a.out.find("q = 0.25") != std::string::npos);
  CHECK(a.out.find("q = 0.75") != std::string::npos);
  CHECK(a.out.find("delta west - east") != std::string::npos);
}

TEST_CASE("test subcommand: separated groups give p = 0") {
  TempDir dir;
  const auto file = dir.write("s.csv", grouped_csv(1000.0));
  const Run r = invoke({"test", "--file", file, "--q", "0.25", "--out", "json-lines"});
  REQUIRE(r.code == kSuccess);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["p_value"].get<double>() == 0.0);
  CHECK(j["reject"].get<bool>());
}

TEST_CASE("test subcommand: JSON lines round-trip the computed numbers") {
  TempDir dir;
  const auto file = dir.write("g.csv", grouped_csv(0.3));
  const Run r = invoke({"test", "--file", file, "--q", "0.3,0.6", "--nboot", "150", "--seed", "5",
                        "--out", "json-lines"});
  REQUIRE(r.code == kSuccess);

  const InputTable table = read_table_file(file);
  const GroupedData data = table.to_grouped();
  const std::vector<QuantileLevel> levels{QuantileLevel(0.3), QuantileLevel(0.6)};
  const auto expect = qanova_multi(data, levels, 150, RngSeed{5});

  std::istringstream lines(r.out);
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    REQUIRE(i < expect.size());
    const auto j = nlohmann::json::parse(line);
    CHECK(j["q"].get<double>() == expect[i].q.value());
    CHECK(j["p_value"].get<double>() == expect[i].p_value.value());
    CHECK(j["estimates"].get<std::vector<double>>() == expect[i].estimates);
    for (std::size_t c = 0; c < expect[i].deltas.size(); ++c) {
      CHECK(j["deltas"][c]["delta"].get<double>() == expect[i].deltas[c]);
    }
    CHECK(j["groups"].get<std::vector<std::string>>() == table.labels);
    ++i;
  }
  CHECK(i == 2);
}

TEST_CASE("hd subcommand") {
  TempDir dir;
  const auto constant = dir.write("c.csv", "value\n4.25\n4.25\n4.25\n4.25\n");
  const Run c = invoke({"hd", "--file", constant, "--q", "0.1,0.5,0.9"});
  REQUIRE(c.code == kSuccess);
  CHECK(c.out.find("hd(0.1) = 4.25") != std::string::npos);
  CHECK(c.out.find("hd(0.5) = 4.25") != std::string::npos);
  CHECK(c.out.find("hd(0.9) = 4.25") != std::string::npos);

  std::string ten = "value\n";
  for (int i = 1; i <= 10; ++i) ten += std::to_string(i) + "\n";
  const Run t = invoke({"hd", "--file", dir.write("ten.csv", ten), "--q", "0.5"});
  REQUIRE(t.code == kSuccess);
  const auto pos = t.out.find("hd(0.5) = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(t.out.substr(pos + 10)) == Catch::Approx(5.5).margin(1e-12));

  const Run grouped = invoke({"hd", "--file", dir.write("g.csv", "group,value\na,1\na,2\nb,3\n")});
  CHECK(grouped.code == kSuccess);
  CHECK(grouped.out.find("n/a") != std::string::npos);

  CHECK(invoke({"hd", "--file", (dir.path / "missing.csv").string()}).code == kUsageError);
}

TEST_CASE("simulate subcommand") {
  TempDir dir;
  const auto bad = dir.write("bad.cfg", "[a]\ngroups = 2\nsize = 10\nsourc = gh g=0 h=0\n");
  const Run b = invoke({"simulate", "--config", bad, "--out-dir", (dir.path / "o1").string()});
  CHECK(b.code == kUsageError);
  CHECK(b.err.find("line 4") != std::string::npos);

  const auto smoke = dir.write("smoke.cfg",
                               "replications = 1\nnboot = 20\n[n]\ngroups = 3\nsize = 8\n"
                               "source = gh g=0 h=0\n[bb]\ngroups = 2\nsize = 8\n"
                               "source = betabinom m=10 r=1 s=9\n");
  const auto out_dir = dir.path / "o2";
  const Run s = invoke({"simulate", "--config", smoke, "--out-dir", out_dir.string()});
  CHECK(s.code == kSuccess);
  CHECK(s.out.find("[1/2] n") != std::string::npos);
  CHECK(s.out.find("[2/2] bb") != std::string::npos);
  std::ifstream tsv(out_dir / "results.tsv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(tsv, line)) ++rows;
  CHECK(rows == 3);
  std::ifstream jsonl(out_dir / "results.jsonl");
  std::size_t records = 0;
  while (std::getline(jsonl, line)) {
    CHECK(nlohmann::json::parse(line).is_object());
    ++records;
  }
  CHECK(records == 2);
}
