#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "relu_knots/construct.hpp"
#include "relu_knots/network_json.hpp"

namespace relu_knots::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using testing::q;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(RELU_KNOTS_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("relu_knots_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv("RELU_KNOTS_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv("RELU_KNOTS_SEED");
  }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// ---- bound ----

TEST_F(CliTest, BoundReferenceArchitecture) {
  const auto r = cli({"bound", "6", "3", "2", "--p", "2"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "bound: 83\n"));
  EXPECT_TRUE(contains(r.out, "prefixes: [6, 27, 83]\n"));
  EXPECT_TRUE(contains(r.out, "approx bound: 36\n"));
  EXPECT_TRUE(contains(r.out, "params: 47\n"));
  EXPECT_TRUE(contains(r.out, "tightness: Tight\n"));
}

TEST_F(CliTest, BoundSingleLayerAndNotTight) {
  EXPECT_TRUE(contains(cli({"bound", "4"}).out, "bound: 4\n"));
  const auto r = cli({"bound", "2", "2"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "tightness: NotTight\n"));
}

TEST_F(CliTest, BoundJson) {
  const auto r = cli({"bound", "5", "5", "5", "3", "--json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["bound"], "863");
  EXPECT_EQ(j["prefixes"], Json({"5", "35", "215", "863"}));
  EXPECT_EQ(j["tightness"], "Tight");
}

TEST_F(CliTest, BoundRejectsMalformedWidths) {
  EXPECT_EQ(cli({"bound", "0"}).code, kInputError);
  EXPECT_EQ(cli({"bound", "-3"}).code, kInputError);
  EXPECT_EQ(cli({"bound", "abc"}).code, kInputError);
  EXPECT_EQ(cli({"bound", "2.5"}).code, kInputError);
  EXPECT_EQ(cli({"bound"}).code, kInputError);
  EXPECT_EQ(cli({"bound", "3", "--p", "0"}).code, kInputError);
  EXPECT_EQ(cli({}).code, kInputError);
  EXPECT_EQ(cli({"frobnicate"}).code, kInputError);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "canonicalize"));
}

// ---- build ----

TEST_F(CliTest, BuildReferenceArchitectureMatchesReferenceNetwork) {
  const auto r = cli({"build", "6", "3", "2", "--p", "2", "--out", tmp("net.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "knots: 83 (bound 83)"));
  const auto text = slurp(tmp("net.json"));
  EXPECT_EQ(network_from_json(text), reference_example_network());
  EXPECT_EQ(text, slurp(data("reference_example.json")));
}

TEST_F(CliTest, BuildToStdoutKeepsReportOnStderr) {
  const auto r = cli({"build", "3", "3", "2"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.err, "knots: 47 (bound 47)"));
  EXPECT_EQ(network_from_json(r.out).widths(), (std::vector<std::uint64_t>{3, 3, 2}));
}

TEST_F(CliTest, BuildIneligibleCitesNarrowLayer) {
  const auto r = cli({"build", "2", "5"});
  EXPECT_EQ(r.code, kIneligible);
  EXPECT_TRUE(contains(r.err, "n_1 = 2 < 3")) << r.err;
  EXPECT_EQ(cli({"build", "4", "1"}).code, kIneligible);
}

// build -> file -> analyze agrees with the count build printed.
TEST_F(CliTest, BuildAnalyzeRoundTripOverTightGrid) {
  std::vector<std::vector<std::string>> grid;
  for (const char* last : {"2", "3"}) {
    grid.push_back({last});
    for (const char* a : {"3", "4", "5"}) {
      grid.push_back({a, last});
      for (const char* b : {"3", "4", "5"}) grid.push_back({a, b, last});
    }
  }
  for (const auto& widths : grid) {
    std::vector<std::string> args{"build"};
    args.insert(args.end(), widths.begin(), widths.end());
    args.insert(args.end(), {"--out", tmp("grid.json")});
    const auto built = cli(args);
    ASSERT_EQ(built.code, kOk);
    const auto analyzed = cli({"analyze", tmp("grid.json"), "--json"});
    ASSERT_EQ(analyzed.code, kOk);
    const auto j = Json::parse(analyzed.out);
    const std::string count = std::to_string(j["output_knot_count"].get<std::size_t>());
    EXPECT_TRUE(contains(built.out, "knots: " + count + " (bound " + count + ")")) << built.out;
    EXPECT_EQ(j["bound"], count);
    EXPECT_TRUE(j["meets_bound"].get<bool>());
  }
}

// ---- analyze ----

TEST_F(CliTest, AnalyzeReferenceExample) {
  const auto r = cli({"analyze", data("reference_example.json")});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "layer knots: [6, 27, 83]\n"));
  EXPECT_TRUE(contains(r.out, "output knots: 83"));
  EXPECT_TRUE(contains(r.out, "bound: 83\n"));
  EXPECT_TRUE(contains(r.out, "meets bound: true\n"));
}

TEST_F(CliTest, AnalyzeLayersDetail) {
  const auto r = cli({"analyze", data("reference_example.json"), "--layers", "--json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["neuron_knots"][0], Json({1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(j["layer_knots"], Json({6, 27, 83}));
  EXPECT_EQ(j["output_knots"].size(), 83u);
}

TEST_F(CliTest, AnalyzeSingleNeuronAndRandom) {
  EXPECT_TRUE(contains(cli({"analyze", data("single_neuron.json")}).out, "output knots: 1\n"));
  const auto j = Json::parse(cli({"analyze", data("random_4_4.json"), "--json"}).out);
  EXPECT_EQ(j["bound"], "24");
  EXPECT_LE(j["output_knot_count"].get<std::size_t>(), 24u);
  EXPECT_LE(j["layer_knots"][1].get<std::size_t>(), 24u);
}

TEST_F(CliTest, AnalyzeSchemaViolationReportsPath) {
  const auto r = cli({"analyze", data("bad_weight.json")});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_TRUE(contains(r.err, "$.hidden_layers[0].weights[1][0]")) << r.err;
  EXPECT_EQ(cli({"analyze", tmp("missing.json")}).code, kInputError);
}

// Rebuilds each output from its CSV rows and compares with evaluate.
struct CsvRow {
  std::size_t output;
  std::string x;
  Rational value, left, right;
};

std::vector<CsvRow> parse_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<CsvRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    EXPECT_EQ(cells.size(), 7u) << line;
    if (cells.size() != 7) continue;
    rows.push_back({std::stoul(cells[0]), cells[1], Rational::parse(cells[3]), Rational::parse(cells[5]),
                    Rational::parse(cells[6])});
  }
  return rows;
}

Rational csv_eval(const std::vector<CsvRow>& rows, const Rational& x) {
  // rows: left ray, knots..., right ray (for one output)
  const auto& left = rows.front();
  const auto& right = rows.back();
  if (rows.size() == 2) return left.left * x + left.value;
  const Rational first = Rational::parse(rows[1].x);
  if (x <= first) return left.left * x + left.value;
  for (std::size_t i = 1; i + 2 < rows.size(); ++i) {
    const Rational a = Rational::parse(rows[i].x), b = Rational::parse(rows[i + 1].x);
    if (x <= b) return rows[i].value + (rows[i + 1].value - rows[i].value) * (x - a) / (b - a);
  }
  return right.right * x + right.value;
}

TEST_F(CliTest, CsvReproducesEvaluation) {
  for (const char* file : {"reference_example.json", "random_4_4.json", "constant.json"}) {
    const auto r = cli({"analyze", data(file), "--csv", tmp("out.csv")});
    ASSERT_EQ(r.code, kOk);
    std::string header;
    const auto rows = parse_csv(slurp(tmp("out.csv")), header);
    EXPECT_EQ(header,
              "output_index,x_rational,x_decimal,value_rational,value_decimal,"
              "left_slope_rational,right_slope_rational");
    const auto net = network_from_json(slurp(data(file)));
    std::mt19937_64 rng(17);
    for (std::size_t k = 0; k < net.output_dim(); ++k) {
      std::vector<CsvRow> mine;
      for (const auto& row : rows) {
        if (row.output == k) mine.push_back(row);
      }
      ASSERT_GE(mine.size(), 2u);
      EXPECT_EQ(mine.front().x, "-inf");
      EXPECT_EQ(mine.back().x, "+inf");
      // Strictly increasing x, and slopes chain from one knot to the next.
      for (std::size_t i = 1; i + 1 < mine.size(); ++i) {
        EXPECT_EQ(mine[i].left, mine[i - 1].right);
        if (i + 2 < mine.size()) {
          EXPECT_LT(Rational::parse(mine[i].x), Rational::parse(mine[i + 1].x));
        }
        EXPECT_NE(mine[i].left, mine[i].right);
        EXPECT_EQ(mine[i].value, evaluate(net, Rational::parse(mine[i].x))[k]);
      }
      for (int i = 0; i < 100; ++i) {
        const Rational x = testing::random_point(rng) / q(400);
        ASSERT_EQ(csv_eval(mine, x), evaluate(net, x)[k]) << file << " output " << k << " at " << x;
      }
    }
  }
}

// ---- verify ----

TEST_F(CliTest, VerifyReferenceAgrees) {
  const auto r = cli({"verify", data("reference_example.json"), "--samples", "100000"});
  EXPECT_EQ(r.code, kOk) << r.out << r.err;
  EXPECT_TRUE(contains(r.out, "verdict: agree (83 exact, 83 detected)")) << r.out;
}

TEST_F(CliTest, VerifyConstantNetworkAgrees) {
  const auto r = cli({"verify", data("constant.json")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "verdict: agree (0 exact, 0 detected)")) << r.out;
}

TEST_F(CliTest, VerifyCorruptedExtractionIsAMismatch) {
  const auto r = cli({"verify", data("reference_example.json"), "--extraction", data("corrupted_extraction.json")});
  EXPECT_EQ(r.code, kOracleMismatch) << r.out;
  EXPECT_TRUE(contains(r.out, "MISMATCH"));
}

TEST_F(CliTest, VerifyInputErrors) {
  EXPECT_EQ(cli({"verify", data("bad_weight.json")}).code, kInputError);
  EXPECT_EQ(cli({"verify", data("single_neuron.json"), "--low", "2", "--high", "1"}).code, kInputError);
  EXPECT_EQ(cli({"verify", data("single_neuron.json"), "--low", "x"}).code, kInputError);
  EXPECT_EQ(cli({"verify", data("single_neuron.json"), "--extraction", data("bad_weight.json")}).code,
            kInputError);
}

TEST_F(CliTest, VerifyStressSeedFlagBeatsEnvironment) {
  const std::vector<std::string> base{"verify", data("random_4_4.json"), "--samples", "100000", "--trials", "40"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return cli(args);
  };
  const auto seeded = with({"--seed", "5"});
  ASSERT_EQ(seeded.code, kOk) << seeded.out;
  EXPECT_TRUE(contains(seeded.out, "seed 5"));
  EXPECT_TRUE(contains(seeded.out, "not a proof"));
  EXPECT_EQ(with({"--seed", "5"}).out, seeded.out);

  ::setenv("RELU_KNOTS_SEED", "5", 1);
  EXPECT_EQ(with({}).out, seeded.out);
  ::setenv("RELU_KNOTS_SEED", "7", 1);
  EXPECT_EQ(with({"--seed", "5"}).out, seeded.out);
  EXPECT_TRUE(contains(with({}).out, "seed 7"));
  ::setenv("RELU_KNOTS_SEED", "seven", 1);
  EXPECT_EQ(with({}).code, kInputError);
  ::unsetenv("RELU_KNOTS_SEED");
  EXPECT_TRUE(contains(with({}).out, "seed 0"));
}

// ---- canonicalize ----

TEST_F(CliTest, CanonicalizeTwoNeuronExample) {
  const auto r = cli({"canonicalize", data("two_neuron.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["x"], Json({"0", "1"}));
  EXPECT_EQ(j["s"], Json::parse(R"([["1", "1"]])"));
  EXPECT_EQ(j["c1"], Json({"-1"}));
  EXPECT_EQ(j["c0"], Json({"1"}));
  EXPECT_TRUE(contains(r.err, "100/100"));
}

TEST_F(CliTest, CanonicalizeSawtoothNetwork) {
  const auto r = cli({"canonicalize", data("sawtooth_three.json"), "--out", tmp("form.json")});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "100/100"));
  const auto j = Json::parse(slurp(tmp("form.json")));
  EXPECT_EQ(j["x"], Json({"0", "1", "2"}));
  EXPECT_EQ(j["c1"], Json({"-1"}));
  EXPECT_EQ(j["c0"], Json({"-1/4"}));  // -9/4 + 2
}

TEST_F(CliTest, CanonicalizeDeepNetworkIsADepthError) {
  EXPECT_EQ(cli({"canonicalize", data("reference_example.json")}).code, kDepthError);
  EXPECT_EQ(cli({"canonicalize", data("constant.json")}).code, kDepthError);
}

}  // namespace
}  // namespace relu_knots::cli
