#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "relu_knots/canonical.hpp"
#include "relu_knots/construct.hpp"
#include "relu_knots/network_json.hpp"
#include "relu_knots/verify.hpp"
#include "spline_csv.hpp"

namespace relu_knots::cli {
namespace {

using Json = nlohmann::ordered_json;

// Input problems that are not schema errors (unreadable file, bad seed, ...).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

ScalarInputNetwork load_network(const std::string& path) { return network_from_json(read_file(path)); }

// --seed wins, then RELU_KNOTS_SEED, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("RELU_KNOTS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string text(env);
  if (text.find_first_not_of("0123456789") != std::string::npos || text.size() > 20) {
    throw InputError("RELU_KNOTS_SEED is not a nonnegative integer: " + text);
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw InputError("RELU_KNOTS_SEED out of range: " + text);
  }
}

Architecture make_arch(const std::vector<std::uint64_t>& widths, std::uint64_t p) {
  Architecture a{widths, p, 1};
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return a;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

Json rational_array(std::span<const Rational> v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

BigInt floor_of(const Rational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.numerator().get_mpz_t(), r.denominator().get_mpz_t());
  return out;
}

BigInt ceil_of(const Rational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.numerator().get_mpz_t(), r.denominator().get_mpz_t());
  return out;
}

// ---- bound ----

struct BoundOptions {
  std::vector<std::uint64_t> widths;
  std::uint64_t p = 1;
  bool json = false;
};

int cmd_bound(const BoundOptions& o, std::ostream& out) {
  const Architecture a = make_arch(o.widths, o.p);
  const auto prefixes = knot_bound_prefixes(a);
  const Tightness t = tightness_eligibility(a);
  if (o.json) {
    Json j;
    j["widths"] = o.widths;
    j["p"] = o.p;
    j["bound"] = knot_bound(a).get_str();
    Json pre = Json::array();
    for (const auto& b : prefixes) pre.push_back(b.get_str());
    j["prefixes"] = pre;
    j["approx_bound"] = approx_bound(a).get_str();
    j["param_count"] = param_count(a).get_str();
    j["tightness"] = std::string(to_string(t));
    j["reason"] = tightness_reason(a);
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "bound: " << knot_bound(a).get_str() << '\n'
      << "prefixes: " << list(prefixes) << '\n'
      << "approx bound: " << approx_bound(a).get_str() << '\n'
      << "params: " << param_count(a).get_str() << '\n'
      << "tightness: " << to_string(t) << '\n'
      << "reason: " << tightness_reason(a) << '\n';
  return kOk;
}

// ---- build ----

struct BuildOptions {
  std::vector<std::uint64_t> widths;
  std::uint64_t p = 1;
  std::string out_path;
};

int cmd_build(const BuildOptions& o, std::ostream& out, std::ostream& err) {
  const Architecture a = make_arch(o.widths, o.p);
  if (tightness_eligibility(a) != Tightness::Tight) throw IneligibleArchitecture(tightness_reason(a));
  const auto net = build_tight_network(a);
  const std::size_t count = extract(net).output_knots().size();
  const BigInt bound = knot_bound(a);
  if (BigInt(static_cast<unsigned long>(count)) != bound) {
    throw OracleMismatch("built network has " + std::to_string(count) + " knots, bound is " + bound.get_str());
  }
  std::ostream& report = o.out_path.empty() ? err : out;
  if (o.out_path.empty()) {
    out << network_to_json(net) << '\n';
  } else {
    write_file(o.out_path, network_to_json(net) + "\n");
    report << "wrote " << o.out_path << '\n';
  }
  report << "knots: " << count << " (bound " << bound.get_str() << ")\n";
  return kOk;
}

// ---- analyze ----

struct AnalyzeOptions {
  std::string file;
  bool layers = false;
  bool json = false;
  std::string csv_path;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const auto net = load_network(o.file);
  const auto trace = extract(net);
  const auto report = knot_report(net, trace);
  const auto output_knots = trace.output_knots();

  if (!o.csv_path.empty()) {
    std::ostringstream csv;
    write_spline_csv(csv, trace.output_splines);
    write_file(o.csv_path, csv.str());
  }

  if (o.json) {
    Json j;
    j["widths"] = net.widths();
    j["p"] = net.output_dim();
    j["layer_knots"] = report.layer_knot_counts;
    j["output_knot_counts"] = report.output_knot_counts;
    j["output_knot_count"] = report.output_knots;
    j["bound"] = report.bound.get_str();
    j["meets_bound"] = report.meets_bound;
    j["tightness"] = std::string(to_string(report.tightness));
    j["output_knots"] = rational_array(output_knots);
    if (o.layers) {
      Json per = Json::array();
      for (const auto& layer : trace.neuron_splines) {
        Json counts = Json::array();
        for (const auto& f : layer.components()) counts.push_back(f.knot_count());
        per.push_back(counts);
      }
      j["neuron_knots"] = per;
    }
    out << j.dump(2) << '\n';
    return kOk;
  }

  out << "widths: " << list(net.widths()) << ", p = " << net.output_dim() << '\n'
      << "layer knots: " << list(report.layer_knot_counts) << '\n';
  if (o.layers) {
    const auto prefixes = knot_bound_prefixes(net.architecture());
    for (std::size_t i = 0; i < trace.neuron_splines.size(); ++i) {
      std::vector<std::size_t> counts;
      for (const auto& f : trace.neuron_splines[i].components()) counts.push_back(f.knot_count());
      out << "  layer " << i + 1 << ": union " << trace.knot_unions[i].size() << " of at most "
          << prefixes[i].get_str() << ", per neuron " << list(counts) << '\n';
    }
  }
  out << "output knots: " << report.output_knots;
  if (net.output_dim() > 1) out << " (per output " << list(report.output_knot_counts) << ")";
  out << '\n'
      << "bound: " << report.bound.get_str() << '\n'
      << "meets bound: " << (report.meets_bound ? "true" : "false") << '\n';
  if (!o.csv_path.empty()) out << "wrote " << o.csv_path << '\n';
  return kOk;
}

// ---- verify ----

struct VerifyOptions {
  std::string file;
  std::size_t samples = 100000;
  std::optional<std::string> low, high;
  double tolerance = 1e-6;
  std::size_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string extraction_path;
};

Rational parse_bound(const std::string& text, const char* name) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument&) {
    throw InputError(std::string("--") + name + " is not a rational: " + text);
  }
}

// Knot locations from a file with an "output_knots" array (as written by analyze --json).
std::vector<Rational> load_knots(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!j.is_object() || !j.contains("output_knots") || !j["output_knots"].is_array()) {
    throw SchemaError("$.output_knots", "expected an array of rational strings");
  }
  std::vector<Rational> knots;
  for (std::size_t i = 0; i < j["output_knots"].size(); ++i) {
    const auto& v = j["output_knots"][i];
    const std::string where = "$.output_knots[" + std::to_string(i) + "]";
    if (!v.is_string()) throw SchemaError(where, "expected a rational string");
    try {
      knots.push_back(Rational::parse(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(where, e.what());
    }
  }
  std::sort(knots.begin(), knots.end());
  return knots;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const auto net = load_network(o.file);
  const std::uint64_t seed = resolve_seed(o.seed);
  const auto exact = o.extraction_path.empty() ? extract(net).output_knots() : load_knots(o.extraction_path);

  Rational low(-1), high(1);
  if (!exact.empty()) {
    low = Rational(BigInt(floor_of(exact.front()) - 1));
    high = Rational(BigInt(ceil_of(exact.back()) + 1));
  }
  if (o.low) low = parse_bound(*o.low, "low");
  if (o.high) high = parse_bound(*o.high, "high");
  const SamplingConfig cfg{low, high, o.samples, o.tolerance};
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  const auto detected = detect_knots_by_sampling(net, cfg);
  const auto agreement = compare_knots(exact, detected, cfg);
  out << "interval: [" << low << ", " << high << "], " << cfg.samples << " samples, step " << cfg.grid_step()
      << '\n'
      << "exact knots: " << agreement.exact_count << '\n'
      << "detected knots: " << agreement.detected_count << '\n';
  if (agreement.exact_count == agreement.detected_count) out << "max error: " << agreement.max_error << '\n';
  out << "verdict: " << (agreement.agree ? "agree" : "MISMATCH") << " (" << agreement.exact_count << " exact, "
      << agreement.detected_count << " detected)\n";

  bool stress_ok = true;
  if (o.trials > 0) {
    const auto report = stress_bound(net.architecture(), o.trials, seed);
    out << "stress: " << report.trials << " random networks of widths " << list(net.widths()) << ", seed "
        << seed << '\n'
        << "  max observed: " << report.max_observed << " of bound " << report.bound.get_str() << '\n'
        << "  violations: " << report.violations << '\n'
        << "  note: " << StressReport::kEvidenceNote << '\n';
    stress_ok = report.violations == 0;
  }
  return agreement.agree && stress_ok ? kOk : kOracleMismatch;
}

// ---- canonicalize ----

struct CanonicalizeOptions {
  std::string file;
  std::string out_path;
  std::optional<std::uint64_t> seed;
};

int cmd_canonicalize(const CanonicalizeOptions& o, std::ostream& out, std::ostream& err) {
  const auto net = load_network(o.file);
  const auto form = to_forward_facing(net);
  const std::uint64_t seed = resolve_seed(o.seed);

  Json j;
  j["x"] = rational_array(form.knot_locations);
  Json s = Json::array();
  for (const auto& row : form.ray_slopes) s.push_back(rational_array(row));
  j["s"] = s;
  j["c1"] = rational_array(form.line_slope);
  j["c0"] = rational_array(form.line_intercept);
  j["folded_neurons"] = form.folded_neurons;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 100);
  const std::size_t points = 100;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const Rational x(num(rng), den(rng));
    if (eval_canonical(form, x) == evaluate(net, x)) ++agree;
  }

  std::ostream& report = o.out_path.empty() ? err : out;
  if (o.out_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_file(o.out_path, j.dump(2) + "\n");
    report << "wrote " << o.out_path << '\n';
  }
  report << "equivalence: " << agree << "/" << points << " random points agree (seed " << seed << ")\n";
  return agree == points ? kOk : kOracleMismatch;
}

const CLI::Validator kPositiveInteger(
    [](std::string& s) -> std::string {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.find_first_not_of('0') == std::string::npos) {
        return "must be a positive integer, got '" + s + "'";
      }
      return {};
    },
    "POSITIVE");

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact knot analysis for scalar-input ReLU networks", "relu-knots"};
  app.require_subcommand(1);

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "Knot bound, prefixes, parameter count and tightness");
  bound_cmd->add_option("widths", bound.widths, "Hidden layer widths")->required()->check(kPositiveInteger);
  bound_cmd->add_option("--p", bound.p, "Output dimension")->check(kPositiveInteger);
  bound_cmd->add_flag("--json", bound.json, "Print JSON");

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Network attaining the knot bound");
  build_cmd->add_option("widths", build.widths, "Hidden layer widths")->required()->check(kPositiveInteger);
  build_cmd->add_option("--p", build.p, "Output dimension")->check(kPositiveInteger);
  build_cmd->add_option("--out", build.out_path, "Write the network JSON here instead of stdout");

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Exact knot counts of a network file");
  analyze_cmd->add_option("file", analyze.file, "Network JSON")->required();
  analyze_cmd->add_flag("--layers", analyze.layers, "Per-layer and per-neuron detail");
  analyze_cmd->add_flag("--json", analyze.json, "Print JSON, including exact output knot locations");
  analyze_cmd->add_option("--csv", analyze.csv_path, "Write per-output knot data as CSV");

  VerifyOptions verify;
  std::uint64_t verify_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Compare exact knots with a sampling detector");
  verify_cmd->add_option("file", verify.file, "Network JSON")->required();
  verify_cmd->add_option("--samples", verify.samples, "Grid points")->check(CLI::Range(3ul, 100000000ul));
  auto* verify_low = verify_cmd->add_option("--low", "Left end of the sampling interval (rational)");
  auto* verify_high = verify_cmd->add_option("--high", "Right end of the sampling interval (rational)");
  verify_cmd->add_option("--tolerance", verify.tolerance, "Relative second-difference threshold")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--trials", verify.trials, "Also stress-test the bound with this many random networks");
  auto* verify_seed_opt = verify_cmd->add_option("--seed", verify_seed, "Random seed");
  verify_cmd->add_option("--extraction", verify.extraction_path,
                         "Compare against knots from this file instead of extracting");

  CanonicalizeOptions canon;
  std::uint64_t canon_seed = 0;
  auto* canon_cmd = app.add_subcommand("canonicalize", "Forward-facing form of a one-hidden-layer network");
  canon_cmd->add_option("file", canon.file, "Network JSON")->required();
  canon_cmd->add_option("--out", canon.out_path, "Write the form JSON here instead of stdout");
  auto* canon_seed_opt = canon_cmd->add_option("--seed", canon_seed, "Random seed for the equivalence check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*bound_cmd) return cmd_bound(bound, out);
    if (*build_cmd) return cmd_build(build, out, err);
    if (*analyze_cmd) return cmd_analyze(analyze, out);
    if (*verify_cmd) {
      if (*verify_low) verify.low = verify_low->as<std::string>();
      if (*verify_high) verify.high = verify_high->as<std::string>();
      if (*verify_seed_opt) verify.seed = verify_seed;
      return cmd_verify(verify, out);
    }
    if (*canon_cmd) {
      if (*canon_seed_opt) canon.seed = canon_seed;
      return cmd_canonicalize(canon, out, err);
    }
  } catch (const SchemaError& e) {
    err << "error: invalid network at " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const IneligibleArchitecture& e) {
    err << "error: ineligible architecture: " << e.what() << '\n';
    return kIneligible;
  } catch (const DepthError& e) {
    err << "error: " << e.what() << '\n';
    return kDepthError;
  } catch (const OracleMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kOracleMismatch;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kInputError;
}

}  // namespace relu_knots::cli
