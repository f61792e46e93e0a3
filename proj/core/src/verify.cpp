#include "relu_knots/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace relu_knots {

namespace {

struct FloatLayer {
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;

  explicit FloatLayer(const DenseLayer& layer) {
    for (const auto& row : layer.weights()) {
      std::vector<double> w;
      w.reserve(row.size());
      for (const auto& v : row) w.push_back(v.to_double());
      weights.push_back(std::move(w));
    }
    for (const auto& b : layer.biases()) biases.push_back(b.to_double());
  }

  void apply(const std::vector<double>& in, std::vector<double>& out, bool rectify) const {
    out.assign(biases.begin(), biases.end());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      double acc = out[k];
      for (std::size_t j = 0; j < in.size(); ++j) acc += weights[k][j] * in[j];
      out[k] = rectify ? std::max(0.0, acc) : acc;
    }
  }
};

std::mt19937_64 trial_generator(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void SamplingConfig::validate() const {
  if (!(low < high)) throw std::invalid_argument("sampling interval must satisfy low < high");
  if (samples < 3) throw std::invalid_argument("sampling needs at least 3 samples");
  if (!(tolerance >= 0)) throw std::invalid_argument("sampling tolerance must be nonnegative");
}

double SamplingConfig::grid_step() const {
  return (high - low).to_double() / static_cast<double>(samples - 1);
}

std::vector<double> detect_knots_by_sampling(const ScalarInputNetwork& net, const SamplingConfig& cfg) {
  cfg.validate();
  std::vector<FloatLayer> hidden;
  for (const auto& layer : net.hidden_layers()) hidden.emplace_back(layer);
  const FloatLayer output(net.output_layer());

  const std::size_t n = cfg.samples;
  const std::size_t p = net.output_dim();
  const double low = cfg.low.to_double();
  const double step = cfg.grid_step();
  auto grid = [&](std::size_t i) { return low + static_cast<double>(i) * step; };

  std::vector<std::vector<double>> values(p, std::vector<double>(n));
  std::vector<double> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    a.assign(1, grid(i));
    for (const auto& layer : hidden) {
      layer.apply(a, b, true);
      std::swap(a, b);
    }
    output.apply(a, b, false);
    for (std::size_t k = 0; k < p; ++k) values[k][i] = b[k];
  }

  std::vector<char> flagged(n, 0);
  for (const auto& y : values) {
    // A kink with slope jump d shows up as a second difference of about d * step.
    double max_slope = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) max_slope = std::max(max_slope, std::abs(y[i + 1] - y[i]) / step);
    const double threshold = cfg.tolerance * max_slope;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (std::abs(y[i - 1] - 2 * y[i] + y[i + 1]) / step > threshold) flagged[i] = 1;
    }
  }

  std::vector<double> detections;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!flagged[i]) continue;
    std::size_t j = i;
    while (j + 1 < n - 1 && flagged[j + 1]) ++j;
    detections.push_back(0.5 * (grid(i) + grid(j)));
    i = j;
  }
  return detections;
}

KnotAgreement compare_knots(std::span<const Rational> exact, std::span<const double> detected,
                            const SamplingConfig& cfg) {
  std::vector<double> inside;
  for (const auto& x : exact) {
    if (cfg.low < x && x < cfg.high) inside.push_back(x.to_double());
  }
  std::sort(inside.begin(), inside.end());
  std::vector<double> found(detected.begin(), detected.end());
  std::sort(found.begin(), found.end());

  KnotAgreement result;
  result.exact_count = inside.size();
  result.detected_count = found.size();
  result.tolerance = cfg.grid_step();
  if (inside.size() != found.size()) return result;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    result.max_error = std::max(result.max_error, std::abs(inside[i] - found[i]));
  }
  // Slack for rounding in the grid coordinates themselves.
  result.agree = result.max_error <= result.tolerance * (1 + 1e-9);
  return result;
}

SawtoothVerdict check_sawtooth(const LinearSpline& f) {
  if (f.knot_count() < 2) {
    throw std::domain_error("check_sawtooth needs at least two knots, got " +
                            std::to_string(f.knot_count()));
  }
  const auto lines = f.pieces();
  const auto values = f.knot_values();

  SawtoothVerdict v;
  v.knots = f.knot_count();
  v.alternating = true;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (lines[i].slope.sign() * lines[i + 1].slope.sign() >= 0) v.alternating = false;
  }

  std::vector<Rational> minima, maxima;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int before = lines[i].slope.sign();
    const int after = lines[i + 1].slope.sign();
    if (before < 0 && after > 0) minima.push_back(values[i]);
    if (before > 0 && after < 0) maxima.push_back(values[i]);
  }
  auto all_equal = [](const std::vector<Rational>& xs) {
    return std::all_of(xs.begin(), xs.end(), [&](const Rational& x) { return x == xs.front(); });
  };
  v.equal_minima = all_equal(minima);
  v.equal_maxima = all_equal(maxima);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  v.range_min = *lo;
  v.range_max = *hi;
  return v;
}

Rational random_parameter(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> num(-100, 100);
  std::uniform_int_distribution<std::int64_t> den(1, 10);
  const std::int64_t a = num(rng);
  const std::int64_t b = den(rng);
  return Rational(a, b);
}

ScalarInputNetwork random_network(const Architecture& arch, std::mt19937_64& rng) {
  arch.validate();
  auto random_layer = [&](std::uint64_t rows, std::uint64_t cols) {
    DenseLayer::Matrix w(rows);
    std::vector<Rational> b;
    for (auto& row : w) {
      for (std::uint64_t c = 0; c < cols; ++c) row.push_back(random_parameter(rng));
    }
    for (std::uint64_t k = 0; k < rows; ++k) b.push_back(random_parameter(rng));
    return DenseLayer(std::move(w), std::move(b));
  };
  std::vector<DenseLayer> hidden;
  std::uint64_t inputs = 1;
  for (auto width : arch.widths) {
    hidden.push_back(random_layer(width, inputs));
    inputs = width;
  }
  return ScalarInputNetwork(std::move(hidden), random_layer(arch.output_dim, inputs));
}

StressReport stress_bound(const Architecture& arch, std::size_t trials, std::uint64_t seed,
                          unsigned threads) {
  arch.validate();
  StressReport report;
  report.arch = arch;
  report.trials = trials;
  report.seed = seed;
  report.bound = knot_bound(arch);
  report.tightness = tightness_eligibility(arch);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));

  struct Partial {
    std::size_t max_observed = 0;
    std::size_t violations = 0;
  };
  std::vector<Partial> partials(threads);
  auto work = [&](unsigned worker) {
    Partial& part = partials[worker];
    for (std::size_t t = worker; t < trials; t += threads) {
      auto rng = trial_generator(seed, t);
      const auto count = extract(random_network(arch, rng)).output_knots().size();
      part.max_observed = std::max(part.max_observed, count);
      if (BigInt(static_cast<unsigned long>(count)) > report.bound) ++part.violations;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
  }
  for (const auto& part : partials) {
    report.max_observed = std::max(report.max_observed, part.max_observed);
    report.violations += part.violations;
  }
  return report;
}

}  // namespace relu_knots
