#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "relu_knots/bounds.hpp"
#include "relu_knots/network.hpp"

namespace relu_knots {

struct SamplingConfig {
  Rational low;
  Rational high;
  std::size_t samples = 100000;
  /// Relative threshold: a grid point counts as a kink when its second
  /// difference divided by the step exceeds tolerance * max |slope| over the grid.
  double tolerance = 1e-6;

  /// Throws std::invalid_argument unless low < high, samples >= 3 and tolerance >= 0.
  void validate() const;
  [[nodiscard]] double grid_step() const;
};

/// Floating-point knot detector, independent of the exact extraction path.
///
/// Evaluates the network in double precision on a uniform grid, flags grid
/// points whose discrete second difference exceeds the tolerance for any
/// output, and reports one location per run of consecutive flags (the run's
/// midpoint). Complete when true knots are more than two grid steps apart.
[[nodiscard]] std::vector<double> detect_knots_by_sampling(const ScalarInputNetwork& net,
                                                           const SamplingConfig& cfg);

struct KnotAgreement {
  std::size_t exact_count = 0;
  std::size_t detected_count = 0;
  /// Largest |detected - exact| after pairing in order; meaningful only when counts match.
  double max_error = 0;
  double tolerance = 0;
  bool agree = false;
};

/// Pairs sorted exact knots lying strictly inside (low, high) with detections.
[[nodiscard]] KnotAgreement compare_knots(std::span<const Rational> exact,
                                          std::span<const double> detected,
                                          const SamplingConfig& cfg);

struct SawtoothVerdict {
  bool alternating = false;
  bool equal_minima = false;
  bool equal_maxima = false;
  Rational range_min;
  Rational range_max;
  std::size_t knots = 0;

  [[nodiscard]] bool passed() const { return alternating && equal_minima && equal_maxima; }
};

/// Checks that slopes alternate in sign across every piece (both rays
/// included) and that all knot minima and all knot maxima are equal.
/// Throws std::domain_error if f has fewer than two knots.
[[nodiscard]] SawtoothVerdict check_sawtooth(const LinearSpline& f);

/// Numerators uniform in [-100, 100], denominators uniform in [1, 10].
[[nodiscard]] Rational random_parameter(std::mt19937_64& rng);

[[nodiscard]] ScalarInputNetwork random_network(const Architecture& arch, std::mt19937_64& rng);

struct StressReport {
  Architecture arch;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  BigInt bound;
  std::size_t max_observed = 0;
  std::size_t violations = 0;
  Tightness tightness = Tightness::Unknown;
  /// Every result is search evidence; a gap never proves unattainability.
  static constexpr const char* kEvidenceNote =
      "randomized search evidence, not a proof of unattainability";

  [[nodiscard]] BigInt gap() const { return bound - BigInt(static_cast<unsigned long>(max_observed)); }
};

/// Samples `trials` random networks of the given architecture and records the
/// largest extracted output knot count. Trial t uses its own generator seeded
/// from (seed, t), so the report does not depend on the thread count.
[[nodiscard]] StressReport stress_bound(const Architecture& arch, std::size_t trials,
                                        std::uint64_t seed, unsigned threads = 0);

}  // namespace relu_knots
