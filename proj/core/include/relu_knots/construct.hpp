#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "relu_knots/bounds.hpp"
#include "relu_knots/network.hpp"

namespace relu_knots {

/// Requested architecture cannot reach its knot bound (or a construction
/// precondition such as a minimum width is violated).
class IneligibleArchitecture : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Multiplier on the final hidden layer's input weights. Any positive value
/// works; 7 reproduces the reference example network.
inline constexpr std::int64_t kFinalLayerScale = 7;

/// Certificate that a weighted sum of one layer's neuron outputs is a sawtooth
/// wave with `expected_knots` knots oscillating between `range_min` and
/// `range_max` at its knots.
struct SawtoothWitness {
  std::vector<Rational> combination_weights;
  BigInt expected_knots;
  Rational range_min;
  Rational range_max;

  [[nodiscard]] Rational range_width() const { return range_max - range_min; }
};

struct SawtoothLayer {
  DenseLayer layer;
  SawtoothWitness witness;
};

/// 3/2, -1, 1, -1, 1, ... (n entries). Partial sums starting from -1 give the
/// slope sequence -1, 1/2, -1/2, 1/2, ...
[[nodiscard]] std::vector<Rational> sawtooth_coefficients(std::size_t n);

/// First hidden layer whose neurons have knots at x = 0, 1, ..., n1 - 1, with
/// the third neuron facing backwards. The witness weights are twice
/// sawtooth_coefficients(n1), giving a unit-range wave on [4, 5].
/// Throws IneligibleArchitecture if n1 < 3.
[[nodiscard]] SawtoothLayer build_first_layer_sawtooth(std::uint64_t n1);

/// Hidden layer that maps every monotone piece of the previous sawtooth onto
/// a full sawtooth with `width` knots. Each neuron thresholds the normalized
/// wave at (2k - 1)/(2 width + 1); the third neuron is sign-flipped so that
/// both upper and lower incoming knots survive. The new witness oscillates
/// between 4/(2 width + 1) and 5/(2 width + 1).
/// Throws IneligibleArchitecture if width < 3 or the previous range is empty.
[[nodiscard]] SawtoothLayer build_inductive_layer(const SawtoothWitness& prev, std::uint64_t width);

/// Last hidden layer: neuron k applies sign (-1)^(k-1) to the scaled witness
/// combination and thresholds at range_min + k (range_max - range_min)/(width + 1).
/// Odd neurons keep the upper knots, even neurons keep the lower knots, and
/// every neuron adds one knot per monotone piece.
/// Throws IneligibleArchitecture if width < 2 or the previous range is empty.
[[nodiscard]] DenseLayer build_final_layer(const SawtoothWitness& prev, std::uint64_t width,
                                           const Rational& scale = Rational(kFinalLayerScale));

/// Output weights (-1)^(j+k) and biases k - 1 (1-based j, k).
[[nodiscard]] DenseLayer build_alternating_output_layer(std::uint64_t inputs, std::uint64_t outputs);

/// Network whose extracted knot count equals knot_bound(arch). Throws
/// IneligibleArchitecture unless tightness_eligibility(arch) is Tight and
/// input_dim is 1; throws std::logic_error if the finished network does not
/// attain the bound.
[[nodiscard]] ScalarInputNetwork build_tight_network(const Architecture& arch);

/// The 6-3-2 reference example with two outputs, written out parameter by
/// parameter. Identical to build_tight_network({6, 3, 2}, p = 2).
[[nodiscard]] ScalarInputNetwork reference_example_network();

/// Witness combination of a layer's neuron splines.
[[nodiscard]] LinearSpline witness_spline(const SawtoothWitness& witness,
                                          std::span<const LinearSpline> neurons);

}  // namespace relu_knots
