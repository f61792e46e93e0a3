#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relu_knots/bounds.hpp"
#include "relu_knots/rational.hpp"
#include "relu_knots/spline.hpp"

namespace relu_knots {

/// Fully connected layer: weights has one row per neuron, one column per input.
class DenseLayer {
 public:
  using Matrix = std::vector<std::vector<Rational>>;

  /// Throws std::invalid_argument on an empty, ragged, or bias-mismatched layer.
  DenseLayer(Matrix weights, std::vector<Rational> biases);

  [[nodiscard]] std::size_t neurons() const { return weights_.size(); }
  [[nodiscard]] std::size_t inputs() const { return weights_.front().size(); }
  [[nodiscard]] const Matrix& weights() const { return weights_; }
  [[nodiscard]] std::span<const Rational> row(std::size_t k) const { return weights_[k]; }
  [[nodiscard]] std::span<const Rational> biases() const { return biases_; }

  [[nodiscard]] std::vector<Rational> apply(std::span<const Rational> input) const;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;

 private:
  Matrix weights_;
  std::vector<Rational> biases_;
};

/// Deep ReLU network with a single real input:
/// v_1 = relu(W_1 x + b_1), v_i = relu(W_i v_{i-1} + b_i), y = W_out v_l + b_out.
class ScalarInputNetwork {
 public:
  /// Throws std::invalid_argument unless the first hidden layer has one input
  /// and every layer's input width matches the previous layer's neuron count.
  ScalarInputNetwork(std::vector<DenseLayer> hidden_layers, DenseLayer output_layer);

  [[nodiscard]] std::span<const DenseLayer> hidden_layers() const { return hidden_; }
  [[nodiscard]] const DenseLayer& output_layer() const { return output_; }
  [[nodiscard]] std::size_t depth() const { return hidden_.size(); }
  [[nodiscard]] std::size_t output_dim() const { return output_.neurons(); }
  [[nodiscard]] std::vector<std::uint64_t> widths() const;
  [[nodiscard]] Architecture architecture() const;

  friend bool operator==(const ScalarInputNetwork&, const ScalarInputNetwork&) = default;

 private:
  std::vector<DenseLayer> hidden_;
  DenseLayer output_;
};

/// Exact layer-by-layer spline decomposition of a network.
struct ExtractionTrace {
  /// Post-activation neuron splines, one VectorSpline per hidden layer.
  std::vector<VectorSpline> neuron_splines;
  VectorSpline output_splines;
  /// Sorted union of the knots of each hidden layer's neuron splines.
  std::vector<std::vector<Rational>> knot_unions;

  /// Union of the knot locations of all outputs.
  [[nodiscard]] std::vector<Rational> output_knots() const;
};

struct KnotReport {
  std::vector<std::size_t> layer_knot_counts;
  std::vector<std::size_t> output_knot_counts;
  /// Size of the union of knot locations across all outputs.
  std::size_t output_knots = 0;
  BigInt bound;
  bool meets_bound = false;
  Tightness tightness = Tightness::Unknown;
};

[[nodiscard]] std::vector<Rational> evaluate(const ScalarInputNetwork& net, const Rational& x);

[[nodiscard]] ExtractionTrace extract(const ScalarInputNetwork& net);

/// Splines of the affine combination W v + b of a layer's inputs (before ReLU).
[[nodiscard]] std::vector<LinearSpline> preactivations(const DenseLayer& layer,
                                                      std::span<const LinearSpline> inputs);

[[nodiscard]] KnotReport knot_report(const ScalarInputNetwork& net);
[[nodiscard]] KnotReport knot_report(const ScalarInputNetwork& net, const ExtractionTrace& trace);

}  // namespace relu_knots
