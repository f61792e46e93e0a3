#include "relu_knots/network.hpp"

#include <stdexcept>
#include <string>

namespace relu_knots {

DenseLayer::DenseLayer(Matrix weights, std::vector<Rational> biases)
    : weights_(std::move(weights)), biases_(std::move(biases)) {
  if (weights_.empty()) throw std::invalid_argument("layer must have at least one neuron");
  const std::size_t cols = weights_.front().size();
  if (cols == 0) throw std::invalid_argument("layer must have at least one input");
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (weights_[k].size() != cols) {
      throw std::invalid_argument("weight row " + std::to_string(k) + " has " +
                                  std::to_string(weights_[k].size()) + " entries, expected " +
                                  std::to_string(cols));
    }
  }
  if (biases_.size() != weights_.size()) {
    throw std::invalid_argument("layer has " + std::to_string(weights_.size()) + " rows but " +
                                std::to_string(biases_.size()) + " biases");
  }
}

std::vector<Rational> DenseLayer::apply(std::span<const Rational> input) const {
  std::vector<Rational> out(biases_.begin(), biases_.end());
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    for (std::size_t j = 0; j < input.size(); ++j) out[k] += weights_[k][j] * input[j];
  }
  return out;
}

ScalarInputNetwork::ScalarInputNetwork(std::vector<DenseLayer> hidden_layers, DenseLayer output_layer)
    : hidden_(std::move(hidden_layers)), output_(std::move(output_layer)) {
  if (hidden_.empty()) throw std::invalid_argument("network needs at least one hidden layer");
  if (hidden_.front().inputs() != 1) {
    throw std::invalid_argument("first hidden layer must take a single input, got " +
                                std::to_string(hidden_.front().inputs()));
  }
  for (std::size_t i = 1; i < hidden_.size(); ++i) {
    if (hidden_[i].inputs() != hidden_[i - 1].neurons()) {
      throw std::invalid_argument("hidden layer " + std::to_string(i + 1) + " takes " +
                                  std::to_string(hidden_[i].inputs()) + " inputs but layer " +
                                  std::to_string(i) + " has " +
                                  std::to_string(hidden_[i - 1].neurons()) + " neurons");
    }
  }
  if (output_.inputs() != hidden_.back().neurons()) {
    throw std::invalid_argument("output layer takes " + std::to_string(output_.inputs()) +
                                " inputs but the last hidden layer has " +
                                std::to_string(hidden_.back().neurons()) + " neurons");
  }
}

std::vector<std::uint64_t> ScalarInputNetwork::widths() const {
  std::vector<std::uint64_t> out;
  out.reserve(hidden_.size());
  for (const auto& layer : hidden_) out.push_back(layer.neurons());
  return out;
}

Architecture ScalarInputNetwork::architecture() const {
  return Architecture{widths(), output_dim(), 1};
}

std::vector<Rational> ExtractionTrace::output_knots() const {
  return knot_union(output_splines.components());
}

std::vector<Rational> evaluate(const ScalarInputNetwork& net, const Rational& x) {
  std::vector<Rational> v{x};
  for (const auto& layer : net.hidden_layers()) {
    v = layer.apply(v);
    for (auto& a : v) {
      if (a.sign() < 0) a = Rational(0);
    }
  }
  return net.output_layer().apply(v);
}

std::vector<LinearSpline> preactivations(const DenseLayer& layer,
                                         std::span<const LinearSpline> inputs) {
  std::vector<LinearSpline> out;
  out.reserve(layer.neurons());
  for (std::size_t k = 0; k < layer.neurons(); ++k) {
    out.push_back(affine_combine(layer.row(k), inputs, layer.biases()[k]));
  }
  return out;
}

ExtractionTrace extract(const ScalarInputNetwork& net) {
  std::vector<VectorSpline> layers;
  std::vector<std::vector<Rational>> unions;
  layers.reserve(net.depth());
  unions.reserve(net.depth());

  std::vector<LinearSpline> current{LinearSpline::line(Rational(1), Rational(0))};
  for (const auto& layer : net.hidden_layers()) {
    std::vector<LinearSpline> next;
    next.reserve(layer.neurons());
    for (auto& pre : preactivations(layer, current)) next.push_back(relu(pre));
    unions.push_back(knot_union(next));
    layers.emplace_back(next);
    current = std::move(next);
  }
  VectorSpline outputs(preactivations(net.output_layer(), current));
  return ExtractionTrace{std::move(layers), std::move(outputs), std::move(unions)};
}

KnotReport knot_report(const ScalarInputNetwork& net) { return knot_report(net, extract(net)); }

KnotReport knot_report(const ScalarInputNetwork& net, const ExtractionTrace& trace) {
  KnotReport report;
  for (const auto& u : trace.knot_unions) report.layer_knot_counts.push_back(u.size());
  for (const auto& s : trace.output_splines.components()) {
    report.output_knot_counts.push_back(s.knot_count());
  }
  report.output_knots = trace.output_knots().size();
  const Architecture arch = net.architecture();
  report.bound = knot_bound(arch);
  report.meets_bound = BigInt(static_cast<unsigned long>(report.output_knots)) == report.bound;
  report.tightness = tightness_eligibility(arch);
  return report;
}

}  // namespace relu_knots
