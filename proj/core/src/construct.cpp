#include "relu_knots/construct.hpp"

#include <string>

namespace relu_knots {

namespace {

Rational r(std::int64_t v) { return Rational(v); }
Rational r(std::uint64_t v) { return Rational(static_cast<std::int64_t>(v)); }

// Sign of neuron k (1-based) in the sawtooth layers: the third one faces backwards.
Rational third_flip(std::uint64_t k) { return k == 3 ? r(std::int64_t{-1}) : r(std::int64_t{1}); }

Rational alternating(std::uint64_t k) { return k % 2 == 1 ? r(std::int64_t{1}) : r(std::int64_t{-1}); }

void require_range(const SawtoothWitness& prev) {
  if (!(prev.range_min < prev.range_max)) {
    throw IneligibleArchitecture("previous sawtooth has a degenerate oscillation range [" +
                                 prev.range_min.str() + ", " + prev.range_max.str() + "]");
  }
}

}  // namespace

std::vector<Rational> sawtooth_coefficients(std::size_t n) {
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == 1) {
      out.emplace_back(3, 2);
    } else {
      out.emplace_back(j % 2 == 0 ? -1 : 1);
    }
  }
  return out;
}

SawtoothLayer build_first_layer_sawtooth(std::uint64_t n1) {
  if (n1 < 3) {
    throw IneligibleArchitecture("first-layer sawtooth needs at least 3 neurons, got " +
                                 std::to_string(n1));
  }
  DenseLayer::Matrix weights;
  std::vector<Rational> biases;
  for (std::uint64_t j = 1; j <= n1; ++j) {
    const Rational knot = r(j - 1);
    weights.push_back({third_flip(j)});
    biases.push_back(j == 3 ? knot : -knot);
  }

  SawtoothWitness witness;
  for (auto& a : sawtooth_coefficients(n1)) witness.combination_weights.push_back(r(std::int64_t{2}) * a);
  witness.expected_knots = BigInt(static_cast<unsigned long>(n1));
  witness.range_min = r(std::int64_t{4});
  witness.range_max = r(std::int64_t{5});
  return {DenseLayer(std::move(weights), std::move(biases)), std::move(witness)};
}

SawtoothLayer build_inductive_layer(const SawtoothWitness& prev, std::uint64_t width) {
  if (width < 3) {
    throw IneligibleArchitecture("inductive sawtooth layer needs at least 3 neurons, got " +
                                 std::to_string(width));
  }
  require_range(prev);
  const Rational span = prev.range_width();
  const Rational offset = prev.range_min / span;
  const Rational denom = r(2 * width + 1);

  DenseLayer::Matrix weights;
  std::vector<Rational> biases;
  for (std::uint64_t k = 1; k <= width; ++k) {
    const Rational sign = third_flip(k);
    std::vector<Rational> row;
    row.reserve(prev.combination_weights.size());
    for (const auto& a : prev.combination_weights) row.push_back(a / span * sign);
    weights.push_back(std::move(row));
    biases.push_back(-(offset + r(2 * k - 1) / denom) * sign);
  }

  SawtoothWitness witness;
  witness.combination_weights = sawtooth_coefficients(width);
  witness.expected_knots = recurrence_step(prev.expected_knots, width);
  witness.range_min = r(std::int64_t{4}) / denom;
  witness.range_max = r(std::int64_t{5}) / denom;
  return {DenseLayer(std::move(weights), std::move(biases)), std::move(witness)};
}

DenseLayer build_final_layer(const SawtoothWitness& prev, std::uint64_t width, const Rational& scale) {
  if (width < 2) {
    throw IneligibleArchitecture(
        "final hidden layer needs at least 2 neurons to keep every knot and create new ones, got " +
        std::to_string(width));
  }
  require_range(prev);
  if (scale.sign() <= 0) throw std::invalid_argument("final layer scale must be positive");

  const Rational step = prev.range_width() / r(width + 1);
  DenseLayer::Matrix weights;
  std::vector<Rational> biases;
  for (std::uint64_t k = 1; k <= width; ++k) {
    const Rational sign = alternating(k);
    std::vector<Rational> row;
    row.reserve(prev.combination_weights.size());
    for (const auto& a : prev.combination_weights) row.push_back(scale * sign * a);
    weights.push_back(std::move(row));
    biases.push_back(-sign * scale * (prev.range_min + r(k) * step));
  }
  return DenseLayer(std::move(weights), std::move(biases));
}

DenseLayer build_alternating_output_layer(std::uint64_t inputs, std::uint64_t outputs) {
  DenseLayer::Matrix weights;
  std::vector<Rational> biases;
  for (std::uint64_t k = 1; k <= outputs; ++k) {
    std::vector<Rational> row;
    for (std::uint64_t j = 1; j <= inputs; ++j) row.push_back(alternating(j + k + 1));
    weights.push_back(std::move(row));
    biases.push_back(r(k - 1));
  }
  return DenseLayer(std::move(weights), std::move(biases));
}

ScalarInputNetwork build_tight_network(const Architecture& arch) {
  arch.validate();
  if (arch.input_dim != 1) {
    throw IneligibleArchitecture("tight constructions exist only for scalar input");
  }
  if (tightness_eligibility(arch) != Tightness::Tight) {
    throw IneligibleArchitecture(tightness_reason(arch));
  }

  const auto& n = arch.widths;
  std::vector<DenseLayer> hidden;
  if (n.size() == 1) {
    // Distinct knots at 0, 1, ..., n1 - 1; the sawtooth layer provides them for any n1.
    DenseLayer::Matrix weights;
    std::vector<Rational> biases;
    for (std::uint64_t j = 1; j <= n[0]; ++j) {
      weights.push_back({third_flip(j)});
      biases.push_back(j == 3 ? r(j - 1) : -r(j - 1));
    }
    hidden.emplace_back(std::move(weights), std::move(biases));
  } else {
    auto [first, witness] = build_first_layer_sawtooth(n[0]);
    hidden.push_back(std::move(first));
    for (std::size_t i = 1; i + 1 < n.size(); ++i) {
      auto [layer, next] = build_inductive_layer(witness, n[i]);
      hidden.push_back(std::move(layer));
      witness = std::move(next);
    }
    hidden.push_back(build_final_layer(witness, n.back()));
  }

  ScalarInputNetwork net(std::move(hidden), build_alternating_output_layer(n.back(), arch.output_dim));

  // The output combination must not cancel any knot.
  const auto achieved = extract(net).output_knots().size();
  const BigInt bound = knot_bound(arch);
  if (BigInt(static_cast<unsigned long>(achieved)) != bound) {
    throw std::logic_error("tight construction produced " + std::to_string(achieved) +
                           " knots, bound is " + bound.get_str());
  }
  return net;
}

ScalarInputNetwork reference_example_network() {
  constexpr std::int64_t n1 = 6, n2 = 3, n3 = 2, p = 2;
  auto coefficient = [](std::int64_t j) {
    if (j == 1) return Rational(3, 2);
    return Rational(j % 2 == 0 ? -1 : 1);
  };

  std::vector<Rational> w1, b1;
  for (std::int64_t k = 1; k <= n1; ++k) {
    w1.push_back(k == 3 ? Rational(-1) : Rational(1));
    b1.push_back(k == 3 ? Rational(k - 1) : Rational(-k + 1));
  }
  DenseLayer::Matrix l1;
  for (const auto& w : w1) l1.push_back({w});

  DenseLayer::Matrix l2;
  std::vector<Rational> b2;
  for (std::int64_t k = 1; k <= n2; ++k) {
    std::vector<Rational> row;
    for (std::int64_t j = 1; j <= n1; ++j) row.push_back(Rational(2) * w1[k - 1] * coefficient(j));
    l2.push_back(std::move(row));
    b2.push_back((Rational(-4) - Rational(2 * k - 1, 2 * n2 + 1)) * w1[k - 1]);
  }

  DenseLayer::Matrix l3;
  std::vector<Rational> b3;
  for (std::int64_t k = 1; k <= n3; ++k) {
    const Rational sign = k % 2 == 1 ? Rational(1) : Rational(-1);
    std::vector<Rational> row;
    for (std::int64_t j = 1; j <= n2; ++j) row.push_back(Rational(7) * sign * coefficient(j));
    l3.push_back(std::move(row));
    b3.push_back(sign * (Rational(-4) - Rational(k, n3 + 1)));
  }

  DenseLayer::Matrix l4;
  std::vector<Rational> b4;
  for (std::int64_t k = 1; k <= p; ++k) {
    std::vector<Rational> row;
    for (std::int64_t j = 1; j <= n3; ++j) row.push_back((j + k) % 2 == 0 ? Rational(1) : Rational(-1));
    l4.push_back(std::move(row));
    b4.push_back(Rational(k - 1));
  }

  std::vector<DenseLayer> hidden;
  hidden.emplace_back(std::move(l1), std::move(b1));
  hidden.emplace_back(std::move(l2), std::move(b2));
  hidden.emplace_back(std::move(l3), std::move(b3));
  return ScalarInputNetwork(std::move(hidden), DenseLayer(std::move(l4), std::move(b4)));
}

LinearSpline witness_spline(const SawtoothWitness& witness, std::span<const LinearSpline> neurons) {
  return affine_combine(witness.combination_weights, neurons, Rational(0));
}

}  // namespace relu_knots
