#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "relu_knots/construct.hpp"
#include "relu_knots/verify.hpp"

namespace relu_knots {
namespace {

using testing::q;

Architecture arch(std::vector<std::uint64_t> widths, std::uint64_t p = 1) {
  return Architecture{std::move(widths), p, 1};
}

// Hidden layers built from a first sawtooth followed by inductive layers,
// with the witness of every layer.
struct SawtoothStack {
  std::vector<DenseLayer> layers;
  std::vector<SawtoothWitness> witnesses;
};

SawtoothStack sawtooth_stack(const std::vector<std::uint64_t>& widths) {
  SawtoothStack s;
  auto first = build_first_layer_sawtooth(widths[0]);
  s.layers.push_back(first.layer);
  s.witnesses.push_back(first.witness);
  for (std::size_t i = 1; i < widths.size(); ++i) {
    auto next = build_inductive_layer(s.witnesses.back(), widths[i]);
    s.layers.push_back(next.layer);
    s.witnesses.push_back(next.witness);
  }
  return s;
}

// Extracts the stack by closing it with a 1-wide output layer.
ExtractionTrace extract_stack(const SawtoothStack& s) {
  std::vector<Rational> out(s.layers.back().neurons(), q(1));
  return extract(ScalarInputNetwork(s.layers, DenseLayer({out}, {q(0)})));
}

TEST(FirstLayerSawtooth, ParametersForEight) {
  const auto [layer, witness] = build_first_layer_sawtooth(8);
  for (std::int64_t j = 1; j <= 8; ++j) {
    EXPECT_EQ(layer.weights()[j - 1][0], j == 3 ? q(-1) : q(1));
    EXPECT_EQ(layer.biases()[j - 1], j == 3 ? q(j - 1) : q(-j + 1));
  }
  EXPECT_EQ(witness.combination_weights,
            (std::vector<Rational>{q(3), q(-2), q(2), q(-2), q(2), q(-2), q(2), q(-2)}));
  EXPECT_EQ(witness.expected_knots, 8);

  const auto trace = extract_stack({{layer}, {witness}});
  const auto g = witness_spline(witness, trace.neuron_splines[0].components());
  EXPECT_EQ(knots(g).size(), 8u);
  EXPECT_EQ(knots(g).front(), q(0));
  EXPECT_EQ(knots(g).back(), q(7));
  const auto verdict = check_sawtooth(g);
  EXPECT_TRUE(verdict.passed());
  EXPECT_EQ(verdict.range_min, q(4));
  EXPECT_EQ(verdict.range_max, q(5));
}

TEST(FirstLayerSawtooth, MatchesReferenceFirstLayer) {
  EXPECT_EQ(build_first_layer_sawtooth(6).layer, reference_example_network().hidden_layers()[0]);
}

TEST(FirstLayerSawtooth, MinimalThreeNeuronSlopes) {
  const auto [layer, witness] = build_first_layer_sawtooth(3);
  const auto trace = extract_stack({{layer}, {witness}});
  const auto g = affine_combine(sawtooth_coefficients(3), trace.neuron_splines[0].components(), q(0));
  std::vector<Rational> slopes;
  for (const auto& line : g.pieces()) slopes.push_back(line.slope);
  EXPECT_EQ(slopes, (std::vector<Rational>{q(-1), q(1, 2), q(-1, 2), q(1, 2)}));
}

TEST(FirstLayerSawtooth, RejectsNarrowLayers) {
  EXPECT_THROW((void)build_first_layer_sawtooth(2), IneligibleArchitecture);
  EXPECT_THROW((void)build_first_layer_sawtooth(0), IneligibleArchitecture);
}

// With a single input already normalized to [0, 1] the inductive layer
// reproduces the wave sum_k a_k relu(t - g_k) - t + 5/(2n + 1).
TEST(InductiveLayer, NormalizedWaveFormula) {
  for (std::uint64_t n : {3, 5, 7}) {
    const SawtoothWitness unit{{q(1)}, 1, q(0), q(1)};
    const auto [layer, next] = build_inductive_layer(unit, n);
    const ScalarInputNetwork net({layer}, DenseLayer({next.combination_weights}, {q(0)}));
    const auto alpha = sawtooth_coefficients(n);
    const Rational denom = q(static_cast<std::int64_t>(2 * n + 1));
    for (int i = -20; i <= 40; ++i) {
      const Rational t = q(i, 20);
      Rational expected = -t + q(5) / denom;
      for (std::uint64_t k = 1; k <= n; ++k) {
        expected += alpha[k - 1] * testing::relu_value(t - q(static_cast<std::int64_t>(2 * k - 1)) / denom);
      }
      EXPECT_EQ(evaluate(net, t)[0], expected) << "n = " << n << ", t = " << t;
    }
  }
}

TEST(InductiveLayer, SevenOnUnitRangeSawtooth) {
  const auto s = sawtooth_stack({3, 7});
  const auto trace = extract_stack(s);
  const auto g = witness_spline(s.witnesses[1], trace.neuron_splines[1].components());
  EXPECT_EQ(g.knot_count(), 31u);  // 3 + 7 * 4
  const auto verdict = check_sawtooth(g);
  EXPECT_TRUE(verdict.passed());
  EXPECT_EQ(verdict.range_min, q(4, 15));
  EXPECT_EQ(verdict.range_max, q(5, 15));
  EXPECT_EQ(s.witnesses[1].range_min, verdict.range_min);
  EXPECT_EQ(s.witnesses[1].range_max, verdict.range_max);
}

TEST(InductiveLayer, MatchesReferenceSecondLayer) {
  const auto first = build_first_layer_sawtooth(6);
  const auto second = build_inductive_layer(first.witness, 3);
  EXPECT_EQ(second.layer, reference_example_network().hidden_layers()[1]);
  EXPECT_EQ(second.witness.expected_knots, 27);
}

TEST(InductiveLayer, Rejections) {
  const auto first = build_first_layer_sawtooth(4);
  EXPECT_THROW((void)build_inductive_layer(first.witness, 2), IneligibleArchitecture);
  SawtoothWitness flat = first.witness;
  flat.range_max = flat.range_min;
  EXPECT_THROW((void)build_inductive_layer(flat, 3), IneligibleArchitecture);
  EXPECT_THROW((void)build_final_layer(flat, 3), IneligibleArchitecture);
  EXPECT_THROW((void)build_final_layer(first.witness, 1), IneligibleArchitecture);
}

TEST(FinalLayer, MatchesReferenceThirdLayer) {
  const auto s = sawtooth_stack({6, 3});
  EXPECT_EQ(build_final_layer(s.witnesses.back(), 2), reference_example_network().hidden_layers()[2]);
}

TEST(FinalLayer, ThresholdsStrictlyInsideRange) {
  const auto s = sawtooth_stack({4, 5});
  const auto& w = s.witnesses.back();
  const auto layer = build_final_layer(w, 5);
  const Rational scale(kFinalLayerScale);
  for (std::size_t k = 0; k < 5; ++k) {
    const Rational sign = k % 2 == 0 ? q(1) : q(-1);
    const Rational threshold = -layer.biases()[k] / (sign * scale);
    EXPECT_LT(w.range_min, threshold);
    EXPECT_LT(threshold, w.range_max);
  }
}

std::size_t knots_of_tight(std::vector<std::uint64_t> widths, std::uint64_t p = 1) {
  return extract(build_tight_network(arch(std::move(widths), p))).output_knots().size();
}

TEST(FinalLayer, TwoNeuronsFollowRecurrence) {
  for (const auto& w : std::vector<std::vector<std::uint64_t>>{{3, 2}, {4, 2}, {5, 2}, {3, 4, 2}}) {
    EXPECT_EQ(BigInt(static_cast<unsigned long>(knots_of_tight(w))), knot_bound(arch(w)));
  }
}

TEST(FinalLayer, FourNeuronsOnThreeThree) {
  // 3 -> 15 -> 5 * 15 + 4 = 79
  EXPECT_EQ(knots_of_tight({3, 3, 4}), 79u);
}

TEST(TightNetwork, Examples) {
  EXPECT_EQ(build_tight_network(arch({6, 3, 2}, 2)), reference_example_network());
  EXPECT_EQ(knots_of_tight({6, 3, 2}, 2), 83u);
  EXPECT_EQ(knots_of_tight({5}), 5u);
  EXPECT_EQ(knots_of_tight({1}), 1u);
  EXPECT_EQ(knots_of_tight({2}, 3), 2u);
  EXPECT_EQ(knots_of_tight({3, 3, 2}), 47u);
}

TEST(TightNetwork, RejectsIneligible) {
  try {
    (void)build_tight_network(arch({2, 5}));
    FAIL() << "expected IneligibleArchitecture";
  } catch (const IneligibleArchitecture& e) {
    EXPECT_NE(std::string(e.what()).find("n_1 = 2 < 3"), std::string::npos);
  }
  EXPECT_THROW((void)build_tight_network(arch({4, 1})), IneligibleArchitecture);
  EXPECT_THROW((void)build_tight_network(Architecture{{4}, 1, 2}), IneligibleArchitecture);
}

TEST(ReferenceExample, SecondSawtoothHas27Knots) {
  const auto net = reference_example_network();
  const auto trace = extract(net);
  const auto g3 = affine_combine(net.hidden_layers()[2].row(0), trace.neuron_splines[1].components(), q(0));
  EXPECT_EQ(g3.knot_count(), 27u);
  EXPECT_TRUE(check_sawtooth(g3).passed());
}

// ---- invariants across the sawtooth stacks ----

class SawtoothInvariants : public ::testing::TestWithParam<std::vector<std::uint64_t>> {};

TEST_P(SawtoothInvariants, ShapeProvenanceAndDisplacement) {
  const auto widths = GetParam();
  const auto s = sawtooth_stack(widths);
  const auto trace = extract_stack(s);
  std::vector<Rational> prev_union;
  BigInt prev_count = 0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const auto g = witness_spline(s.witnesses[i], trace.neuron_splines[i].components());
    const auto verdict = check_sawtooth(g);
    EXPECT_TRUE(verdict.passed()) << "layer " << i + 1;
    EXPECT_EQ(verdict.range_min, s.witnesses[i].range_min);
    EXPECT_EQ(verdict.range_max, s.witnesses[i].range_max);
    EXPECT_EQ(BigInt(static_cast<unsigned long>(g.knot_count())), s.witnesses[i].expected_knots);
    EXPECT_EQ(knots(g), trace.knot_unions[i]);

    const auto& u = trace.knot_unions[i];
    EXPECT_TRUE(std::includes(u.begin(), u.end(), prev_union.begin(), prev_union.end()));
    EXPECT_EQ(BigInt(static_cast<unsigned long>(u.size() - prev_union.size())),
              BigInt(static_cast<unsigned long>(widths[i])) * (prev_count + 1));

    if (i > 0) {
      const Rational step = q(1) / q(static_cast<std::int64_t>(2 * widths[i] + 1));
      const auto values = g.knot_values();
      for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        EXPECT_EQ((values[k + 1] - values[k]).abs(), step);
      }
    }
    prev_union = u;
    prev_count = BigInt(static_cast<unsigned long>(u.size()));
  }
}

INSTANTIATE_TEST_SUITE_P(
    Stacks, SawtoothInvariants,
    ::testing::Values(std::vector<std::uint64_t>{3}, std::vector<std::uint64_t>{8},
                      std::vector<std::uint64_t>{3, 3}, std::vector<std::uint64_t>{6, 3},
                      std::vector<std::uint64_t>{3, 5}, std::vector<std::uint64_t>{4, 7},
                      std::vector<std::uint64_t>{3, 4, 5}, std::vector<std::uint64_t>{5, 3, 3}));

}  // namespace
}  // namespace relu_knots
