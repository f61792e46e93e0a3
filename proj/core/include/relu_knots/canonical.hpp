#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "relu_knots/network.hpp"

namespace relu_knots {

/// Raised when a single-hidden-layer operation receives a deeper network.
class DepthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A shallow network rewritten so every ReLU faces forward:
///
///   y_k(x) = sum_j ray_slopes[k][j] * relu(x - knot_locations[j])
///            + line_slope[k] * x + line_intercept[k]
struct CanonicalShallowForm {
  std::vector<Rational> knot_locations;
  std::vector<std::vector<Rational>> ray_slopes;  // output_dim rows x knot_locations.size() columns
  std::vector<Rational> line_slope;
  std::vector<Rational> line_intercept;
  /// Indices of hidden neurons with zero input weight. Those neurons are
  /// constant and were folded into line_intercept instead of becoming rays.
  std::vector<std::size_t> folded_neurons;

  [[nodiscard]] std::size_t output_dim() const { return line_slope.size(); }
};

/// Rewrites a single-hidden-layer network using relu(t) = relu(-t) + t for
/// backward-facing units. Rays are ordered by ascending knot location (stable
/// for ties). Throws DepthError unless the network has exactly one hidden layer.
[[nodiscard]] CanonicalShallowForm to_forward_facing(const ScalarInputNetwork& net);

[[nodiscard]] std::vector<Rational> eval_canonical(const CanonicalShallowForm& form,
                                                   const Rational& x);

}  // namespace relu_knots
