#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "relu_knots/rational.hpp"

namespace relu_knots {

/// Hidden-layer widths n_1..n_l plus input and output dimensions.
struct Architecture {
  std::vector<std::uint64_t> widths;
  std::uint64_t output_dim = 1;
  std::uint64_t input_dim = 1;

  /// Throws std::invalid_argument if any width or dimension is zero or there
  /// are no hidden layers.
  void validate() const;
  [[nodiscard]] std::size_t depth() const { return widths.size(); }

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

enum class Tightness { Tight, NotTight, Unknown };

[[nodiscard]] std::string_view to_string(Tightness t);

/// One layer of the knot recurrence: (n_i + 1) * m_prev + n_i.
[[nodiscard]] BigInt recurrence_step(const BigInt& m_prev, std::uint64_t width);

/// Closed-form maximum knot count for a scalar-input network:
/// sum over i of n_i * prod_{j > i} (n_j + 1). Requires input_dim == 1.
[[nodiscard]] BigInt knot_bound(const Architecture& arch);

/// Bound after each hidden layer, folding recurrence_step from zero.
[[nodiscard]] std::vector<BigInt> knot_bound_prefixes(const Architecture& arch);

/// Product of the widths; the leading-order approximation of knot_bound.
[[nodiscard]] BigInt approx_bound(const Architecture& arch);

/// Number of weights and biases, counting input_dim inputs and output_dim outputs.
[[nodiscard]] BigInt param_count(const Architecture& arch);

/// Whether some network with this architecture attains knot_bound.
///
/// Single-hidden-layer architectures are always Tight. Deeper ones are Tight
/// when every non-final width is at least 3 and the final width at least 2,
/// and NotTight when some non-final width is below 3 or the final width is 1.
[[nodiscard]] Tightness tightness_eligibility(const Architecture& arch);

/// Human-readable justification of the verdict, naming the offending width.
[[nodiscard]] std::string tightness_reason(const Architecture& arch);

}  // namespace relu_knots
