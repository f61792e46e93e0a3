#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "relu_knots/rational.hpp"

namespace relu_knots {

/// A point where the slope of a spline jumps by `slope_delta`.
struct Breakpoint {
  Rational x;
  Rational slope_delta;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// A straight line `slope * x + intercept`.
struct Line {
  Rational slope;
  Rational intercept;

  [[nodiscard]] Rational operator()(const Rational& x) const { return slope * x + intercept; }
  friend bool operator==(const Line&, const Line&) = default;
};

/// Continuous piecewise-linear function R -> R in canonical form.
///
/// The function is stored as the line of its leftmost piece (the ray towards
/// -infinity) plus an ordered list of slope jumps. Continuity is structural.
/// Canonical form requires strictly increasing breakpoint x-values and nonzero
/// slope deltas, so every stored breakpoint is a knot. All constructors
/// canonicalize their input.
class LinearSpline {
 public:
  /// The zero function.
  LinearSpline() = default;

  static LinearSpline constant(Rational value);
  static LinearSpline line(Rational slope, Rational intercept);
  /// Breakpoints may be unsorted, repeated, or carry zero deltas.
  static LinearSpline from_breakpoints(Rational initial_slope, Rational initial_intercept,
                                       std::vector<Breakpoint> breakpoints);

  [[nodiscard]] const Rational& initial_slope() const { return initial_slope_; }
  /// Value of the leftmost piece's line extended to x = 0.
  [[nodiscard]] const Rational& initial_intercept() const { return initial_intercept_; }
  [[nodiscard]] std::span<const Breakpoint> breakpoints() const { return breakpoints_; }
  [[nodiscard]] std::size_t knot_count() const { return breakpoints_.size(); }

  /// Slope of the rightmost ray.
  [[nodiscard]] Rational final_slope() const;

  /// Lines of all knot_count() + 1 pieces, left to right.
  [[nodiscard]] std::vector<Line> pieces() const;

  /// Function values at each breakpoint, in order.
  [[nodiscard]] std::vector<Rational> knot_values() const;

  friend bool operator==(const LinearSpline&, const LinearSpline&) = default;

 private:
  LinearSpline(Rational slope, Rational intercept, std::vector<Breakpoint> canonical)
      : initial_slope_(std::move(slope)),
        initial_intercept_(std::move(intercept)),
        breakpoints_(std::move(canonical)) {}

  Rational initial_slope_;
  Rational initial_intercept_;
  std::vector<Breakpoint> breakpoints_;
};

/// One spline per output component; never empty.
class VectorSpline {
 public:
  explicit VectorSpline(std::vector<LinearSpline> components);

  [[nodiscard]] std::size_t size() const { return components_.size(); }
  [[nodiscard]] const LinearSpline& operator[](std::size_t i) const { return components_[i]; }
  [[nodiscard]] std::span<const LinearSpline> components() const { return components_; }

  friend bool operator==(const VectorSpline&, const VectorSpline&) = default;

 private:
  std::vector<LinearSpline> components_;
};

struct WeightedSpline {
  Rational coefficient;
  const LinearSpline* spline;
};

[[nodiscard]] Rational eval(const LinearSpline& f, const Rational& x);

/// Exact sum of coefficient * spline over `terms`, plus `constant`.
[[nodiscard]] LinearSpline affine_combine(std::span<const WeightedSpline> terms,
                                          const Rational& constant);

/// Convenience overload: coefficients[i] * splines[i].
[[nodiscard]] LinearSpline affine_combine(std::span<const Rational> coefficients,
                                          std::span<const LinearSpline> splines,
                                          const Rational& constant);

/// x -> max(0, f(x)).
///
/// Knots where f > 0 are kept, knots where f < 0 vanish, and every strict
/// sign change of f introduces a knot at the exact root. A root landing on an
/// existing knot merges with it.
[[nodiscard]] LinearSpline relu(const LinearSpline& f);

/// Knot locations in increasing order.
[[nodiscard]] std::vector<Rational> knots(const LinearSpline& f);

/// Minimum and maximum of f over its knots. Throws std::domain_error when f
/// has no knots.
[[nodiscard]] std::pair<Rational, Rational> knot_value_range(const LinearSpline& f);

/// Sorted, duplicate-free union of the knot locations of all splines.
[[nodiscard]] std::vector<Rational> knot_union(std::span<const LinearSpline> splines);

}  // namespace relu_knots
