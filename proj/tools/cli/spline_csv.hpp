#pragma once

#include <ostream>

#include "relu_knots/spline.hpp"

namespace relu_knots::cli {

/// One row per knot per output, plus a "-inf" and a "+inf" row for the two
/// rays. Ray rows carry the ray's slope in both slope columns and the value
/// of the ray's line at x = 0 in the value columns.
///
/// Columns: output_index, x_rational, x_decimal, value_rational,
/// value_decimal, left_slope_rational, right_slope_rational
void write_spline_csv(std::ostream& os, const VectorSpline& outputs);

}  // namespace relu_knots::cli
