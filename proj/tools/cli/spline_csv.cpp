#include "spline_csv.hpp"

namespace relu_knots::cli {

void write_spline_csv(std::ostream& os, const VectorSpline& outputs) {
  os << "output_index,x_rational,x_decimal,value_rational,value_decimal,"
        "left_slope_rational,right_slope_rational\n";
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const LinearSpline& f = outputs[k];
    const auto lines = f.pieces();
    const auto values = f.knot_values();
    auto ray = [&](const char* x, const Line& l) {
      os << k << ',' << x << ',' << x << ',' << l.intercept.str() << ',' << l.intercept.decimal() << ','
         << l.slope.str() << ',' << l.slope.str() << '\n';
    };
    ray("-inf", lines.front());
    for (std::size_t i = 0; i < f.knot_count(); ++i) {
      const Rational& x = f.breakpoints()[i].x;
      os << k << ',' << x.str() << ',' << x.decimal() << ',' << values[i].str() << ',' << values[i].decimal()
         << ',' << lines[i].slope.str() << ',' << lines[i + 1].slope.str() << '\n';
    }
    ray("+inf", lines.back());
  }
}

}  // namespace relu_knots::cli
