#include "relu_knots/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace relu_knots {

namespace {

// Sorts by x, sums deltas at equal x, and drops zero deltas.
std::vector<Breakpoint> canonicalize(std::vector<Breakpoint> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
  std::vector<Breakpoint> out;
  out.reserve(raw.size());
  for (auto& bp : raw) {
    if (!out.empty() && out.back().x == bp.x) {
      out.back().slope_delta += bp.slope_delta;
    } else {
      if (!out.empty() && out.back().slope_delta.is_zero()) out.pop_back();
      out.push_back(std::move(bp));
    }
  }
  if (!out.empty() && out.back().slope_delta.is_zero()) out.pop_back();
  return out;
}

Line advance(Line line, const Breakpoint& bp) {
  line.slope += bp.slope_delta;
  line.intercept -= bp.slope_delta * bp.x;
  return line;
}

}  // namespace

LinearSpline LinearSpline::constant(Rational value) { return line(Rational(0), std::move(value)); }

LinearSpline LinearSpline::line(Rational slope, Rational intercept) {
  return LinearSpline(std::move(slope), std::move(intercept), {});
}

LinearSpline LinearSpline::from_breakpoints(Rational initial_slope, Rational initial_intercept,
                                            std::vector<Breakpoint> breakpoints) {
  return LinearSpline(std::move(initial_slope), std::move(initial_intercept),
                      canonicalize(std::move(breakpoints)));
}

Rational LinearSpline::final_slope() const {
  Rational slope = initial_slope_;
  for (const auto& bp : breakpoints_) slope += bp.slope_delta;
  return slope;
}

std::vector<Line> LinearSpline::pieces() const {
  std::vector<Line> out;
  out.reserve(breakpoints_.size() + 1);
  out.push_back({initial_slope_, initial_intercept_});
  for (const auto& bp : breakpoints_) out.push_back(advance(out.back(), bp));
  return out;
}

std::vector<Rational> LinearSpline::knot_values() const {
  std::vector<Rational> out;
  out.reserve(breakpoints_.size());
  Line line{initial_slope_, initial_intercept_};
  for (const auto& bp : breakpoints_) {
    out.push_back(line(bp.x));
    line = advance(std::move(line), bp);
  }
  return out;
}

VectorSpline::VectorSpline(std::vector<LinearSpline> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("VectorSpline needs at least one component");
}

Rational eval(const LinearSpline& f, const Rational& x) {
  Line line{f.initial_slope(), f.initial_intercept()};
  for (const auto& bp : f.breakpoints()) {
    if (x <= bp.x) break;
    line = advance(std::move(line), bp);
  }
  return line(x);
}

LinearSpline affine_combine(std::span<const WeightedSpline> terms, const Rational& constant) {
  Rational slope(0);
  Rational intercept = constant;
  std::vector<Breakpoint> merged;
  std::size_t total = 0;
  for (const auto& t : terms) total += t.spline->knot_count();
  merged.reserve(total);

  for (const auto& [c, f] : terms) {
    if (c.is_zero()) continue;
    slope += c * f->initial_slope();
    intercept += c * f->initial_intercept();
    for (const auto& bp : f->breakpoints()) merged.push_back({bp.x, c * bp.slope_delta});
  }
  return LinearSpline::from_breakpoints(std::move(slope), std::move(intercept), std::move(merged));
}

LinearSpline affine_combine(std::span<const Rational> coefficients,
                            std::span<const LinearSpline> splines, const Rational& constant) {
  if (coefficients.size() != splines.size()) {
    throw std::invalid_argument("affine_combine: coefficient/spline count mismatch");
  }
  std::vector<WeightedSpline> terms;
  terms.reserve(splines.size());
  for (std::size_t i = 0; i < splines.size(); ++i) terms.push_back({coefficients[i], &splines[i]});
  return affine_combine(terms, constant);
}

LinearSpline relu(const LinearSpline& f) {
  const auto bps = f.breakpoints();
  const auto lines = f.pieces();

  // Candidate breakpoints of max(0, f): existing knots plus roots strictly
  // inside a piece. Between consecutive candidates the result is linear.
  std::vector<Rational> cuts;
  cuts.reserve(2 * bps.size() + 1);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& piece = lines[i];
    if (i > 0) cuts.push_back(bps[i - 1].x);
    if (piece.slope.is_zero()) continue;
    Rational root = -piece.intercept / piece.slope;
    const bool after_left = i == 0 || bps[i - 1].x < root;
    const bool before_right = i == bps.size() || root < bps[i].x;
    if (after_left && before_right) cuts.push_back(std::move(root));
  }
  if (!bps.empty()) cuts.push_back(bps.back().x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Probe each open interval between cuts at an interior point, using the
  // piece of f that covers it.
  std::size_t piece = 0;
  auto rectified_line = [&](const Rational& probe) -> Line {
    while (piece < bps.size() && bps[piece].x < probe) ++piece;
    const Line& l = lines[piece];
    if (l(probe).sign() > 0) return l;
    return {Rational(0), Rational(0)};
  };

  // No cuts means f is constant.
  if (cuts.empty()) return LinearSpline::constant(max(Rational(0), lines[0].intercept));

  std::vector<Line> segment_lines;
  segment_lines.reserve(cuts.size() + 1);
  segment_lines.push_back(rectified_line(cuts.front() - Rational(1)));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    segment_lines.push_back(rectified_line((cuts[i] + cuts[i + 1]) / Rational(2)));
  }
  segment_lines.push_back(rectified_line(cuts.back() + Rational(1)));

  std::vector<Breakpoint> out;
  out.reserve(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    out.push_back({cuts[i], segment_lines[i + 1].slope - segment_lines[i].slope});
  }
  return LinearSpline::from_breakpoints(segment_lines.front().slope, segment_lines.front().intercept,
                                        std::move(out));
}

std::vector<Rational> knots(const LinearSpline& f) {
  std::vector<Rational> out;
  out.reserve(f.knot_count());
  for (const auto& bp : f.breakpoints()) out.push_back(bp.x);
  return out;
}

std::pair<Rational, Rational> knot_value_range(const LinearSpline& f) {
  if (f.knot_count() == 0) throw std::domain_error("knot_value_range: spline has no knots");
  const auto values = f.knot_values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

std::vector<Rational> knot_union(std::span<const LinearSpline> splines) {
  std::vector<Rational> out;
  for (const auto& s : splines) {
    for (const auto& bp : s.breakpoints()) out.push_back(bp.x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace relu_knots
