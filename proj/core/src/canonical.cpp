#include "relu_knots/canonical.hpp"

#include <algorithm>

namespace relu_knots {

CanonicalShallowForm to_forward_facing(const ScalarInputNetwork& net) {
  if (net.depth() != 1) {
    throw DepthError("forward-facing form needs exactly one hidden layer, network has " +
                     std::to_string(net.depth()));
  }
  const DenseLayer& hidden = net.hidden_layers().front();
  const DenseLayer& out = net.output_layer();
  const std::size_t n = hidden.neurons();
  const std::size_t p = out.neurons();

  CanonicalShallowForm form;
  form.line_slope.assign(p, Rational(0));
  form.line_intercept.assign(out.biases().begin(), out.biases().end());

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& w = hidden.weights()[j][0];
    const Rational& b = hidden.biases()[j];
    if (w.is_zero()) {
      form.folded_neurons.push_back(j);
      const Rational level = max(Rational(0), b);
      for (std::size_t k = 0; k < p; ++k) form.line_intercept[k] += out.weights()[k][j] * level;
      continue;
    }
    active.push_back(j);
    if (w.sign() < 0) {
      for (std::size_t k = 0; k < p; ++k) {
        form.line_slope[k] += out.weights()[k][j] * w;
        form.line_intercept[k] += out.weights()[k][j] * b;
      }
    }
  }

  std::vector<Rational> location(n);
  for (std::size_t j : active) location[j] = -hidden.biases()[j] / hidden.weights()[j][0];
  std::stable_sort(active.begin(), active.end(),
                   [&](std::size_t a, std::size_t b) { return location[a] < location[b]; });

  form.ray_slopes.assign(p, {});
  for (std::size_t j : active) {
    form.knot_locations.push_back(location[j]);
    const Rational scale = hidden.weights()[j][0].abs();
    for (std::size_t k = 0; k < p; ++k) form.ray_slopes[k].push_back(out.weights()[k][j] * scale);
  }
  return form;
}

std::vector<Rational> eval_canonical(const CanonicalShallowForm& form, const Rational& x) {
  std::vector<Rational> y;
  y.reserve(form.output_dim());
  for (std::size_t k = 0; k < form.output_dim(); ++k) {
    Rational acc = form.line_slope[k] * x + form.line_intercept[k];
    for (std::size_t j = 0; j < form.knot_locations.size(); ++j) {
      const Rational t = x - form.knot_locations[j];
      if (t.sign() > 0) acc += form.ray_slopes[k][j] * t;
    }
    y.push_back(std::move(acc));
  }
  return y;
}

}  // namespace relu_knots
