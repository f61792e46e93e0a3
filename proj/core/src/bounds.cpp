#include "relu_knots/bounds.hpp"

#include <stdexcept>

namespace relu_knots {

namespace {

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

void require_scalar_input(const Architecture& arch) {
  arch.validate();
  if (arch.input_dim != 1) {
    throw std::invalid_argument("knot bound is only defined for scalar input (input_dim = 1), got " +
                                std::to_string(arch.input_dim));
  }
}

}  // namespace

void Architecture::validate() const {
  if (widths.empty()) throw std::invalid_argument("architecture needs at least one hidden layer");
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] == 0) {
      throw std::invalid_argument("hidden layer " + std::to_string(i + 1) + " has zero width");
    }
  }
  if (output_dim == 0) throw std::invalid_argument("output dimension must be positive");
  if (input_dim == 0) throw std::invalid_argument("input dimension must be positive");
}

std::string_view to_string(Tightness t) {
  switch (t) {
    case Tightness::Tight: return "Tight";
    case Tightness::NotTight: return "NotTight";
    case Tightness::Unknown: return "Unknown";
  }
  return "Unknown";
}

BigInt recurrence_step(const BigInt& m_prev, std::uint64_t width) {
  if (m_prev < 0) throw std::invalid_argument("recurrence_step: negative knot count");
  if (width == 0) throw std::invalid_argument("recurrence_step: zero width");
  return (big(width) + 1) * m_prev + big(width);
}

BigInt knot_bound(const Architecture& arch) {
  require_scalar_input(arch);
  const auto& n = arch.widths;
  BigInt total = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    BigInt term = big(n[i]);
    for (std::size_t j = i + 1; j < n.size(); ++j) term *= big(n[j]) + 1;
    total += term;
  }
  return total;
}

std::vector<BigInt> knot_bound_prefixes(const Architecture& arch) {
  require_scalar_input(arch);
  std::vector<BigInt> out;
  BigInt m = 0;
  for (auto w : arch.widths) {
    m = recurrence_step(m, w);
    out.push_back(m);
  }
  return out;
}

BigInt approx_bound(const Architecture& arch) {
  require_scalar_input(arch);
  BigInt product = 1;
  for (auto w : arch.widths) product *= big(w);
  return product;
}

BigInt param_count(const Architecture& arch) {
  arch.validate();
  const auto& n = arch.widths;
  BigInt total = (big(arch.input_dim) + 1) * big(n.front());
  for (std::size_t i = 0; i + 1 < n.size(); ++i) total += (big(n[i]) + 1) * big(n[i + 1]);
  total += (big(n.back()) + 1) * big(arch.output_dim);
  return total;
}

Tightness tightness_eligibility(const Architecture& arch) {
  arch.validate();
  const auto& n = arch.widths;
  if (n.size() == 1) return Tightness::Tight;

  bool inner_ok = true;
  for (std::size_t i = 0; i + 1 < n.size(); ++i) inner_ok = inner_ok && n[i] >= 3;
  const bool final_ok = n.back() >= 2;

  if (inner_ok && final_ok) return Tightness::Tight;
  if (!inner_ok || n.back() == 1) return Tightness::NotTight;
  return Tightness::Unknown;
}

std::string tightness_reason(const Architecture& arch) {
  const auto& n = arch.widths;
  switch (tightness_eligibility(arch)) {
    case Tightness::Tight:
      if (n.size() == 1) return "single hidden layer: distinct knot locations attain the bound";
      return "all non-final widths >= 3 and final width >= 2: sawtooth construction attains the bound";
    case Tightness::NotTight:
      for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        if (n[i] < 3) {
          return "n_" + std::to_string(i + 1) + " = " + std::to_string(n[i]) +
                 " < 3 in a non-final layer: no sawtooth can be formed, bound not attainable";
        }
      }
      return "final width n_" + std::to_string(n.size()) +
             " = 1: one neuron cannot both keep every incoming knot and create new ones";
    case Tightness::Unknown:
      break;
  }
  return "architecture not covered by the known tightness results";
}

}  // namespace relu_knots
