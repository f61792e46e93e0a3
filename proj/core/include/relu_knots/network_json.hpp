#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "relu_knots/network.hpp"

namespace relu_knots {

/// A network document that does not match the schema. `path()` is a JSON
/// path such as `$.hidden_layers[1].weights[0][2]`.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Schema:
//   { "p": int,
//     "hidden_layers": [ { "weights": [[r, ...], ...], "biases": [r, ...] }, ... ],
//     "output_layer": { "weights": ..., "biases": ... } }
// where each r is a reduced "num/den" string (integers may omit "/den").
// Plain JSON integers are accepted for r on input.

[[nodiscard]] ScalarInputNetwork network_from_json(std::string_view text);
[[nodiscard]] std::string network_to_json(const ScalarInputNetwork& net, int indent = 2);

}  // namespace relu_knots
