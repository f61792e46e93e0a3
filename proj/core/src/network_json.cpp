#include "relu_knots/network_json.hpp"

#include <json.hpp>

namespace relu_knots {

namespace {

using json = nlohmann::ordered_json;

Rational read_rational(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw SchemaError(path, "expected a rational string such as \"3/4\", got " +
                              std::string(j.type_name()) + " " + j.dump());
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing key \"") + key + "\"");
  return *it;
}

const json& array_at(const json& obj, const char* key, const std::string& path) {
  const json& a = member(obj, key, path);
  if (!a.is_array()) throw SchemaError(path + "." + key, "expected an array");
  return a;
}

DenseLayer read_layer(const json& j, const std::string& path, std::size_t expected_inputs) {
  const json& w = array_at(j, "weights", path);
  const json& b = array_at(j, "biases", path);
  if (w.empty()) throw SchemaError(path + ".weights", "layer must have at least one neuron");

  DenseLayer::Matrix weights;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const std::string row_path = path + ".weights[" + std::to_string(k) + "]";
    if (!w[k].is_array()) throw SchemaError(row_path, "expected an array");
    if (w[k].size() != expected_inputs) {
      throw SchemaError(row_path, "expected " + std::to_string(expected_inputs) + " weights, got " +
                                      std::to_string(w[k].size()));
    }
    std::vector<Rational> row;
    for (std::size_t c = 0; c < w[k].size(); ++c) {
      row.push_back(read_rational(w[k][c], row_path + "[" + std::to_string(c) + "]"));
    }
    weights.push_back(std::move(row));
  }
  if (b.size() != w.size()) {
    throw SchemaError(path + ".biases", "expected " + std::to_string(w.size()) + " biases, got " +
                                            std::to_string(b.size()));
  }
  std::vector<Rational> biases;
  for (std::size_t k = 0; k < b.size(); ++k) {
    biases.push_back(read_rational(b[k], path + ".biases[" + std::to_string(k) + "]"));
  }
  return DenseLayer(std::move(weights), std::move(biases));
}

json write_layer(const DenseLayer& layer) {
  json weights = json::array();
  for (const auto& row : layer.weights()) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.str());
    weights.push_back(std::move(r));
  }
  json biases = json::array();
  for (const auto& v : layer.biases()) biases.push_back(v.str());
  return json{{"weights", std::move(weights)}, {"biases", std::move(biases)}};
}

}  // namespace

ScalarInputNetwork network_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }

  const json& p = member(doc, "p", "$");
  if (!p.is_number_integer() || p.get<std::int64_t>() < 1) {
    throw SchemaError("$.p", "expected a positive integer");
  }
  const json& hidden = array_at(doc, "hidden_layers", "$");
  if (hidden.empty()) throw SchemaError("$.hidden_layers", "need at least one hidden layer");

  std::vector<DenseLayer> layers;
  std::size_t inputs = 1;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    layers.push_back(read_layer(hidden[i], "$.hidden_layers[" + std::to_string(i) + "]", inputs));
    inputs = layers.back().neurons();
  }
  DenseLayer output = read_layer(member(doc, "output_layer", "$"), "$.output_layer", inputs);
  if (output.neurons() != static_cast<std::size_t>(p.get<std::int64_t>())) {
    throw SchemaError("$.output_layer.weights", "p = " + std::to_string(p.get<std::int64_t>()) +
                                                    " but the output layer has " +
                                                    std::to_string(output.neurons()) + " rows");
  }
  return ScalarInputNetwork(std::move(layers), std::move(output));
}

std::string network_to_json(const ScalarInputNetwork& net, int indent) {
  json hidden = json::array();
  for (const auto& layer : net.hidden_layers()) hidden.push_back(write_layer(layer));
  json doc{{"p", net.output_dim()},
           {"hidden_layers", std::move(hidden)},
           {"output_layer", write_layer(net.output_layer())}};
  return doc.dump(indent);
}

}  // namespace relu_knots
