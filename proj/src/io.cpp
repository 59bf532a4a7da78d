#include "mmot/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mmot/errors.hpp"

namespace mmot {

namespace {

using nlohmann::json;

int require_positive_int(const json& object, const char* key) {
  if (!object.contains(key)) throw ParseError(std::string("instance: missing field \"") + key + '"');
  const json& field = object.at(key);
  if (!field.is_number_integer())
    throw ParseError(std::string("instance: field \"") + key + "\" must be an integer");
  const auto value = field.get<std::int64_t>();
  if (value < 1 || value > 1'000'000)
    throw ParseError(std::string("instance: field \"") + key + "\" out of range");
  return static_cast<int>(value);
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("instance: top level must be an object");

  const int d = require_positive_int(root, "d");
  const int N = require_positive_int(root, "N");
  const int m = require_positive_int(root, "m");

  if (!root.contains("marginals") || !root.at("marginals").is_array())
    throw ParseError("instance: field \"marginals\" must be an array");
  const json& marginals = root.at("marginals");
  if (static_cast<int>(marginals.size()) != N)
    throw ParseError("instance: declared N does not match the number of marginals");

  Instance instance;
  instance.marginals.resize(N);
  for (int i = 0; i < N; ++i) {
    const json& measure = marginals.at(i);
    if (!measure.is_array() || static_cast<int>(measure.size()) != m)
      throw ParseError("instance: marginal " + std::to_string(i + 1) +
                       " does not have the declared m atoms");
    auto& points = instance.marginals[i].points;
    points.resize(m);
    for (int k = 0; k < m; ++k) {
      const json& atom = measure.at(k);
      if (!atom.is_array() || static_cast<int>(atom.size()) != d)
        throw ParseError("instance: marginal " + std::to_string(i + 1) + ", atom " +
                         std::to_string(k + 1) + " does not have the declared d coordinates");
      points[k].resize(d);
      for (int j = 0; j < d; ++j) {
        const json& coordinate = atom.at(j);
        if (!coordinate.is_number())
          throw ParseError("instance: non-numeric coordinate in marginal " +
                           std::to_string(i + 1));
        points[k][j] = coordinate.get<double>();
      }
    }
  }
  try {
    return validate(instance);
  } catch (const Error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string instance_to_json(const Instance& instance) {
  json root;
  root["d"] = instance.dim();
  root["N"] = instance.num_marginals();
  root["m"] = instance.support_size();
  json marginals = json::array();
  for (const auto& measure : instance.marginals) {
    json points = json::array();
    for (const auto& point : measure.points) points.push_back(point);
    marginals.push_back(std::move(points));
  }
  root["marginals"] = std::move(marginals);
  return root.dump(2);
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write instance file: " + path);
  out << instance_to_json(instance) << '\n';
}

std::string format_double(double value, bool full_precision) {
  if (full_precision) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
  }
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

double display_value(double value, bool full_precision) {
  if (full_precision) return value;
  return std::strtod(format_double(value, false).c_str(), nullptr);
}

}  // namespace mmot
