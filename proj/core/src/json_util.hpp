#pragma once

// Typed access to nlohmann::json values with field paths in error messages.

#include <cmath>
#include <string>
#include <string_view>

#include <json.hpp>

#include "atmroute/types.hpp"

namespace atmroute::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline std::string join_path(const std::string& parent, std::string_view key) {
  if (parent.empty()) {
    return std::string(key);
  }
  return parent + "." + std::string(key);
}

inline std::string index_path(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

inline json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("", std::string("malformed document: ") + e.what());
  }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) {
    throw InputError(path, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError(join_path(path, key), "missing field");
  }
  return *it;
}

inline const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    return nullptr;
  }
  return &*it;
}

inline std::int64_t as_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) {
    return v.get<std::int64_t>();
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.0e18) {
      return static_cast<std::int64_t>(d);
    }
  }
  throw InputError(path, "expected an integer");
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw InputError(path, "expected a number");
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw InputError(path, "expected a finite number");
  }
  return d;
}

inline std::string as_id(const json& v, const std::string& path) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_number_integer()) {
    return std::to_string(v.get<std::int64_t>());
  }
  throw InputError(path, "expected an id string");
}

inline const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) {
    throw InputError(path, "expected an array");
  }
  return v;
}

inline const json& as_array(const json& v, const std::string& path, std::size_t size) {
  as_array(v, path);
  if (v.size() != size) {
    throw InputError(path, "wrong arity: expected " + std::to_string(size) + " entries, got " +
                             std::to_string(v.size()));
  }
  return v;
}

inline void check_schema_version(const json& doc) {
  if (!doc.is_object()) {
    throw InputError("", "expected a JSON object at top level");
  }
  if (const json* v = optional_field(doc, "schema_version")) {
    if (as_integer(*v, "schema_version") != 1) {
      throw InputError("schema_version", "unsupported schema version");
    }
  }
}

} // namespace atmroute::detail
