// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Validator for the JSON Schema subset used by scene configs: type,
// properties, required, additionalProperties (bool), enum, minimum/maximum,
// exclusiveMinimum/exclusiveMaximum (numeric), items, minItems/maxItems,
// default, and local "$ref": "#/$defs/<name>". Defaults are filled in place.

#include "tacsim/core/error.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

namespace tacsim::scene {

using Json = nlohmann::ordered_json;

namespace detail {

inline bool type_matches(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") {
    return v.is_number_integer() || (v.is_number_float() && std::trunc(v.get<double>()) == v.get<double>());
  }
  if (t == "number") return v.is_number();
  if (t == "null") return v.is_null();
  throw Error("schema: unknown type '" + t + "'");
}

inline std::string type_list(const Json& t) {
  if (t.is_string()) return t.get<std::string>();
  std::string s;
  for (const auto& x : t) s += (s.empty() ? "" : " or ") + x.get<std::string>();
  return s;
}

inline const Json& resolve(const Json& node, const Json& root) {
  if (!node.contains("$ref")) return node;
  const std::string ref = node["$ref"].get<std::string>();
  const std::string prefix = "#/$defs/";
  if (ref.rfind(prefix, 0) != 0 || !root.contains("$defs") || !root["$defs"].contains(ref.substr(prefix.size()))) {
    throw Error("schema: unresolvable reference '" + ref + "'");
  }
  return root["$defs"][ref.substr(prefix.size())];
}

inline void validate_node(Json& value, const Json& node, const Json& root, const std::string& path);

} // namespace detail

/// Validates `value` against `schema`, filling `default`s of absent object
/// members first. Errors name the offending path, e.g. "$.camera.fovv".
inline void validate(Json& value, const Json& schema) { detail::validate_node(value, schema, schema, "$"); }

inline void detail::validate_node(Json& value, const Json& node, const Json& root, const std::string& path) {
  const Json& schema = resolve(node, root);
  if (schema.contains("type")) {
    const Json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = detail::type_matches(value, t.get<std::string>());
    } else {
      for (const auto& x : t) ok = ok || detail::type_matches(value, x.get<std::string>());
    }
    if (!ok) throw ValidationError(path + ": expected " + detail::type_list(t) + ", got " + value.type_name());
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == value;
    if (!found) throw ValidationError(path + ": value " + value.dump() + " is not one of " + schema["enum"].dump());
  }
  if (value.is_number()) {
    const double x = value.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
      throw ValidationError(path + ": " + value.dump() + " is below the minimum " + schema["minimum"].dump());
    }
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) {
      throw ValidationError(path + ": " + value.dump() + " is above the maximum " + schema["maximum"].dump());
    }
    if (schema.contains("exclusiveMinimum") && !(x > schema["exclusiveMinimum"].get<double>())) {
      throw ValidationError(path + ": " + value.dump() + " must be greater than " + schema["exclusiveMinimum"].dump());
    }
    if (schema.contains("exclusiveMaximum") && !(x < schema["exclusiveMaximum"].get<double>())) {
      throw ValidationError(path + ": " + value.dump() + " must be less than " + schema["exclusiveMaximum"].dump());
    }
  }
  if (value.is_object()) {
    const Json empty = Json::object();
    const Json& props = schema.contains("properties") ? schema["properties"] : empty;
    const bool closed = schema.contains("additionalProperties") && !schema["additionalProperties"].get<bool>();
    if (closed) {
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!props.contains(it.key())) {
          throw ValidationError(path + "." + it.key() + ": unknown key '" + it.key() + "'");
        }
      }
    }
    if (schema.contains("required")) {
      for (const auto& r : schema["required"]) {
        const std::string k = r.get<std::string>();
        if (!value.contains(k)) throw ValidationError(path + "." + k + ": required key missing");
      }
    }
    for (auto it = props.begin(); it != props.end(); ++it) {
      const Json& sub = resolve(it.value(), root);
      if (!value.contains(it.key()) && sub.contains("default")) value[it.key()] = sub["default"];
      if (value.contains(it.key())) validate_node(value[it.key()], it.value(), root, path + "." + it.key());
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>()) {
      throw ValidationError(path + ": needs at least " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>()) {
      throw ValidationError(path + ": allows at most " + schema["maxItems"].dump() + " items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_node(value[i], schema["items"], root, path + "[" + std::to_string(i) + "]");
      }
    }
  }
}

} // namespace tacsim::scene
