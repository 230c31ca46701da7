#pragma once

#include <cstdio>
#include <cstdlib>
#include <type_traits>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rankfarm/error.hpp"

namespace rankfarm::detail {

template <typename T>
constexpr const char* type_name() {
  if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "a number";
}

template <typename T>
bool holds(const nlohmann::json& v) {
  if constexpr (std::is_same_v<T, std::string>) return v.is_string();
  else if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
  else if constexpr (std::is_integral_v<T>) return v.is_number_integer();
  else return v.is_number();
}

template <typename T>
std::optional<T> optional(const nlohmann::json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, ctx + " must be an object");
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!holds<T>(*it)) throw Error(ErrorCode::SchemaError, ctx + ": field '" + key + "' must be " + type_name<T>());
  return it->get<T>();
}

template <typename T>
T require(const nlohmann::json& j, const char* key, const std::string& ctx) {
  auto v = optional<T>(j, key, ctx);
  if (!v) throw Error(ErrorCode::SchemaError, ctx + ": missing field '" + key + "'");
  return *v;
}

inline const nlohmann::json& require_kind(const nlohmann::json& j, const char* key, const std::string& ctx,
                                          bool array) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, ctx + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::SchemaError, ctx + ": missing field '" + key + "'");
  if (array ? !it->is_array() : !it->is_object()) {
    throw Error(ErrorCode::SchemaError, ctx + ": field '" + key + "' must be " + (array ? "an array" : "an object"));
  }
  return *it;
}

inline const nlohmann::json& require_array(const nlohmann::json& j, const char* key, const std::string& ctx) {
  return require_kind(j, key, ctx, true);
}

inline const nlohmann::json& require_object(const nlohmann::json& j, const char* key, const std::string& ctx) {
  return require_kind(j, key, ctx, false);
}

/// Shortest "%g" rendering that still reads back as the same double.
inline std::string format_number(double v) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace rankfarm::detail
