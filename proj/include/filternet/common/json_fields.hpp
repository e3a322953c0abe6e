// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_COMMON_JSON_FIELDS_HPP_
#define FILTERNET_COMMON_JSON_FIELDS_HPP_

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "filternet/common/error.hpp"

namespace filternet {

// Reads optional fields from one JSON object and rejects keys nobody asked
// for. Absent fields leave the destination untouched.
class JsonFields {
 public:
  JsonFields(const nlohmann::json& object, std::string path)
      : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) {
      throw ConfigError("'" + path_ + "' must be a JSON object");
    }
  }

  bool has(std::string_view key) const { return object_.contains(key); }

  const nlohmann::json* get(std::string_view key) {
    const auto it = object_.find(key);
    if (it == object_.end()) return nullptr;
    seen_.emplace(key);
    return &*it;
  }

  template <typename T>
  void read(std::string_view key, T& out) {
    const nlohmann::json* v = get(key);
    if (v != nullptr) out = convert<T>(*v, child(key));
  }

  template <typename T, typename Parse>
  void read_as(std::string_view key, T& out, Parse parse) {
    std::string name;
    read(key, name);
    if (has(key)) out = parse(name);
  }

  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  // Throws ConfigError naming the first key that was never read.
  void finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.contains(item.key())) {
        throw ConfigError("unknown key '" + child(item.key()) + "'");
      }
    }
  }

  template <typename T>
  static T convert(const nlohmann::json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw type_error(where, "a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      const bool negative =
          v.is_number_integer() && v.get<std::int64_t>() < 0 && !v.is_number_unsigned();
      if (!v.is_number_integer() || (std::is_unsigned_v<T> && negative)) {
        throw type_error(where, "a non-negative integer");
      }
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw type_error(where, "a number");
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw type_error(where, "a string");
      return v.get<std::string>();
    } else {
      if (!v.is_array()) throw type_error(where, "an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<typename T::value_type>(
            v[i], where + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
  }

 private:
  static ConfigError type_error(const std::string& where, const char* what) {
    return ConfigError("'" + where + "' must be " + what);
  }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

}  // namespace filternet

#endif  // FILTERNET_COMMON_JSON_FIELDS_HPP_
