#pragma once

// Parsing of the "name:key=value,key=value" strings used for symbols and
// norm specifications.

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "dispersolve/errors.hpp"

namespace dispersolve::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

struct KeyValueSpec {
  std::string name;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) > 0; }

  double number(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) {
      throw ArgumentError("'" + name + "': missing parameter '" + key + "'");
    }
    return to_double(it->second, key);
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::string text(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) {
      throw ArgumentError("'" + name + "': missing parameter '" + key + "'");
    }
    return it->second;
  }

  /// Rejects any parameter not in `allowed`.
  template <typename... Keys>
  void only(Keys... allowed) const {
    for (const auto& [key, value] : params) {
      bool ok = ((key == allowed) || ...);
      if (!ok) {
        throw ArgumentError("'" + name + "': unknown parameter '" + key + "'");
      }
    }
  }

  double to_double(const std::string& value, const std::string& key) const {
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw ArgumentError("'" + name + "': parameter '" + key +
                          "' is not a number: '" + value + "'");
    }
  }
};

inline KeyValueSpec parse_key_values(std::string_view text) {
  KeyValueSpec out;
  text = trim(text);
  const auto colon = text.find(':');
  out.name = std::string(trim(text.substr(0, colon)));
  if (out.name.empty()) throw ArgumentError("empty specification");
  if (colon == std::string_view::npos) return out;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{}
                                           : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("'" + out.name + "': expected key=value, got '" +
                          std::string(item) + "'");
    }
    std::string key(trim(item.substr(0, eq)));
    std::string value(trim(item.substr(eq + 1)));
    if (!out.params.emplace(key, value).second) {
      throw ArgumentError("'" + out.name + "': duplicate parameter '" + key +
                          "'");
    }
  }
  return out;
}

}  // namespace dispersolve::detail
