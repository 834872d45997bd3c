#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "grwalk/errors.hpp"
#include "grwalk/rational.hpp"

namespace grwalk::experiment {

/// Keys that may repeat; every other key must appear at most once.
inline bool is_list_key(const std::string& key) {
  return key == "atom" || key == "translation" || key == "scale";
}

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/**
 * Flat "key = value" configuration. Blank lines and text after '#' are
 * ignored; list keys (atom, translation, scale) may repeat.
 */
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>") {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      const std::string where = source + ":" + std::to_string(lineno);
      if (eq == std::string::npos) throw UsageError(where + ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw UsageError(where + ": empty key");
      if (value.empty()) throw UsageError(where + ": empty value for '" + key + "'");
      if (is_list_key(key)) {
        c.lists_[key].push_back(value);
      } else if (!c.values_.emplace(key, value).second) {
        throw UsageError(where + ": duplicate key '" + key + "'");
      }
    }
    return c;
  }

  static Config parse_text(const std::string& text, const std::string& source = "<config>") {
    std::istringstream in(text);
    return parse(in, source);
  }

  /// This config with keys of `over` replacing ours; a list present in `over` replaces ours wholesale.
  Config overlay(const Config& over) const {
    Config out = *this;
    for (const auto& [k, v] : over.values_) out.values_[k] = v;
    for (const auto& [k, v] : over.lists_) out.lists_[k] = v;
    return out;
  }

  bool has(const std::string& key) const { return values_.contains(key) || lists_.contains(key); }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("missing required key '" + key + "'");
    return it->second;
  }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::int64_t get_int(const std::string& key) const { return to_int(key, get(key)); }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_seed() const {
    const std::string& text = get("seed");
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("seed must be a nonnegative integer, got '" + text + "'");
    }
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      throw UsageError("seed out of range: '" + text + "'");
    }
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = get(key);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size()) throw UsageError("key '" + key + "' expects a number, got '" + text + "'");
    return x;
  }

  std::vector<std::string> get_list(const std::string& key) const {
    auto it = lists_.find(key);
    return it == lists_.end() ? std::vector<std::string>{} : it->second;
  }

  /// Comma-separated value of a scalar key.
  std::vector<std::string> get_csv(const std::string& key) const { return split(get(key), ','); }
  std::vector<std::string> get_csv(const std::string& key, const std::string& fallback) const {
    return split(get(key, fallback), ',');
  }

  std::vector<std::int64_t> get_int_csv(const std::string& key, const std::string& fallback) const {
    std::vector<std::int64_t> out;
    for (const auto& item : get_csv(key, fallback)) out.push_back(to_int(key, item));
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::map<std::string, std::vector<std::string>>& lists() const { return lists_; }

  /// Rejects keys outside `allowed`.
  void require_known(const std::vector<std::string>& allowed) const {
    auto known = [&](const std::string& k) {
      return std::find(allowed.begin(), allowed.end(), k) != allowed.end();
    };
    for (const auto& [k, v] : values_)
      if (!known(k)) throw UsageError("unknown key '" + k + "'");
    for (const auto& [k, v] : lists_)
      if (!known(k)) throw UsageError("unknown key '" + k + "'");
  }

 private:
  static std::int64_t to_int(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    std::int64_t x = 0;
    try {
      x = std::stoll(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty()) {
      throw UsageError("key '" + key + "' expects an integer, got '" + text + "'");
    }
    return x;
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, std::vector<std::string>> lists_;
};

/// Exact weight from "a/b", an integer, or a decimal such as "0.25".
inline Rational parse_weight(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return parse_rational(text);
  const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const auto places = static_cast<unsigned>(text.size() - dot - 1);
  if (places == 0 || text.find('/') != std::string::npos) throw UsageError("malformed weight '" + text + "'");
  return parse_rational(digits) / Rational(boost::multiprecision::pow(BigInt(10), places));
}

}  // namespace grwalk::experiment
