//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_CONFIG_HPP_
#define DDIGRAPH_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ddigraph {

// Flat key=value settings. Text form: one `key=value` per line, `#` starts a
// comment, surrounding whitespace is trimmed. Keys are written sorted.
class Config {
public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path &path);

  std::string to_string() const;

  void set(const std::string &key, std::string value);
  bool contains(const std::string &key) const;
  std::optional<std::string> find(const std::string &key) const;

  std::string get_string(const std::string &key,
                         const std::string &fallback) const;
  long get_int(const std::string &key, long fallback) const;
  double get_double(const std::string &key, double fallback) const;

  // Entries of `other` replace ours.
  void merge(const Config &other);

  const std::map<std::string, std::string> &entries() const {
    return entries_;
  }
  bool operator==(const Config &) const = default;

private:
  std::map<std::string, std::string> entries_;
};

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

}  // namespace ddigraph

#endif  // DDIGRAPH_CONFIG_HPP_
