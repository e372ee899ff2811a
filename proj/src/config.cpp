//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ddigraph/error.hpp"

namespace ddigraph {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty())
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(line_no) + ": empty key");
    cfg.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Config::to_string() const {
  std::string out;
  for (const auto &[k, v]: entries_)
    out += k + "=" + v + "\n";
  return out;
}

void Config::set(const std::string &key, std::string value) {
  entries_[key] = std::move(value);
}

bool Config::contains(const std::string &key) const {
  return entries_.contains(key);
}

std::optional<std::string> Config::find(const std::string &key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string &key,
                               const std::string &fallback) const {
  return find(key).value_or(fallback);
}

long Config::get_int(const std::string &key, long fallback) const {
  const auto v = find(key);
  if (!v)
    return fallback;
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw Error(ErrorCode::kInvalidConfig,
                key + ": expected an integer, got '" + *v + "'");
  return out;
}

double Config::get_double(const std::string &key, double fallback) const {
  const auto v = find(key);
  if (!v)
    return fallback;
  double out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw Error(ErrorCode::kInvalidConfig,
                key + ": expected a number, got '" + *v + "'");
  return out;
}

void Config::merge(const Config &other) {
  for (const auto &[k, v]: other.entries_)
    entries_[k] = v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace ddigraph
