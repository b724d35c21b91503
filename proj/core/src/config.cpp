// Copyright 2026 The jetsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jetsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace jetsim::cfg {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream is(value);
  while (std::getline(is, current, ',')) {
    const std::string t = trim(current);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

double parse_double(const std::string& v, const std::string& key,
                    const std::string& source) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config " + source + ": field '" + key +
                      "': expected a number, got '" + v + "'");
  }
  if (trim(v.substr(pos)) != "")
    throw ConfigError("config " + source + ": field '" + key +
                      "': trailing characters in '" + v + "'");
  return out;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  Config c;
  std::vector<std::filesystem::path> stack;
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  stack.push_back(std::filesystem::weakly_canonical(path));
  c.parse_stream(is, path.parent_path(), path.string(), stack);
  return c;
}

Config Config::from_text(const std::string& text,
                         const std::filesystem::path& include_dir) {
  Config c;
  std::vector<std::filesystem::path> stack;
  std::istringstream is(text);
  c.parse_stream(is, include_dir, "<text>", stack);
  return c;
}

void Config::parse_stream(std::istream& is, const std::filesystem::path& dir,
                          const std::string& name,
                          std::vector<std::filesystem::path>& stack) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string loc = name + ":" + std::to_string(lineno);

    if (t.rfind("include ", 0) == 0 || t.rfind("include\t", 0) == 0) {
      const std::filesystem::path inc = dir / trim(t.substr(8));
      const auto canonical = std::filesystem::weakly_canonical(inc);
      if (std::find(stack.begin(), stack.end(), canonical) != stack.end())
        throw ConfigError("config " + loc + ": include cycle at " +
                          inc.string());
      std::ifstream sub(inc);
      if (!sub)
        throw ConfigError("config " + loc + ": cannot open include " +
                          inc.string());
      stack.push_back(canonical);
      parse_stream(sub, inc.parent_path(), inc.string(), stack);
      stack.pop_back();
      continue;
    }

    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config " + loc + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError("config " + loc + ": empty key");
    entries_[key] = Entry{trim(t.substr(eq + 1)), loc};
  }
}

void Config::apply_override(const std::string& key_eq_value) {
  const auto eq = key_eq_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + key_eq_value +
                      "': expected key=value");
  entries_[trim(key_eq_value.substr(0, eq))] =
      Entry{trim(key_eq_value.substr(eq + 1)), "override"};
}

bool Config::has(const std::string& key) const { return entries_.count(key); }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

std::string Config::require_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError("config: missing required field '" + key + "'");
  return it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return parse_double(it->second.value, key, it->second.source);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const double v = parse_double(it->second.value, key, it->second.source);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config " + it->second.source + ": field '" + key +
                      "': expected an integer");
  return i;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second.value;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config " + it->second.source + ": field '" + key +
                    "': expected a boolean");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  std::vector<double> out;
  for (const auto& item : split_list(it->second.value))
    out.push_back(parse_double(item, key, it->second.source));
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  return split_list(it->second.value);
}

void Config::check_known_keys(
    std::span<const std::string_view> allowed) const {
  for (const auto& [key, entry] : entries_) {
    bool ok = false;
    for (const auto& pattern : allowed) {
      if (pattern.size() >= 2 && pattern.substr(pattern.size() - 2) == ".*") {
        const auto prefix = pattern.substr(0, pattern.size() - 1);  // keep dot
        if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) {
          ok = true;
          break;
        }
      } else if (key == pattern) {
        ok = true;
        break;
      }
    }
    if (!ok)
      throw ConfigError("config " + entry.source + ": unknown field '" + key +
                        "'");
  }
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.push_back(key);
  return out;
}

}  // namespace jetsim::cfg
