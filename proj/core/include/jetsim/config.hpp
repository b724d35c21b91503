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

#ifndef JETSIM_CONFIG_HPP
#define JETSIM_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetsim::cfg {

/// Schema or parse problem; the message carries file/line/field context.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat hierarchical key-value configuration:
///
///   # comment
///   include shared/base.cfg
///   plant.kind = quad_roll
///   run.delays = 0, 5, 10
///
/// Keys are dotted paths; `include` pulls in another file relative to the
/// including file (later assignments win). Full syntax in
/// docs/config_format.md.
class Config {
 public:
  Config() = default;

  static Config load(const std::filesystem::path& path);
  static Config from_text(const std::string& text,
                          const std::filesystem::path& include_dir = ".");

  /// Applies a `key=value` command-line override.
  void apply_override(const std::string& key_eq_value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  /// Verifies every key matches one of the allowed names; a trailing
  /// ".*" in an allowed name matches any suffix. Throws ConfigError with
  /// the offending key and its source location.
  void check_known_keys(std::span<const std::string_view> allowed) const;

  /// All keys in deterministic (lexicographic) order.
  std::vector<std::string> keys() const;

 private:
  struct Entry {
    std::string value;
    std::string source;  // "file:line" or "override"
  };
  void parse_stream(std::istream& is, const std::filesystem::path& dir,
                    const std::string& name,
                    std::vector<std::filesystem::path>& stack);

  std::map<std::string, Entry> entries_;
};

}  // namespace jetsim::cfg

#endif  // JETSIM_CONFIG_HPP
