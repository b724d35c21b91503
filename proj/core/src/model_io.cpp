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

#include "jetsim/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace jetsim::lti {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_coeffs(const std::vector<double>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ' ';
    out += format_double(c[i]);
  }
  return out;
}

std::vector<double> parse_coeffs(const std::string& s, const char* field) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (out.empty() || !is.eof()) {
    is.clear();
    std::string rest;
    is >> rest;
    if (!rest.empty() || out.empty())
      throw std::invalid_argument(std::string("model file: bad value for ") +
                                  field);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string to_model_text(const DelayedTransferFunction& tf) {
  std::ostringstream os;
  os << "format = tfm-1\n";
  os << "numerator = " << format_coeffs(tf.numerator()) << "\n";
  os << "denominator = " << format_coeffs(tf.denominator()) << "\n";
  os << "delay_samples = " << tf.delay_samples() << "\n";
  os << "sample_time = " << format_double(tf.sample_time()) << "\n";
  return os.str();
}

DelayedTransferFunction from_model_text(const std::string& text) {
  std::istringstream is(text);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("model file: line " + std::to_string(lineno) +
                                  ": expected key = value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  for (const char* key :
       {"format", "numerator", "denominator", "delay_samples", "sample_time"})
    if (!kv.count(key))
      throw std::invalid_argument(std::string("model file: missing field ") +
                                  key);
  if (kv["format"] != "tfm-1")
    throw std::invalid_argument("model file: unsupported format " +
                                kv["format"]);
  return DelayedTransferFunction(
      parse_coeffs(kv["numerator"], "numerator"),
      parse_coeffs(kv["denominator"], "denominator"),
      std::stoi(kv["delay_samples"]), std::stod(kv["sample_time"]));
}

void write_model_file(const std::filesystem::path& path,
                      const DelayedTransferFunction& tf) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << to_model_text(tf);
}

DelayedTransferFunction read_model_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_model_text(buf.str());
}

}  // namespace jetsim::lti
