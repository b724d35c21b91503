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

#ifndef JETSIM_MODEL_IO_HPP
#define JETSIM_MODEL_IO_HPP

#include <filesystem>
#include <string>

#include "jetsim/lti.hpp"

namespace jetsim::lti {

// Plain-text key-value model file, schema in docs/model_format.md:
//   format = tfm-1
//   numerator = <coefficients, descending powers of z>
//   denominator = <coefficients, descending powers of z>
//   delay_samples = <int>
//   sample_time = <seconds>

std::string to_model_text(const DelayedTransferFunction& tf);
DelayedTransferFunction from_model_text(const std::string& text);

void write_model_file(const std::filesystem::path& path,
                      const DelayedTransferFunction& tf);
DelayedTransferFunction read_model_file(const std::filesystem::path& path);

}  // namespace jetsim::lti

#endif  // JETSIM_MODEL_IO_HPP
