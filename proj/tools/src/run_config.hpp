// Copyright 2026 The casimir-twin Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "casimir/analysis.hpp"
#include "casimir/synth.hpp"

namespace casimir::cli {

/// Plain-text `key=value` run configuration. Every key has a default; files
/// and flags may only override known keys.
class RunConfig {
 public:
  RunConfig();

  /// Overrides from a config stream; `#` starts a comment. Unknown keys and
  /// malformed lines throw ParseError naming `source` and the line.
  void merge(std::istream& in, const std::string& source);
  void merge_file(const std::string& path);
  void set(const std::string& key, const std::string& value, const std::string& origin = "flag");

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;

  /// FNV-1a 64 over "key=value\n" in key order.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  TheoryParams theory_params() const;
  TheoryCurve::Range theory_range() const;
  unsigned threads() const;
  AnalysisConfig analysis_config() const;
  CalibrationParams calibration_params() const;
  ElectrostaticConfig electrostatic_config() const;
  SynthTruth synth_truth() const;

 private:
  [[noreturn]] void bad_value(const std::string& key, const std::string& why) const;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> origin_;
};

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

}  // namespace casimir::cli
