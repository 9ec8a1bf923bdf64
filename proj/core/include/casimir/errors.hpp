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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace casimir {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the regime where an approximation is valid.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// Sphere-plate configuration outside the proximity regime.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number (0 if not tied to a
/// line) and, once known, the file name: "file:line: message".
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::string file = {})
      : Error(format(message, line, file)),
        message_(std::move(message)),
        file_(std::move(file)),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& file() const noexcept { return file_; }
  const std::string& message() const noexcept { return message_; }
  ParseError with_file(std::string file) const { return ParseError(message_, line_, std::move(file)); }

 private:
  static std::string format(const std::string& m, std::size_t line, const std::string& file) {
    std::string out = file;
    if (line) out += (out.empty() ? "line " : ":") + std::to_string(line);
    return out.empty() ? m : out + ": " + m;
  }
  std::string message_;
  std::string file_;
  std::size_t line_;
};

/// Iterative numerics that did not reach tolerance. Keeps the last estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Insufficient or inconsistent data for an analysis step.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A fit whose minimum is unusable (bracket edge, multimodal, sanity cap).
class FitError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class SegmentationError : public Error {
 public:
  using Error::Error;
};

/// Operation applied to an object in the wrong state (e.g. converting a curve twice).
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimir
