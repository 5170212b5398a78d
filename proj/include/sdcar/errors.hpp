/*
 * Copyright 2026 The sdcar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdcar {

/// One violated invariant together with the measured residual.
struct Violation {
  std::string invariant;
  double residual = 0.0;
  double tolerance = 0.0;
};

using ValidationReport = std::vector<Violation>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes do not fit together (wrong matrix size, vector length, odd order...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value was structurally fine but broke one of its defining identities.
class InvariantError : public Error {
 public:
  InvariantError(const std::string& what, ValidationReport report)
      : Error(what), report_(std::move(report)) {}
  explicit InvariantError(const std::string& what) : Error(what) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Hamiltonian has a spectral value inside the zero-mode window.
class ZeroModeError : public Error {
 public:
  ZeroModeError(const std::string& what, double smallest)
      : Error(what), smallest_(smallest) {}

  double smallest_eigenvalue() const noexcept { return smallest_; }

 private:
  double smallest_;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Internal cross-checks disagree: a rewriting, a quotient or a normalization
/// produced something the algebra forbids.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline std::string describe(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report) {
    if (!out.empty()) out += "; ";
    out += v.invariant + " (residual " + std::to_string(v.residual) + ")";
  }
  return out;
}

}  // namespace sdcar
