// Copyright 2026 The mvgcn Authors.
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

namespace mvgcn {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: shape mismatches, out-of-range indices, invalid configs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Configuration file or flag problems (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input files. The message carries file and line.
class IoError : public Error {
 public:
  enum class Kind {
    kUnreadable,
    kMissingFile,
    kMalformed,
    kOutOfRange,
    kRaggedRow,
  };

  IoError(const std::string& file, std::size_t line, const std::string& what,
          Kind kind = Kind::kMalformed)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line),
        kind_(kind) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  Kind kind() const { return kind_; }

 private:
  std::string file_;
  std::size_t line_;
  Kind kind_;
};

/// Numerical failure (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver did not reach tolerance within the iteration cap.
class EigenSolverError : public NumericalError {
 public:
  EigenSolverError(const std::string& what, int iterations, double max_residual,
                   int converged, int requested)
      : NumericalError(what + " (iterations=" + std::to_string(iterations) +
                       ", max_residual=" + std::to_string(max_residual) +
                       ", converged=" + std::to_string(converged) + "/" +
                       std::to_string(requested) + ")"),
        iterations_(iterations),
        max_residual_(max_residual),
        converged_(converged),
        requested_(requested) {}

  int iterations() const { return iterations_; }
  double max_residual() const { return max_residual_; }
  int converged() const { return converged_; }
  int requested() const { return requested_; }

 private:
  int iterations_;
  double max_residual_;
  int converged_;
  int requested_;
};

/// Linear system too ill-conditioned to solve reliably.
class ConditioningError : public NumericalError {
 public:
  ConditioningError(const std::string& what, double condition_estimate)
      : NumericalError(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace mvgcn
