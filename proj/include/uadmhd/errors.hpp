// Copyright 2026 The uadmhd Authors.
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

#ifndef UADMHD_ERRORS_HPP_
#define UADMHD_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uadmhd {

/// Failure categories. Each maps 1:1 onto a C API status code.
enum class ErrorKind {
  kDimension,
  kParameter,
  kNumeric,
  kInsufficientSamples,
  kUndefinedMetric,
  kFormat,
  kIo,
  kGeneration,
  kReconstruction,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::kDimension, what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorKind::kParameter, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

class InsufficientSamplesError : public Error {
 public:
  explicit InsufficientSamplesError(const std::string& what)
      : Error(ErrorKind::kInsufficientSamples, what) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& what)
      : Error(ErrorKind::kUndefinedMetric, what) {}
};

/// Malformed VOLB input. `offset()` is the byte at which decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(ErrorKind::kFormat,
              what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& what)
      : Error(ErrorKind::kGeneration, what) {}
};

/// A reconstructor call failed inside stack sampling.
class ReconstructionError : public Error {
 public:
  ReconstructionError(std::size_t index, const std::string& what)
      : Error(ErrorKind::kReconstruction,
              "reconstruction " + std::to_string(index) + " failed: " + what),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace uadmhd

#endif  // UADMHD_ERRORS_HPP_
