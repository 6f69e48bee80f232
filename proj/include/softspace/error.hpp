// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_ERROR_HPP
#define SOFTSPACE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softspace {

enum class ErrorCode {
  InvalidArgument,
  Io,
  MalformedRecord,
  InvalidMatrix,
  UnknownModule,
  EmptySpace,
  DegenerateVariance,
  EmptyWeights,
  NonpositiveM,
  TooFewZones,
  ZeroVariance,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every exception thrown by the library. The code is what the C
/// layer turns into a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by strict log parsing; carries the 1-based line number.
class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : Error(ErrorCode::MalformedRecord,
              "malformed record at line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace softspace

#endif  // SOFTSPACE_ERROR_HPP
