/*
 * Copyright 2026 The instrujoule Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace instrujoule {

enum class ErrorKind {
  UnsupportedInstruction,
  ParseFailure,
  MalformedTrace,
  InvalidModel,
  ProviderExhausted,
  SensorUnavailable,
  SamplerStartupFailure,
  NegativeNet,
  EmptyWindow,
  InvalidWindow,
  ZeroInstructions,
  MalformedCapture,
  MissingShunt,
  ZeroReference,
  LengthMismatch,
  FixtureCorrupt,
  InvalidArgument,
  Io,
};

std::string_view error_name(ErrorKind kind) noexcept;

/// Domain error raised by every module. `what()` carries the message only;
/// `describe()` prefixes the kind name and, for file formats, the 1-based
/// line number the problem was found on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

  std::string describe() const;

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace instrujoule
