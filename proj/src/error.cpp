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

#include "instrujoule/error.hpp"

namespace instrujoule {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnsupportedInstruction: return "UnsupportedInstruction";
    case ErrorKind::ParseFailure: return "ParseFailure";
    case ErrorKind::MalformedTrace: return "MalformedTrace";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::ProviderExhausted: return "ProviderExhausted";
    case ErrorKind::SensorUnavailable: return "SensorUnavailable";
    case ErrorKind::SamplerStartupFailure: return "SamplerStartupFailure";
    case ErrorKind::NegativeNet: return "NegativeNet";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::InvalidWindow: return "InvalidWindow";
    case ErrorKind::ZeroInstructions: return "ZeroInstructions";
    case ErrorKind::MalformedCapture: return "MalformedCapture";
    case ErrorKind::MissingShunt: return "MissingShunt";
    case ErrorKind::ZeroReference: return "ZeroReference";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::FixtureCorrupt: return "FixtureCorrupt";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::string Error::describe() const {
  std::string out(error_name(kind_));
  out += ": ";
  if (line_ != 0) {
    out += "line " + std::to_string(line_) + ": ";
  }
  out += what();
  return out;
}

}  // namespace instrujoule
