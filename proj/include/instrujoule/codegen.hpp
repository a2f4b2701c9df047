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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "instrujoule/catalog.hpp"

namespace instrujoule {

enum class KernelVariant { Total, Overhead };

std::string_view to_string(KernelVariant variant) noexcept;

inline constexpr std::uint64_t kDefaultIterations = 1'000'000;
inline constexpr std::uint32_t kDefaultUnroll = 5;

/// A generated PTX microbenchmark.
///
/// `entry_name` is the `.entry` symbol and is shared by the Total and
/// Overhead builds of the same instruction, so the host stub can swap one
/// image for the other. `artifact_name` is unique per variant and names the
/// files produced when building it.
struct BenchmarkKernel {
  std::string ptx_text;
  InstructionSpec spec;
  KernelVariant variant = KernelVariant::Total;
  std::uint64_t iterations = kDefaultIterations;
  std::uint32_t unroll_factor = kDefaultUnroll;
  std::string entry_name;
  std::string artifact_name;
  std::uint64_t n_instructions = 0;
};

/// Emits the loop microbenchmark for `spec`: counter initialised to
/// `iterations`, `unroll_factor` chained copies of the instruction (Total
/// only), a load-add-store of the chain result, a predicated back-branch and
/// a final store.
///
/// Throws UnsupportedInstruction when `spec` is not a catalog entry and
/// InvalidArgument when iterations or unroll_factor are zero or iterations
/// does not fit the 32-bit loop counter.
BenchmarkKernel generate_kernel(const InstructionSpec& spec, KernelVariant variant,
                                std::uint64_t iterations = kDefaultIterations,
                                std::uint32_t unroll_factor = kDefaultUnroll);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_pass() const noexcept;
  const ValidationCheck* find(std::string_view name) const noexcept;
};

// Check names used in ValidationReport.
inline constexpr std::string_view kCheckOpcodeCount = "opcode_count";
inline constexpr std::string_view kCheckDependencyChain = "dependency_chain";
inline constexpr std::string_view kCheckLoopBound = "loop_bound";
inline constexpr std::string_view kCheckLoadAddStore = "load_add_store";
inline constexpr std::string_view kCheckFinalStore = "final_store";

/// Structural check of `kernel.ptx_text` against the kernel's own metadata.
/// Throws ParseFailure when the text is not recognisable line by line.
ValidationReport validate_kernel(const BenchmarkKernel& kernel);

/// Human-readable ptxas -> cubin -> fatbinary -> host link steps.
std::string emit_build_recipe(const BenchmarkKernel& kernel);

}  // namespace instrujoule
