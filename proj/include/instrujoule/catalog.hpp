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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace instrujoule {

enum class OperandType { u16, u32, u64, s32, f16, f32, f64 };

/// Instruction groups, in the order the results table lists them.
enum class Category {
  IntegerArithmetic,
  LogicShift,
  FloatSingle,
  Double,
  Half,
  MultiPrecision,
  SpecialMath,
  IntegerIntrinsic,
};

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::IntegerArithmetic, Category::LogicShift, Category::FloatSingle,
    Category::Double,            Category::Half,       Category::MultiPrecision,
    Category::SpecialMath,       Category::IntegerIntrinsic,
};

enum class Generation { Maxwell, Pascal, Volta, Turing };

inline constexpr std::array<Generation, 4> kAllGenerations = {
    Generation::Maxwell, Generation::Pascal, Generation::Volta, Generation::Turing};

std::string_view to_string(OperandType type) noexcept;
std::string_view to_string(Category category) noexcept;
std::string_view to_string(Generation generation) noexcept;

std::optional<OperandType> parse_operand_type(std::string_view text) noexcept;
std::optional<Generation> parse_generation(std::string_view text) noexcept;

/// 1-based position of the category's banner in the results table.
int category_number(Category category) noexcept;

/// One instruction the toolkit can benchmark.
///
/// `opcode` is the bare PTX operation ("div", "mad"), `modifiers` the
/// qualifiers between opcode and type (".lo", ".rn", ".approx", ".cc"), and
/// `type_suffix` the PTX type qualifier actually emitted, which differs from
/// the operand type for bit operations (`and.b32` works on u32 data).
struct InstructionSpec {
  std::string opcode;
  std::string modifiers;
  OperandType operand_type = OperandType::u32;
  std::string type_suffix;
  Category category = Category::IntegerArithmetic;
  int arity = 2;
  bool needs_predicate = false;
  std::string signedness;  // "{s}", "{u}" or empty
  std::string table_row;   // results-table row this instruction belongs to

  /// Full PTX mnemonic, e.g. "div.u32", "mul.lo.u32", "sqrt.approx.f32".
  std::string mnemonic() const;

  /// Short lookup key "opcode.type", e.g. "div.u32".
  std::string short_key() const;

  friend bool operator==(const InstructionSpec&, const InstructionSpec&) = default;
};

/// Category and operand type agree (Half implies f16, Double implies f64, ...).
bool is_consistent(const InstructionSpec& spec) noexcept;

/// FP16 instructions need Pascal or newer.
bool supported_on(const InstructionSpec& spec, Generation generation) noexcept;

/// Every benchmarkable instruction, in results-table order (category, then row).
std::span<const InstructionSpec> list_catalog();

bool in_catalog(const InstructionSpec& spec);

/// Resolves a full mnemonic ("mul.lo.u32") or an unambiguous short key
/// ("div.u32"). Throws Error(UnsupportedInstruction) otherwise.
const InstructionSpec& find_instruction(std::string_view key);

}  // namespace instrujoule
