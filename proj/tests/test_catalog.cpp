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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "instrujoule/catalog.hpp"
#include "instrujoule/error.hpp"

namespace instrujoule {
namespace {

bool has_entry(std::string_view opcode, OperandType type, Category category) {
  const auto all = list_catalog();
  return std::any_of(all.begin(), all.end(), [&](const InstructionSpec& s) {
    return s.opcode == opcode && s.operand_type == type && s.category == category;
  });
}

TEST(Catalog, ContainsUnsignedDiv) {
  EXPECT_TRUE(has_entry("div", OperandType::u32, Category::IntegerArithmetic));
  const auto& spec = find_instruction("div.u32");
  EXPECT_EQ(spec.signedness, "{u}");
  EXPECT_EQ(spec.table_row, "{u} div");
}

TEST(Catalog, ContainsRsqrt) { EXPECT_TRUE(has_entry("rsqrt", OperandType::f32, Category::SpecialMath)); }

TEST(Catalog, HalfPrecisionIsNotSupportedOnMaxwell) {
  bool any_half = false;
  for (const auto& s : list_catalog()) {
    if (s.operand_type != OperandType::f16) continue;
    any_half = true;
    EXPECT_FALSE(supported_on(s, Generation::Maxwell)) << s.mnemonic();
    EXPECT_TRUE(supported_on(s, Generation::Pascal)) << s.mnemonic();
    EXPECT_TRUE(supported_on(s, Generation::Turing)) << s.mnemonic();
  }
  EXPECT_TRUE(any_half);
  EXPECT_TRUE(supported_on(find_instruction("div.u32"), Generation::Maxwell));
}

TEST(Catalog, CoversAllEightCategoriesInTableOrder) {
  const auto all = list_catalog();
  std::set<Category> seen;
  int last = 0;
  for (const auto& s : all) {
    seen.insert(s.category);
    EXPECT_GE(category_number(s.category), last) << s.mnemonic();
    last = category_number(s.category);
  }
  EXPECT_EQ(seen.size(), kAllCategories.size());
}

TEST(Catalog, EveryEntryIsConsistent) {
  for (const auto& s : list_catalog()) {
    EXPECT_TRUE(is_consistent(s)) << s.mnemonic();
    EXPECT_TRUE(in_catalog(s)) << s.mnemonic();
    EXPECT_GE(s.arity, 1);
    EXPECT_LE(s.arity, 3);
    EXPECT_FALSE(s.table_row.empty());
  }
}

TEST(Catalog, InconsistentSpecIsDetected) {
  auto s = find_instruction("add.f16");
  s.operand_type = OperandType::f32;
  EXPECT_FALSE(is_consistent(s));
  auto d = find_instruction("div.rn.f64");
  d.category = Category::FloatSingle;
  EXPECT_FALSE(is_consistent(d));
}

TEST(Catalog, MnemonicsAreUnique) {
  std::set<std::string> names;
  for (const auto& s : list_catalog()) EXPECT_TRUE(names.insert(s.mnemonic()).second) << s.mnemonic();
}

TEST(Catalog, OrderIsStableAcrossCalls) {
  const auto a = list_catalog();
  const auto b = list_catalog();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Catalog, FindByFullMnemonic) {
  EXPECT_EQ(find_instruction("mul.lo.u32").opcode, "mul");
  EXPECT_EQ(find_instruction("sqrt.approx.f32").table_row, "approx.sqrt");
  EXPECT_EQ(find_instruction("mad.lo.cc.u32").category, Category::MultiPrecision);
}

TEST(Catalog, FindByUnambiguousShortKey) {
  EXPECT_EQ(find_instruction("rsqrt.f32").mnemonic(), "rsqrt.approx.f32");
  EXPECT_EQ(find_instruction("popc.b32").mnemonic(), "popc.b32");
}

TEST(Catalog, AmbiguousOrUnknownKeysAreRejected) {
  // sqrt.rn.f32 and sqrt.approx.f32 share the short key.
  for (const char* key : {"sqrt.f32", "frobnicate.u32", "", "div"}) {
    try {
      find_instruction(key);
      ADD_FAILURE() << "expected UnsupportedInstruction for '" << key << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedInstruction) << key;
    }
  }
}

TEST(Catalog, EnumNamesRoundTrip) {
  for (auto g : kAllGenerations) EXPECT_EQ(parse_generation(to_string(g)), g);
  for (auto t : {OperandType::u16, OperandType::u32, OperandType::u64, OperandType::s32,
                 OperandType::f16, OperandType::f32, OperandType::f64}) {
    EXPECT_EQ(parse_operand_type(to_string(t)), t);
  }
  EXPECT_FALSE(parse_generation("Kepler").has_value());
  EXPECT_FALSE(parse_operand_type("f128").has_value());
  EXPECT_EQ(to_string(Category::SpecialMath), "Special Mathematical");
  EXPECT_EQ(category_number(Category::IntegerArithmetic), 1);
  EXPECT_EQ(category_number(Category::IntegerIntrinsic), 8);
}

}  // namespace
}  // namespace instrujoule
