// Copyright 2026 The Stackfuzz Authors.
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
//
// Expression language used inside benchmark documents. A small, total,
// deterministic C-like language over the fuzzed input and function-local
// variables:
//
//   expr    := or
//   or      := and ("||" and)*
//   and     := cmp ("&&" cmp)*
//   cmp     := sum (("=="|"!="|"<="|"<") sum)?
//   sum     := term (("+"|"-") term)*
//   term    := unary ("*" unary)*
//   unary   := ("!"|"-") unary | primary
//   primary := integer | 'c' | identifier | "len" | "in" "[" expr "]"
//            | "is_digit" "(" expr ")" | "strlen" "(" expr ")"
//            | "strncmp" "(" expr "," string ")" | "(" expr ")"
//
// Semantics: 64-bit two's-complement wraparound arithmetic; comparisons and
// logical operators yield 0/1 with short-circuit evaluation; in[i] reads the
// input byte at i and yields 0 out of range; len is the input length;
// variables read their current value (0 before first assignment);
// is_digit(v) tests 48 <= v <= 57; strncmp(i, "lit") compares input bytes
// from i against the literal, returning the first byte difference or 0;
// strlen(i) counts consecutive nonzero input bytes starting at i. Every
// expression evaluates on every input: there are no error states.

#ifndef STACKFUZZ_EXPR_HPP_
#define STACKFUZZ_EXPR_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace stackfuzz {

// Function-scoped variable slots. Params are interned first, in order.
class VarTable {
 public:
  uint32_t Intern(const std::string& name);
  const std::string& Name(uint32_t slot) const { return names_[slot]; }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, uint32_t> index_;
};

enum class ExprOp : uint8_t {
  kLiteral,
  kVar,
  kInputByte,
  kInputLen,
  kAdd,
  kSub,
  kMul,
  kLt,
  kLe,
  kEq,
  kNe,
  kAnd,
  kOr,
  kNot,
  kNeg,
  kIsDigit,
  kStrncmpLit,
  kStrlenFrom,
};

struct ExprNode {
  ExprOp op;
  int64_t literal = 0;      // kLiteral
  uint32_t var_slot = 0;    // kVar
  int32_t lhs = -1;         // child indices into Expr::nodes
  int32_t rhs = -1;
  std::string str;          // kStrncmpLit comparison literal
};

// Flattened expression tree. `text` keeps the source form for rendering.
struct Expr {
  std::vector<ExprNode> nodes;
  int32_t root = -1;
  std::string text;

  bool empty() const { return root < 0; }
};

// Parses `text`, interning variable names into `vars`. Throws DocumentError
// (message carries `context`) on syntax errors.
Expr ParseExpr(const std::string& text, VarTable& vars,
               const std::string& context);

int64_t EvalExpr(const Expr& expr, std::span<const uint8_t> input,
                 std::span<const int64_t> locals);

// Variable slots read by the expression (sorted, unique).
std::vector<uint32_t> ExprUses(const Expr& expr);

}  // namespace stackfuzz

#endif  // STACKFUZZ_EXPR_HPP_
