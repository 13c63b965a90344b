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

#include "stackfuzz/expr.hpp"

#include <algorithm>
#include <cctype>

#include "stackfuzz/util.hpp"

namespace stackfuzz {

uint32_t VarTable::Intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  uint32_t slot = static_cast<uint32_t>(names_.size());
  names_.push_back(name);
  index_.emplace(name, slot);
  return slot;
}

namespace {

// Recursive-descent parser. Kept local; the public surface is ParseExpr.
class Parser {
 public:
  Parser(const std::string& text, VarTable& vars, const std::string& context)
      : text_(text), vars_(vars), context_(context) {}

  Expr Parse() {
    Expr expr;
    expr.text = text_;
    expr.root = ParseOr(expr);
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing input");
    return expr;
  }

 private:
  [[noreturn]] void Fail(const std::string& why) {
    throw DocumentError(context_ + ": " + why + " at offset " +
                        std::to_string(pos_) + " in \"" + text_ + "\"");
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Eat(std::string_view token) {
    SkipSpace();
    if (text_.compare(pos_, token.size(), token) == 0) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void Expect(std::string_view token) {
    if (!Eat(token)) Fail("expected '" + std::string(token) + "'");
  }

  char Peek() { SkipSpace(); return pos_ < text_.size() ? text_[pos_] : '\0'; }

  int32_t Node(Expr& e, ExprNode node) {
    e.nodes.push_back(std::move(node));
    return static_cast<int32_t>(e.nodes.size() - 1);
  }

  int32_t Binary(Expr& e, ExprOp op, int32_t lhs, int32_t rhs) {
    ExprNode n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return Node(e, std::move(n));
  }

  int32_t ParseOr(Expr& e) {
    int32_t lhs = ParseAnd(e);
    while (Eat("||")) lhs = Binary(e, ExprOp::kOr, lhs, ParseAnd(e));
    return lhs;
  }

  int32_t ParseAnd(Expr& e) {
    int32_t lhs = ParseCmp(e);
    while (Eat("&&")) lhs = Binary(e, ExprOp::kAnd, lhs, ParseCmp(e));
    return lhs;
  }

  int32_t ParseCmp(Expr& e) {
    int32_t lhs = ParseSum(e);
    if (Eat("==")) return Binary(e, ExprOp::kEq, lhs, ParseSum(e));
    if (Eat("!=")) return Binary(e, ExprOp::kNe, lhs, ParseSum(e));
    if (Eat("<=")) return Binary(e, ExprOp::kLe, lhs, ParseSum(e));
    if (Eat(">=")) return Binary(e, ExprOp::kLe, ParseSum(e), lhs);
    // Careful not to consume the '<' of '<='; Eat("<=") ran first.
    if (Eat("<")) return Binary(e, ExprOp::kLt, lhs, ParseSum(e));
    if (Eat(">")) return Binary(e, ExprOp::kLt, ParseSum(e), lhs);
    return lhs;
  }

  int32_t ParseSum(Expr& e) {
    int32_t lhs = ParseTerm(e);
    for (;;) {
      if (Eat("+")) {
        lhs = Binary(e, ExprOp::kAdd, lhs, ParseTerm(e));
      } else if (Eat("-")) {
        lhs = Binary(e, ExprOp::kSub, lhs, ParseTerm(e));
      } else {
        return lhs;
      }
    }
  }

  int32_t ParseTerm(Expr& e) {
    int32_t lhs = ParseUnary(e);
    while (Eat("*")) lhs = Binary(e, ExprOp::kMul, lhs, ParseUnary(e));
    return lhs;
  }

  int32_t ParseUnary(Expr& e) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == '!' &&
        (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '=')) {
      ++pos_;
      ExprNode n;
      n.op = ExprOp::kNot;
      n.lhs = ParseUnary(e);
      return Node(e, std::move(n));
    }
    if (Eat("-")) {
      ExprNode n;
      n.op = ExprOp::kNeg;
      n.lhs = ParseUnary(e);
      return Node(e, std::move(n));
    }
    return ParsePrimary(e);
  }

  int32_t ParsePrimary(Expr& e) {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      int32_t inner = ParseOr(e);
      Expect(")");
      return inner;
    }
    if (c == '\'') return ParseCharLiteral(e);
    if (std::isdigit(static_cast<unsigned char>(c))) return ParseIntLiteral(e);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return ParseIdentifier(e);
    }
    Fail("unexpected character");
  }

  int32_t ParseIntLiteral(Expr& e) {
    uint64_t value = 0;
    size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<uint64_t>(text_[pos_] - '0');
      if (pos_ - start > 19) Fail("integer literal too long");
      ++pos_;
    }
    ExprNode n;
    n.op = ExprOp::kLiteral;
    n.literal = static_cast<int64_t>(value);
    return Node(e, std::move(n));
  }

  int32_t ParseCharLiteral(Expr& e) {
    ++pos_;  // opening quote
    if (pos_ >= text_.size()) Fail("unterminated character literal");
    int64_t value;
    if (text_[pos_] == '\\') {
      ++pos_;
      if (pos_ >= text_.size()) Fail("unterminated escape");
      switch (text_[pos_]) {
        case '0': value = 0; break;
        case 'n': value = '\n'; break;
        case 't': value = '\t'; break;
        case '\\': value = '\\'; break;
        case '\'': value = '\''; break;
        default: Fail("unknown escape in character literal");
      }
      ++pos_;
    } else {
      value = static_cast<unsigned char>(text_[pos_]);
      ++pos_;
    }
    if (pos_ >= text_.size() || text_[pos_] != '\'') {
      Fail("unterminated character literal");
    }
    ++pos_;
    ExprNode n;
    n.op = ExprOp::kLiteral;
    n.literal = value;
    return Node(e, std::move(n));
  }

  std::string ParseStringLiteral() {
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '"') {
      Fail("expected string literal");
    }
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_];
      if (c == '\\') {
        ++pos_;
        if (pos_ >= text_.size()) Fail("unterminated escape");
        switch (text_[pos_]) {
          case '0': out.push_back('\0'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '\\': out.push_back('\\'); break;
          case '"': out.push_back('"'); break;
          default: Fail("unknown escape in string literal");
        }
      } else {
        out.push_back(c);
      }
      ++pos_;
    }
    if (pos_ >= text_.size()) Fail("unterminated string literal");
    ++pos_;  // closing quote
    return out;
  }

  int32_t ParseIdentifier(Expr& e) {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name = text_.substr(start, pos_ - start);
    if (name == "len") {
      ExprNode n;
      n.op = ExprOp::kInputLen;
      return Node(e, std::move(n));
    }
    if (name == "in") {
      Expect("[");
      int32_t idx = ParseOr(e);
      Expect("]");
      ExprNode n;
      n.op = ExprOp::kInputByte;
      n.lhs = idx;
      return Node(e, std::move(n));
    }
    if (name == "is_digit") {
      Expect("(");
      int32_t arg = ParseOr(e);
      Expect(")");
      ExprNode n;
      n.op = ExprOp::kIsDigit;
      n.lhs = arg;
      return Node(e, std::move(n));
    }
    if (name == "strlen") {
      Expect("(");
      int32_t arg = ParseOr(e);
      Expect(")");
      ExprNode n;
      n.op = ExprOp::kStrlenFrom;
      n.lhs = arg;
      return Node(e, std::move(n));
    }
    if (name == "strncmp") {
      Expect("(");
      int32_t arg = ParseOr(e);
      Expect(",");
      std::string lit = ParseStringLiteral();
      Expect(")");
      ExprNode n;
      n.op = ExprOp::kStrncmpLit;
      n.lhs = arg;
      n.str = std::move(lit);
      return Node(e, std::move(n));
    }
    ExprNode n;
    n.op = ExprOp::kVar;
    n.var_slot = vars_.Intern(name);
    return Node(e, std::move(n));
  }

  const std::string& text_;
  VarTable& vars_;
  const std::string& context_;
  size_t pos_ = 0;
};

// All arithmetic wraps in 64 bits; unsigned intermediates keep it defined.
int64_t Wrap(uint64_t v) { return static_cast<int64_t>(v); }

int64_t Eval(const Expr& e, int32_t idx, std::span<const uint8_t> input,
             std::span<const int64_t> locals) {
  const ExprNode& n = e.nodes[static_cast<size_t>(idx)];
  switch (n.op) {
    case ExprOp::kLiteral:
      return n.literal;
    case ExprOp::kVar:
      return n.var_slot < locals.size() ? locals[n.var_slot] : 0;
    case ExprOp::kInputByte: {
      int64_t i = Eval(e, n.lhs, input, locals);
      if (i < 0 || static_cast<uint64_t>(i) >= input.size()) return 0;
      return input[static_cast<size_t>(i)];
    }
    case ExprOp::kInputLen:
      return static_cast<int64_t>(input.size());
    case ExprOp::kAdd:
      return Wrap(static_cast<uint64_t>(Eval(e, n.lhs, input, locals)) +
                  static_cast<uint64_t>(Eval(e, n.rhs, input, locals)));
    case ExprOp::kSub:
      return Wrap(static_cast<uint64_t>(Eval(e, n.lhs, input, locals)) -
                  static_cast<uint64_t>(Eval(e, n.rhs, input, locals)));
    case ExprOp::kMul:
      return Wrap(static_cast<uint64_t>(Eval(e, n.lhs, input, locals)) *
                  static_cast<uint64_t>(Eval(e, n.rhs, input, locals)));
    case ExprOp::kLt:
      return Eval(e, n.lhs, input, locals) < Eval(e, n.rhs, input, locals);
    case ExprOp::kLe:
      return Eval(e, n.lhs, input, locals) <= Eval(e, n.rhs, input, locals);
    case ExprOp::kEq:
      return Eval(e, n.lhs, input, locals) == Eval(e, n.rhs, input, locals);
    case ExprOp::kNe:
      return Eval(e, n.lhs, input, locals) != Eval(e, n.rhs, input, locals);
    case ExprOp::kAnd:
      return Eval(e, n.lhs, input, locals) != 0 &&
             Eval(e, n.rhs, input, locals) != 0;
    case ExprOp::kOr:
      return Eval(e, n.lhs, input, locals) != 0 ||
             Eval(e, n.rhs, input, locals) != 0;
    case ExprOp::kNot:
      return Eval(e, n.lhs, input, locals) == 0;
    case ExprOp::kNeg:
      return Wrap(0 - static_cast<uint64_t>(Eval(e, n.lhs, input, locals)));
    case ExprOp::kIsDigit: {
      int64_t v = Eval(e, n.lhs, input, locals);
      return v >= '0' && v <= '9';
    }
    case ExprOp::kStrncmpLit: {
      int64_t start = Eval(e, n.lhs, input, locals);
      for (size_t k = 0; k < n.str.size(); ++k) {
        int64_t i = start + static_cast<int64_t>(k);
        int a = (i >= 0 && static_cast<uint64_t>(i) < input.size())
                    ? input[static_cast<size_t>(i)]
                    : 0;
        int b = static_cast<unsigned char>(n.str[k]);
        if (a != b) return a - b;
      }
      return 0;
    }
    case ExprOp::kStrlenFrom: {
      int64_t start = Eval(e, n.lhs, input, locals);
      int64_t count = 0;
      for (int64_t i = start;
           i >= 0 && static_cast<uint64_t>(i) < input.size() && input[i] != 0;
           ++i) {
        ++count;
      }
      return count;
    }
  }
  return 0;
}

void CollectUses(const Expr& e, int32_t idx, std::vector<uint32_t>& out) {
  if (idx < 0) return;
  const ExprNode& n = e.nodes[static_cast<size_t>(idx)];
  if (n.op == ExprOp::kVar) out.push_back(n.var_slot);
  CollectUses(e, n.lhs, out);
  CollectUses(e, n.rhs, out);
}

}  // namespace

Expr ParseExpr(const std::string& text, VarTable& vars,
               const std::string& context) {
  return Parser(text, vars, context).Parse();
}

int64_t EvalExpr(const Expr& expr, std::span<const uint8_t> input,
                 std::span<const int64_t> locals) {
  return Eval(expr, expr.root, input, locals);
}

std::vector<uint32_t> ExprUses(const Expr& expr) {
  std::vector<uint32_t> out;
  if (!expr.empty()) CollectUses(expr, expr.root, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace stackfuzz
