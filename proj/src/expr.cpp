// Copyright 2026 The rivalkit Authors.
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

#include "rivalkit/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace rivalkit {

namespace {

ExprPtr make(auto node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }

// Decimal exponents beyond this are rejected rather than expanded.
constexpr long kMaxDecimalExponent = 100000;

std::string rational_text(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<mpq_class> parse_hex(const std::string& s) {
  // [sign] 0x hexdigits [. hexdigits] [p [sign] digits]
  size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  if (s.compare(i, 2, "0x") != 0 && s.compare(i, 2, "0X") != 0) return std::nullopt;
  i += 2;
  mpz_class mant = 0;
  long shift = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' && !dot) {
      dot = true;
      continue;
    }
    if (!std::isxdigit(static_cast<unsigned char>(c))) break;
    int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : std::tolower(c) - 'a' + 10;
    mant = mant * 16 + d;
    if (dot) shift -= 4;
    digits = true;
  }
  if (!digits) return std::nullopt;
  if (i < s.size()) {
    if (s[i] != 'p' && s[i] != 'P') return std::nullopt;
    ++i;
    size_t used = 0;
    long e;
    try {
      e = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (i + used != s.size() || std::labs(e) > kMaxDecimalExponent * 4) return std::nullopt;
    shift += e;
  }
  mpq_class q(mant);
  if (shift >= 0) {
    mpz_class m;
    mpz_mul_2exp(m.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    q = m;
  } else {
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(-shift));
    q = mpq_class(mant, d);
    q.canonicalize();
  }
  if (negative) q = -q;
  return q;
}

std::optional<mpq_class> parse_decimal(const std::string& s) {
  size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' && !dot) {
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) break;
    digits.push_back(c);
    if (dot) --scale;
  }
  if (digits.empty()) return std::nullopt;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return std::nullopt;
    ++i;
    size_t used = 0;
    long e;
    try {
      e = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (i + used != s.size() || std::labs(e) > kMaxDecimalExponent) return std::nullopt;
    scale += e;
  }
  mpz_class mant(digits, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  mpq_class q = scale >= 0 ? mpq_class(mant * p) : mpq_class(mant, p);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

}  // namespace

std::optional<mpq_class> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (auto h = parse_hex(text)) return h;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto is_int = [](const std::string& t, bool allow_sign) {
      size_t k = (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      if (k == t.size()) return false;
      return std::all_of(t.begin() + static_cast<long>(k), t.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    std::string n = text.substr(0, slash), d = text.substr(slash + 1);
    if (!is_int(n, true) || !is_int(d, false)) return std::nullopt;
    mpz_class den(d, 10);
    if (den == 0) return std::nullopt;
    mpq_class q(mpz_class(n[0] == '+' ? n.substr(1) : n, 10), den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

ExprPtr num(const std::string& text) {
  auto q = parse_rational(text);
  if (!q) throw std::invalid_argument("not a number: " + text);
  return make(NumLiteral{text, *q});
}

ExprPtr num(const mpq_class& value) { return make(NumLiteral{rational_text(value), value}); }

ExprPtr num(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite literal");
  mpq_class q(value);
  return make(NumLiteral{rational_text(q), q});
}

ExprPtr constant(Constant c) { return make(ConstRef{c}); }
ExprPtr boolean(bool v) { return make(BoolLiteral{v}); }
ExprPtr var(const std::string& name) { return make(VarRef{name}); }
ExprPtr apply(ScalarOp op, std::vector<ExprPtr> args) { return make(Apply{op, std::move(args)}); }
ExprPtr if_expr(ExprPtr c, ExprPtr t, ExprPtr e) {
  return make(IfExpr{std::move(c), std::move(t), std::move(e)});
}
ExprPtr let(std::vector<std::pair<std::string, ExprPtr>> bindings, ExprPtr body, bool sequential) {
  return make(LetExpr{std::move(bindings), std::move(body), sequential});
}
ExprPtr compare(CompareOp op, std::vector<ExprPtr> args) {
  return make(CompareExpr{op, std::move(args)});
}
ExprPtr bool_op(BoolOpKind kind, std::vector<ExprPtr> args) {
  return make(BoolOpExpr{kind, std::move(args)});
}
ExprPtr err_of(ExprPtr sub) { return make(ErrOf{std::move(sub)}); }

bool is_boolean(const Expr& e, const std::vector<std::string>& bool_vars) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoolLiteral> || std::is_same_v<T, CompareExpr> ||
                      std::is_same_v<T, BoolOpExpr> || std::is_same_v<T, ErrOf>) {
          return true;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return std::find(bool_vars.begin(), bool_vars.end(), n.name) != bool_vars.end();
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          return is_boolean(*n.then_branch, bool_vars);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          std::vector<std::string> inner = bool_vars;
          for (const auto& [name, value] : n.bindings) {
            bool b = is_boolean(*value, n.sequential ? inner : bool_vars);
            std::erase(inner, name);
            if (b) inner.push_back(name);
          }
          return is_boolean(*n.body, inner);
        } else {
          return false;
        }
      },
      e.node);
}

namespace {

struct Scope {
  std::vector<std::string> reals, bools;
  bool has(const std::string& v) const {
    return std::find(reals.begin(), reals.end(), v) != reals.end() ||
           std::find(bools.begin(), bools.end(), v) != bools.end();
  }
  bool is_bool(const std::string& v) const {
    return std::find(bools.begin(), bools.end(), v) != bools.end();
  }
  void bind(const std::string& v, bool b) {
    std::erase(reals, v);
    std::erase(bools, v);
    (b ? bools : reals).push_back(v);
  }
};

void check(const Expr& e, const Scope& scope, bool want_boolean);

void check_real(const ExprPtr& e, const Scope& s) { check(*e, s, false); }

void check(const Expr& e, const Scope& scope, bool want_boolean) {
  auto mismatch = [&](const char* what) {
    throw std::invalid_argument(std::string("type error: ") + what + " used as " +
                                (want_boolean ? "boolean" : "real"));
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumLiteral> || std::is_same_v<T, ConstRef>) {
          if (want_boolean) mismatch("number");
        } else if constexpr (std::is_same_v<T, BoolLiteral>) {
          if (!want_boolean) mismatch("boolean literal");
        } else if constexpr (std::is_same_v<T, VarRef>) {
          if (!scope.has(n.name)) throw std::invalid_argument("unbound variable: " + n.name);
          if (scope.is_bool(n.name) != want_boolean) mismatch(n.name.c_str());
        } else if constexpr (std::is_same_v<T, Apply>) {
          if (want_boolean) mismatch(op_name(n.op));
          if (static_cast<int>(n.args.size()) != arity(n.op))
            throw std::invalid_argument(std::string("wrong number of arguments to ") +
                                        op_name(n.op));
          for (const auto& a : n.args) check_real(a, scope);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          if (want_boolean) mismatch("if");
          check(*n.cond, scope, true);
          check_real(n.then_branch, scope);
          check_real(n.else_branch, scope);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          Scope inner = scope;
          for (const auto& [name, value] : n.bindings) {
            const Scope& at = n.sequential ? inner : scope;
            bool b = is_boolean(*value, at.bools);
            check(*value, at, b);
            inner.bind(name, b);
          }
          check(*n.body, inner, want_boolean);
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          if (!want_boolean) mismatch("comparison");
          if (n.args.size() < 2) throw std::invalid_argument("comparison needs two arguments");
          for (const auto& a : n.args) check_real(a, scope);
        } else if constexpr (std::is_same_v<T, BoolOpExpr>) {
          if (!want_boolean) mismatch("logical operator");
          if (n.kind == BoolOpKind::not_ && n.args.size() != 1)
            throw std::invalid_argument("not takes one argument");
          for (const auto& a : n.args) check(*a, scope, true);
        } else if constexpr (std::is_same_v<T, ErrOf>) {
          if (!want_boolean) mismatch("err");
          check_real(n.sub, scope);
        }
      },
      e.node);
}

void collect_free(const Expr& e, std::vector<std::string>& bound, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          if (std::find(bound.begin(), bound.end(), n.name) == bound.end() &&
              std::find(out.begin(), out.end(), n.name) == out.end())
            out.push_back(n.name);
        } else if constexpr (std::is_same_v<T, Apply> || std::is_same_v<T, CompareExpr> ||
                             std::is_same_v<T, BoolOpExpr>) {
          for (const auto& a : n.args) collect_free(*a, bound, out);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          collect_free(*n.cond, bound, out);
          collect_free(*n.then_branch, bound, out);
          collect_free(*n.else_branch, bound, out);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          size_t mark = bound.size();
          for (const auto& [name, value] : n.bindings) {
            collect_free(*value, bound, out);
            if (n.sequential) bound.push_back(name);
          }
          if (!n.sequential)
            for (const auto& b : n.bindings) bound.push_back(b.first);
          collect_free(*n.body, bound, out);
          bound.resize(mark);
        } else if constexpr (std::is_same_v<T, ErrOf>) {
          collect_free(*n.sub, bound, out);
        }
      },
      e.node);
}

const char* constant_name(Constant c) {
  switch (c) {
    case Constant::pi: return "PI";
    case Constant::e: return "E";
    case Constant::infinity: return "INFINITY";
  }
  return "?";
}

void print(const Expr& e, std::string& out) {
  auto list = [&](const char* head, const std::vector<ExprPtr>& args) {
    out += '(';
    out += head;
    for (const auto& a : args) {
      out += ' ';
      print(*a, out);
    }
    out += ')';
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumLiteral>) {
          out += n.text;
        } else if constexpr (std::is_same_v<T, ConstRef>) {
          out += constant_name(n.which);
        } else if constexpr (std::is_same_v<T, BoolLiteral>) {
          out += n.value ? "TRUE" : "FALSE";
        } else if constexpr (std::is_same_v<T, VarRef>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Apply>) {
          list(n.op == ScalarOp::neg ? "-" : op_name(n.op), n.args);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          list("if", {n.cond, n.then_branch, n.else_branch});
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          out += n.sequential ? "(let* (" : "(let (";
          for (size_t i = 0; i < n.bindings.size(); ++i) {
            if (i) out += ' ';
            out += '[';
            out += n.bindings[i].first;
            out += ' ';
            print(*n.bindings[i].second, out);
            out += ']';
          }
          out += ") ";
          print(*n.body, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          list(compare_name(n.op), n.args);
        } else if constexpr (std::is_same_v<T, BoolOpExpr>) {
          list(n.kind == BoolOpKind::and_ ? "and" : n.kind == BoolOpKind::or_ ? "or" : "not",
               n.args);
        } else if constexpr (std::is_same_v<T, ErrOf>) {
          list("err", {n.sub});
        }
      },
      e.node);
}

bool equal_lists(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(*a[i], *b[i])) return false;
  return true;
}

}  // namespace

void check_expr(const Expr& e, const std::vector<std::string>& scope, bool want_boolean) {
  Scope s;
  s.reals = scope;
  check(e, s, want_boolean);
}

std::vector<std::string> free_vars(const Expr& e) {
  std::vector<std::string> bound, out;
  collect_free(e, bound, out);
  return out;
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NumLiteral>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ConstRef>) {
          return x.which == y.which;
        } else if constexpr (std::is_same_v<T, BoolLiteral>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Apply>) {
          return x.op == y.op && equal_lists(x.args, y.args);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          return structurally_equal(*x.cond, *y.cond) &&
                 structurally_equal(*x.then_branch, *y.then_branch) &&
                 structurally_equal(*x.else_branch, *y.else_branch);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          if (x.sequential != y.sequential || x.bindings.size() != y.bindings.size()) return false;
          for (size_t i = 0; i < x.bindings.size(); ++i)
            if (x.bindings[i].first != y.bindings[i].first ||
                !structurally_equal(*x.bindings[i].second, *y.bindings[i].second))
              return false;
          return structurally_equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          return x.op == y.op && equal_lists(x.args, y.args);
        } else if constexpr (std::is_same_v<T, BoolOpExpr>) {
          return x.kind == y.kind && equal_lists(x.args, y.args);
        } else {
          return structurally_equal(*x.sub, *y.sub);
        }
      },
      a.node);
}

}  // namespace rivalkit
