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

#include "rivalkit/fpcore.hpp"

#include <cctype>
#include <optional>

namespace rivalkit {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + msg),
      line_(line),
      column_(column) {}

namespace {

struct Sexp {
  enum class Kind { atom, string, list } kind = Kind::atom;
  std::string text;
  std::vector<Sexp> items;
  int line = 1, column = 1;

  bool is_atom(const char* s) const { return kind == Kind::atom && text == s; }
};

class Reader {
 public:
  explicit Reader(const std::string& text) : s_(text) {}

  std::optional<Sexp> next() {
    skip();
    if (pos_ >= s_.size()) return std::nullopt;
    return read();
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Sexp read() {
    Sexp x;
    x.line = line_;
    x.column = col_;
    char c = s_[pos_];
    if (c == '(' || c == '[') {
      char close = c == '(' ? ')' : ']';
      advance();
      x.kind = Sexp::Kind::list;
      while (true) {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unclosed parenthesis", x.line, x.column);
        if (s_[pos_] == close) {
          advance();
          return x;
        }
        if (s_[pos_] == ')' || s_[pos_] == ']') fail("mismatched closing bracket");
        x.items.push_back(read());
      }
    }
    if (c == ')' || c == ']') fail("unexpected closing bracket");
    if (c == '"') {
      advance();
      x.kind = Sexp::Kind::string;
      while (true) {
        if (pos_ >= s_.size()) throw ParseError("unterminated string", x.line, x.column);
        char d = s_[pos_];
        advance();
        if (d == '"') return x;
        if (d == '\\' && pos_ < s_.size()) {
          x.text.push_back(s_[pos_]);
          advance();
        } else {
          x.text.push_back(d);
        }
      }
    }
    while (pos_ < s_.size()) {
      char d = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '[' ||
          d == ']' || d == '"' || d == ';')
        break;
      x.text.push_back(d);
      advance();
    }
    return x;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

[[noreturn]] void fail_at(const Sexp& x, const std::string& msg) {
  throw ParseError(msg, x.line, x.column);
}

std::optional<CompareOp> compare_op(const std::string& s) {
  if (s == "<") return CompareOp::lt;
  if (s == "<=") return CompareOp::le;
  if (s == ">") return CompareOp::gt;
  if (s == ">=") return CompareOp::ge;
  if (s == "==") return CompareOp::eq;
  if (s == "!=") return CompareOp::ne;
  return std::nullopt;
}

bool looks_numeric(const std::string& s) {
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.');
}

const std::string& symbol_of(const Sexp& x, const char* what) {
  if (x.kind != Sexp::Kind::atom || x.text.empty() || looks_numeric(x.text))
    fail_at(x, std::string("expected ") + what);
  return x.text;
}

ExprPtr build(const Sexp& x);

std::vector<ExprPtr> build_args(const Sexp& x) {
  std::vector<ExprPtr> args;
  for (size_t i = 1; i < x.items.size(); ++i) args.push_back(build(x.items[i]));
  return args;
}

ExprPtr build(const Sexp& x) {
  if (x.kind == Sexp::Kind::string) fail_at(x, "unexpected string");
  if (x.kind == Sexp::Kind::atom) {
    const std::string& t = x.text;
    if (looks_numeric(t)) {
      if (!parse_rational(t)) fail_at(x, "malformed number '" + t + "'");
      return num(t);
    }
    if (t == "PI") return constant(Constant::pi);
    if (t == "E") return constant(Constant::e);
    if (t == "INFINITY") return constant(Constant::infinity);
    if (t == "TRUE") return boolean(true);
    if (t == "FALSE") return boolean(false);
    return var(t);
  }
  if (x.items.empty()) fail_at(x, "empty expression");
  const Sexp& head = x.items[0];
  if (head.kind != Sexp::Kind::atom) fail_at(head, "expected an operator");
  const std::string& h = head.text;
  const size_t nargs = x.items.size() - 1;
  if (h == "if") {
    if (nargs != 3) fail_at(x, "if takes three arguments");
    return if_expr(build(x.items[1]), build(x.items[2]), build(x.items[3]));
  }
  if (h == "let" || h == "let*") {
    if (nargs != 2 || x.items[1].kind != Sexp::Kind::list)
      fail_at(x, h + " takes a binding list and a body");
    std::vector<std::pair<std::string, ExprPtr>> bindings;
    for (const Sexp& b : x.items[1].items) {
      if (b.kind != Sexp::Kind::list || b.items.size() != 2) fail_at(b, "malformed binding");
      bindings.emplace_back(symbol_of(b.items[0], "a variable name"), build(b.items[1]));
    }
    return let(std::move(bindings), build(x.items[2]), h == "let*");
  }
  if (h == "and" || h == "or" || h == "not") {
    BoolOpKind k = h == "and" ? BoolOpKind::and_ : h == "or" ? BoolOpKind::or_ : BoolOpKind::not_;
    if (k == BoolOpKind::not_ && nargs != 1) fail_at(x, "not takes one argument");
    return bool_op(k, build_args(x));
  }
  if (auto c = compare_op(h)) {
    if (nargs < 2) fail_at(x, h + " needs at least two arguments");
    return compare(*c, build_args(x));
  }
  if (h == "-" && nargs == 1) return apply(ScalarOp::neg, build_args(x));
  auto op = op_from_name(h);
  if (!op || *op == ScalarOp::neg) fail_at(head, "unsupported operator '" + h + "'");
  if (static_cast<int>(nargs) != arity(*op))
    fail_at(x, "wrong number of arguments to '" + h + "': expected " +
                   std::to_string(arity(*op)) + ", got " + std::to_string(nargs));
  return apply(*op, build_args(x));
}

Program build_program(const Sexp& form) {
  if (form.kind != Sexp::Kind::list || form.items.empty() || !form.items[0].is_atom("FPCore"))
    fail_at(form, "expected (FPCore ...)");
  size_t i = 1;
  Program p;
  if (i < form.items.size() && form.items[i].kind == Sexp::Kind::atom) {
    p.name = symbol_of(form.items[i], "a name or an argument list");
    ++i;
  }
  if (i >= form.items.size() || form.items[i].kind != Sexp::Kind::list)
    fail_at(form, "expected an argument list");
  for (const Sexp& v : form.items[i].items) {
    // (! :prop value ... name) annotated arguments keep only the name.
    if (v.kind == Sexp::Kind::list && !v.items.empty() && v.items[0].is_atom("!"))
      p.vars.push_back(symbol_of(v.items.back(), "an argument name"));
    else
      p.vars.push_back(symbol_of(v, "an argument name"));
    for (size_t k = 0; k + 1 < p.vars.size(); ++k)
      if (p.vars[k] == p.vars.back()) fail_at(v, "duplicate argument '" + p.vars.back() + "'");
  }
  ++i;
  while (i < form.items.size() && form.items[i].kind == Sexp::Kind::atom &&
         !form.items[i].text.empty() && form.items[i].text[0] == ':') {
    const Sexp& key = form.items[i];
    if (i + 1 >= form.items.size()) fail_at(key, "property " + key.text + " has no value");
    const Sexp& value = form.items[i + 1];
    if (key.text == ":name") {
      if (value.kind == Sexp::Kind::list) fail_at(value, ":name expects a string");
      p.name = value.text;
    } else if (key.text == ":pre") {
      p.pre = build(value);
    } else if (key.text == ":precision") {
      try {
        p.target = TargetFormat::from_name(value.text);
      } catch (const std::exception&) {
        fail_at(value, "unsupported precision '" + value.text + "'");
      }
    }
    i += 2;
  }
  if (i + 1 != form.items.size())
    fail_at(i < form.items.size() ? form.items[i] : form, "expected exactly one body expression");
  p.body = build(form.items[i]);
  try {
    check_expr(*p.body, p.vars, false);
    if (p.pre) check_expr(*p.pre, p.vars, true);
  } catch (const std::invalid_argument& e) {
    fail_at(form, e.what());
  }
  return p;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Program parse_program(const std::string& text) {
  Reader r(text);
  auto form = r.next();
  if (!form) throw ParseError("no FPCore form found", 1, 1);
  Program p = build_program(*form);
  if (auto extra = r.next()) fail_at(*extra, "unexpected text after the FPCore form");
  return p;
}

std::vector<Program> parse_programs(const std::string& text) {
  Reader r(text);
  std::vector<Program> out;
  while (auto form = r.next()) out.push_back(build_program(*form));
  return out;
}

std::string to_string(const Program& p) {
  std::string out = "(FPCore (";
  for (size_t i = 0; i < p.vars.size(); ++i) {
    if (i) out += ' ';
    out += p.vars[i];
  }
  out += ')';
  if (p.name) out += " :name " + quote(*p.name);
  if (p.target.kind() != TargetFormat::Kind::binary64) out += " :precision " + p.target.name();
  if (p.pre) out += " :pre " + to_string(*p.pre);
  out += ' ';
  out += to_string(*p.body);
  out += ')';
  return out;
}

}  // namespace rivalkit
