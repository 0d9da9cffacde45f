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

#include <stdexcept>

#include "ops_internal.hpp"

namespace rivalkit::ops {

using detail::canon;
using detail::ep;

namespace detail {

Interval merge_parts(const Interval& a, const Interval& b, bool fixed_split) {
  if (a.err.guaranteed && b.err.guaranteed) return Interval::error();
  if (a.err.guaranteed || b.err.guaranteed) {
    Interval r = a.err.guaranteed ? b : a;
    r.err.possible = true;
    return r;
  }
  Interval r = hull(a, b);
  if (!fixed_split) {
    r.lo.immovable = false;
    r.hi.immovable = false;
  }
  return r;
}

}  // namespace detail

Interval neg(const Interval& a) {
  if (a.err.guaranteed) return Interval::error();
  return Interval{ep(a.hi.value.negated(), a.hi.immovable),
                  ep(a.lo.value.negated(), a.lo.immovable), a.err};
}

namespace {

bool point_inf(const Interval& x) { return x.is_point() && x.lo.value.is_inf(); }

// One endpoint of a sum. An inf - inf corner yields the matching infinity.
Endpoint add_endpoint(const Endpoint& x, const Endpoint& y, mpfr_prec_t prec, Round dir,
                      bool& undefined) {
  Rounded r = detail::binary(ScalarOp::add, x.value, y.value, prec, dir);
  if (r.value.is_nan()) {
    undefined = true;
    return {BigFloat::infinity(dir == Round::down ? -1 : 1, prec), false};
  }
  bool imm = (x.immovable && y.immovable && r.exact) ||
             (x.immovable && x.value.is_inf()) || (y.immovable && y.value.is_inf());
  return ep(std::move(r.value), imm);
}

}  // namespace

Interval add(const Interval& a, const Interval& b, mpfr_prec_t prec) {
  if (a.err.guaranteed || b.err.guaranteed) return Interval::error();
  bool undefined = false;
  Endpoint lo = add_endpoint(a.lo, b.lo, prec, Round::down, undefined);
  Endpoint hi = add_endpoint(a.hi, b.hi, prec, Round::up, undefined);
  ErrorInterval err = detail::possible_of(a, b);
  if (undefined) {
    err.possible = true;
    if (point_inf(a) && point_inf(b) && a.lo.value.sign() != b.lo.value.sign())
      return Interval::error();
  }
  return Interval{std::move(lo), std::move(hi), err};
}

Interval sub(const Interval& a, const Interval& b, mpfr_prec_t prec) {
  if (a.err.guaranteed || b.err.guaranteed) return Interval::error();
  return add(a, neg(b), prec);
}

namespace {

// Witness product; 0 * inf counts as 0.
Endpoint mul_endpoint(const Endpoint& a, const Endpoint& b, int a_class, int b_class,
                      mpfr_prec_t prec, Round dir) {
  Rounded r = detail::binary(ScalarOp::mul, a.value, b.value, prec, dir);
  bool zero_inf = r.value.is_nan();
  BigFloat v = zero_inf ? BigFloat::zero(prec) : std::move(r.value);
  bool exact = zero_inf || r.exact;
  bool imm = (a.immovable && b.immovable && exact) ||
             (a.immovable && a.value.is_zero()) ||
             (a.immovable && a.value.is_inf() && b_class != 0) ||
             (b.immovable && b.value.is_zero()) ||
             (b.immovable && b.value.is_inf() && a_class != 0);
  return ep(std::move(v), imm);
}

Endpoint pick(Endpoint a, Endpoint b, bool want_min) {
  if (a.value == b.value) return {std::move(a.value), a.immovable || b.immovable};
  bool a_wins = want_min ? a.value < b.value : a.value > b.value;
  return a_wins ? std::move(a) : std::move(b);
}

}  // namespace

Interval mul(const Interval& x, const Interval& y, mpfr_prec_t prec) {
  if (x.err.guaranteed || y.err.guaranteed) return Interval::error();
  ErrorInterval err = detail::possible_of(x, y);
  auto contains_zero = [](const Interval& v) {
    return v.lo.value.sign() <= 0 && v.hi.value.sign() >= 0;
  };
  auto is_zero = [](const Interval& v) { return v.lo.value.is_zero() && v.hi.value.is_zero(); };
  // Infinite endpoints of wider intervals bound overflowed reals; only a
  // point infinity is itself a value.
  if ((point_inf(x) && contains_zero(y)) || (point_inf(y) && contains_zero(x))) {
    if ((point_inf(x) && is_zero(y)) || (point_inf(y) && is_zero(x))) return Interval::error();
    err.possible = true;
  }
  const int xs = detail::strict_class(x), ys = detail::strict_class(y);
  auto m = [&](const Endpoint& a, const Endpoint& b, Round dir) {
    return mul_endpoint(a, b, xs, ys, prec, dir);
  };
  auto mk = [&](const Endpoint& a, const Endpoint& b, const Endpoint& c, const Endpoint& d) {
    return Interval{m(a, b, Round::down), m(c, d, Round::up), err};
  };
  const Endpoint &xlo = x.lo, &xhi = x.hi, &ylo = y.lo, &yhi = y.hi;
  const int xc = detail::loose_class(x), yc = detail::loose_class(y);
  if (xc == 1 && yc == 1) return mk(xlo, ylo, xhi, yhi);
  if (xc == 1 && yc == -1) return mk(xhi, ylo, xlo, yhi);
  if (xc == 1 && yc == 0) return mk(xhi, ylo, xhi, yhi);
  if (xc == 0 && yc == 1) return mk(xlo, yhi, xhi, yhi);
  if (xc == 0 && yc == -1) return mk(xhi, ylo, xlo, ylo);
  if (xc == -1 && yc == 1) return mk(xlo, yhi, xhi, ylo);
  if (xc == -1 && yc == -1) return mk(xhi, yhi, xlo, ylo);
  if (xc == -1 && yc == 0) return mk(xlo, yhi, xlo, ylo);
  // Both straddle zero.
  Endpoint lo = pick(m(xhi, ylo, Round::down), m(xlo, yhi, Round::down), true);
  Endpoint hi = pick(m(xlo, ylo, Round::up), m(xhi, yhi, Round::up), false);
  return Interval{std::move(lo), std::move(hi), err};
}

namespace {

Endpoint div_endpoint(const Endpoint& a, const Endpoint& b, int a_class, mpfr_prec_t prec,
                      Round dir, bool& undefined) {
  if (a.value.is_zero()) return ep(BigFloat::zero(prec), a.immovable);
  Rounded r = detail::binary(ScalarOp::div, a.value, b.value, prec, dir);
  if (r.value.is_nan()) {
    undefined = true;
    return {BigFloat::infinity(dir == Round::down ? -1 : 1, prec), false};
  }
  bool imm = (a.immovable && b.immovable && r.exact) ||
             (a.immovable && a.value.is_inf()) ||
             (b.immovable && b.value.is_inf() && a_class != 0) ||
             (b.immovable && b.value.is_zero() && a_class != 0);
  return ep(std::move(r.value), imm);
}

}  // namespace

Interval div(const Interval& x, const Interval& y, mpfr_prec_t prec) {
  if (x.err.guaranteed || y.err.guaranteed) return Interval::error();
  ErrorInterval err = detail::possible_of(x, y);
  const bool y_has_zero = y.lo.value.sign() <= 0 && y.hi.value.sign() >= 0;
  if (y_has_zero) {
    if (y.lo.value.is_zero() && y.hi.value.is_zero()) return Interval::error();
    err.possible = true;
  }
  const int yc = detail::loose_class(y);
  if (yc == 0) return Interval::entire(prec, err);
  const int xs = detail::strict_class(x);
  // A zero divisor endpoint is the one-sided limit from y's side.
  Endpoint ylo = y.lo, yhi = y.hi;
  if (yc == -1 && yhi.value.is_zero()) mpfr_set_zero(yhi.value.raw(), -1);
  bool undefined = false;
  auto d = [&](const Endpoint& a, const Endpoint& b, Round dir) {
    return div_endpoint(a, b, xs, prec, dir, undefined);
  };
  auto mk = [&](const Endpoint& a, const Endpoint& b, const Endpoint& c, const Endpoint& e) {
    Endpoint lo = d(a, b, Round::down);
    Endpoint hi = d(c, e, Round::up);
    return Interval{std::move(lo), std::move(hi), err};
  };
  Interval r;
  const Endpoint &xlo = x.lo, &xhi = x.hi;
  if (xs == 1 && yc == 1) r = mk(xlo, yhi, xhi, ylo);
  else if (xs == 1 && yc == -1) r = mk(xhi, yhi, xlo, ylo);
  else if (xs == 0 && yc == 1) r = mk(xlo, ylo, xhi, ylo);
  else if (xs == 0 && yc == -1) r = mk(xhi, yhi, xlo, yhi);
  else if (xs == -1 && yc == 1) r = mk(xlo, ylo, xhi, yhi);
  else r = mk(xhi, ylo, xlo, yhi);
  if (undefined) {
    r.err.possible = true;
    if (point_inf(x) && point_inf(y)) return Interval::error();
  }
  return r;
}

Interval fabs(const Interval& x) {
  if (x.err.guaranteed) return Interval::error();
  if (x.lo.value.sign() >= 0) return x;
  if (x.hi.value.sign() <= 0) return neg(x);
  BigFloat nlo = x.lo.value.negated();
  Endpoint hi;
  if (nlo == x.hi.value)
    hi = ep(x.hi.value, x.lo.immovable || x.hi.immovable);
  else if (nlo > x.hi.value)
    hi = ep(nlo, x.lo.immovable);
  else
    hi = x.hi;
  return Interval{ep(BigFloat::zero(x.lo.value.precision()), x.lo.immovable && x.hi.immovable),
                  std::move(hi), x.err};
}

const char* compare_name(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
  }
  return "?";
}

namespace {

// a < b (strict) or a <= b over all / some point pairs.
BoolInterval less(const Interval& a, const Interval& b, bool strict) {
  auto rel = [strict](const BigFloat& u, const BigFloat& v) { return strict ? u < v : u <= v; };
  BoolInterval r;
  r.must = rel(a.hi.value, b.lo.value);
  r.may = rel(a.lo.value, b.hi.value);
  r.must_immovable = r.must || (a.hi.immovable && b.lo.immovable);
  r.may_immovable = !r.may || (a.lo.immovable && b.hi.immovable);
  return r;
}

}  // namespace

Condition compare(CompareOp op, const Interval& a, const Interval& b) {
  if (a.err.guaranteed || b.err.guaranteed)
    return {BoolInterval::unknown(), ErrorInterval::certain()};
  ErrorInterval err{false, a.err.possible || b.err.possible};
  BoolInterval v;
  switch (op) {
    case CompareOp::lt: v = less(a, b, true); break;
    case CompareOp::le: v = less(a, b, false); break;
    case CompareOp::gt: v = less(b, a, true); break;
    case CompareOp::ge: v = less(b, a, false); break;
    case CompareOp::eq: v = bool_and(less(a, b, false), less(b, a, false)); break;
    case CompareOp::ne: v = bool_not(bool_and(less(a, b, false), less(b, a, false))); break;
  }
  return {v, err};
}

Interval if_merge(const Condition& cond, const Interval& then_v, const Interval& else_v) {
  if (cond.err.guaranteed) return Interval::error();
  Interval r;
  if (cond.value.is_true()) {
    r = then_v;
  } else if (cond.value.is_false()) {
    r = else_v;
  } else if (then_v.err.guaranteed && else_v.err.guaranteed) {
    return Interval::error();
  } else if (then_v.err.guaranteed || else_v.err.guaranteed) {
    r = then_v.err.guaranteed ? else_v : then_v;
    r.err.possible = true;
  } else {
    r = hull(then_v, else_v);
    if (!cond.value.is_stuck()) {
      r.lo.immovable = false;
      r.hi.immovable = false;
    }
  }
  if (!r.err.guaranteed) r.err.possible = r.err.possible || cond.err.possible;
  return r;
}

Interval apply(ScalarOp op, std::span<const Interval> args, mpfr_prec_t prec) {
  if (static_cast<int>(args.size()) != arity(op))
    throw std::invalid_argument(std::string("wrong arity for ") + op_name(op));
  const Interval& a = args[0];
  switch (op) {
    case ScalarOp::add: return add(a, args[1], prec);
    case ScalarOp::sub: return sub(a, args[1], prec);
    case ScalarOp::mul: return mul(a, args[1], prec);
    case ScalarOp::div: return div(a, args[1], prec);
    case ScalarOp::neg: return neg(a);
    case ScalarOp::sqrt: return sqrt(a, prec);
    case ScalarOp::cbrt: return cbrt(a, prec);
    case ScalarOp::exp: return exp(a, prec);
    case ScalarOp::exp2: return exp2(a, prec);
    case ScalarOp::log: return log(a, prec);
    case ScalarOp::log2: return log2(a, prec);
    case ScalarOp::pow: return pow(a, args[1], prec);
    case ScalarOp::sin: return sin(a, prec);
    case ScalarOp::cos: return cos(a, prec);
    case ScalarOp::tan: return tan(a, prec);
    case ScalarOp::asin: return asin(a, prec);
    case ScalarOp::acos: return acos(a, prec);
    case ScalarOp::atan: return atan(a, prec);
    case ScalarOp::atan2: return atan2(a, args[1], prec);
    case ScalarOp::fabs: return fabs(a);
    case ScalarOp::fmod: return fmod(a, args[1], prec);
    case ScalarOp::trunc: return trunc(a, prec);
    case ScalarOp::floor: return floor(a, prec);
    case ScalarOp::ceil: return ceil(a, prec);
  }
  throw std::invalid_argument("unsupported op");
}

}  // namespace rivalkit::ops
