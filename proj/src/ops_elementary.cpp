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

#include <optional>

#include "ops_internal.hpp"

namespace rivalkit::ops {

using detail::canon;
using detail::ep;

namespace {

struct Thresholds {
  mpfr_exp_t emax = 0;
  mpfr_exp_t emin = 0;
  BigFloat exp_over, exp2_over, exp_under, exp2_under;
};

// Thresholds for the exponent range currently installed on this thread.
const Thresholds& thresholds() {
  thread_local Thresholds t;
  if (t.emax != mpfr_get_emax() || t.emin != mpfr_get_emin()) {
    t.emax = mpfr_get_emax();
    t.emin = mpfr_get_emin();
    BigFloat ln2_up(80);
    mpfr_const_log2(ln2_up.raw(), MPFR_RNDU);
    t.exp2_over = BigFloat(80);
    mpfr_set_si(t.exp2_over.raw(), static_cast<long>(t.emax), MPFR_RNDU);
    t.exp_over = BigFloat(80);
    mpfr_mul_si(t.exp_over.raw(), ln2_up.raw(), static_cast<long>(t.emax), MPFR_RNDU);
    t.exp2_under = BigFloat(80);
    mpfr_set_si(t.exp2_under.raw(), static_cast<long>(t.emin - 1), MPFR_RNDD);
    t.exp_under = BigFloat(80);
    mpfr_mul_si(t.exp_under.raw(), ln2_up.raw(), static_cast<long>(t.emin - 1), MPFR_RNDD);
  }
  return t;
}

// Closed or open domain bound.
struct Bound {
  BigFloat value;
  bool open = false;
};

struct Clipped {
  Endpoint lo, hi;
  ErrorInterval err;
  bool empty = false;
};

// Intersects x with [dlo, dhi]. A clipped endpoint takes the domain bound
// as its value and keeps the original endpoint's immovability.
Clipped clip(const Interval& x, const std::optional<Bound>& dlo, const std::optional<Bound>& dhi) {
  Clipped c{x.lo, x.hi, detail::possible_of(x)};
  if (dlo) {
    bool hi_out = dlo->open ? x.hi.value <= dlo->value : x.hi.value < dlo->value;
    if (hi_out) return {x.lo, x.hi, ErrorInterval::certain(), true};
    bool lo_out = dlo->open ? x.lo.value <= dlo->value : x.lo.value < dlo->value;
    if (lo_out) {
      c.lo = ep(dlo->value, x.lo.immovable);
      c.err.possible = true;
    }
  }
  if (dhi) {
    bool lo_out = dhi->open ? x.lo.value >= dhi->value : x.lo.value > dhi->value;
    if (lo_out) return {x.lo, x.hi, ErrorInterval::certain(), true};
    bool hi_out = dhi->open ? x.hi.value >= dhi->value : x.hi.value > dhi->value;
    if (hi_out) {
      c.hi = ep(dhi->value, x.hi.immovable);
      c.err.possible = true;
    }
  }
  return c;
}

Interval monotone(ScalarOp op, const Interval& x, mpfr_prec_t prec, bool increasing,
                  const std::optional<Bound>& dlo = std::nullopt,
                  const std::optional<Bound>& dhi = std::nullopt) {
  if (x.err.guaranteed) return Interval::error();
  Clipped c = clip(x, dlo, dhi);
  if (c.empty) return Interval::error();
  const Endpoint& first = increasing ? c.lo : c.hi;
  const Endpoint& second = increasing ? c.hi : c.lo;
  Rounded lo = detail::unary(op, first.value, prec, Round::down);
  Rounded hi = detail::unary(op, second.value, prec, Round::up);
  return Interval{ep(std::move(lo.value), first.immovable && lo.exact),
                  ep(std::move(hi.value), second.immovable && hi.exact), c.err};
}

Interval exp_family(ScalarOp op, const Interval& x, mpfr_prec_t prec) {
  if (x.err.guaranteed) return Interval::error();
  Interval r = monotone(op, x, prec, true);
  const Thresholds& t = thresholds();
  const BigFloat& over = op == ScalarOp::exp ? t.exp_over : t.exp2_over;
  const BigFloat& under = op == ScalarOp::exp ? t.exp_under : t.exp2_under;
  if (x.hi.value >= over && (x.hi.immovable || x.lo.value >= over)) r.hi.immovable = true;
  if (x.lo.value < under && (x.lo.immovable || x.hi.value < under)) r.lo.immovable = true;
  if (x.hi.value < under) r.hi.immovable = true;
  return r;
}

Interval step(ScalarOp op, const Interval& x, mpfr_prec_t prec) {
  Interval r = monotone(op, x, prec, true);
  if (r.err.guaranteed) return r;
  // Piecewise constant: one step value across the whole input is final.
  Rounded a = detail::unary(op, x.lo.value, prec, Round::down);
  Rounded b = detail::unary(op, x.hi.value, prec, Round::down);
  if (a.exact && b.exact && a.value == b.value) {
    r.lo.immovable = true;
    r.hi.immovable = true;
  }
  return r;
}

Bound closed(long v) { return {detail::from_si(v), false}; }
Bound open_at(long v) { return {detail::from_si(v), true}; }

}  // namespace

Interval sqrt(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::sqrt, x, prec, true, closed(0));
}
Interval cbrt(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::cbrt, x, prec, true);
}
Interval exp(const Interval& x, mpfr_prec_t prec) { return exp_family(ScalarOp::exp, x, prec); }
Interval exp2(const Interval& x, mpfr_prec_t prec) { return exp_family(ScalarOp::exp2, x, prec); }
Interval log(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::log, x, prec, true, open_at(0));
}
Interval log2(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::log2, x, prec, true, open_at(0));
}
Interval asin(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::asin, x, prec, true, closed(-1), closed(1));
}
Interval acos(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::acos, x, prec, false, closed(-1), closed(1));
}
Interval atan(const Interval& x, mpfr_prec_t prec) {
  return monotone(ScalarOp::atan, x, prec, true);
}
Interval trunc(const Interval& x, mpfr_prec_t prec) { return step(ScalarOp::trunc, x, prec); }
Interval floor(const Interval& x, mpfr_prec_t prec) { return step(ScalarOp::floor, x, prec); }
Interval ceil(const Interval& x, mpfr_prec_t prec) { return step(ScalarOp::ceil, x, prec); }

namespace {

bool is_one(const BigFloat& v) { return v.is_finite() && mpfr_cmp_ui(v.raw(), 1) == 0; }

// Class of an interval relative to 1: 1 if all > 1, -1 if all < 1, else 0.
int class_vs_one(const Interval& x) {
  if (mpfr_cmp_ui(x.lo.value.raw(), 1) > 0) return 1;
  if (mpfr_cmp_ui(x.hi.value.raw(), 1) < 0) return -1;
  return 0;
}

Endpoint pow_corner(const Endpoint& a, const Endpoint& b, int a_class1, int b_class0,
                    mpfr_prec_t prec, Round dir) {
  Rounded r = detail::binary(ScalarOp::pow, a.value, b.value, prec, dir);
  bool imm = (a.immovable && b.immovable && r.exact) ||
             (a.immovable && is_one(a.value)) ||
             (a.immovable && (a.value.is_zero() || a.value.is_inf()) && b_class0 != 0) ||
             (b.immovable && b.value.is_zero()) ||
             (b.immovable && b.value.is_inf() && a_class1 != 0);
  return ep(std::move(r.value), imm);
}

Endpoint extreme(std::vector<Endpoint>& cands, bool want_min) {
  Endpoint best = cands[0];
  for (size_t i = 1; i < cands.size(); ++i) {
    Endpoint& c = cands[i];
    if (c.value == best.value) {
      best.immovable = best.immovable || c.immovable;
    } else if (want_min ? c.value < best.value : c.value > best.value) {
      best = c;
    }
  }
  return best;
}

bool transferable(const BigFloat& v) {
  return v.is_zero() || v.is_inf() || is_one(v);
}

// x^y for x >= 0. When `zero_member` is false, a zero lower endpoint of x
// is only a limit and contributes no domain error.
Interval pow_nonneg(const Interval& x, const Interval& y, mpfr_prec_t prec, bool zero_member) {
  ErrorInterval err = detail::possible_of(x, y);
  if (zero_member && x.lo.value.is_zero() && y.lo.value.sign() <= 0) {
    if (x.hi.value.is_zero() && y.hi.value.sign() <= 0) return Interval::error();
    err.possible = true;
  }
  if (x.hi.value.is_zero()) {
    if (zero_member) {
      bool imm = x.lo.immovable && x.hi.immovable;
      return Interval{ep(BigFloat::zero(prec), imm), ep(BigFloat::zero(prec), imm), err};
    }
  }
  const int xc = class_vs_one(x);
  const int yc = detail::strict_class(y);
  std::vector<Endpoint> lows, highs;
  for (const Endpoint* a : {&x.lo, &x.hi}) {
    for (const Endpoint* b : {&y.lo, &y.hi}) {
      lows.push_back(pow_corner(*a, *b, xc, yc, prec, Round::down));
      highs.push_back(pow_corner(*a, *b, xc, yc, prec, Round::up));
    }
  }
  Interval r{extreme(lows, true), extreme(highs, false), err};
  // Movability through exp(y * log x).
  Interval composite = exp(mul(y, log(x, prec), prec), prec);
  if (!composite.err.guaranteed) {
    if (composite.lo.immovable && composite.lo.value == r.lo.value &&
        transferable(r.lo.value))
      r.lo.immovable = true;
    if (composite.hi.immovable && composite.hi.value == r.hi.value &&
        transferable(r.hi.value))
      r.hi.immovable = true;
  }
  return r;
}

bool is_odd_integer(const BigFloat& v) {
  if (!v.is_integer()) return false;
  BigFloat half(v.precision());
  mpfr_div_2ui(half.raw(), v.raw(), 1, MPFR_RNDN);
  return !half.is_integer();
}

// Smallest integer of the given parity >= a (a an integer or -inf). If it
// is not representable, a itself is returned and flagged inexact.
Endpoint parity_start(const Endpoint& a, bool want_odd, mpfr_prec_t prec) {
  if (a.value.is_inf() || is_odd_integer(a.value) == want_odd) return a;
  BigFloat r(prec);
  int t = mpfr_add_ui(r.raw(), a.value.raw(), 1, MPFR_RNDD);
  return {canon(std::move(r)), a.immovable && t == 0};
}

Endpoint parity_end(const Endpoint& b, bool want_odd, mpfr_prec_t prec) {
  if (b.value.is_inf() || is_odd_integer(b.value) == want_odd) return b;
  BigFloat r(prec);
  int t = mpfr_sub_ui(r.raw(), b.value.raw(), 1, MPFR_RNDU);
  return {canon(std::move(r)), b.immovable && t == 0};
}

// x^y for x < 0 (a zero upper endpoint is a limit).
Interval pow_negative(const Interval& x, const Interval& y, mpfr_prec_t prec) {
  Interval ax = neg(x);
  ErrorInterval err = detail::possible_of(x, y);
  if (y.is_point()) {
    if (!y.lo.value.is_integer()) return Interval::error();
    Interval r = pow_nonneg(ax, y, prec, false);
    if (is_odd_integer(y.lo.value)) r = neg(r);
    r.err = join_errors(r.err, err);
    return r;
  }
  BigFloat a(prec), b(prec);
  int ta = mpfr_rint_ceil(a.raw(), y.lo.value.raw(), MPFR_RNDU);
  int tb = mpfr_rint_floor(b.raw(), y.hi.value.raw(), MPFR_RNDD);
  if (b < a) return Interval::error();
  Endpoint ea{canon(std::move(a)), y.lo.immovable && ta == 0};
  Endpoint eb{canon(std::move(b)), y.hi.immovable && tb == 0};
  std::optional<Interval> even_part, odd_part;
  for (bool odd : {false, true}) {
    Endpoint s = parity_start(ea, odd, prec);
    Endpoint e = parity_end(eb, odd, prec);
    if (e.value < s.value) continue;
    Interval yi{s, e, {}};
    Interval r = pow_nonneg(ax, yi, prec, false);
    if (odd) odd_part = neg(r);
    else even_part = r;
  }
  Interval r;
  bool fixed = y.lo.immovable && y.hi.immovable;
  if (even_part && odd_part) r = detail::merge_parts(*even_part, *odd_part, fixed);
  else r = even_part ? *even_part : *odd_part;
  if (!fixed && !(even_part && odd_part)) {
    r.lo.immovable = false;
    r.hi.immovable = false;
  }
  r.err = join_errors(r.err, err);
  r.err.possible = true;
  return r;
}

}  // namespace

Interval pow(const Interval& x, const Interval& y, mpfr_prec_t prec) {
  if (x.err.guaranteed || y.err.guaranteed) return Interval::error();
  if (x.lo.value.sign() >= 0) return pow_nonneg(x, y, prec, true);
  if (x.hi.value.sign() < 0) return pow_negative(x, y, prec);
  const bool fixed = x.lo.immovable && x.hi.immovable;
  Interval pos{ep(BigFloat::zero(prec), fixed), x.hi, {false, x.err.possible}};
  Interval negp{x.lo, ep(BigFloat::zero(prec), fixed), {false, x.err.possible}};
  return detail::merge_parts(pow_negative(negp, y, prec), pow_nonneg(pos, y, prec, true), fixed);
}

}  // namespace rivalkit::ops
