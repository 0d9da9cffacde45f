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

#include "rivalkit/interval.hpp"

#include <stdexcept>

namespace rivalkit {

ErrorInterval join_errors(const ErrorInterval& a, const ErrorInterval& b) {
  return {a.guaranteed || b.guaranteed, a.possible || b.possible};
}

namespace {

BoolInterval normalized(BoolInterval b) {
  if (b.must) b.must_immovable = true;
  if (!b.may) b.may_immovable = true;
  return b;
}

bool fixed_false_must(const BoolInterval& b) { return !b.must && b.must_immovable; }
bool fixed_true_may(const BoolInterval& b) { return b.may && b.may_immovable; }

}  // namespace

BoolInterval bool_and(const BoolInterval& a, const BoolInterval& b) {
  BoolInterval r;
  r.must = a.must && b.must;
  r.may = a.may && b.may;
  r.must_immovable = fixed_false_must(a) || fixed_false_must(b);
  r.may_immovable = a.may_immovable && b.may_immovable;
  return normalized(r);
}

BoolInterval bool_or(const BoolInterval& a, const BoolInterval& b) {
  BoolInterval r;
  r.must = a.must || b.must;
  r.may = a.may || b.may;
  r.must_immovable = a.must_immovable && b.must_immovable;
  r.may_immovable = fixed_true_may(a) || fixed_true_may(b);
  return normalized(r);
}

BoolInterval bool_not(const BoolInterval& a) {
  return normalized({!a.may, !a.must, a.may_immovable, a.must_immovable});
}

BoolInterval bool_of_error(const ErrorInterval& e) {
  return normalized({e.guaranteed, e.possible, false, false});
}

Interval Interval::error() {
  Interval r{{BigFloat::infinity(1), false}, {BigFloat::infinity(-1), false},
             ErrorInterval::certain()};
  return r;
}

Interval Interval::make(BigFloat lo, bool lo_imm, BigFloat hi, bool hi_imm,
                        ErrorInterval err) {
  return Interval{{std::move(lo), lo_imm}, {std::move(hi), hi_imm}, err};
}

Interval Interval::entire(mpfr_prec_t prec, ErrorInterval err) {
  return make(BigFloat::infinity(-1, prec), false, BigFloat::infinity(1, prec), false, err);
}

bool Interval::well_formed() const {
  if (!err.valid()) return false;
  if (err.guaranteed)
    return lo.value.is_inf() && lo.value.sign() > 0 && hi.value.is_inf() &&
           hi.value.sign() < 0;
  if (lo.value.is_nan() || hi.value.is_nan()) return false;
  return lo.value <= hi.value;
}

Interval make_point(double x) {
  if (x != x) throw std::invalid_argument("NaN is not a valid point");
  BigFloat v(x, 53);
  if (v.is_zero()) v = BigFloat::zero(53);
  return Interval::make(v, true, v, true);
}

Interval make_point(const BigFloat& x) {
  if (x.is_nan()) throw std::invalid_argument("NaN is not a valid point");
  BigFloat v = x.is_zero() ? BigFloat::zero(x.precision()) : x;
  return Interval::make(v, true, v, true);
}

Interval make_constant(Constant c, mpfr_prec_t prec) {
  if (c == Constant::infinity)
    return Interval::make(BigFloat::infinity(1, prec), true, BigFloat::infinity(1, prec), true);
  BigFloat lo(prec), hi(prec);
  if (c == Constant::pi) {
    mpfr_const_pi(lo.raw(), MPFR_RNDD);
    mpfr_const_pi(hi.raw(), MPFR_RNDU);
  } else {
    mpfr_exp(lo.raw(), BigFloat(1.0, 2).raw(), MPFR_RNDD);
    mpfr_exp(hi.raw(), BigFloat(1.0, 2).raw(), MPFR_RNDU);
  }
  return Interval::make(std::move(lo), false, std::move(hi), false);
}

bool is_one_value(const Interval& iv, const TargetFormat& target) {
  if (iv.err.possible || iv.err.guaranteed) return false;
  return target.round(iv.lo.value, Round::nearest) ==
         target.round(iv.hi.value, Round::nearest);
}

bool is_stuck(const Interval& iv, const TargetFormat& target, StuckMode mode) {
  if (iv.err.guaranteed) return false;
  if (iv.lo.immovable && iv.hi.immovable) {
    // Error flags aside, the endpoints alone decide one-valuedness here.
    return target.round(iv.lo.value, Round::nearest) !=
           target.round(iv.hi.value, Round::nearest);
  }
  if (mode == StuckMode::strict_finite) {
    if (iv.lo.immovable && iv.lo.value.is_inf()) return true;
    if (iv.hi.immovable && iv.hi.value.is_inf()) return true;
  }
  return false;
}

namespace {

bool endpoint_refines(const Endpoint& n, const Endpoint& w, bool is_lo) {
  if (w.immovable) return n.immovable && n.value == w.value;
  return is_lo ? n.value >= w.value : n.value <= w.value;
}

}  // namespace

bool refines(const Interval& narrow, const Interval& wide) {
  if (wide.err.guaranteed && !narrow.err.guaranteed) return false;
  if (narrow.err.possible && !wide.err.possible) return false;
  if (narrow.err.guaranteed) return true;
  if (wide.err.guaranteed) return true;
  return endpoint_refines(narrow.lo, wide.lo, true) &&
         endpoint_refines(narrow.hi, wide.hi, false);
}

bool refines(const BoolInterval& narrow, const BoolInterval& wide) {
  // must can only rise, may can only fall; immovable bounds stay put.
  if (wide.must && !narrow.must) return false;
  if (!wide.may && narrow.may) return false;
  if (wide.must_immovable && narrow.must != wide.must) return false;
  if (wide.may_immovable && narrow.may != wide.may) return false;
  return true;
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.err.guaranteed || b.err.guaranteed)
    throw std::invalid_argument("hull of a guaranteed-error interval");
  auto pick = [](const Endpoint& x, const Endpoint& y, bool want_min) {
    bool x_wins = want_min ? x.value <= y.value : x.value >= y.value;
    const Endpoint& c = x_wins ? x : y;
    const Endpoint& o = x_wins ? y : x;
    return Endpoint{c.value, c.immovable && o.immovable};
  };
  Interval r{pick(a.lo, b.lo, true), pick(a.hi, b.hi, false),
             {a.err.guaranteed && b.err.guaranteed, a.err.possible || b.err.possible}};
  return r;
}

std::string render(const Interval& iv, int digits) {
  if (iv.err.guaranteed) return "[error] err guaranteed";
  std::string s = "[";
  if (iv.lo.immovable) s += "!";
  s += iv.lo.value.to_string(digits);
  s += ", ";
  s += iv.hi.value.to_string(digits);
  if (iv.hi.immovable) s += "!";
  s += "] err ";
  s += render(iv.err);
  return s;
}

std::string render(const BoolInterval& b) {
  auto tv = [](bool v) { return v ? "T" : "F"; };
  std::string s = "[";
  if (b.must_immovable) s += "!";
  s += tv(b.must);
  s += ", ";
  s += tv(b.may);
  if (b.may_immovable) s += "!";
  return s + "]";
}

std::string render(const ErrorInterval& e) {
  if (e.guaranteed) return "guaranteed";
  if (e.possible) return "possible";
  return "none";
}

}  // namespace rivalkit
