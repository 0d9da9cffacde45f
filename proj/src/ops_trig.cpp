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

#include <gmpxx.h>

#include <optional>

#include "ops_internal.hpp"

namespace rivalkit::ops {

using detail::ep;

namespace {

// Bounds on floor(v/pi) (or floor(v/pi + 1/2) when `half`), with pi
// rounded in whichever direction keeps each bound conservative.
struct Region {
  mpz_class dn, up;
};

std::optional<Region> region(const BigFloat& v, bool half, mpfr_prec_t prec) {
  if (!v.is_finite()) return std::nullopt;
  BigFloat pi_lo = detail::pi(prec, Round::down);
  BigFloat pi_hi = detail::pi(prec, Round::up);
  BigFloat q_dn(prec), q_up(prec);
  const bool nonneg = v.sign() >= 0;
  mpfr_div(q_dn.raw(), v.raw(), (nonneg ? pi_hi : pi_lo).raw(), MPFR_RNDD);
  mpfr_div(q_up.raw(), v.raw(), (nonneg ? pi_lo : pi_hi).raw(), MPFR_RNDU);
  if (half) {
    mpfr_add_d(q_dn.raw(), q_dn.raw(), 0.5, MPFR_RNDD);
    mpfr_add_d(q_up.raw(), q_up.raw(), 0.5, MPFR_RNDU);
  }
  Region r;
  mpfr_get_z(r.dn.get_mpz_t(), q_dn.raw(), MPFR_RNDD);
  mpfr_get_z(r.up.get_mpz_t(), q_up.raw(), MPFR_RNDD);
  return r;
}

bool odd(const mpz_class& z) { return mpz_odd_p(z.get_mpz_t()) != 0; }

// Which parities of boundary index m are certainly crossed, m in (lo_up, hi_dn].
struct Crossings {
  bool odd = false, even = false;
};

Crossings certified(const Region& a, const Region& b) {
  Crossings c;
  mpz_class span = b.dn - a.up;
  if (span >= 2) {
    c.odd = c.even = true;
  } else if (span == 1) {
    (odd(b.dn) ? c.odd : c.even) = true;
  }
  return c;
}

Endpoint eval_at(ScalarOp op, const Endpoint& x, mpfr_prec_t prec, Round dir) {
  Rounded r = detail::unary(op, x.value, prec, dir);
  return ep(std::move(r.value), x.immovable && r.exact);
}

Endpoint choose(Endpoint a, Endpoint b, bool want_min) {
  if (a.value == b.value) return {std::move(a.value), a.immovable || b.immovable};
  bool a_wins = want_min ? a.value < b.value : a.value > b.value;
  return a_wins ? std::move(a) : std::move(b);
}

Endpoint unit(int sign, bool imm, mpfr_prec_t prec) {
  return ep(detail::from_si(sign, prec), imm);
}

bool point_inf(const Interval& x) { return x.is_point() && x.lo.value.is_inf(); }

// Shared shape of sin and cos. `max_on_odd`: crossing boundary m with m
// odd is a maximum (+1); `increasing_on_even`: region parity orientation.
Interval periodic(ScalarOp op, const Interval& x, mpfr_prec_t prec, bool half,
                  bool max_on_odd, bool increasing_on_even) {
  if (x.err.guaranteed || point_inf(x)) return Interval::error();
  ErrorInterval err = detail::possible_of(x);
  const bool both_imm = x.lo.immovable && x.hi.immovable;
  auto ra = region(x.lo.value, half, prec);
  auto rb = region(x.hi.value, half, prec);
  if (!ra || !rb) return Interval{unit(-1, both_imm, prec), unit(1, both_imm, prec), err};
  if (ra->dn == rb->up) {
    bool inc = odd(ra->dn) != increasing_on_even;
    const Endpoint& first = inc ? x.lo : x.hi;
    const Endpoint& second = inc ? x.hi : x.lo;
    return Interval{eval_at(op, first, prec, Round::down), eval_at(op, second, prec, Round::up),
                    err};
  }
  Crossings c = certified(*ra, *rb);
  bool max_cert = both_imm && (max_on_odd ? c.odd : c.even);
  bool min_cert = both_imm && (max_on_odd ? c.even : c.odd);
  if (rb->up - ra->dn == 1) {
    mpz_class m = rb->up;
    bool crossing_is_max = odd(m) == max_on_odd;
    if (crossing_is_max) {
      Endpoint lo = choose(eval_at(op, x.lo, prec, Round::down),
                           eval_at(op, x.hi, prec, Round::down), true);
      return Interval{std::move(lo), unit(1, max_cert, prec), err};
    }
    Endpoint hi = choose(eval_at(op, x.lo, prec, Round::up), eval_at(op, x.hi, prec, Round::up),
                         false);
    return Interval{unit(-1, min_cert, prec), std::move(hi), err};
  }
  return Interval{unit(-1, min_cert, prec), unit(1, max_cert, prec), err};
}

}  // namespace

Interval sin(const Interval& x, mpfr_prec_t prec) {
  return periodic(ScalarOp::sin, x, prec, true, true, true);
}

Interval cos(const Interval& x, mpfr_prec_t prec) {
  return periodic(ScalarOp::cos, x, prec, false, false, false);
}

Interval tan(const Interval& x, mpfr_prec_t prec) {
  if (x.err.guaranteed || point_inf(x)) return Interval::error();
  ErrorInterval err = detail::possible_of(x);
  auto ra = region(x.lo.value, true, prec);
  auto rb = region(x.hi.value, true, prec);
  if (ra && rb && ra->dn == rb->up)
    return Interval{eval_at(ScalarOp::tan, x.lo, prec, Round::down),
                    eval_at(ScalarOp::tan, x.hi, prec, Round::up), err};
  err.possible = true;
  return Interval::entire(prec, err);
}

Interval atan2(const Interval& y, const Interval& x, mpfr_prec_t prec) {
  if (y.err.guaranteed || x.err.guaranteed) return Interval::error();
  ErrorInterval err = detail::possible_of(y, x);
  auto has_zero = [](const Interval& v) {
    return v.lo.value.sign() <= 0 && v.hi.value.sign() >= 0;
  };
  if (has_zero(y) && has_zero(x)) {
    if (y.lo.value.is_zero() && y.hi.value.is_zero() && x.lo.value.is_zero() &&
        x.hi.value.is_zero())
      return Interval::error();
    err.possible = true;
  }
  auto at = [&](const Endpoint& yy, const Endpoint& xx, Round dir) {
    Rounded r = detail::binary(ScalarOp::atan2, yy.value, xx.value, prec, dir);
    return ep(std::move(r.value), yy.immovable && xx.immovable && r.exact);
  };
  auto pi_ep = [&](int sign, Round dir) {
    BigFloat p = detail::pi(prec, sign > 0 ? dir : opposite(dir));
    return ep(sign > 0 ? std::move(p) : p.negated(), false);
  };
  const int yc = detail::strict_class(y);
  if (yc == 1) {
    Endpoint lo = at(x.hi.value.sign() >= 0 ? y.lo : y.hi, x.hi, Round::down);
    Endpoint hi = at(x.lo.value.sign() > 0 ? y.hi : y.lo, x.lo, Round::up);
    return Interval{std::move(lo), std::move(hi), err};
  }
  if (yc == -1) {
    Endpoint lo = at(x.lo.value.sign() >= 0 ? y.lo : y.hi, x.lo, Round::down);
    Endpoint hi = at(x.hi.value.sign() > 0 ? y.hi : y.lo, x.hi, Round::up);
    return Interval{std::move(lo), std::move(hi), err};
  }
  if (x.lo.value.sign() >= 0) {
    Interval r{at(y.lo, x.lo, Round::down), at(y.hi, x.lo, Round::up), err};
    // atan2(0, x) = 0 for every x > 0, so only y's endpoint matters.
    if (x.lo.value.sign() > 0) {
      if (y.lo.value.is_zero() && y.lo.immovable) r.lo.immovable = true;
      if (y.hi.value.is_zero() && y.hi.immovable) r.hi.immovable = true;
    }
    return r;
  }
  // Some x < 0 with y touching 0: the branch cut at pi is reached.
  Endpoint hi = pi_ep(1, Round::up);
  Endpoint lo;
  if (y.lo.value.sign() < 0) {
    lo = pi_ep(-1, Round::down);
  } else if (x.hi.value.sign() > 0) {
    lo = ep(BigFloat::zero(prec), y.lo.immovable && x.hi.immovable);
  } else if (y.hi.value.is_zero()) {
    lo = pi_ep(1, Round::down);
  } else {
    lo = at(y.hi, x.hi, Round::down);
  }
  return Interval{std::move(lo), std::move(hi), err};
}

}  // namespace rivalkit::ops
