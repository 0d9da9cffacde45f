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

#include <algorithm>
#include <optional>

#include "ops_internal.hpp"

namespace rivalkit::ops {

using detail::ep;

namespace {

// floor(p / q) for p >= 0, q > 0 (either may be infinite), or nullopt if
// it cannot be pinned down. Infinite quotients are reported as nullopt
// too; callers handle them before asking.
std::optional<mpz_class> floor_div(const BigFloat& p, const BigFloat& q, mpfr_prec_t prec) {
  if (p.is_zero() || q.is_inf()) return mpz_class(0);
  mpfr_exp_t ep_ = mpfr_get_exp(p.raw()), eq = mpfr_get_exp(q.raw());
  mpfr_exp_t diff = ep_ - eq;
  if (diff > 4 * prec + 64) return std::nullopt;
  mpfr_prec_t work = std::max<mpfr_prec_t>(prec, diff + 64);
  BigFloat lo(work), hi(work);
  mpfr_div(lo.raw(), p.raw(), q.raw(), MPFR_RNDD);
  mpfr_div(hi.raw(), p.raw(), q.raw(), MPFR_RNDU);
  mpz_class a, b;
  mpfr_get_z(a.get_mpz_t(), lo.raw(), MPFR_RNDD);
  mpfr_get_z(b.get_mpz_t(), hi.raw(), MPFR_RNDD);
  if (a != b) return std::nullopt;
  return a;
}

// ceil(p / q) under the same conventions.
std::optional<mpz_class> ceil_div(const BigFloat& p, const BigFloat& q, mpfr_prec_t prec) {
  if (p.is_zero() || q.is_inf()) return mpz_class(0);
  mpfr_exp_t diff = mpfr_get_exp(p.raw()) - mpfr_get_exp(q.raw());
  if (diff > 4 * prec + 64) return std::nullopt;
  mpfr_prec_t work = std::max<mpfr_prec_t>(prec, diff + 64);
  BigFloat lo(work), hi(work);
  mpfr_div(lo.raw(), p.raw(), q.raw(), MPFR_RNDD);
  mpfr_div(hi.raw(), p.raw(), q.raw(), MPFR_RNDU);
  mpz_class a, b;
  mpfr_get_z(a.get_mpz_t(), lo.raw(), MPFR_RNDU);
  mpfr_get_z(b.get_mpz_t(), hi.raw(), MPFR_RNDU);
  if (a != b) return std::nullopt;
  return a;
}

BigFloat from_mpz(const mpz_class& z) {
  mpfr_prec_t bits = std::max<mpfr_prec_t>(2, static_cast<mpfr_prec_t>(mpz_sizeinbase(z.get_mpz_t(), 2)));
  BigFloat r(bits);
  mpfr_set_z(r.raw(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

// p - k*q rounded in `dir`, with exactness.
Rounded minus_multiple(const BigFloat& p, const mpz_class& k, const BigFloat& q,
                       mpfr_prec_t prec, Round dir) {
  if (k == 0) {
    BigFloat r(prec);
    int t = mpfr_set(r.raw(), p.raw(), to_mpfr(dir));
    return {std::move(r), t == 0};
  }
  BigFloat kb = from_mpz(k);
  // k*q - p with the opposite rounding, then negate.
  BigFloat r(prec);
  int t = mpfr_fms(r.raw(), kb.raw(), q.raw(), p.raw(), to_mpfr(opposite(dir)));
  return {r.negated(), t == 0};
}

// fmod over x = [a, b] with 0 <= a, and y = [c, d] with 0 <= c, 0 < d.
// `all_imm` says every input endpoint is immovable.
Interval fmod_pos(const Endpoint& a, const Endpoint& b, const Endpoint& c, const Endpoint& d,
                  bool all_imm, mpfr_prec_t prec, ErrorInterval err) {
  // Identity region: every x below every y.
  if (b.value < c.value) return Interval{ep(a.value, a.immovable), ep(b.value, b.immovable), err};
  if (b.value.is_inf() || a.value.is_inf()) {
    if (a.value.is_inf()) return Interval::error();
    // Unbounded x wraps along every y.
    return Interval{ep(BigFloat::zero(prec), false), ep(d.value, false), err};
  }
  // Lower bound: zero if some multiple m >= 1 of a y fits in [a, b].
  std::optional<mpz_class> k_a = floor_div(a.value, d.value, prec);
  std::optional<bool> zero_reachable;
  if (a.value.is_zero() || c.value.is_zero()) {
    zero_reachable = true;
  } else if (std::optional<mpz_class> m_lo = ceil_div(a.value, d.value, prec)) {
    mpz_class need = std::max(*m_lo, mpz_class(1));
    if (std::optional<mpz_class> m_hi = floor_div(b.value, c.value, prec)) {
      zero_reachable = need <= *m_hi;
    } else {
      // b/c >= 2^(e-1) where e is the exponent gap.
      mpfr_exp_t gap = mpfr_get_exp(b.value.raw()) - mpfr_get_exp(c.value.raw());
      if (gap > 1 && static_cast<mpfr_exp_t>(mpz_sizeinbase(need.get_mpz_t(), 2)) <= gap - 1)
        zero_reachable = true;
    }
  }
  Endpoint lo = ep(BigFloat::zero(prec), false);
  if (zero_reachable && *zero_reachable) {
    lo = ep(BigFloat::zero(prec), all_imm);
  } else if (zero_reachable && k_a) {
    Rounded r = minus_multiple(a.value, *k_a, d.value, prec, Round::down);
    lo = ep(std::move(r.value), all_imm && r.exact);
  }
  // Upper bound.
  Endpoint hi = ep(min_of(b.value, d.value), false);
  std::optional<mpz_class> k_b = floor_div(b.value, d.value, prec);
  if (k_a && k_b) {
    if (*k_b > *k_a) {
      hi = ep(d.value, all_imm);
    } else {
      const mpz_class& k = *k_b;
      // Does the no-wrap band reach below b/(k+1)?
      mpz_class k1z = k + 1;
      BigFloat k1 = from_mpz(k1z);
      BigFloat prod(std::max(prec, c.value.precision()) +
                    static_cast<mpfr_prec_t>(mpz_sizeinbase(k1z.get_mpz_t(), 2)) + 8);
      if (mpfr_mul(prod.raw(), k1.raw(), c.value.raw(), MPFR_RNDN) == 0) {
        Rounded r = prod <= b.value
                        ? detail::binary(ScalarOp::div, b.value, k1, prec, Round::up)
                        : minus_multiple(b.value, k, c.value, prec, Round::up);
        hi = ep(std::move(r.value), all_imm && r.exact);
      }
    }
  }
  return Interval{std::move(lo), std::move(hi), err};
}

}  // namespace

Interval fmod(const Interval& x, const Interval& y, mpfr_prec_t prec) {
  if (x.err.guaranteed || y.err.guaranteed) return Interval::error();
  if (x.is_point() && x.lo.value.is_inf()) return Interval::error();
  ErrorInterval err = detail::possible_of(x, y);
  Interval ay = fabs(y);
  if (ay.hi.value.is_zero()) return Interval::error();
  if (ay.lo.value.is_zero()) err.possible = true;
  const bool all_imm = x.lo.immovable && x.hi.immovable && y.lo.immovable && y.hi.immovable;
  if (x.lo.value.sign() >= 0)
    return fmod_pos(x.lo, x.hi, ay.lo, ay.hi, all_imm, prec, err);
  if (x.hi.value.sign() <= 0) {
    Interval nx = neg(x);
    return neg(fmod_pos(nx.lo, nx.hi, ay.lo, ay.hi, all_imm, prec, err));
  }
  Endpoint zero = ep(BigFloat::zero(prec), x.lo.immovable && x.hi.immovable);
  Interval pos = fmod_pos(zero, x.hi, ay.lo, ay.hi, all_imm, prec, err);
  Interval negp = neg(fmod_pos(zero, ep(x.lo.value.negated(), x.lo.immovable), ay.lo, ay.hi,
                               all_imm, prec, err));
  return detail::merge_parts(negp, pos, x.lo.immovable && x.hi.immovable);
}

}  // namespace rivalkit::ops
