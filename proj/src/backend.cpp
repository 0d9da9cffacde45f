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

#include "rivalkit/backend.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace rivalkit {

mpfr_rnd_t to_mpfr(Round r) {
  switch (r) {
    case Round::down: return MPFR_RNDD;
    case Round::up: return MPFR_RNDU;
    case Round::nearest: return MPFR_RNDN;
  }
  return MPFR_RNDN;
}

Round opposite(Round r) {
  if (r == Round::down) return Round::up;
  if (r == Round::up) return Round::down;
  return r;
}

mpfr_exp_t exponent_max(int bits) {
  if (bits < 2 || bits > 62) throw std::invalid_argument("exponent bits out of range");
  mpfr_exp_t e = (mpfr_exp_t{1} << (bits - 1)) - 1;
  if (e > mpfr_get_emax_max()) e = mpfr_get_emax_max();
  return e;
}

mpfr_exp_t exponent_min(int bits) {
  mpfr_exp_t e = -exponent_max(bits);
  if (e < mpfr_get_emin_min()) e = mpfr_get_emin_min();
  return e;
}

ExponentScope::ExponentScope(int exponent_bits)
    : old_emin_(mpfr_get_emin()), old_emax_(mpfr_get_emax()) {
  mpfr_set_emin(exponent_min(exponent_bits));
  mpfr_set_emax(exponent_max(exponent_bits));
}

ExponentScope::~ExponentScope() {
  mpfr_set_emin(old_emin_);
  mpfr_set_emax(old_emax_);
}

BigFloat::BigFloat(double x, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat BigFloat::infinity(int sign, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_inf(r.v_, sign < 0 ? -1 : 1);
  return r;
}

BigFloat BigFloat::zero(mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_zero(r.v_, 1);
  return r;
}

BigFloat BigFloat::nan(mpfr_prec_t prec) { return BigFloat(prec); }

BigFloat BigFloat::parse(const std::string& text, mpfr_prec_t prec, Round r) {
  BigFloat out(prec);
  char* end = nullptr;
  mpfr_strtofr(out.v_, text.c_str(), &end, 0, to_mpfr(r));
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("malformed number: " + text);
  return out;
}

double BigFloat::to_double(Round r) const { return mpfr_get_d(v_, to_mpfr(r)); }

float BigFloat::to_float(Round r) const { return mpfr_get_flt(v_, to_mpfr(r)); }

std::string BigFloat::to_string(int digits) const {
  if (is_nan()) return "nan";
  if (is_inf()) return sign() > 0 ? "+inf" : "-inf";
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return buf.data();
}

BigFloat BigFloat::negated() const {
  BigFloat r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

bool BigFloat::identical(const BigFloat& o) const {
  if (is_nan() || o.is_nan()) return is_nan() && o.is_nan();
  return mpfr_equal_p(v_, o.v_) && mpfr_signbit(v_) == mpfr_signbit(o.v_);
}

const BigFloat& min_of(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }
const BigFloat& max_of(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

namespace {

struct OpInfo {
  ScalarOp op;
  const char* name;
  int arity;
};

constexpr std::array<OpInfo, 24> kOps = {{
    {ScalarOp::add, "+", 2},      {ScalarOp::sub, "-", 2},
    {ScalarOp::mul, "*", 2},      {ScalarOp::div, "/", 2},
    {ScalarOp::neg, "neg", 1},    {ScalarOp::sqrt, "sqrt", 1},
    {ScalarOp::cbrt, "cbrt", 1},  {ScalarOp::exp, "exp", 1},
    {ScalarOp::exp2, "exp2", 1},  {ScalarOp::log, "log", 1},
    {ScalarOp::log2, "log2", 1},  {ScalarOp::pow, "pow", 2},
    {ScalarOp::sin, "sin", 1},    {ScalarOp::cos, "cos", 1},
    {ScalarOp::tan, "tan", 1},    {ScalarOp::asin, "asin", 1},
    {ScalarOp::acos, "acos", 1},  {ScalarOp::atan, "atan", 1},
    {ScalarOp::atan2, "atan2", 2}, {ScalarOp::fabs, "fabs", 1},
    {ScalarOp::fmod, "fmod", 2},  {ScalarOp::trunc, "trunc", 1},
    {ScalarOp::floor, "floor", 1}, {ScalarOp::ceil, "ceil", 1},
}};

const OpInfo& info(ScalarOp op) { return kOps[static_cast<size_t>(op)]; }

}  // namespace

int arity(ScalarOp op) { return info(op).arity; }
const char* op_name(ScalarOp op) { return info(op).name; }

std::optional<ScalarOp> op_from_name(const std::string& name) {
  for (const auto& o : kOps)
    if (name == o.name) return o.op;
  return std::nullopt;
}

namespace {
Rounded compute(ScalarOp op, std::span<const BigFloat> args, mpfr_prec_t bits, mpfr_rnd_t rnd);
}  // namespace

Rounded apply_raw(ScalarOp op, std::span<const BigFloat> args,
                  mpfr_prec_t bits, Round dir) {
  if (static_cast<int>(args.size()) != arity(op))
    throw std::invalid_argument(std::string("wrong arity for ") + op_name(op));
  return compute(op, args, bits, to_mpfr(dir));
}

namespace {

Rounded compute(ScalarOp op, std::span<const BigFloat> args, mpfr_prec_t bits, mpfr_rnd_t rnd) {
  BigFloat r(bits);
  mpfr_ptr o = r.raw();
  mpfr_srcptr a = args[0].raw();
  mpfr_srcptr b = args.size() > 1 ? args[1].raw() : nullptr;
  int t = 0;
  switch (op) {
    case ScalarOp::add: t = mpfr_add(o, a, b, rnd); break;
    case ScalarOp::sub: t = mpfr_sub(o, a, b, rnd); break;
    case ScalarOp::mul: t = mpfr_mul(o, a, b, rnd); break;
    case ScalarOp::div: t = mpfr_div(o, a, b, rnd); break;
    case ScalarOp::neg: t = mpfr_neg(o, a, rnd); break;
    case ScalarOp::sqrt: t = mpfr_sqrt(o, a, rnd); break;
    case ScalarOp::cbrt: t = mpfr_cbrt(o, a, rnd); break;
    case ScalarOp::exp: t = mpfr_exp(o, a, rnd); break;
    case ScalarOp::exp2: t = mpfr_exp2(o, a, rnd); break;
    case ScalarOp::log: t = mpfr_log(o, a, rnd); break;
    case ScalarOp::log2: t = mpfr_log2(o, a, rnd); break;
    case ScalarOp::pow: t = mpfr_pow(o, a, b, rnd); break;
    case ScalarOp::sin: t = mpfr_sin(o, a, rnd); break;
    case ScalarOp::cos: t = mpfr_cos(o, a, rnd); break;
    case ScalarOp::tan: t = mpfr_tan(o, a, rnd); break;
    case ScalarOp::asin: t = mpfr_asin(o, a, rnd); break;
    case ScalarOp::acos: t = mpfr_acos(o, a, rnd); break;
    case ScalarOp::atan: t = mpfr_atan(o, a, rnd); break;
    case ScalarOp::atan2: t = mpfr_atan2(o, a, b, rnd); break;
    case ScalarOp::fabs: t = mpfr_abs(o, a, rnd); break;
    case ScalarOp::fmod: t = mpfr_fmod(o, a, b, rnd); break;
    case ScalarOp::trunc: t = mpfr_rint_trunc(o, a, rnd); break;
    case ScalarOp::floor: t = mpfr_rint_floor(o, a, rnd); break;
    case ScalarOp::ceil: t = mpfr_rint_ceil(o, a, rnd); break;
  }
  // Read the flag before `r` is moved from.
  const bool exact = t == 0 && !mpfr_nan_p(o);
  return {std::move(r), exact};
}

}  // namespace

bool in_domain(ScalarOp op, std::span<const BigFloat> args) {
  for (const auto& a : args)
    if (a.is_nan()) return false;
  const BigFloat& x = args[0];
  switch (op) {
    case ScalarOp::add:
      return !(x.is_inf() && args[1].is_inf() && x.sign() != args[1].sign());
    case ScalarOp::sub:
      return !(x.is_inf() && args[1].is_inf() && x.sign() == args[1].sign());
    case ScalarOp::mul:
      return !((x.is_zero() && args[1].is_inf()) ||
               (x.is_inf() && args[1].is_zero()));
    case ScalarOp::div:
      return !args[1].is_zero() && !(x.is_inf() && args[1].is_inf());
    case ScalarOp::sqrt: return x.sign() >= 0;
    case ScalarOp::log:
    case ScalarOp::log2: return x.sign() > 0;
    case ScalarOp::pow: {
      const BigFloat& y = args[1];
      if (x.is_zero()) return y.sign() > 0;
      if (x.sign() < 0) return y.is_integer();
      return true;
    }
    case ScalarOp::sin:
    case ScalarOp::cos:
    case ScalarOp::tan: return x.is_finite();
    case ScalarOp::asin:
    case ScalarOp::acos:
      return mpfr_cmp_si(x.raw(), -1) >= 0 && mpfr_cmp_si(x.raw(), 1) <= 0;
    case ScalarOp::atan2: return !(x.is_zero() && args[1].is_zero());
    case ScalarOp::fmod: return x.is_finite() && !args[1].is_zero();
    default: return true;
  }
}

std::optional<Rounded> rounded_op(ScalarOp op, std::span<const BigFloat> args,
                                  Precision prec, Round dir) {
  if (static_cast<int>(args.size()) != arity(op))
    throw std::invalid_argument(std::string("wrong arity for ") + op_name(op));
  if (!in_domain(op, args)) return std::nullopt;
  ExponentScope scope(prec.exponent_bits);
  std::vector<BigFloat> in;
  in.reserve(args.size());
  for (const auto& a : args) {
    BigFloat c(a.precision());
    mpfr_set(c.raw(), a.raw(), MPFR_RNDN);
    mpfr_check_range(c.raw(), 0, MPFR_RNDN);
    in.push_back(std::move(c));
  }
  if (op == ScalarOp::pow && in[0].sign() < 0 && !in[0].is_inf()) {
    // Parity-based sign for negative bases, computed on |x| so that the
    // exactness flag comes from the magnitude.
    BigFloat half(in[1].precision());
    mpfr_div_2ui(half.raw(), in[1].raw(), 1, MPFR_RNDN);
    bool odd = !half.is_integer();
    BigFloat ax = in[0].negated();
    std::array<BigFloat, 2> mag{ax, in[1]};
    Rounded r = apply_raw(ScalarOp::pow, mag, prec.significand_bits,
                          odd ? opposite(dir) : dir);
    if (odd) r.value = r.value.negated();
    return r;
  }
  Rounded r = apply_raw(op, in, prec.significand_bits, dir);
  if (r.value.is_nan()) return std::nullopt;
  return r;
}

BigFloat overflow_threshold(ThresholdKind kind, int exponent_bits) {
  const mpfr_exp_t emax = exponent_max(exponent_bits);
  BigFloat t(80);
  if (kind == ThresholdKind::exp2) {
    mpfr_set_si(t.raw(), static_cast<long>(emax), MPFR_RNDU);
    return t;
  }
  // One upward rounding to 80 bits from a wide product.
  BigFloat ln2(200), wide(200);
  mpfr_const_log2(ln2.raw(), MPFR_RNDU);
  mpfr_mul_si(wide.raw(), ln2.raw(), static_cast<long>(emax), MPFR_RNDU);
  mpfr_set(t.raw(), wide.raw(), MPFR_RNDU);
  return t;
}

BigFloat underflow_threshold(ThresholdKind kind, int exponent_bits) {
  const mpfr_exp_t emin = exponent_min(exponent_bits);
  BigFloat t(80);
  if (kind == ThresholdKind::exp2) {
    mpfr_set_si(t.raw(), static_cast<long>(emin - 1), MPFR_RNDD);
    return t;
  }
  BigFloat ln2(200), wide(200);
  mpfr_const_log2(ln2.raw(), MPFR_RNDU);
  mpfr_mul_si(wide.raw(), ln2.raw(), static_cast<long>(emin - 1), MPFR_RNDD);
  mpfr_set(t.raw(), wide.raw(), MPFR_RNDD);
  return t;
}

}  // namespace rivalkit
