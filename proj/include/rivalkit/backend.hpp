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

#pragma once

#include <mpfr.h>

#include <optional>
#include <span>
#include <string>

namespace rivalkit {

inline constexpr mpfr_prec_t kDefaultMaxPrecision = 10240;
inline constexpr int kDefaultExponentBits = 31;

enum class Round { down, up, nearest };

mpfr_rnd_t to_mpfr(Round r);
Round opposite(Round r);

// Significand and exponent budget for one evaluation.
struct Precision {
  mpfr_prec_t significand_bits = 80;
  int exponent_bits = kDefaultExponentBits;
};

// Largest exponent allowed by a budget of `bits` bits. Values are
// bounded by 2^emax; the smallest positive value is 2^(emin - 1).
mpfr_exp_t exponent_max(int bits);
mpfr_exp_t exponent_min(int bits);

// Installs the exponent range for the current thread and restores the
// previous one on destruction.
class ExponentScope {
 public:
  explicit ExponentScope(int exponent_bits);
  ~ExponentScope();
  ExponentScope(const ExponentScope&) = delete;
  ExponentScope& operator=(const ExponentScope&) = delete;

 private:
  mpfr_exp_t old_emin_;
  mpfr_exp_t old_emax_;
};

// RAII wrapper around mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 53) { mpfr_init2(v_, prec); }
  BigFloat(double x, mpfr_prec_t prec);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat infinity(int sign, mpfr_prec_t prec = 53);
  static BigFloat zero(mpfr_prec_t prec = 53);
  static BigFloat nan(mpfr_prec_t prec = 53);
  // Parses decimal or hex text, rounding in direction `r`.
  static BigFloat parse(const std::string& text, mpfr_prec_t prec,
                        Round r = Round::nearest);

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  // -1, 0 or 1; NaN reports 0.
  int sign() const { return is_nan() ? 0 : mpfr_sgn(v_); }

  double to_double(Round r = Round::nearest) const;
  float to_float(Round r = Round::nearest) const;
  std::string to_string(int digits = 17) const;

  // Exact, never rounds.
  BigFloat negated() const;

  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) {
    return !(a == b);
  }
  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
  }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) {
    return mpfr_lessequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return b <= a; }

  // Same value and same sign of zero; NaN equals NaN.
  bool identical(const BigFloat& o) const;

 private:
  mpfr_t v_;
};

const BigFloat& min_of(const BigFloat& a, const BigFloat& b);
const BigFloat& max_of(const BigFloat& a, const BigFloat& b);

enum class ScalarOp {
  add, sub, mul, div, neg,
  sqrt, cbrt, exp, exp2, log, log2, pow,
  sin, cos, tan, asin, acos, atan, atan2,
  fabs, fmod, trunc, floor, ceil
};

int arity(ScalarOp op);
const char* op_name(ScalarOp op);
std::optional<ScalarOp> op_from_name(const std::string& name);

struct Rounded {
  BigFloat value;
  bool exact = false;
};

// Correctly rounded f(args) at `bits` in direction `dir` with no domain
// checks. Infinite arguments follow MPFR limit conventions; the result
// may be NaN.
Rounded apply_raw(ScalarOp op, std::span<const BigFloat> args,
                  mpfr_prec_t bits, Round dir);

// Whether f is defined at the (finite or infinite) arguments.
bool in_domain(ScalarOp op, std::span<const BigFloat> args);

// R_prec^dir(f(args)). std::nullopt signals a domain violation.
std::optional<Rounded> rounded_op(ScalarOp op, std::span<const BigFloat> args,
                                  Precision prec, Round dir);

enum class ThresholdKind { exp, exp2 };

// x >= threshold overflows exp/exp2 at every precision.
BigFloat overflow_threshold(ThresholdKind kind, int exponent_bits);
// x < threshold underflows exp/exp2 to zero (rounding down) at every
// precision, and rounding up gives the smallest positive value.
BigFloat underflow_threshold(ThresholdKind kind, int exponent_bits);

}  // namespace rivalkit
