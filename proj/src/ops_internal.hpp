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

#include <array>

#include "rivalkit/ops.hpp"

namespace rivalkit::ops::detail {

// Zeros are stored as +0 in every interval endpoint.
inline BigFloat canon(BigFloat v) {
  if (v.is_zero()) mpfr_set_zero(v.raw(), 1);
  return v;
}

inline Endpoint ep(BigFloat v, bool imm) { return Endpoint{canon(std::move(v)), imm}; }

// Sign class: 1 if every member is > 0, -1 if every member is < 0, else 0.
inline int strict_class(const Interval& x) {
  if (x.lo.value.sign() > 0) return 1;
  if (x.hi.value.sign() < 0) return -1;
  return 0;
}

// Sign class counting a zero endpoint as the sign of the rest.
inline int loose_class(const Interval& x) {
  if (x.lo.value.sign() >= 0) return 1;
  if (x.hi.value.sign() <= 0) return -1;
  return 0;
}

inline ErrorInterval possible_of(const Interval& a) { return {false, a.err.possible}; }
inline ErrorInterval possible_of(const Interval& a, const Interval& b) {
  return {false, a.err.possible || b.err.possible};
}

template <typename F>
Rounded round_with(mpfr_prec_t prec, Round dir, F&& f) {
  BigFloat r(prec);
  int t = f(r.raw(), to_mpfr(dir));
  bool exact = t == 0 && !r.is_nan();
  return {std::move(r), exact};
}

inline Rounded unary(ScalarOp op, const BigFloat& x, mpfr_prec_t prec, Round dir) {
  std::array<BigFloat, 1> a{x};
  return apply_raw(op, a, prec, dir);
}

inline Rounded binary(ScalarOp op, const BigFloat& x, const BigFloat& y,
                      mpfr_prec_t prec, Round dir) {
  std::array<BigFloat, 2> a{x, y};
  return apply_raw(op, a, prec, dir);
}

inline BigFloat pi(mpfr_prec_t prec, Round dir) {
  BigFloat r(prec);
  mpfr_const_pi(r.raw(), to_mpfr(dir));
  return r;
}

inline BigFloat from_si(long v, mpfr_prec_t prec = 64) {
  BigFloat r(prec);
  mpfr_set_si(r.raw(), v, MPFR_RNDN);
  return r;
}

// Hull of two partial results of one op; immovability is kept only when
// `fixed_split` says both parts exist at every refinement.
Interval merge_parts(const Interval& a, const Interval& b, bool fixed_split);

}  // namespace rivalkit::ops::detail
