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

#include <span>

#include "rivalkit/interval.hpp"

namespace rivalkit::ops {

Interval neg(const Interval& a);
Interval add(const Interval& a, const Interval& b, mpfr_prec_t prec);
Interval sub(const Interval& a, const Interval& b, mpfr_prec_t prec);
Interval mul(const Interval& a, const Interval& b, mpfr_prec_t prec);
Interval div(const Interval& a, const Interval& b, mpfr_prec_t prec);

Interval sqrt(const Interval& x, mpfr_prec_t prec);
Interval cbrt(const Interval& x, mpfr_prec_t prec);
Interval exp(const Interval& x, mpfr_prec_t prec);
Interval exp2(const Interval& x, mpfr_prec_t prec);
Interval log(const Interval& x, mpfr_prec_t prec);
Interval log2(const Interval& x, mpfr_prec_t prec);
Interval pow(const Interval& x, const Interval& y, mpfr_prec_t prec);

Interval sin(const Interval& x, mpfr_prec_t prec);
Interval cos(const Interval& x, mpfr_prec_t prec);
Interval tan(const Interval& x, mpfr_prec_t prec);
Interval asin(const Interval& x, mpfr_prec_t prec);
Interval acos(const Interval& x, mpfr_prec_t prec);
Interval atan(const Interval& x, mpfr_prec_t prec);
Interval atan2(const Interval& y, const Interval& x, mpfr_prec_t prec);

Interval fabs(const Interval& x);
Interval fmod(const Interval& x, const Interval& y, mpfr_prec_t prec);
Interval trunc(const Interval& x, mpfr_prec_t prec);
Interval floor(const Interval& x, mpfr_prec_t prec);
Interval ceil(const Interval& x, mpfr_prec_t prec);

// Interval version of a scalar op.
Interval apply(ScalarOp op, std::span<const Interval> args, mpfr_prec_t prec);

enum class CompareOp { lt, le, gt, ge, eq, ne };
const char* compare_name(CompareOp op);

Condition compare(CompareOp op, const Interval& a, const Interval& b);

// Real-valued conditional. The condition's own error joins the result.
Interval if_merge(const Condition& cond, const Interval& then_v, const Interval& else_v);

}  // namespace rivalkit::ops
