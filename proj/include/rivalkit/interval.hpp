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

#include <string>
#include <variant>

#include "rivalkit/backend.hpp"
#include "rivalkit/target.hpp"

namespace rivalkit {

struct Endpoint {
  BigFloat value;
  bool immovable = false;
};

// (guaranteed, possible): whether a domain error must / may occur.
struct ErrorInterval {
  bool guaranteed = false;
  bool possible = false;

  static ErrorInterval none() { return {false, false}; }
  static ErrorInterval maybe() { return {false, true}; }
  static ErrorInterval certain() { return {true, true}; }

  bool valid() const { return !guaranteed || possible; }
  friend bool operator==(const ErrorInterval&, const ErrorInterval&) = default;
};

// Combined error of independent sub-computations that all happen.
ErrorInterval join_errors(const ErrorInterval& a, const ErrorInterval& b);

// Three-valued truth [must, may]. The immovable flags record whether the
// bound can no longer change at higher precision.
struct BoolInterval {
  bool must = false;
  bool may = true;
  bool must_immovable = false;
  bool may_immovable = false;

  static BoolInterval truth(bool v) { return {v, v, true, true}; }
  static BoolInterval unknown() { return {false, true, false, false}; }

  bool is_true() const { return must; }
  bool is_false() const { return !may; }
  bool is_unknown() const { return !must && may; }
  bool valid() const { return !must || may; }
  // Indeterminate now and at every higher precision.
  bool is_stuck() const { return is_unknown() && must_immovable && may_immovable; }

  bool same_truth(const BoolInterval& o) const { return must == o.must && may == o.may; }
  friend bool operator==(const BoolInterval&, const BoolInterval&) = default;
};

BoolInterval bool_and(const BoolInterval& a, const BoolInterval& b);
BoolInterval bool_or(const BoolInterval& a, const BoolInterval& b);
BoolInterval bool_not(const BoolInterval& a);
// Lifts an error interval into a truth value: [guaranteed, possible].
BoolInterval bool_of_error(const ErrorInterval& e);

// A boolean-valued result with the errors met while computing it.
struct Condition {
  BoolInterval value;
  ErrorInterval err;
};

struct Interval {
  Endpoint lo;
  Endpoint hi;
  ErrorInterval err;

  // Canonical guaranteed-error value: lo = +inf, hi = -inf, movable.
  static Interval error();
  static Interval make(BigFloat lo, bool lo_imm, BigFloat hi, bool hi_imm,
                       ErrorInterval err = {});
  // Whole extended line, movable.
  static Interval entire(mpfr_prec_t prec, ErrorInterval err = {});

  bool is_error() const { return err.guaranteed; }
  bool is_point() const { return !err.guaranteed && lo.value == hi.value; }
  // Structural sanity: no NaN, ordered endpoints, consistent error.
  bool well_formed() const;
};

using Value = std::variant<Interval, Condition>;

Interval make_point(double x);
Interval make_point(const BigFloat& x);

enum class Constant { pi, e, infinity };
Interval make_constant(Constant c, mpfr_prec_t prec);

bool is_one_value(const Interval& iv, const TargetFormat& target);

enum class StuckMode { standard, strict_finite };
bool is_stuck(const Interval& iv, const TargetFormat& target,
              StuckMode mode = StuckMode::standard);

// narrow ≺ wide.
bool refines(const Interval& narrow, const Interval& wide);
bool refines(const BoolInterval& narrow, const BoolInterval& wide);

Interval hull(const Interval& a, const Interval& b);

std::string render(const Interval& iv, int digits = 17);
std::string render(const BoolInterval& b);
std::string render(const ErrorInterval& e);

}  // namespace rivalkit
