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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "rivalkit/interval.hpp"

using namespace rivalkit;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Interval iv(double lo, bool lo_imm, double hi, bool hi_imm, ErrorInterval e = {}) {
  return Interval::make(BigFloat(lo, 53), lo_imm, BigFloat(hi, 53), hi_imm, e);
}

// Kleene truth values ordered F < U < T.
int level(const BoolInterval& b) { return b.must ? 2 : (b.may ? 1 : 0); }
BoolInterval from_level(int l) {
  if (l == 2) return BoolInterval::truth(true);
  if (l == 0) return BoolInterval::truth(false);
  return BoolInterval::unknown();
}

}  // namespace

TEST(Kleene, AllNinePairsMatchTheTruthTables) {
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(level(bool_not(from_level(a))), 2 - a);
    for (int b = 0; b < 3; ++b) {
      EXPECT_EQ(level(bool_and(from_level(a), from_level(b))), std::min(a, b)) << a << b;
      EXPECT_EQ(level(bool_or(from_level(a), from_level(b))), std::max(a, b)) << a << b;
      // De Morgan.
      EXPECT_TRUE(bool_not(bool_and(from_level(a), from_level(b)))
                      .same_truth(bool_or(bool_not(from_level(a)), bool_not(from_level(b)))));
    }
  }
}

TEST(Kleene, ImmovableFlagsPropagate) {
  BoolInterval stuck{false, true, true, true};
  EXPECT_TRUE(stuck.is_stuck());
  EXPECT_TRUE(bool_not(stuck).is_stuck());
  // A movable unknown can still resolve, so the conjunction is not stuck.
  EXPECT_FALSE(bool_and(stuck, BoolInterval::unknown()).is_stuck());
  EXPECT_TRUE(bool_and(stuck, BoolInterval::truth(true)).is_stuck());
  EXPECT_TRUE(bool_or(stuck, BoolInterval::truth(false)).is_stuck());
  // A definite false dominates a conjunction regardless of the other side.
  auto f = bool_and(BoolInterval::unknown(), BoolInterval::truth(false));
  EXPECT_TRUE(f.is_false());
  EXPECT_TRUE(f.must_immovable && f.may_immovable);
}

TEST(Kleene, ErrorLift) {
  EXPECT_TRUE(bool_of_error(ErrorInterval::none()).is_false());
  EXPECT_TRUE(bool_of_error(ErrorInterval::certain()).is_true());
  EXPECT_TRUE(bool_of_error(ErrorInterval::maybe()).is_unknown());
  EXPECT_FALSE((ErrorInterval{true, false}.valid()));
}

TEST(Interval, MakePoint) {
  Interval p = make_point(2.5);
  EXPECT_TRUE(p.is_point());
  EXPECT_TRUE(p.lo.immovable && p.hi.immovable);
  EXPECT_EQ(p.err, ErrorInterval::none());
  Interval z = make_point(-0.0);
  EXPECT_TRUE(z.lo.value.identical(BigFloat::zero()));
  EXPECT_THROW(make_point(std::nan("")), std::invalid_argument);
  Interval inf = make_point(kInf);
  EXPECT_TRUE(inf.well_formed());
}

TEST(Interval, ConstantsRefineWithPrecision) {
  Interval lo = make_constant(Constant::pi, 80);
  Interval hi = make_constant(Constant::pi, 800);
  EXPECT_FALSE(lo.lo.immovable || lo.hi.immovable);
  EXPECT_TRUE(refines(hi, lo));
  EXPECT_FALSE(refines(lo, hi));
  EXPECT_LT(lo.lo.value, lo.hi.value);
  EXPECT_TRUE(is_one_value(lo, TargetFormat::binary64()));
  EXPECT_EQ(TargetFormat::binary64().round(lo.lo.value, Round::nearest), M_PI);
  Interval e = make_constant(Constant::e, 80);
  EXPECT_EQ(TargetFormat::binary64().round(e.hi.value, Round::nearest), M_E);
  Interval i = make_constant(Constant::infinity, 80);
  EXPECT_TRUE(i.lo.immovable && i.lo.value.is_inf());
}

TEST(Interval, OneValue) {
  auto t = TargetFormat::binary64();
  EXPECT_TRUE(is_one_value(iv(1, false, 1, false), t));
  EXPECT_FALSE(is_one_value(iv(1, false, 2, false), t));
  EXPECT_FALSE(is_one_value(iv(1, true, 1, true, ErrorInterval::maybe()), t));
  EXPECT_TRUE(is_one_value(iv(kInf, true, kInf, true), t));
}

TEST(Interval, StuckExamples) {
  auto t = TargetFormat::binary64();
  // Immovable endpoints that round apart never converge.
  EXPECT_TRUE(is_stuck(iv(1, true, 2, true), t));
  EXPECT_TRUE(is_stuck(iv(-kInf, true, kInf, true), t));
  EXPECT_FALSE(is_stuck(iv(1, true, 1, true), t));
  EXPECT_FALSE(is_stuck(iv(1, true, 2, false), t));
  EXPECT_FALSE(is_stuck(iv(1, false, 2, false), t));
  // Error flags do not matter once the endpoints are fixed.
  EXPECT_TRUE(is_stuck(iv(1, true, 2, true, ErrorInterval::maybe()), t));
  EXPECT_FALSE(is_stuck(Interval::error(), t));
  // An immovable infinite endpoint only counts in strict mode.
  Interval half = iv(1, false, kInf, true);
  EXPECT_FALSE(is_stuck(half, t));
  EXPECT_TRUE(is_stuck(half, t, StuckMode::strict_finite));
  EXPECT_FALSE(is_stuck(iv(1, false, 1e300, true), t, StuckMode::strict_finite));
}

TEST(Interval, RefinesExamples) {
  EXPECT_TRUE(refines(iv(1, false, 2, false), iv(0, false, 3, false)));
  EXPECT_FALSE(refines(iv(0, false, 3, false), iv(1, false, 2, false)));
  // Immovable endpoints must be preserved exactly.
  EXPECT_TRUE(refines(iv(0, true, 2, false), iv(0, true, 3, false)));
  EXPECT_FALSE(refines(iv(0.5, true, 2, false), iv(0, true, 3, false)));
  EXPECT_FALSE(refines(iv(0, false, 2, false), iv(0, true, 3, false)));
  // Errors may only be sharpened.
  EXPECT_TRUE(refines(iv(1, false, 2, false), iv(0, false, 3, false, ErrorInterval::maybe())));
  EXPECT_FALSE(refines(iv(1, false, 2, false, ErrorInterval::maybe()), iv(0, false, 3, false)));
  EXPECT_TRUE(refines(Interval::error(), iv(0, false, 3, false, ErrorInterval::maybe())));
  EXPECT_FALSE(refines(iv(0, false, 3, false, ErrorInterval::maybe()), Interval::error()));

  EXPECT_TRUE(refines(BoolInterval::truth(true), BoolInterval::unknown()));
  EXPECT_FALSE(refines(BoolInterval::unknown(), BoolInterval::truth(true)));
  BoolInterval pinned{false, true, true, false};  // must fixed at false
  EXPECT_FALSE(refines(BoolInterval::truth(true), pinned));
  EXPECT_TRUE(refines(BoolInterval::truth(false), pinned));
}

TEST(Interval, HullExamples) {
  Interval h = hull(iv(1, true, 2, false), iv(-1, false, 5, true, ErrorInterval::maybe()));
  EXPECT_EQ(h.lo.value.to_double(), -1);
  EXPECT_EQ(h.hi.value.to_double(), 5);
  EXPECT_FALSE(h.lo.immovable);
  EXPECT_FALSE(h.hi.immovable);  // the other side's endpoint may still move past
  EXPECT_TRUE(h.err.possible);
  Interval same = hull(iv(1, true, 2, true), iv(1, true, 2, true));
  EXPECT_TRUE(same.lo.immovable && same.hi.immovable);
  EXPECT_THROW(hull(Interval::error(), iv(0, false, 1, false)), std::invalid_argument);
}

TEST(Interval, Rendering) {
  EXPECT_EQ(render(iv(1, true, 2, false)), "[!1, 2] err none");
  EXPECT_EQ(render(BoolInterval::truth(true)), "[!T, T!]");
  EXPECT_EQ(render(Interval::error()), "[error] err guaranteed");
}
