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

#include "fuzz_support.hpp"

using namespace rivalkit;
using namespace rivalkit::fuzz;

namespace {

void expect_clean(const FuzzReport& r) {
  EXPECT_EQ(r.violations, 0);
  for (const auto& e : r.examples) ADD_FAILURE() << e;
}

}  // namespace

// The exact result at any point of the inputs lies inside the output.
TEST(Properties, OpSoundness) {
  FuzzReport r = op_soundness(20240601, 100000);
  expect_clean(r);
  EXPECT_GT(r.checked, 50000);
}

TEST(Properties, ExpressionSoundness) {
  FuzzReport r = expr_soundness(4242, 20000);
  expect_clean(r);
  EXPECT_GT(r.checked, 15000);
}

// Hull of the results on 8 sub-intervals per argument matches the
// undivided result to within one ulp.
TEST(Properties, WeakCompleteness) {
  FuzzReport r = op_weak_completeness(77, 10000);
  expect_clean(r);
  EXPECT_GT(r.checked, 5000);
}

// Outputs at 2p on refined inputs refine outputs at p; immovable
// endpoints are bitwise stable; error flags only sharpen.
TEST(Properties, Movability) {
  expect_clean(op_movability(31337, 100000));
}

// Comparisons respect refinement and are sound at points.
TEST(Properties, ComparisonMovability) {
  std::mt19937_64 rng(5);
  const ops::CompareOp cmps[] = {ops::CompareOp::lt, ops::CompareOp::le, ops::CompareOp::gt,
                                 ops::CompareOp::ge, ops::CompareOp::eq, ops::CompareOp::ne};
  for (int trial = 0; trial < 20000; ++trial) {
    Interval x = random_interval(rng), y = random_interval(rng);
    auto op = cmps[trial % 6];
    Condition c = ops::compare(op, x, y);
    Condition d = ops::compare(op, shrink(x, rng), shrink(y, rng));
    ASSERT_TRUE(refines(d.value, c.value))
        << compare_name(op) << " " << render(x) << " " << render(y) << " " << render(c.value)
        << " vs " << render(d.value);
    BigFloat u = random_member(x, rng), v = random_member(y, rng);
    int s = mpfr_cmp(u.raw(), v.raw());
    bool truth = op == ops::CompareOp::lt   ? s < 0
                 : op == ops::CompareOp::le ? s <= 0
                 : op == ops::CompareOp::gt ? s > 0
                 : op == ops::CompareOp::ge ? s >= 0
                 : op == ops::CompareOp::eq ? s == 0
                                            : s != 0;
    if (truth) EXPECT_TRUE(c.value.may);
    else EXPECT_FALSE(c.value.must);
  }
}

// Sine near multiples of pi at low precision: the reduction must never
// use a rounded-to-nearest pi.
TEST(Properties, SineNearPiRegression) {
  std::mt19937_64 rng(1);
  for (int k = 1; k < 2000; ++k) {
    BigFloat kpi(200);
    mpfr_const_pi(kpi.raw(), MPFR_RNDN);
    mpfr_mul_si(kpi.raw(), kpi.raw(), k, MPFR_RNDN);
    double near = kpi.to_double(rng() % 2 ? Round::up : Round::down);
    mpfr_prec_t p = 24 + static_cast<mpfr_prec_t>(rng() % 40);
    Interval out = ops::sin(make_point(near), p);
    BigFloat ref(4 * p + 200);
    BigFloat x(near, 53);
    mpfr_sin(ref.raw(), x.raw(), MPFR_RNDN);
    ASSERT_LE(out.lo.value, ref) << k << " " << p;
    ASSERT_GE(out.hi.value, ref) << k << " " << p;
  }
}

// pow via exp(y log x): an underflow to zero is immovable.
TEST(Properties, PowUnderflowIsImmovable) {
  Interval r = ops::pow(make_point(0.5), make_point(1e10), 80);
  EXPECT_TRUE(r.lo.value.is_zero());
  EXPECT_TRUE(r.lo.immovable);
  Interval s = ops::pow(make_point(0.5), make_point(1e10), 160);
  EXPECT_TRUE(refines(s, r));
}
