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

#include <cfloat>
#include <cmath>
#include <limits>

#include "rivalkit/ops.hpp"

using namespace rivalkit;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
constexpr mpfr_prec_t P = 80;

Interval iv(double lo, bool lo_imm, double hi, bool hi_imm, ErrorInterval e = {}) {
  return Interval::make(BigFloat(lo, 53), lo_imm, BigFloat(hi, 53), hi_imm, e);
}
Interval mv(double lo, double hi) { return iv(lo, false, hi, false); }
Interval fx(double lo, double hi) { return iv(lo, true, hi, true); }

double lo(const Interval& i) { return i.lo.value.to_double(); }
double hi(const Interval& i) { return i.hi.value.to_double(); }

void expect_bounds(const Interval& r, double l, bool l_imm, double h, bool h_imm) {
  EXPECT_EQ(lo(r), l) << render(r);
  EXPECT_EQ(hi(r), h) << render(r);
  EXPECT_EQ(r.lo.immovable, l_imm) << render(r);
  EXPECT_EQ(r.hi.immovable, h_imm) << render(r);
}

// exact f(x) bracket at `bits`
std::pair<double, double> bracket(int (*f)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), double x,
                                  mpfr_prec_t bits) {
  BigFloat a(bits), b(bits), in(x, 53);
  f(a.raw(), in.raw(), MPFR_RNDD);
  f(b.raw(), in.raw(), MPFR_RNDU);
  return {a.to_double(Round::down), b.to_double(Round::up)};
}

}  // namespace

TEST(Add, ImmovableInfinityAbsorbs) {
  expect_bounds(ops::add(iv(1, false, kInf, true), mv(1, 2), P), 2, false, kInf, true);
}

TEST(Add, ExactDyadicSumsStayImmovable) {
  expect_bounds(ops::add(fx(1, 2), fx(3, 4), P), 4, true, 6, true);
}

TEST(Add, InexactResultsAreMovable) {
  Interval r = ops::add(fx(1, 2), make_constant(Constant::pi, P), P);
  EXPECT_FALSE(r.lo.immovable);
  EXPECT_FALSE(r.hi.immovable);
}

TEST(Add, OppositeInfinitiesAreAnError) {
  Interval r = ops::add(fx(kInf, kInf), fx(-kInf, -kInf), P);
  EXPECT_TRUE(r.err.guaranteed);
  // A point infinity meets -inf at one corner only.
  Interval s = ops::add(fx(kInf, kInf), iv(-kInf, true, 0, false), P);
  EXPECT_TRUE(s.err.possible);
  EXPECT_FALSE(s.err.guaranteed);
  // Infinite endpoints of wider intervals bound overflowed reals.
  Interval u = ops::add(iv(0, false, kInf, true), iv(-kInf, true, 0, false), P);
  EXPECT_FALSE(u.err.possible);
}

TEST(Sub, MatchesAddOfNegation) {
  Interval r = ops::sub(fx(5, 6), mv(1, 2), P);
  expect_bounds(r, 3, false, 5, false);
  expect_bounds(ops::neg(iv(1, true, 2, false)), -2, false, -1, true);
}

TEST(Mul, InfiniteWitnessAcrossZeroIsMovable) {
  Interval r = ops::mul(mv(-1, 1), iv(1, true, kInf, true), P);
  expect_bounds(r, -kInf, false, kInf, false);
}

TEST(Mul, ImmovableZeroAbsorbs) {
  expect_bounds(ops::mul(fx(0, 0), mv(5, 9), P), 0, true, 0, true);
}

TEST(Mul, ExactProductOfImmovablesIsImmovable) {
  Interval a = iv(2, true, 3, false), b = iv(4, true, 5, false);
  Interval r = ops::mul(a, b, P);
  expect_bounds(r, 8, true, 15, false);
  // Refinement at twice the precision keeps the immovable endpoint.
  Interval r2 = ops::mul(a, b, 2 * P);
  EXPECT_TRUE(refines(r2, r));
  EXPECT_TRUE(r2.lo.value.identical(r.lo.value));
}

TEST(Mul, ZeroTimesInfinityIsPossibleError) {
  Interval r = ops::mul(fx(0, 1), fx(kInf, kInf), P);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(ops::mul(fx(0, 1), fx(1, kInf), P).err.possible);
  EXPECT_FALSE(r.err.guaranteed);
  EXPECT_TRUE(ops::mul(fx(0, 0), fx(kInf, kInf), P).err.guaranteed);
}

TEST(Div, DenominatorStraddlingZero) {
  Interval r = ops::div(mv(1, 1), mv(-1, 1), P);
  EXPECT_EQ(lo(r), -kInf);
  EXPECT_EQ(hi(r), kInf);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(r.err.guaranteed);
  // Brute force over denominators in [-1,1] \ {0}: quotients reach both signs
  // with unbounded magnitude, so no smaller hull is sound.
  double mn = kInf, mx = -kInf;
  for (int i = -1000; i <= 1000; ++i) {
    if (i == 0) continue;
    double q = 1.0 / (i / 1000.0);
    mn = std::min(mn, q);
    mx = std::max(mx, q);
  }
  EXPECT_LE(lo(r), mn);
  EXPECT_GE(hi(r), mx);
}

TEST(Div, ExactDyadicQuotient) {
  expect_bounds(ops::div(mv(1, 2), mv(4, 8), P), 0.125, false, 0.5, false);
  expect_bounds(ops::div(fx(1, 2), fx(4, 8), P), 0.125, true, 0.5, true);
  EXPECT_TRUE(ops::div(mv(1, 2), fx(0, 0), P).err.guaranteed);
}

TEST(Div, HugeOverHugeIsWide) {
  // Both operands overflowed to an immovable infinity: the quotient is [0, inf].
  Interval r = ops::div(iv(DBL_MAX, false, kInf, true), iv(DBL_MAX / 2, false, kInf, true), P);
  EXPECT_LE(lo(r), 1.0);
  EXPECT_EQ(hi(r), kInf);
  EXPECT_FALSE(is_one_value(r, TargetFormat::binary64()));
}

TEST(Exp, OverflowThresholdMakesInfinityImmovable) {
  Interval r = ops::exp(iv(0, false, 1e10, true), P);
  expect_bounds(r, 1, false, kInf, true);
  // Whole input side past the threshold, even with movable endpoints. The
  // left endpoint is the largest finite value, which grows with precision.
  Interval s = ops::exp(mv(1e10, 1e11), P);
  EXPECT_TRUE(s.lo.value.is_finite());
  EXPECT_FALSE(s.lo.immovable);
  EXPECT_TRUE(s.hi.value.is_inf() && s.hi.immovable);
  EXPECT_TRUE(refines(ops::exp(mv(1e10, 1e11), 2 * P), s));
  Interval t = ops::exp(fx(0, 0), P);
  expect_bounds(t, 1, true, 1, true);
}

TEST(Exp, UnderflowIsImmovableZero) {
  Interval r = ops::exp(mv(-1e11, -1e10), P);
  EXPECT_EQ(lo(r), 0);
  EXPECT_TRUE(r.lo.immovable);
  Interval e2 = ops::exp2(mv(-1e11, -1e10), P);
  EXPECT_TRUE(e2.lo.immovable && e2.lo.value.is_zero());
}

TEST(Sqrt, ExactAndInexactEndpoints) {
  expect_bounds(ops::sqrt(iv(0, false, 4, true), P), 0, false, 2, true);
  Interval r = ops::sqrt(iv(0, false, 2, true), P);
  EXPECT_FALSE(r.hi.immovable);
  auto [l, h] = bracket(mpfr_sqrt, 2, P);
  EXPECT_LE(hi(r), h);
  EXPECT_GE(hi(r), l);
}

TEST(Sqrt, DomainClipping) {
  Interval r = ops::sqrt(mv(-4, 4), P);
  EXPECT_EQ(lo(r), 0);
  EXPECT_EQ(hi(r), 2);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(r.err.guaranteed);
  EXPECT_TRUE(ops::sqrt(mv(-4, -1), P).err.guaranteed);
  EXPECT_TRUE(ops::log(mv(-4, 0), P).err.guaranteed);
  EXPECT_TRUE(ops::log(mv(0, 1), P).err.possible);
}

TEST(Pow, NegativeBaseMixedExponents) {
  Interval r = ops::pow(mv(-1, 2), mv(1, 5), P);
  EXPECT_EQ(lo(r), -1);
  EXPECT_EQ(hi(r), 32);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(r.err.guaranteed);
}

TEST(Pow, ExactIntegerPower) {
  expect_bounds(ops::pow(fx(2, 2), fx(3, 3), P), 8, true, 8, true);
}

TEST(Pow, NegativeBaseNonIntegerOnlyIsGuaranteedError) {
  EXPECT_TRUE(ops::pow(mv(-3, -2), fx(0.5, 0.5), P).err.guaranteed);
  EXPECT_TRUE(ops::pow(fx(0, 0), mv(-2, -1), P).err.guaranteed);
}

TEST(Pow, DenominatorResolvesWithPrecision) {
  // (-1.1)^7 + 2 = 2 - 1.9487171 = 0.0512829; enough precision proves it positive.
  Interval x = make_point(-1.1), y = fx(7, 7);
  bool positive = false;
  for (mpfr_prec_t p = 4; p <= 80 && !positive; p *= 2) {
    Interval d = ops::add(ops::pow(x, y, p), fx(2, 2), p);
    positive = d.lo.value.sign() > 0;
  }
  EXPECT_TRUE(positive);
  Interval d = ops::add(ops::pow(x, y, 53), fx(2, 2), 53);
  EXPECT_NEAR(lo(d), 0.0512829, 1e-7);
}

TEST(Trig, CosineMinimumIsExact) {
  Interval r = ops::cos(fx(3, 4), P);
  EXPECT_EQ(lo(r), -1);
  EXPECT_TRUE(r.lo.immovable);
  EXPECT_FALSE(r.hi.immovable);
  auto [l, h] = bracket(mpfr_cos, 4, P);
  EXPECT_GE(hi(r), l);
  EXPECT_LE(hi(r), h + std::abs(h) * 1e-15);
  EXPECT_LT(hi(r), 0);  // cos(4) is negative
}

TEST(Trig, FullPeriodGivesUnitRange) {
  Interval r = ops::sin(mv(0, 10), P);
  EXPECT_EQ(lo(r), -1);
  EXPECT_EQ(hi(r), 1);
  Interval t = ops::tan(mv(1, 2), P);
  EXPECT_EQ(lo(t), -kInf);
  EXPECT_EQ(hi(t), kInf);
  EXPECT_TRUE(t.err.possible);
}

TEST(Trig, HugeArgumentNeedsPrecision) {
  auto t = TargetFormat::binary64();
  Interval x = make_point(1e300);
  EXPECT_FALSE(is_one_value(ops::sin(x, 640), t));
  EXPECT_TRUE(is_one_value(ops::sin(x, 1280), t));
}

TEST(Trig, SineRegressionPiDirectedRounding) {
  // sin near pi must never exclude the true value because of a rounded pi.
  BigFloat pi_lo(53);
  mpfr_const_pi(pi_lo.raw(), MPFR_RNDD);
  for (mpfr_prec_t p : {24, 53, 80, 200}) {
    Interval r = ops::sin(make_point(pi_lo), p);
    BigFloat ref(4 * p);
    mpfr_sin(ref.raw(), pi_lo.raw(), MPFR_RNDN);
    EXPECT_LE(r.lo.value, ref) << p;
    EXPECT_GE(r.hi.value, ref) << p;
  }
}

TEST(Asin, Clipping) {
  Interval r = ops::asin(mv(-2, -0.5), P);
  EXPECT_LE(lo(r), -M_PI_2 + 1e-15);
  EXPECT_GE(lo(r), -M_PI_2 - 1e-15);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(r.err.guaranteed);
  EXPECT_TRUE(ops::asin(mv(2, 3), P).err.guaranteed);
  expect_bounds(ops::asin(fx(0, 0), P), 0, true, 0, true);
  EXPECT_TRUE(ops::acos(mv(1.5, 2), P).err.guaranteed);
}

TEST(Atan2, PointInput) {
  Interval r = ops::atan2(make_point(1.0), make_point(1.0), P);
  BigFloat w(P);
  mpfr_sub(w.raw(), r.hi.value.raw(), r.lo.value.raw(), MPFR_RNDU);
  BigFloat ulp(P);
  mpfr_set_ui_2exp(ulp.raw(), 1, -P, MPFR_RNDN);  // pi/4 < 1
  EXPECT_LE(w, ulp);
  EXPECT_NEAR(lo(r), M_PI_4, 1e-16);
}

TEST(Atan2, OriginInteriorIsFullRange) {
  Interval r = ops::atan2(mv(-1, 1), mv(-1, 1), P);
  EXPECT_NEAR(lo(r), -M_PI, 1e-15);
  EXPECT_NEAR(hi(r), M_PI, 1e-15);
  EXPECT_LE(lo(r), -M_PI);
  EXPECT_GE(hi(r), M_PI);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(r.err.guaranteed);
  // Brute-force grid: atan2 over the box spans (-pi, pi] and hits the origin.
  double mn = kInf, mx = -kInf;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      if (i == 0 && j == 0) continue;
      double a = std::atan2(i / 20.0, j / 20.0);
      mn = std::min(mn, a);
      mx = std::max(mx, a);
    }
  EXPECT_LE(lo(r), mn);
  EXPECT_GE(hi(r), mx);
}

TEST(Atan2, ExactZero) {
  expect_bounds(ops::atan2(fx(0, 0), fx(1, 2), P), 0, true, 0, true);
  EXPECT_TRUE(ops::atan2(fx(0, 0), fx(0, 0), P).err.guaranteed);
}

TEST(Fabs, Examples) {
  Interval a = ops::fabs(mv(-3, 2));
  EXPECT_EQ(lo(a), 0);
  EXPECT_EQ(hi(a), 3);
  expect_bounds(ops::fabs(fx(-3, -1)), 1, true, 3, true);
  EXPECT_EQ(hi(ops::fabs(mv(-2, 5))), 5);
}

TEST(Fmod, RegionsNotTruncation) {
  // Grid oracle over x in [7,8] with y = 3.
  double mn = kInf, mx = -kInf;
  for (int i = 0; i <= 1000; ++i) {
    double v = std::fmod(7 + i / 1000.0, 3.0);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  Interval r = ops::fmod(mv(7, 8), mv(3, 3), P);
  EXPECT_EQ(lo(r), mn);
  EXPECT_EQ(hi(r), mx);
  EXPECT_EQ(lo(r), 1);
  EXPECT_EQ(hi(r), 2);
}

TEST(Fmod, IdentityRegionAndOddSymmetry) {
  Interval r = ops::fmod(mv(1, 2), mv(4, 5), P);
  EXPECT_EQ(lo(r), 1);
  EXPECT_EQ(hi(r), 2);
  Interval s = ops::fmod(mv(-2, -1), mv(4, 5), P);
  EXPECT_EQ(lo(s), -2);
  EXPECT_EQ(hi(s), -1);
}

TEST(Fmod, ZeroDivisor) {
  EXPECT_TRUE(ops::fmod(mv(1, 2), fx(0, 0), P).err.guaranteed);
  Interval r = ops::fmod(mv(1, 2), mv(-1, 1), P);
  EXPECT_TRUE(r.err.possible);
  EXPECT_FALSE(r.err.guaranteed);
}

TEST(Rounding, FloorCeilTrunc) {
  expect_bounds(ops::floor(mv(-1.5, 2.5), P), -2, false, 2, false);
  expect_bounds(ops::ceil(fx(-1.5, 2.5), P), -1, true, 3, true);
  expect_bounds(ops::trunc(fx(-1.5, 2.5), P), -1, true, 2, true);
}

TEST(Compare, Examples) {
  auto lt = ops::compare(ops::CompareOp::lt, mv(1, 3), mv(4, 5));
  EXPECT_TRUE(lt.value.is_true());
  auto lt2 = ops::compare(ops::CompareOp::lt, mv(1, 4), mv(3, 5));
  EXPECT_TRUE(lt2.value.is_unknown());
  auto eq = ops::compare(ops::CompareOp::eq, fx(2, 2), fx(2, 2));
  EXPECT_TRUE(eq.value.is_true());
  auto eq2 = ops::compare(ops::CompareOp::eq, mv(1, 3), mv(2, 4));
  EXPECT_TRUE(eq2.value.is_unknown());
  auto ne = ops::compare(ops::CompareOp::ne, mv(1, 2), mv(3, 4));
  EXPECT_TRUE(ne.value.is_true());
  auto ge = ops::compare(ops::CompareOp::ge, mv(1, 2), mv(3, 4));
  EXPECT_TRUE(ge.value.is_false());
  // Operand errors propagate.
  auto e = ops::compare(ops::CompareOp::le, iv(1, false, 2, false, ErrorInterval::maybe()),
                        mv(3, 4));
  EXPECT_TRUE(e.err.possible);
}

TEST(Compare, ImmovableOperandsGiveStuckTruth) {
  // [!1, 2!] < [!1.5, 1.5!] cannot be decided at any precision.
  auto c = ops::compare(ops::CompareOp::lt, fx(1, 2), fx(1.5, 1.5));
  EXPECT_TRUE(c.value.is_stuck());
  auto d = ops::compare(ops::CompareOp::lt, mv(1, 2), fx(1.5, 1.5));
  EXPECT_FALSE(d.value.is_stuck());
}

TEST(IfMerge, Examples) {
  Condition unknown{BoolInterval::unknown(), {}};
  Interval h = ops::if_merge(unknown, mv(1, 2), mv(5, 6));
  EXPECT_EQ(lo(h), 1);
  EXPECT_EQ(hi(h), 6);
  Condition yes{BoolInterval::truth(true), {}};
  Interval a = fx(1, 2);
  Interval r = ops::if_merge(yes, a, mv(5, 6));
  expect_bounds(r, 1, true, 2, true);
  Condition no{BoolInterval::truth(false), ErrorInterval::maybe()};
  Interval s = ops::if_merge(no, a, mv(5, 6));
  EXPECT_EQ(lo(s), 5);
  EXPECT_TRUE(s.err.possible);
}

TEST(IfMerge, GuaranteedErrorArm) {
  // The else branch divides by zero whenever it is taken.
  Condition unknown{BoolInterval::unknown(), {}};
  Interval bad = ops::div(fx(1, 1), fx(0, 0), P);
  Interval h = ops::if_merge(unknown, mv(1, 2), bad);
  EXPECT_TRUE(h.err.possible);
  EXPECT_FALSE(h.err.guaranteed);
  EXPECT_EQ(lo(h), 1);
  EXPECT_EQ(hi(h), 2);
}

TEST(Ops, GuaranteedErrorShortCircuits) {
  Interval e = Interval::error();
  EXPECT_TRUE(ops::add(e, mv(1, 2), P).err.guaranteed);
  EXPECT_TRUE(ops::exp(e, P).err.guaranteed);
  EXPECT_TRUE(ops::fabs(e).err.guaranteed);
  EXPECT_TRUE(ops::atan2(mv(1, 2), e, P).err.guaranteed);
}

TEST(Ops, PossibleErrorPropagates) {
  Interval m = iv(1, false, 2, false, ErrorInterval::maybe());
  EXPECT_TRUE(ops::exp(m, P).err.possible);
  EXPECT_TRUE(ops::mul(m, mv(1, 2), P).err.possible);
  EXPECT_FALSE(ops::mul(m, mv(1, 2), P).err.guaranteed);
}
