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

// Acceptance checks. `acceptance --criterion N` runs one check and prints
// a single PASS or FAIL line; without arguments it runs all of them.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fuzz_support.hpp"
#include "rivalkit/cli.hpp"
#include "rivalkit/fpcore.hpp"
#include "rivalkit/search.hpp"

using namespace rivalkit;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

const char* kRunning = "(FPCore (x y) (/ (pow x y) (+ (pow x y) 2)))";

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Verdict point_outcome(const Program& p, const Point& pt, Outcome want, mpfr_prec_t bits) {
  auto r = ground_truth(p, pt);
  std::string d = std::string(outcome_name(r.outcome)) + " at " + std::to_string(r.bits_used) +
                  " bits";
  if (r.outcome == Outcome::valid) d += ", value " + fmt(r.value);
  return {r.outcome == want && r.bits_used == bits, d};
}

Verdict ground_truth_exactness() {
  Program p = parse_program(kRunning);
  p.target = TargetFormat::binary32();
  const double y = static_cast<double>(1.1f);
  auto r = ground_truth(p, {3, y});
  const double want = static_cast<double>(0.62605417f);
  std::string d = std::string(outcome_name(r.outcome)) + ", value " + fmt(r.value) +
                  " (" + format_decimal(r.value, p.target) + "), expected " +
                  format_decimal(want, p.target);
  return {r.outcome == Outcome::valid && r.value == want, d};
}

Verdict overflow_stuck() {
  return point_outcome(parse_program(kRunning), {1e10, 1e10}, Outcome::unsamplable, 80);
}

Verdict trig_rung() {
  return point_outcome(parse_program("(FPCore (x) (sin x))"), {1e300}, Outcome::valid, 1280);
}

Verdict expq3_rung() {
  Program p = parse_program(
      "(FPCore (a b eps) (/ (* eps (- (exp (* (+ a b) eps)) 1))"
      " (* (- (exp (* a eps)) 1) (- (exp (* b eps)) 1))))");
  return point_outcome(p, {1e-200, 1e200, 1e-200}, Outcome::unsamplable, 2560);
}

Verdict expq2_low_precision() {
  return point_outcome(parse_program("(FPCore (x) (/ (exp x) (- (exp x) 1)))"), {1e10},
                       Outcome::unsamplable, 80);
}

Verdict pow_error_semantics() {
  auto mk = [](double a, double b) {
    return Interval::make(BigFloat(a, 53), false, BigFloat(b, 53), false);
  };
  Interval r = ops::pow(mk(-1, 2), mk(1, 5), 80);
  bool ok = r.lo.value.to_double() == -1 && r.hi.value.to_double() == 32 &&
            r.lo.value.is_integer() && r.hi.value.is_integer() && r.err.possible &&
            !r.err.guaranteed;
  return {ok, render(r)};
}

Verdict search_localization() {
  Program p = parse_program("(FPCore (x) (asin (+ x 2007)))");
  ValidityCheck check(p);
  SearchState s = search(check);
  const auto t = TargetFormat::binary64();
  mpq_class kept = total_weight(s.T, t) + total_weight(s.O, t);
  SampleConfig cfg;
  cfg.count = 1000;
  cfg.seed = 1;
  SampleResult r = sample(s, check, cfg);
  size_t inside = 0;
  for (const auto& pt : r.points) inside += pt.point[0] >= -2008 && pt.point[0] <= -2006;
  std::string d = "retained weight " + fmt(kept.get_d()) + ", " + std::to_string(inside) +
                  "/1000 points in [-2008, -2006]";
  return {kept <= mpq_class(1, 10000) && inside == 1000 && r.points.size() == 1000, d};
}

Verdict no_valid_inputs() {
  const char* src = "(FPCore (x) (/ (sqrt (+ (log x) (sin x))) (asin (+ x 2))))";
  SearchState s = search(ValidityCheck(parse_program(src)));
  const char* argv[] = {"rivalkit", "sample", "--program", src, "--json"};
  std::ostringstream out, err;
  int code = cli::run(5, argv, out, err);
  bool has_record = out.str().find("\"error\":\"no-valid-inputs\"") != std::string::npos;
  std::string d = "T " + std::to_string(s.T.size()) + ", O " + std::to_string(s.O.size()) +
                  ", exit " + std::to_string(code);
  return {s.T.empty() && s.O.empty() && code == cli::kNoValidInputs && has_record, d};
}

Verdict rejection_rate() {
  Program p = parse_program(
      "(FPCore (x) :pre (>= x 1/2)"
      " (* (* (/ 1 (sqrt PI)) (exp (* x x)))"
      "    (+ (+ (+ (/ 1 (fabs x)) (* (/ 1 2) (/ 1 (pow (fabs x) 3))))"
      "          (* (/ 3 4) (/ 1 (pow (fabs x) 5))))"
      "       (* (/ 15 8) (/ 1 (pow (fabs x) 7))))))");
  ValidityCheck check(p);
  SearchState s = search(check);
  SampleConfig cfg;
  cfg.count = 10000;
  cfg.seed = 2;
  SampleResult r = sample(s, check, cfg);
  double rate = static_cast<double>(r.stats.draws() - r.stats.accepted) / r.stats.draws();
  return {rate <= 0.05, "rejected " + std::to_string(r.stats.draws() - r.stats.accepted) + " of " +
                            std::to_string(r.stats.draws()) + " draws (" +
                            fmt(100 * rate) + "%)"};
}

Verdict summarize(const fuzz::FuzzReport& r) {
  std::string d = std::to_string(r.checked) + " checked, " + std::to_string(r.skipped) +
                  " skipped, " + std::to_string(r.violations) + " violations";
  if (!r.examples.empty()) d += "; first: " + r.examples.front();
  return {r.violations == 0, d};
}

Verdict soundness_fuzz() { return summarize(fuzz::expr_soundness(10, 100000)); }
Verdict completeness_fuzz() { return summarize(fuzz::op_weak_completeness(11, 10000)); }
Verdict movability_fuzz() { return summarize(fuzz::op_movability(12, 100000)); }

Verdict regression_trio() {
  std::string d;
  bool ok = true;
  // sin near pi with a directed-rounding pi
  for (int k = 1; k <= 64; ++k) {
    BigFloat kpi(300);
    mpfr_const_pi(kpi.raw(), MPFR_RNDN);
    mpfr_mul_si(kpi.raw(), kpi.raw(), k, MPFR_RNDN);
    for (Round dir : {Round::down, Round::up}) {
      double x = kpi.to_double(dir);
      Interval r = ops::sin(make_point(x), 53);
      BigFloat ref(600), bx(x, 53);
      mpfr_sin(ref.raw(), bx.raw(), MPFR_RNDN);
      if (!(r.lo.value <= ref && ref <= r.hi.value)) {
        ok = false;
        d += "sin(" + fmt(x) + ") excludes the true value; ";
      }
    }
  }
  auto mk = [](double a, double b) {
    return Interval::make(BigFloat(a, 53), false, BigFloat(b, 53), false);
  };
  Interval f = ops::fmod(mk(7, 8), mk(3, 3), 80);
  if (!(f.lo.value.to_double() == 1 && f.hi.value.to_double() == 2)) {
    ok = false;
    d += "fmod gives " + render(f) + "; ";
  }
  Interval u = ops::pow(make_point(0.5), make_point(1e10), 80);
  if (!(u.lo.value.is_zero() && u.lo.immovable)) {
    ok = false;
    d += "pow underflow gives " + render(u) + "; ";
  }
  if (ok) d = "sin near k*pi sound, fmod " + render(f) + ", pow underflow " + render(u);
  return {ok, d};
}

ExprPtr random_pre(std::mt19937_64& rng, int depth) {
  const char* vars[] = {"x", "y"};
  if (depth <= 1 || rng() % 3 == 0) {
    static const CompareOp cmps[] = {CompareOp::lt, CompareOp::le, CompareOp::gt, CompareOp::ge,
                                     CompareOp::eq, CompareOp::ne};
    CompareOp op = cmps[rng() % 6];
    ExprPtr lhs = var(vars[rng() % 2]);
    if (rng() % 6 == 0) lhs = apply(ScalarOp::exp, {lhs});
    double c = fuzz::random_double(rng);
    if (!std::isfinite(c)) c = 1e300;
    ExprPtr rhs = rng() % 5 == 0 ? num("1/3") : num(c);
    return rng() % 2 ? compare(op, {lhs, rhs}) : compare(op, {rhs, lhs});
  }
  switch (rng() % 3) {
    case 0: return bool_op(BoolOpKind::and_, {random_pre(rng, depth - 1), random_pre(rng, depth - 1)});
    case 1: return bool_op(BoolOpKind::or_, {random_pre(rng, depth - 1), random_pre(rng, depth - 1)});
    default: return bool_op(BoolOpKind::not_, {random_pre(rng, depth - 1)});
  }
}

Verdict partition_and_uniformity() {
  std::mt19937_64 rng(14);
  const auto t = TargetFormat::binary64();
  long bad = 0, iterations = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    Program p;
    p.vars = {"x", "y"};
    p.pre = random_pre(rng, 3);
    p.body = fuzz::random_expr(rng, 3, p.vars);
    SearchConfig cfg;
    mpq_class seeded;
    cfg.observer = [&](int it, const SearchState& s) {
      if (it == 0) seeded = total_weight(s.seeds, t);
      mpq_class all = total_weight(s.T, t) + total_weight(s.F, t) + total_weight(s.O, t) +
                      total_weight(s.kept_stuck, t);
      ++iterations;
      if (all != seeded) {
        ++bad;
        if (first.empty()) first = to_string(*p.pre) + " at iteration " + std::to_string(it);
      }
    };
    search(ValidityCheck(p), cfg);
  }
  // Two rectangles of 100 and 300 values.
  __int128 o = t.ordinal(1.0);
  Sampler s({{{t.ordinal_inverse(o), t.ordinal_inverse(o + 99)}},
             {{t.ordinal_inverse(o + 100), t.ordinal_inverse(o + 399)}}},
            t);
  std::mt19937_64 draw_rng(140);
  const long n = 1000000;
  long hits_b = 0;
  for (long i = 0; i < n; ++i) hits_b += static_cast<long>(s.pick(draw_rng));
  double mean = 0.75 * n, sigma = std::sqrt(n * 0.75 * 0.25);
  double z = (hits_b - mean) / sigma;
  std::string d = std::to_string(iterations) + " iteration snapshots, " + std::to_string(bad) +
                  " unbalanced; 1:3 split z = " + fmt(z);
  if (!first.empty()) d += "; first: " + first;
  return {bad == 0 && std::abs(z) < 4, d};
}

const std::function<Verdict()> kCriteria[] = {
    ground_truth_exactness, overflow_stuck,      trig_rung,         expq3_rung,
    expq2_low_precision,    pow_error_semantics, search_localization, no_valid_inputs,
    rejection_rate,         soundness_fuzz,      completeness_fuzz, movability_fuzz,
    regression_trio,        partition_and_uniformity};
constexpr double kBudgetSeconds[] = {1, 1, 1, 5, 1, 1, 10, 10, 60, 600, 600, 600, 3, 300};

bool run_one(int n) {
  auto start = std::chrono::steady_clock::now();
  Verdict v = kCriteria[n - 1]();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs <= kBudgetSeconds[n - 1];
  bool pass = v.pass && in_time;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << n << " (" << fmt(secs).substr(0, 6)
            << " s, budget " << kBudgetSeconds[n - 1] << " s): " << v.detail
            << (in_time ? "" : " [over time budget]") << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  constexpr int kCount = static_cast<int>(std::size(kCriteria));
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    int n = std::atoi(argv[2]);
    if (n < 1 || n > kCount) {
      std::cerr << "criterion must be 1.." << kCount << "\n";
      return 2;
    }
    return run_one(n) ? 0 : 1;
  }
  if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }
  bool all = true;
  for (int n = 1; n <= kCount; ++n) all = run_one(n) && all;
  return all ? 0 : 1;
}
