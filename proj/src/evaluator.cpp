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

#include "rivalkit/evaluator.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rivalkit {

std::vector<mpfr_prec_t> PrecisionLadder::rungs() const {
  if (start_bits < MPFR_PREC_MIN || max_bits < MPFR_PREC_MIN || growth < 2)
    throw std::invalid_argument("bad precision ladder");
  std::vector<mpfr_prec_t> out;
  for (mpfr_prec_t p = start_bits; p < max_bits; p *= growth) out.push_back(p);
  out.push_back(max_bits);
  return out;
}

namespace {

// Name under which the program output is bound inside the validity
// expression; the space keeps it out of reach of parsed programs.
const char* const kOutputName = " out";

using Scope = std::map<std::string, Value>;

Value eval_node(const Expr& e, const Scope& scope, mpfr_prec_t prec);

Interval as_real(Value v) {
  if (auto* i = std::get_if<Interval>(&v)) return std::move(*i);
  throw std::invalid_argument("type error: boolean used as real");
}

Condition as_bool(Value v) {
  if (auto* c = std::get_if<Condition>(&v)) return *c;
  throw std::invalid_argument("type error: real used as boolean");
}

Interval literal(const mpq_class& q, mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  int tl = mpfr_set_q(lo.raw(), q.get_mpq_t(), MPFR_RNDD);
  int th = mpfr_set_q(hi.raw(), q.get_mpq_t(), MPFR_RNDU);
  if (lo.is_zero()) mpfr_set_zero(lo.raw(), 1);
  if (hi.is_zero()) mpfr_set_zero(hi.raw(), 1);
  return Interval::make(std::move(lo), tl == 0, std::move(hi), th == 0);
}

Condition fold_bool(BoolOpKind kind, const std::vector<ExprPtr>& args, const Scope& scope,
                    mpfr_prec_t prec) {
  if (kind == BoolOpKind::not_) {
    Condition c = as_bool(eval_node(*args.at(0), scope, prec));
    return {bool_not(c.value), c.err};
  }
  Condition acc{BoolInterval::truth(kind == BoolOpKind::and_), ErrorInterval::none()};
  for (const auto& a : args) {
    Condition c = as_bool(eval_node(*a, scope, prec));
    acc.value = kind == BoolOpKind::and_ ? bool_and(acc.value, c.value)
                                         : bool_or(acc.value, c.value);
    acc.err = join_errors(acc.err, c.err);
  }
  return acc;
}

Condition chain(const CompareExpr& n, const Scope& scope, mpfr_prec_t prec) {
  std::vector<Interval> vals;
  vals.reserve(n.args.size());
  for (const auto& a : n.args) vals.push_back(as_real(eval_node(*a, scope, prec)));
  Condition acc{BoolInterval::truth(true), ErrorInterval::none()};
  auto add = [&](const Interval& a, const Interval& b) {
    Condition c = ops::compare(n.op, a, b);
    acc.value = bool_and(acc.value, c.value);
    acc.err = join_errors(acc.err, c.err);
  };
  if (n.op == CompareOp::ne) {
    for (size_t i = 0; i < vals.size(); ++i)
      for (size_t j = i + 1; j < vals.size(); ++j) add(vals[i], vals[j]);
  } else {
    for (size_t i = 0; i + 1 < vals.size(); ++i) add(vals[i], vals[i + 1]);
  }
  return acc;
}

Value eval_node(const Expr& e, const Scope& scope, mpfr_prec_t prec) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumLiteral>) {
          return literal(n.value, prec);
        } else if constexpr (std::is_same_v<T, ConstRef>) {
          return make_constant(n.which, prec);
        } else if constexpr (std::is_same_v<T, BoolLiteral>) {
          return Condition{BoolInterval::truth(n.value), ErrorInterval::none()};
        } else if constexpr (std::is_same_v<T, VarRef>) {
          auto it = scope.find(n.name);
          if (it == scope.end()) throw std::invalid_argument("unbound variable: " + n.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Apply>) {
          std::vector<Interval> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(as_real(eval_node(*a, scope, prec)));
          return ops::apply(n.op, args, prec);
        } else if constexpr (std::is_same_v<T, IfExpr>) {
          Condition c = as_bool(eval_node(*n.cond, scope, prec));
          Interval t = as_real(eval_node(*n.then_branch, scope, prec));
          Interval f = as_real(eval_node(*n.else_branch, scope, prec));
          return ops::if_merge(c, t, f);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          Scope inner = scope;
          for (const auto& [name, value] : n.bindings)
            inner.insert_or_assign(name, eval_node(*value, n.sequential ? inner : scope, prec));
          return eval_node(*n.body, inner, prec);
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          return chain(n, scope, prec);
        } else if constexpr (std::is_same_v<T, BoolOpExpr>) {
          return fold_bool(n.kind, n.args, scope, prec);
        } else {
          Interval sub = as_real(eval_node(*n.sub, scope, prec));
          return Condition{bool_of_error(sub.err), ErrorInterval::none()};
        }
      },
      e.node);
}

Scope scope_of(const Env& env) {
  Scope s;
  for (const auto& [k, v] : env) s.emplace(k, v);
  return s;
}

ExprPtr in_range(const ExprPtr& e, const TargetFormat& t) {
  return compare(CompareOp::le, {num(t.k_minus()), e, num(t.k_plus())});
}

ExprPtr inputs_finite_expr(const Program& p) {
  std::vector<ExprPtr> parts;
  for (const auto& v : p.vars) parts.push_back(in_range(var(v), p.target));
  return bool_op(BoolOpKind::and_, std::move(parts));
}

}  // namespace

Value eval(const Expr& e, const Env& env, mpfr_prec_t prec, int exponent_bits) {
  ExponentScope es(exponent_bits);
  return eval_node(e, scope_of(env), prec);
}

Interval eval_real(const Expr& e, const Env& env, mpfr_prec_t prec, int exponent_bits) {
  return as_real(eval(e, env, prec, exponent_bits));
}

Condition eval_bool(const Expr& e, const Env& env, mpfr_prec_t prec, int exponent_bits) {
  return as_bool(eval(e, env, prec, exponent_bits));
}

BoolInterval error_free_truth(const Condition& c) {
  BoolInterval r;
  r.must = c.value.must && !c.err.possible;
  r.may = c.value.may && !c.err.guaranteed;
  // A possible error may still become certain, or vanish, at higher precision.
  r.must_immovable = r.must || (!c.value.must && c.value.must_immovable);
  r.may_immovable = !r.may || (c.value.may_immovable && !c.err.possible);
  return r;
}

ExprPtr validity_expr(const Program& p) {
  ExprPtr out = var(kOutputName);
  std::vector<ExprPtr> parts{inputs_finite_expr(p), in_range(out, p.target),
                             bool_op(BoolOpKind::not_, {err_of(out)})};
  if (p.pre) parts.push_back(p.pre);
  return let({{kOutputName, p.body}}, bool_op(BoolOpKind::and_, std::move(parts)));
}

ValidityCheck::ValidityCheck(const Program& p)
    : program_(p),
      inputs_finite_(inputs_finite_expr(p)),
      output_finite_(in_range(var(kOutputName), p.target)),
      no_error_(bool_op(BoolOpKind::not_, {err_of(var(kOutputName))})) {
  if (!p.body) throw std::invalid_argument("program has no body");
}

ValidityCheck::Parts ValidityCheck::evaluate(const Env& env, mpfr_prec_t prec,
                                             int exponent_bits) const {
  ExponentScope es(exponent_bits);
  Scope scope = scope_of(env);
  Parts parts;
  parts.output = as_real(eval_node(*program_.body, scope, prec));
  parts.inputs_finite = as_bool(eval_node(*inputs_finite_, scope, prec));
  Scope with_out = scope;
  with_out.insert_or_assign(kOutputName, parts.output);
  parts.output_finite = as_bool(eval_node(*output_finite_, with_out, prec));
  parts.no_error = as_bool(eval_node(*no_error_, with_out, prec));
  parts.pre = program_.pre ? as_bool(eval_node(*program_.pre, scope, prec))
                           : Condition{BoolInterval::truth(true), ErrorInterval::none()};
  Condition all{BoolInterval::truth(true), ErrorInterval::none()};
  for (const Condition* c : {&parts.inputs_finite, &parts.output_finite, &parts.no_error,
                             &parts.pre}) {
    all.value = bool_and(all.value, c->value);
    all.err = join_errors(all.err, c->err);
  }
  parts.all = all;
  return parts;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::valid: return "valid";
    case Outcome::invalid: return "invalid";
    case Outcome::unsamplable: return "unsamplable";
    case Outcome::exhausted: return "exhausted";
  }
  return "?";
}

const char* reason_name(InvalidReason r) {
  switch (r) {
    case InvalidReason::none: return "none";
    case InvalidReason::precondition_false: return "precondition-false";
    case InvalidReason::domain_error: return "domain-error";
    case InvalidReason::non_finite_output: return "non-finite-output";
    case InvalidReason::non_finite_input: return "non-finite-input";
  }
  return "?";
}

GroundTruthResult ground_truth(const ValidityCheck& check, const Point& point,
                               const GroundTruthConfig& config) {
  const Program& prog = check.program();
  if (point.size() != prog.vars.size())
    throw std::invalid_argument("point has the wrong number of coordinates");
  Env env;
  for (size_t i = 0; i < point.size(); ++i) env.insert_or_assign(prog.vars[i], make_point(point[i]));
  GroundTruthResult res;
  for (mpfr_prec_t bits : config.ladder.rungs()) {
    res.bits_used = bits;
    ValidityCheck::Parts parts = check.evaluate(env, bits, config.exponent_bits);
    BoolInterval valid = error_free_truth(parts.all);
    if (config.keep_trace) res.trace.push_back({bits, parts.output, valid});
    if (valid.is_false()) {
      res.outcome = Outcome::invalid;
      if (error_free_truth(parts.pre).is_false())
        res.reason = InvalidReason::precondition_false;
      else if (error_free_truth(parts.no_error).is_false())
        res.reason = InvalidReason::domain_error;
      else if (error_free_truth(parts.inputs_finite).is_false())
        res.reason = InvalidReason::non_finite_input;  // the root cause when both hold
      else if (error_free_truth(parts.output_finite).is_false())
        res.reason = InvalidReason::non_finite_output;
      else
        res.reason = InvalidReason::domain_error;
      return res;
    }
    if (valid.is_stuck() || is_stuck(parts.output, prog.target, config.stuck_mode)) {
      res.outcome = Outcome::unsamplable;
      return res;
    }
    if (valid.is_true() && is_one_value(parts.output, prog.target)) {
      res.outcome = Outcome::valid;
      res.value = prog.target.round(parts.output.lo.value, Round::nearest);
      return res;
    }
  }
  res.outcome = Outcome::exhausted;
  return res;
}

GroundTruthResult ground_truth(const Program& program, const Point& point,
                               const GroundTruthConfig& config) {
  return ground_truth(ValidityCheck(program), point, config);
}

void parallel_for(size_t n, unsigned jobs, const std::function<void(size_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    try {
      for (size_t i; (i = next.fetch_add(1)) < n;) body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next.store(n);
    }
    mpfr_free_cache2(MPFR_FREE_LOCAL_CACHE);
  };
  std::vector<std::thread> threads;
  unsigned count = static_cast<unsigned>(std::min<size_t>(jobs, n));
  for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

BatchResult batch_ground_truth(const Program& program, const std::vector<Point>& points,
                               const GroundTruthConfig& config, unsigned jobs) {
  ValidityCheck check(program);
  BatchResult out;
  out.results.resize(points.size());
  parallel_for(points.size(), jobs,
               [&](size_t i) { out.results[i] = ground_truth(check, points[i], config); });
  for (const auto& r : out.results) {
    ++out.summary.by_outcome[r.outcome];
    ++out.summary.by_rung[r.bits_used][r.outcome];
  }
  out.summary.total = out.results.size();
  return out;
}

}  // namespace rivalkit
