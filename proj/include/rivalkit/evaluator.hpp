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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rivalkit/expr.hpp"

namespace rivalkit {

// Working precisions tried in order: start, start*growth, ... capped at
// max_bits, which is always the last rung.
struct PrecisionLadder {
  mpfr_prec_t start_bits = 80;
  int growth = 2;
  mpfr_prec_t max_bits = kDefaultMaxPrecision;

  std::vector<mpfr_prec_t> rungs() const;
};

using Env = std::map<std::string, Interval>;

// Interval evaluation. Throws std::invalid_argument for unbound variables
// or type mismatches. Runs under the exponent budget `exponent_bits`.
Value eval(const Expr& e, const Env& env, mpfr_prec_t prec,
           int exponent_bits = kDefaultExponentBits);
Interval eval_real(const Expr& e, const Env& env, mpfr_prec_t prec,
                   int exponent_bits = kDefaultExponentBits);
Condition eval_bool(const Expr& e, const Env& env, mpfr_prec_t prec,
                    int exponent_bits = kDefaultExponentBits);

// Truth of a condition once its own errors count as falsity: the result
// is true only if no error can occur, false if an error must occur.
BoolInterval error_free_truth(const Condition& c);

// The full validity condition of a program as a boolean expression:
// every input finite, the output finite, no domain error, and the
// precondition.
ExprPtr validity_expr(const Program& p);

// Evaluates the program body and each validity conjunct in one pass.
class ValidityCheck {
 public:
  explicit ValidityCheck(const Program& p);

  struct Parts {
    Interval output;
    Condition inputs_finite, output_finite, no_error, pre;
    Condition all;  // conjunction of the four
  };
  Parts evaluate(const Env& env, mpfr_prec_t prec, int exponent_bits) const;

  const Program& program() const { return program_; }

 private:
  Program program_;
  ExprPtr inputs_finite_, output_finite_, no_error_;
};

enum class Outcome { valid, invalid, unsamplable, exhausted };
enum class InvalidReason { none, precondition_false, domain_error, non_finite_output, non_finite_input };

const char* outcome_name(Outcome o);
const char* reason_name(InvalidReason r);

struct RungTrace {
  mpfr_prec_t bits;
  Interval output;
  BoolInterval validity;
};

struct GroundTruthResult {
  Outcome outcome = Outcome::exhausted;
  double value = 0;  // meaningful for valid only
  InvalidReason reason = InvalidReason::none;
  mpfr_prec_t bits_used = 0;
  std::vector<RungTrace> trace;  // filled when requested
};

struct GroundTruthConfig {
  PrecisionLadder ladder;
  int exponent_bits = kDefaultExponentBits;
  StuckMode stuck_mode = StuckMode::standard;
  bool keep_trace = false;
};

// Values are ordered like the program's variables.
using Point = std::vector<double>;

GroundTruthResult ground_truth(const ValidityCheck& check, const Point& point,
                               const GroundTruthConfig& config = {});
GroundTruthResult ground_truth(const Program& program, const Point& point,
                               const GroundTruthConfig& config = {});

struct BatchSummary {
  std::map<Outcome, size_t> by_outcome;
  std::map<mpfr_prec_t, std::map<Outcome, size_t>> by_rung;
  size_t total = 0;
};

struct BatchResult {
  std::vector<GroundTruthResult> results;  // same order as the input points
  BatchSummary summary;
};

BatchResult batch_ground_truth(const Program& program, const std::vector<Point>& points,
                               const GroundTruthConfig& config = {}, unsigned jobs = 1);

// Runs `body(i)` for i in [0, n) on up to `jobs` threads, each with its
// own MPFR state.
void parallel_for(size_t n, unsigned jobs, const std::function<void(size_t)>& body);

}  // namespace rivalkit
