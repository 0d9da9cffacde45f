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

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rivalkit/evaluator.hpp"

namespace rivalkit {

// Closed interval of target values, lo <= hi (infinities allowed).
struct Range {
  double lo, hi;
  friend bool operator==(const Range&, const Range&) = default;
};

// Per-variable disjoint sorted ranges; a missing variable is unrestricted.
using RangeTable = std::map<std::string, std::vector<Range>>;

// Sound per-variable bounds implied by a precondition: every input
// satisfying `pre` lies inside the table.
RangeTable range_analysis(const Expr& pre, const TargetFormat& target);

// One interval per program variable, in program order.
using Hyperrectangle = std::vector<Range>;

// Fraction of target points inside `r`, exactly.
mpq_class weight(const Hyperrectangle& r, const TargetFormat& target);
mpq_class total_weight(const std::vector<Hyperrectangle>& rs, const TargetFormat& target);
bool contains(const Hyperrectangle& r, const Point& p);

enum class StuckPolicy { discard, keep };

struct StuckWarning {
  Hyperrectangle rect;
  Point witness;
};

struct SearchState {
  std::vector<Hyperrectangle> seeds;
  std::vector<Hyperrectangle> T;  // valid throughout
  std::vector<Hyperrectangle> F;  // invalid throughout, or discarded as stuck
  std::vector<Hyperrectangle> O;  // undecided
  std::vector<Hyperrectangle> kept_stuck;  // stuck regions kept for sampling
  std::vector<StuckWarning> warnings;
  int iterations_run = 0;  // evaluation passes, including the final one

  bool empty() const { return T.empty() && O.empty() && kept_stuck.empty(); }
};

struct SearchConfig {
  int iterations = 14;
  StuckPolicy stuck = StuckPolicy::discard;
  mpfr_prec_t bits = 80;
  int exponent_bits = kDefaultExponentBits;
  size_t seed_cap = 256;
  unsigned jobs = 1;
  // Called after seeding (iteration 0) and after each iteration.
  std::function<void(int, const SearchState&)> observer;
};

// Seeds from range analysis of the precondition, then runs the
// branch-and-bound loop on the validity condition.
SearchState search(const ValidityCheck& check, const SearchConfig& config = {});

// Splits `r` along dimension `dim` at the ordinal midpoint. Requires
// more than one value in that dimension.
std::pair<Hyperrectangle, Hyperrectangle> split(const Hyperrectangle& r, size_t dim,
                                                const TargetFormat& target);

// Weight-proportional choice of a rectangle and a uniform point in it.
class Sampler {
 public:
  Sampler(std::vector<Hyperrectangle> rects, TargetFormat target);
  size_t pick(std::mt19937_64& rng) const;
  Point draw(size_t rect, std::mt19937_64& rng) const;
  const std::vector<Hyperrectangle>& rects() const { return rects_; }

 private:
  std::vector<Hyperrectangle> rects_;
  TargetFormat target_;
  std::vector<mpz_class> prefix_;  // cumulative unnormalized weights
};

// Uniform integer in [0, bound), bound > 0.
mpz_class uniform_below(const mpz_class& bound, std::mt19937_64& rng);

// The rng stream for draw number `index` under `seed`.
std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index);

struct SampleConfig {
  size_t count = 8256;
  std::uint64_t seed = 0;
  size_t retry_budget = 10000;
  unsigned jobs = 1;
  GroundTruthConfig ground_truth;
};

struct SampledPoint {
  Point point;
  double value = 0;
  mpfr_prec_t bits_used = 0;
};

struct SampleStats {
  size_t accepted = 0;
  size_t rejected_invalid = 0;
  size_t rejected_unsamplable = 0;
  size_t rejected_exhausted = 0;
  // Outcomes of every draw, keyed by the rung that decided them.
  std::map<mpfr_prec_t, std::map<Outcome, size_t>> by_rung;
  size_t draws() const {
    return accepted + rejected_invalid + rejected_unsamplable + rejected_exhausted;
  }
};

struct SampleResult {
  std::vector<SampledPoint> points;
  SampleStats stats;
};

class NoValidInputs : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LowYield : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws NoValidInputs when nothing is left to sample from, LowYield
// when one draw exhausts its retry budget.
SampleResult sample(const SearchState& state, const ValidityCheck& check,
                    const SampleConfig& config);

}  // namespace rivalkit
