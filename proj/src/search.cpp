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

#include "rivalkit/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace rivalkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Precision for evaluating constant sides of precondition comparisons.
constexpr mpfr_prec_t kConstantBits = 256;

Range full_range() { return {-kInf, kInf}; }

double canon_zero(double v) { return v == 0 ? 0.0 : v; }

// Sorts and merges ranges that overlap or touch in ordinal order.
std::vector<Range> normalize(std::vector<Range> rs, const TargetFormat& t) {
  std::erase_if(rs, [&](const Range& r) { return t.ordinal(r.hi) < t.ordinal(r.lo); });
  std::sort(rs.begin(), rs.end(),
            [&](const Range& a, const Range& b) { return t.ordinal(a.lo) < t.ordinal(b.lo); });
  std::vector<Range> out;
  for (const Range& r : rs) {
    if (!out.empty() && t.ordinal(r.lo) <= t.ordinal(out.back().hi) + 1) {
      if (t.ordinal(r.hi) > t.ordinal(out.back().hi)) out.back().hi = r.hi;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Range> intersect(const std::vector<Range>& a, const std::vector<Range>& b,
                             const TargetFormat& t) {
  std::vector<Range> out;
  for (const Range& x : a)
    for (const Range& y : b) {
      double lo = t.ordinal(x.lo) >= t.ordinal(y.lo) ? x.lo : y.lo;
      double hi = t.ordinal(x.hi) <= t.ordinal(y.hi) ? x.hi : y.hi;
      if (t.ordinal(lo) <= t.ordinal(hi)) out.push_back({lo, hi});
    }
  return normalize(std::move(out), t);
}

// Enclosure of a variable-free real expression, or nullopt if it cannot
// be evaluated without error.
std::optional<Interval> constant_value(const Expr& e) {
  if (is_boolean(e) || !free_vars(e).empty()) return std::nullopt;
  try {
    Interval v = eval_real(e, {}, kConstantBits);
    if (v.err.guaranteed) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

const VarRef* as_var(const Expr& e) { return std::get_if<VarRef>(&e.node); }

// Table for `a op b` where one side is a variable and the other constant.
RangeTable compare_pair(CompareOp op, const Expr& a, const Expr& b, const TargetFormat& t) {
  const VarRef* va = as_var(a);
  const VarRef* vb = as_var(b);
  if (op == CompareOp::ne || (va && vb) || (!va && !vb)) return {};
  const VarRef* v = va ? va : vb;
  auto c = constant_value(va ? b : a);
  if (!c) return {};
  // Normalize to "x op C" with x on the left.
  if (!va) {
    switch (op) {
      case CompareOp::lt: op = CompareOp::gt; break;
      case CompareOp::le: op = CompareOp::ge; break;
      case CompareOp::gt: op = CompareOp::lt; break;
      case CompareOp::ge: op = CompareOp::le; break;
      default: break;
    }
  }
  // x is a target value, so x <= C implies x <= R_down(C).
  double below = t.round(c->hi.value, Round::down);
  double above = t.round(c->lo.value, Round::up);
  Range r = full_range();
  switch (op) {
    case CompareOp::lt:
    case CompareOp::le: r.hi = below; break;
    case CompareOp::gt:
    case CompareOp::ge: r.lo = above; break;
    case CompareOp::eq: r = {above, below}; break;
    case CompareOp::ne: break;
  }
  RangeTable table;
  table[v->name] = normalize({{canon_zero(r.lo), canon_zero(r.hi)}}, t);
  return table;
}

RangeTable table_and(RangeTable a, const RangeTable& b, const TargetFormat& t) {
  for (const auto& [name, rs] : b) {
    auto it = a.find(name);
    if (it == a.end())
      a[name] = rs;
    else
      it->second = intersect(it->second, rs, t);
  }
  return a;
}

RangeTable table_or(const RangeTable& a, const RangeTable& b, const TargetFormat& t) {
  RangeTable out;
  for (const auto& [name, rs] : a) {
    auto it = b.find(name);
    if (it == b.end()) continue;
    std::vector<Range> u = rs;
    u.insert(u.end(), it->second.begin(), it->second.end());
    out[name] = normalize(std::move(u), t);
  }
  return out;
}

Interval to_interval(const Range& r) {
  return Interval::make(BigFloat(canon_zero(r.lo), 53), false, BigFloat(canon_zero(r.hi), 53),
                        false);
}

bool single_value(const Range& r, const TargetFormat& t) {
  return t.ordinal(r.lo) == t.ordinal(r.hi);
}

// Cartesian product of per-variable ranges, coarsened to at most `cap`.
std::vector<Hyperrectangle> seed_rects(const std::vector<std::string>& vars,
                                       const RangeTable& table, const TargetFormat& t,
                                       size_t cap) {
  std::vector<std::vector<Range>> dims;
  for (const auto& v : vars) {
    auto it = table.find(v);
    dims.push_back(it == table.end() ? std::vector<Range>{full_range()} : it->second);
  }
  for (const auto& d : dims)
    if (d.empty()) return {};
  auto product = [&]() {
    size_t p = 1;
    for (const auto& d : dims) p = std::min<size_t>(p * d.size(), cap + 1);
    return p;
  };
  while (product() > std::max<size_t>(cap, 1)) {
    auto widest = std::max_element(dims.begin(), dims.end(),
                                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
    // Merge the two neighbors with the smallest ordinal gap.
    size_t best = 0;
    __int128 best_gap = 0;
    for (size_t i = 0; i + 1 < widest->size(); ++i) {
      __int128 gap = t.ordinal((*widest)[i + 1].lo) - t.ordinal((*widest)[i].hi);
      if (i == 0 || gap < best_gap) {
        best = i;
        best_gap = gap;
      }
    }
    (*widest)[best].hi = (*widest)[best + 1].hi;
    widest->erase(widest->begin() + static_cast<long>(best) + 1);
  }
  std::vector<Hyperrectangle> out{{}};
  for (const auto& d : dims) {
    std::vector<Hyperrectangle> next;
    for (const auto& partial : out)
      for (const Range& r : d) {
        Hyperrectangle h = partial;
        h.push_back(r);
        next.push_back(std::move(h));
      }
    out = std::move(next);
  }
  return out;
}

__int128 to_int128(const mpz_class& z) {
  // Only used for non-negative offsets below 2^126.
  mpz_class hi, lo;
  mpz_fdiv_q_2exp(hi.get_mpz_t(), z.get_mpz_t(), 64);
  mpz_fdiv_r_2exp(lo.get_mpz_t(), z.get_mpz_t(), 64);
  return (static_cast<__int128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
         static_cast<__int128>(mpz_get_ui(lo.get_mpz_t()));
}

std::string describe(const Hyperrectangle& r, const std::vector<std::string>& vars,
                     const TargetFormat& t) {
  std::ostringstream os;
  for (size_t i = 0; i < r.size(); ++i) {
    if (i) os << " x ";
    os << vars[i] << " in [" << format_decimal(r[i].lo, t) << ", "
       << format_decimal(r[i].hi, t) << "]";
  }
  return os.str();
}

}  // namespace

RangeTable range_analysis(const Expr& pre, const TargetFormat& target) {
  if (const auto* c = std::get_if<CompareExpr>(&pre.node)) {
    RangeTable acc;
    if (c->op == CompareOp::ne) return acc;
    for (size_t i = 0; i + 1 < c->args.size(); ++i)
      acc = table_and(std::move(acc), compare_pair(c->op, *c->args[i], *c->args[i + 1], target),
                      target);
    return acc;
  }
  if (const auto* b = std::get_if<BoolOpExpr>(&pre.node)) {
    if (b->kind == BoolOpKind::and_) {
      RangeTable acc;
      for (const auto& a : b->args) acc = table_and(std::move(acc), range_analysis(*a, target), target);
      return acc;
    }
    if (b->kind == BoolOpKind::or_ && !b->args.empty()) {
      RangeTable acc = range_analysis(*b->args[0], target);
      for (size_t i = 1; i < b->args.size(); ++i)
        acc = table_or(acc, range_analysis(*b->args[i], target), target);
      return acc;
    }
  }
  return {};
}

mpq_class weight(const Hyperrectangle& r, const TargetFormat& target) {
  mpq_class w = 1;
  const mpz_class total = target.total_count();
  for (const Range& d : r) w *= mpq_class(target.count_in(d.lo, d.hi), total);
  w.canonicalize();
  return w;
}

mpq_class total_weight(const std::vector<Hyperrectangle>& rs, const TargetFormat& target) {
  mpq_class sum = 0;
  for (const auto& r : rs) sum += weight(r, target);
  return sum;
}

bool contains(const Hyperrectangle& r, const Point& p) {
  if (r.size() != p.size()) return false;
  for (size_t i = 0; i < r.size(); ++i)
    if (!(r[i].lo <= p[i] && p[i] <= r[i].hi)) return false;
  return true;
}

std::pair<Hyperrectangle, Hyperrectangle> split(const Hyperrectangle& r, size_t dim,
                                                const TargetFormat& target) {
  auto [mid, next] = target.split_point(r[dim].lo, r[dim].hi);
  Hyperrectangle a = r, b = r;
  a[dim].hi = canon_zero(mid);
  b[dim].lo = canon_zero(next);
  return {std::move(a), std::move(b)};
}

SearchState search(const ValidityCheck& check, const SearchConfig& config) {
  const Program& prog = check.program();
  const TargetFormat& t = prog.target;
  SearchState state;
  RangeTable table = prog.pre ? range_analysis(*prog.pre, t) : RangeTable{};
  state.seeds = seed_rects(prog.vars, table, t, config.seed_cap);
  state.O = state.seeds;
  if (config.observer) config.observer(0, state);
  const size_t n = prog.vars.size();

  struct Verdict {
    BoolInterval truth;
    bool stuck = false;
  };
  // Split rounds 0..N-1, then one pass that only classifies, so that no
  // rectangle left in O has gone unevaluated.
  for (int it = 0; it <= config.iterations && !state.O.empty(); ++it) {
    const bool may_split = it < config.iterations;
    std::vector<Verdict> verdicts(state.O.size());
    parallel_for(state.O.size(), config.jobs, [&](size_t k) {
      Env env;
      for (size_t i = 0; i < n; ++i) env.insert_or_assign(prog.vars[i], to_interval(state.O[k][i]));
      ValidityCheck::Parts parts = check.evaluate(env, config.bits, config.exponent_bits);
      BoolInterval truth = error_free_truth(parts.all);
      verdicts[k] = {truth, !truth.is_false() && (truth.is_stuck() ||
                                                  is_stuck(parts.output, t))};
    });
    std::vector<Hyperrectangle> next;
    for (size_t k = 0; k < state.O.size(); ++k) {
      Hyperrectangle& rect = state.O[k];
      const Verdict& v = verdicts[k];
      if (v.truth.is_false()) {
        state.F.push_back(std::move(rect));
      } else if (v.stuck) {
        Point witness;
        for (const Range& d : rect)
          witness.push_back(single_value(d, t) ? d.lo : canon_zero(t.split_point(d.lo, d.hi).first));
        state.warnings.push_back({rect, std::move(witness)});
        (config.stuck == StuckPolicy::discard ? state.F : state.kept_stuck).push_back(std::move(rect));
      } else if (v.truth.is_true()) {
        state.T.push_back(std::move(rect));
      } else {
        // Round-robin dimension, skipping dimensions that hold one value.
        std::optional<size_t> dim;
        for (size_t j = 0; j < n && !dim; ++j) {
          size_t d = (static_cast<size_t>(it) + j) % n;
          if (!single_value(rect[d], t)) dim = d;
        }
        if (!dim || !may_split) {
          next.push_back(std::move(rect));
          continue;
        }
        auto [a, b] = split(rect, *dim, t);
        next.push_back(std::move(a));
        next.push_back(std::move(b));
      }
    }
    state.O = std::move(next);
    state.iterations_run = it + 1;
    if (config.observer) config.observer(it + 1, state);
  }
  return state;
}

Sampler::Sampler(std::vector<Hyperrectangle> rects, TargetFormat target)
    : rects_(std::move(rects)), target_(target) {
  mpz_class acc = 0;
  for (const auto& r : rects_) {
    mpz_class w = 1;
    for (const Range& d : r) w *= target_.count_in(d.lo, d.hi);
    acc += w;
    prefix_.push_back(acc);
  }
}

mpz_class uniform_below(const mpz_class& bound, std::mt19937_64& rng) {
  if (bound <= 0) throw std::invalid_argument("uniform_below needs a positive bound");
  const size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  while (true) {
    mpz_class v = 0;
    for (size_t done = 0; done < bits; done += 64) {
      mpz_class word;
      mpz_set_ui(word.get_mpz_t(), 0);
      std::uint64_t r = rng();
      mpz_import(word.get_mpz_t(), 1, 1, sizeof r, 0, 0, &r);
      v = (v << 64) | word;
    }
    mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
    if (v < bound) return v;
  }
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

size_t Sampler::pick(std::mt19937_64& rng) const {
  if (prefix_.empty()) throw std::logic_error("nothing to sample from");
  mpz_class u = uniform_below(prefix_.back(), rng);
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
  return static_cast<size_t>(it - prefix_.begin());
}

Point Sampler::draw(size_t rect, std::mt19937_64& rng) const {
  Point p;
  for (const Range& d : rects_.at(rect)) {
    __int128 lo = target_.ordinal(d.lo);
    mpz_class off = uniform_below(target_.count_in(d.lo, d.hi), rng);
    p.push_back(canon_zero(target_.ordinal_inverse(lo + to_int128(off))));
  }
  return p;
}

SampleResult sample(const SearchState& state, const ValidityCheck& check,
                    const SampleConfig& config) {
  const Program& prog = check.program();
  std::vector<Hyperrectangle> pool = state.T;
  pool.insert(pool.end(), state.O.begin(), state.O.end());
  pool.insert(pool.end(), state.kept_stuck.begin(), state.kept_stuck.end());
  if (pool.empty()) {
    std::ostringstream msg;
    msg << "no valid inputs: ";
    if (state.seeds.empty()) {
      msg << "the precondition admits no input values";
    } else {
      msg << "every input in ";
      for (size_t i = 0; i < state.seeds.size(); ++i)
        msg << (i ? " or " : "") << describe(state.seeds[i], prog.vars, prog.target);
      msg << " was proven invalid";
      if (!state.warnings.empty())
        msg << " or discarded as unsamplable (" << state.warnings.size() << " stuck regions)";
    }
    throw NoValidInputs(msg.str());
  }
  Sampler sampler(std::move(pool), prog.target);
  SampleResult out;
  if (config.count == 0) return out;
  std::vector<SampledPoint> points(config.count);
  std::vector<SampleStats> stats(config.count);
  parallel_for(config.count, config.jobs, [&](size_t j) {
    std::mt19937_64 rng = stream_for(config.seed, j);
    SampleStats& s = stats[j];
    for (size_t attempt = 0; attempt < config.retry_budget; ++attempt) {
      size_t r = sampler.pick(rng);
      Point p = sampler.draw(r, rng);
      GroundTruthResult g = ground_truth(check, p, config.ground_truth);
      ++s.by_rung[g.bits_used][g.outcome];
      switch (g.outcome) {
        case Outcome::valid:
          ++s.accepted;
          points[j] = {std::move(p), g.value, g.bits_used};
          return;
        case Outcome::invalid: ++s.rejected_invalid; break;
        case Outcome::unsamplable: ++s.rejected_unsamplable; break;
        case Outcome::exhausted: ++s.rejected_exhausted; break;
      }
    }
    throw LowYield("low yield: no valid point found in " + std::to_string(config.retry_budget) +
                   " draws");
  });
  out.points = std::move(points);
  for (const auto& s : stats) {
    out.stats.accepted += s.accepted;
    out.stats.rejected_invalid += s.rejected_invalid;
    out.stats.rejected_unsamplable += s.rejected_unsamplable;
    out.stats.rejected_exhausted += s.rejected_exhausted;
    for (const auto& [bits, counts] : s.by_rung)
      for (const auto& [outcome, n] : counts) out.stats.by_rung[bits][outcome] += n;
  }
  return out;
}

}  // namespace rivalkit
