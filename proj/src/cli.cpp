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

#include "rivalkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rivalkit/fpcore.hpp"
#include "rivalkit/search.hpp"

namespace rivalkit::cli {

using nlohmann::ordered_json;

int exit_code_for(Outcome o) {
  switch (o) {
    case Outcome::valid: return kOk;
    case Outcome::invalid: return kInvalid;
    case Outcome::unsamplable: return kUnsamplable;
    case Outcome::exhausted: return kExhausted;
  }
  return kUsage;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string file;
  std::string program_text;
  std::string name;
  std::string target;
  long max_precision = 0;
  CLI::Option* max_precision_opt = nullptr;
  int exp_bits = kDefaultExponentBits;
  unsigned jobs = 1;
  bool json = false;
};

void add_common(CLI::App& cmd, Common& c, bool with_input = true) {
  if (with_input) {
    cmd.add_option("file", c.file, "FPCore file, or - for stdin");
    cmd.add_option("--program", c.program_text, "FPCore text given inline");
    cmd.add_option("--name", c.name, "Pick the benchmark with this :name");
  }
  cmd.add_option("--target", c.target, "binary64 or binary32 (overrides :precision)")
      ->check(CLI::IsMember({"binary64", "binary32"}));
  c.max_precision_opt =
      cmd.add_option("--max-precision", c.max_precision, "Largest working precision in bits")
          ->check(CLI::Range(2L, 1L << 24));
  cmd.add_option("--exp-bits", c.exp_bits, "Exponent bits of the working format")
      ->check(CLI::Range(8, 31));
  cmd.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  cmd.add_flag("--json", c.json, "Emit JSON lines");
}

std::string read_input(const std::string& file) {
  std::ostringstream ss;
  if (file == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    ss << in.rdbuf();
  }
  return ss.str();
}

Program load_program(const Common& c) {
  if (c.file.empty() == c.program_text.empty())
    throw UsageError("give exactly one of a file or --program");
  std::vector<Program> all = parse_programs(c.program_text.empty() ? read_input(c.file)
                                                                    : c.program_text);
  if (all.empty()) throw UsageError("no FPCore form found");
  Program p = all.front();
  if (!c.name.empty()) {
    auto it = std::find_if(all.begin(), all.end(),
                           [&](const Program& q) { return q.name && *q.name == c.name; });
    if (it == all.end()) throw UsageError("no benchmark named '" + c.name + "'");
    p = *it;
  }
  if (!c.target.empty()) p.target = TargetFormat::from_name(c.target);
  return p;
}

GroundTruthConfig ground_truth_config(const Common& c) {
  GroundTruthConfig g;
  long max_bits = kDefaultMaxPrecision;
  if (c.max_precision_opt && c.max_precision_opt->count() > 0) {
    max_bits = c.max_precision;
  } else if (const char* env = std::getenv(kMaxPrecisionEnv)) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 2 || v > (1L << 24))
      throw UsageError(std::string("bad value for ") + kMaxPrecisionEnv + ": " + env);
    max_bits = v;
  }
  g.ladder.max_bits = max_bits;
  g.ladder.start_bits = std::min<mpfr_prec_t>(g.ladder.start_bits, max_bits);
  g.exponent_bits = c.exp_bits;
  return g;
}

ordered_json point_json(const Program& p, const Point& pt, bool hex) {
  ordered_json o = ordered_json::object();
  for (size_t i = 0; i < p.vars.size(); ++i)
    o[p.vars[i]] = hex ? format_hex(pt[i], p.target) : format_decimal(pt[i], p.target);
  return o;
}

ordered_json rect_json(const Hyperrectangle& r, const Program& p) {
  ordered_json o = ordered_json::object();
  for (size_t i = 0; i < p.vars.size(); ++i)
    o[p.vars[i]] = {format_decimal(r[i].lo, p.target), format_decimal(r[i].hi, p.target)};
  return o;
}

ordered_json histogram_json(const std::map<mpfr_prec_t, std::map<Outcome, size_t>>& h) {
  ordered_json o = ordered_json::object();
  for (const auto& [bits, counts] : h) {
    ordered_json c = ordered_json::object();
    for (const auto& [outcome, n] : counts) c[outcome_name(outcome)] = n;
    o[std::to_string(bits)] = c;
  }
  return o;
}

std::string rect_text(const Hyperrectangle& r, const Program& p) {
  std::string s;
  for (size_t i = 0; i < p.vars.size(); ++i) {
    if (i) s += " x ";
    s += p.vars[i] + " in [" + format_decimal(r[i].lo, p.target) + ", " +
         format_decimal(r[i].hi, p.target) + "]";
  }
  return s;
}

std::string point_text(const Program& p, const Point& pt) {
  std::string s;
  for (size_t i = 0; i < p.vars.size(); ++i) {
    if (i) s += ' ';
    s += p.vars[i] + "=" + format_decimal(pt[i], p.target);
  }
  return s;
}

// ---- eval ----

struct EvalArgs {
  Common common;
  std::vector<std::string> points;
  bool verbose = false;
};

Point parse_point(const Program& p, const std::vector<std::string>& items) {
  std::map<std::string, double> given;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("malformed point '" + item + "'");
    std::string name = item.substr(0, eq);
    if (std::find(p.vars.begin(), p.vars.end(), name) == p.vars.end())
      throw UsageError("unknown variable '" + name + "'");
    try {
      given[name] = parse_target_value(item.substr(eq + 1), p.target);
    } catch (const std::exception&) {
      throw UsageError("malformed point '" + item + "'");
    }
  }
  Point pt;
  for (const auto& v : p.vars) {
    auto it = given.find(v);
    if (it == given.end()) throw UsageError("missing value for variable '" + v + "'");
    pt.push_back(it->second == 0 ? 0.0 : it->second);
  }
  return pt;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  Program p = load_program(a.common);
  Point pt = parse_point(p, a.points);
  GroundTruthConfig g = ground_truth_config(a.common);
  g.keep_trace = a.verbose;
  GroundTruthResult r = ground_truth(p, pt, g);
  ordered_json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["type"] = "eval";
  if (p.name) rec["name"] = *p.name;
  rec["target"] = p.target.name();
  rec["point"] = point_json(p, pt, false);
  rec["point_hex"] = point_json(p, pt, true);
  rec["outcome"] = outcome_name(r.outcome);
  if (r.outcome == Outcome::valid) {
    rec["value"] = format_decimal(r.value, p.target);
    rec["value_hex"] = format_hex(r.value, p.target);
  }
  if (r.outcome == Outcome::invalid) rec["reason"] = reason_name(r.reason);
  rec["bits_used"] = r.bits_used;
  if (a.verbose) {
    ordered_json rungs = ordered_json::array();
    for (const auto& t : r.trace)
      rungs.push_back({{"bits", t.bits}, {"interval", render(t.output)},
                       {"validity", render(t.validity)}});
    rec["rungs"] = rungs;
  }
  out << rec.dump() << '\n';
  return exit_code_for(r.outcome);
}

// ---- sample ----

struct SampleArgs {
  Common common;
  size_t points = 8256;
  std::uint64_t seed = 0;
  int iters = 14;
  std::string stuck = "discard";
};

SearchConfig search_config(const SampleArgs& a, const GroundTruthConfig& g) {
  SearchConfig sc;
  sc.iterations = a.iters;
  sc.stuck = a.stuck == "keep" ? StuckPolicy::keep : StuckPolicy::discard;
  sc.bits = g.ladder.rungs().front();
  sc.exponent_bits = g.exponent_bits;
  sc.jobs = a.common.jobs;
  return sc;
}

ordered_json weights_json(const SearchState& s, const TargetFormat& t) {
  ordered_json w;
  w["T"] = total_weight(s.T, t).get_d();
  w["O"] = total_weight(s.O, t).get_d();
  w["F"] = total_weight(s.F, t).get_d();
  w["kept_stuck"] = total_weight(s.kept_stuck, t).get_d();
  w["seeded"] = total_weight(s.seeds, t).get_d();
  return w;
}

void report_warnings(const SearchState& s, const Program& p, std::ostream& err) {
  for (const auto& w : s.warnings)
    err << "warning: unsamplable region " << rect_text(w.rect, p) << " (witness "
        << point_text(p, w.witness) << ")\n";
}

ordered_json summary_json(const Program& p, const SearchState& s, const SampleResult* r,
                          const SampleArgs& a) {
  ordered_json sum;
  sum["schema_version"] = kSchemaVersion;
  sum["type"] = "summary";
  if (p.name) sum["name"] = *p.name;
  sum["target"] = p.target.name();
  sum["seed"] = a.seed;
  sum["requested"] = a.points;
  sum["iterations"] = s.iterations_run;
  sum["rectangles"] = {{"T", s.T.size()}, {"O", s.O.size()}, {"F", s.F.size()},
                       {"kept_stuck", s.kept_stuck.size()}};
  sum["weights"] = weights_json(s, p.target);
  if (r) {
    sum["accepted"] = r->stats.accepted;
    sum["rejected"] = {{"invalid", r->stats.rejected_invalid},
                       {"unsamplable", r->stats.rejected_unsamplable},
                       {"exhausted", r->stats.rejected_exhausted}};
    sum["by_rung"] = histogram_json(r->stats.by_rung);
  }
  ordered_json warns = ordered_json::array();
  for (const auto& w : s.warnings)
    warns.push_back({{"reason", "unsamplable"}, {"region", rect_json(w.rect, p)},
                     {"witness", point_json(p, w.witness, false)}});
  sum["warnings"] = warns;
  return sum;
}

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  Program p = load_program(a.common);
  GroundTruthConfig g = ground_truth_config(a.common);
  ValidityCheck check(p);
  SearchState state = search(check, search_config(a, g));
  report_warnings(state, p, err);
  SampleConfig cfg;
  cfg.count = a.points;
  cfg.seed = a.seed;
  cfg.jobs = a.common.jobs;
  cfg.ground_truth = g;
  SampleResult res;
  try {
    res = sample(state, check, cfg);
  } catch (const NoValidInputs& e) {
    err << "error: " << e.what() << '\n';
    if (a.common.json) {
      ordered_json rec = summary_json(p, state, nullptr, a);
      rec["type"] = "error";
      rec["error"] = "no-valid-inputs";
      rec["message"] = e.what();
      out << rec.dump() << '\n';
    }
    return kNoValidInputs;
  } catch (const LowYield& e) {
    err << "error: " << e.what() << '\n';
    if (a.common.json) {
      ordered_json rec = summary_json(p, state, nullptr, a);
      rec["type"] = "error";
      rec["error"] = "low-yield";
      rec["message"] = e.what();
      out << rec.dump() << '\n';
    }
    return kLowYield;
  }
  for (size_t j = 0; j < res.points.size(); ++j) {
    const SampledPoint& sp = res.points[j];
    if (a.common.json) {
      ordered_json rec;
      rec["schema_version"] = kSchemaVersion;
      rec["type"] = "point";
      rec["index"] = j;
      rec["point"] = point_json(p, sp.point, false);
      rec["point_hex"] = point_json(p, sp.point, true);
      rec["value"] = format_decimal(sp.value, p.target);
      rec["value_hex"] = format_hex(sp.value, p.target);
      rec["bits_used"] = sp.bits_used;
      out << rec.dump() << '\n';
    } else {
      out << point_text(p, sp.point) << " -> " << format_decimal(sp.value, p.target) << " ("
          << sp.bits_used << " bits)\n";
    }
  }
  ordered_json sum = summary_json(p, state, &res, a);
  if (a.common.json) {
    out << sum.dump() << '\n';
  } else {
    out << "accepted " << res.stats.accepted << ", rejected "
        << res.stats.rejected_invalid + res.stats.rejected_unsamplable +
               res.stats.rejected_exhausted
        << " (invalid " << res.stats.rejected_invalid << ", unsamplable "
        << res.stats.rejected_unsamplable << ", exhausted " << res.stats.rejected_exhausted
        << ")\n"
        << "weights T " << sum["weights"]["T"].get<double>() << ", O "
        << sum["weights"]["O"].get<double>() << ", F " << sum["weights"]["F"].get<double>()
        << "\n";
  }
  return kOk;
}

// ---- check ----

struct CheckArgs {
  SampleArgs sample;
  std::string dir;
};

int cmd_check(CheckArgs a, std::ostream& out, std::ostream& err) {
  a.sample.common.json = true;
  namespace fs = std::filesystem;
  if (!fs::is_directory(a.dir)) throw UsageError("not a directory: " + a.dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.dir))
    if (e.is_regular_file() && e.path().extension() == ".fpcore") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  GroundTruthConfig g = ground_truth_config(a.sample.common);
  std::map<mpfr_prec_t, std::map<Outcome, size_t>> total_hist;
  size_t benchmarks = 0, parse_errors = 0, no_valid = 0, low_yield = 0, warnings = 0;
  ordered_json warning_list = ordered_json::array();
  for (const auto& f : files) {
    std::vector<Program> programs;
    try {
      programs = parse_programs(read_input(f.string()));
    } catch (const std::exception& e) {
      ++parse_errors;
      out << ordered_json{{"schema_version", kSchemaVersion}, {"type", "file"},
                          {"file", f.filename().string()}, {"status", "parse-error"},
                          {"message", e.what()}}
                 .dump()
          << '\n';
      continue;
    }
    for (Program& p : programs) {
      ++benchmarks;
      if (!a.sample.common.target.empty())
        p.target = TargetFormat::from_name(a.sample.common.target);
      ValidityCheck check(p);
      SearchState state = search(check, search_config(a.sample, g));
      report_warnings(state, p, err);
      warnings += state.warnings.size();
      ordered_json rec;
      rec["schema_version"] = kSchemaVersion;
      rec["type"] = "benchmark";
      rec["file"] = f.filename().string();
      if (p.name) rec["name"] = *p.name;
      SampleConfig cfg;
      cfg.count = a.sample.points;
      cfg.seed = a.sample.seed;
      cfg.jobs = a.sample.common.jobs;
      cfg.ground_truth = g;
      try {
        SampleResult res = sample(state, check, cfg);
        rec["status"] = "ok";
        rec["accepted"] = res.stats.accepted;
        rec["rejected"] = res.stats.draws() - res.stats.accepted;
        rec["by_rung"] = histogram_json(res.stats.by_rung);
        for (const auto& [bits, counts] : res.stats.by_rung)
          for (const auto& [o, n] : counts) total_hist[bits][o] += n;
      } catch (const NoValidInputs& e) {
        ++no_valid;
        rec["status"] = "no-valid-inputs";
        rec["message"] = e.what();
      } catch (const LowYield& e) {
        ++low_yield;
        rec["status"] = "low-yield";
        rec["message"] = e.what();
      }
      rec["weights"] = weights_json(state, p.target);
      rec["warnings"] = state.warnings.size();
      for (const auto& w : state.warnings)
        warning_list.push_back({{"file", f.filename().string()},
                                {"name", p.name.value_or("")},
                                {"region", rect_json(w.rect, p)},
                                {"witness", point_json(p, w.witness, false)}});
      out << rec.dump() << '\n';
    }
  }
  ordered_json report;
  report["schema_version"] = kSchemaVersion;
  report["type"] = "report";
  report["files"] = files.size();
  report["benchmarks"] = benchmarks;
  report["parse_errors"] = parse_errors;
  report["no_valid_inputs"] = no_valid;
  report["low_yield"] = low_yield;
  report["by_rung"] = histogram_json(total_hist);
  report["warnings"] = warning_list;
  out << report.dump() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correctly rounded ground truth and input sampling for floating-point programs"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Ground truth of a program at one point");
  add_common(*eval, eval_args.common);
  eval->add_option("--point", eval_args.points, "name=value (decimal or hex float)");
  eval->add_flag("--verbose", eval_args.verbose, "Report the interval at each rung");

  auto add_sampling = [](CLI::App& cmd, SampleArgs& s) {
    cmd.add_option("--points", s.points, "Number of valid points to draw");
    cmd.add_option("--seed", s.seed, "Random seed");
    cmd.add_option("--iters", s.iters, "Search iterations")->check(CLI::Range(0, 64));
    cmd.add_option("--stuck", s.stuck, "What to do with unsamplable regions")
        ->check(CLI::IsMember({"keep", "discard"}));
  };
  SampleArgs sample_args;
  CLI::App* samp = app.add_subcommand("sample", "Search for valid inputs and sample them");
  add_common(*samp, sample_args.common);
  add_sampling(*samp, sample_args);

  CheckArgs check_args;
  check_args.sample.points = 256;
  CLI::App* chk = app.add_subcommand("check", "Sample every benchmark in a directory");
  chk->add_option("dir", check_args.dir, "Directory of .fpcore files")->required();
  add_common(*chk, check_args.sample.common, false);
  add_sampling(*chk, check_args.sample);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit cleanly; anything else is a usage error.
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  try {
    if (eval->parsed()) return cmd_eval(eval_args, out);
    if (samp->parsed()) return cmd_sample(sample_args, out, err);
    if (chk->parsed()) return cmd_check(check_args, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace rivalkit::cli
