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

#include <iosfwd>
#include <string>

#include "rivalkit/evaluator.hpp"

namespace rivalkit::cli {

// Process exit codes; each depends only on the outcome.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalid = 2,
  kUnsamplable = 3,
  kExhausted = 4,
  kNoValidInputs = 5,
  kLowYield = 6,
};

int exit_code_for(Outcome o);

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kMaxPrecisionEnv = "RIVALKIT_MAX_PRECISION";

// Entry point shared by the executable and the tests. Records go to
// `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rivalkit::cli
