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
#include <string>
#include <utility>

#include "rivalkit/backend.hpp"

namespace rivalkit {

// A binary floating-point target format. Values of either format are held
// as double (binary32 values embed exactly).
class TargetFormat {
 public:
  enum class Kind { binary64, binary32 };

  static TargetFormat binary64() { return TargetFormat(Kind::binary64); }
  static TargetFormat binary32() { return TargetFormat(Kind::binary32); }
  // Accepts "binary64" / "binary32".
  static TargetFormat from_name(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  int significand_bits() const { return kind_ == Kind::binary64 ? 53 : 24; }
  double k_minus() const { return -k_plus(); }
  double k_plus() const;

  // Number of members of S_target, ±0 collapsed, ±inf included.
  mpz_class total_count() const;

  bool contains(double x) const;

  // Ordinal of x; +0 and -0 share ordinal 0, -inf and +inf sit at the ends.
  __int128 ordinal(double x) const;
  double ordinal_inverse(__int128 i) const;
  __int128 max_ordinal() const;

  // ordinal(hi) - ordinal(lo) + 1.
  mpz_class count_in(double lo, double hi) const;

  // mid = value at floor((ord(lo) + ord(hi)) / 2) and its successor.
  std::pair<double, double> split_point(double lo, double hi) const;

  double round(const BigFloat& x, Round mode) const;
  double next_up(double x) const { return ordinal_inverse(ordinal(x) + 1); }
  double next_down(double x) const { return ordinal_inverse(ordinal(x) - 1); }

  friend bool operator==(const TargetFormat& a, const TargetFormat& b) {
    return a.kind_ == b.kind_;
  }

 private:
  explicit TargetFormat(Kind k) : kind_(k) {}
  Kind kind_;
};

mpz_class to_mpz(__int128 v);

// Shortest round-trip decimal and C99 hex-float renderings of a target value.
std::string format_decimal(double x, const TargetFormat& t);
std::string format_hex(double x, const TargetFormat& t);

// Parses decimal or hex-float text and rounds to nearest in the target.
double parse_target_value(const std::string& text, const TargetFormat& t);

}  // namespace rivalkit
