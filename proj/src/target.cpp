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

#include "rivalkit/target.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rivalkit {

namespace {

constexpr uint64_t kInf64 = 0x7FF0000000000000ULL;
constexpr uint32_t kInf32 = 0x7F800000U;

}  // namespace

TargetFormat TargetFormat::from_name(const std::string& name) {
  if (name == "binary64") return binary64();
  if (name == "binary32") return binary32();
  throw std::invalid_argument("unknown target format: " + name);
}

std::string TargetFormat::name() const {
  return kind_ == Kind::binary64 ? "binary64" : "binary32";
}

double TargetFormat::k_plus() const {
  return kind_ == Kind::binary64 ? std::numeric_limits<double>::max()
                                 : static_cast<double>(std::numeric_limits<float>::max());
}

__int128 TargetFormat::max_ordinal() const {
  return kind_ == Kind::binary64 ? static_cast<__int128>(kInf64)
                                 : static_cast<__int128>(kInf32);
}

mpz_class to_mpz(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  mpz_class hi = static_cast<unsigned long>(static_cast<uint64_t>(u >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<uint64_t>(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

mpz_class TargetFormat::total_count() const { return to_mpz(2 * max_ordinal() + 1); }

bool TargetFormat::contains(double x) const {
  if (std::isnan(x)) return false;
  if (kind_ == Kind::binary64) return true;
  return static_cast<double>(static_cast<float>(x)) == x;
}

__int128 TargetFormat::ordinal(double x) const {
  if (!contains(x)) throw std::invalid_argument("value is not a member of " + name());
  __int128 mag;
  if (kind_ == Kind::binary64)
    mag = std::bit_cast<uint64_t>(std::fabs(x));
  else
    mag = std::bit_cast<uint32_t>(std::fabs(static_cast<float>(x)));
  return std::signbit(x) ? -mag : mag;
}

double TargetFormat::ordinal_inverse(__int128 i) const {
  if (i > max_ordinal() || i < -max_ordinal())
    throw std::out_of_range("ordinal out of range");
  __int128 m = i < 0 ? -i : i;
  double v;
  if (kind_ == Kind::binary64)
    v = std::bit_cast<double>(static_cast<uint64_t>(m));
  else
    v = static_cast<double>(std::bit_cast<float>(static_cast<uint32_t>(m)));
  return i < 0 ? -v : v;
}

mpz_class TargetFormat::count_in(double lo, double hi) const {
  __int128 a = ordinal(lo), b = ordinal(hi);
  if (b < a) throw std::invalid_argument("count_in requires lo <= hi");
  return to_mpz(b - a + 1);
}

std::pair<double, double> TargetFormat::split_point(double lo, double hi) const {
  __int128 a = ordinal(lo), b = ordinal(hi);
  if (b <= a) throw std::invalid_argument("cannot split a single value");
  __int128 s = a + b;
  __int128 mid = s >= 0 ? s / 2 : -((-s + 1) / 2);  // floor division
  return {ordinal_inverse(mid), ordinal_inverse(mid + 1)};
}

namespace {

// Rounds through MPFR with the format's exponent range so that overflow,
// underflow and subnormals match IEEE semantics with a single rounding.
template <typename SetFn>
double round_in_format(TargetFormat::Kind kind, Round mode, SetFn set) {
  const bool is64 = kind == TargetFormat::Kind::binary64;
  mpfr_exp_t old_emin = mpfr_get_emin(), old_emax = mpfr_get_emax();
  mpfr_set_emin(is64 ? -1073 : -148);
  mpfr_set_emax(is64 ? 1024 : 128);
  BigFloat t(is64 ? 53 : 24);
  int tern = set(t.raw(), to_mpfr(mode));
  tern = mpfr_check_range(t.raw(), tern, to_mpfr(mode));
  mpfr_subnormalize(t.raw(), tern, to_mpfr(mode));
  double v = is64 ? mpfr_get_d(t.raw(), MPFR_RNDN)
                  : static_cast<double>(mpfr_get_flt(t.raw(), MPFR_RNDN));
  mpfr_set_emin(old_emin);
  mpfr_set_emax(old_emax);
  return v == 0 ? 0.0 : v;
}

}  // namespace

double TargetFormat::round(const BigFloat& x, Round mode) const {
  if (x.is_nan()) throw std::invalid_argument("cannot round NaN");
  if (x.is_zero()) return 0.0;
  if (x.is_inf()) return x.sign() > 0 ? HUGE_VAL : -HUGE_VAL;
  const bool is64 = kind_ == Kind::binary64;
  const mpfr_exp_t e = mpfr_get_exp(x.raw());
  const int s = x.sign();
  // Values far outside the format range are decided without handing an
  // out-of-range operand to MPFR.
  if (e > (is64 ? 1024 : 128)) {
    bool to_inf = mode == Round::nearest || (mode == Round::up) == (s > 0);
    double m = k_plus();
    return s > 0 ? (to_inf ? HUGE_VAL : m) : (to_inf ? -HUGE_VAL : -m);
  }
  const mpfr_exp_t emin = is64 ? -1073 : -148;
  if (e < emin) {
    const double tiny = is64 ? std::ldexp(1.0, -1074) : std::ldexp(1.0, -149);
    bool away;
    if (mode == Round::nearest) {
      // |x| < 2^(emin-1) here, so ties only at exactly half the tiny value.
      BigFloat half(2);
      mpfr_set_ui_2exp(half.raw(), 1, emin - 2, MPFR_RNDN);
      BigFloat ax(x.precision());
      mpfr_abs(ax.raw(), x.raw(), MPFR_RNDN);
      away = ax > half;
    } else {
      away = (mode == Round::up) == (s > 0);
    }
    double r = away ? tiny : 0.0;
    return s > 0 ? r : (r == 0 ? 0.0 : -r);
  }
  return round_in_format(kind_, mode, [&](mpfr_ptr t, mpfr_rnd_t r) {
    return mpfr_set(t, x.raw(), r);
  });
}

std::string format_decimal(double x, const TargetFormat& t) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::to_chars_result r;
  if (t.kind() == TargetFormat::Kind::binary32)
    r = std::to_chars(buf, buf + sizeof buf, static_cast<float>(x));
  else
    r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string format_hex(double x, const TargetFormat& t) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::to_chars_result r;
  if (t.kind() == TargetFormat::Kind::binary32)
    r = std::to_chars(buf, buf + sizeof buf, static_cast<float>(x), std::chars_format::hex);
  else
    r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::hex);
  std::string s(buf, r.ptr);
  if (!s.empty() && s[0] == '-') return "-0x" + s.substr(1);
  return "0x" + s;
}

double parse_target_value(const std::string& text, const TargetFormat& t) {
  if (text == "inf" || text == "+inf" || text == "INFINITY" || text == "+INFINITY")
    return std::numeric_limits<double>::infinity();
  if (text == "-inf" || text == "-INFINITY") return -std::numeric_limits<double>::infinity();
  bool ok = true;
  double v = round_in_format(t.kind(), Round::nearest, [&](mpfr_ptr out, mpfr_rnd_t r) {
    char* end = nullptr;
    int tern = mpfr_strtofr(out, text.c_str(), &end, 0, r);
    ok = end != text.c_str() && *end == '\0';
    return tern;
  });
  if (!ok || std::isnan(v)) throw std::invalid_argument("malformed number: " + text);
  return v;
}

}  // namespace rivalkit
