// Copyright 2026 The BPUC Authors
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

// Exact rational arithmetic helpers. All costs, bounds and gaps that take
// part in pruning decisions are carried as GMP rationals.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bpuc {

using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(mpz_class(std::to_string(num), 10), mpz_class(std::to_string(den), 10));
  r.canonicalize();
  return r;
}

inline Rational make_rational(const std::string& num) {
  Rational r(mpz_class(num, 10), 1);
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

// Largest integer <= r.
inline mpz_class floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline std::int64_t to_int64(const mpz_class& z) {
  return static_cast<std::int64_t>(std::stoll(z.get_str()));
}

// Accepts "12", "12.345", "-0.5", "3/4". Returns nullopt on anything else.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  std::string_view body = text.substr(pos);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d{std::string(den), 10};
    if (d == 0) return std::nullopt;
    value = Rational(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot);
    std::string_view fp = body.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      return std::nullopt;
    std::string digits = std::string(ip) + std::string(fp);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    value = Rational(mpz_class(digits.empty() ? "0" : digits, 10), den);
    value.canonicalize();
  } else {
    if (!all_digits(body)) return std::nullopt;
    value = Rational(mpz_class(std::string(body), 10), 1);
  }
  if (negative) value = -value;
  return value;
}

// Fixed-point decimal with `digits` fractional digits, rounding half to even.
inline std::string format_fixed(const Rational& value, unsigned digits = 6) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  Rational scaled = abs(value) * scale;
  mpz_class q = floor_of(scaled);
  Rational rem = scaled - Rational(q);
  const Rational half(1, 2);
  if (rem > half || (rem == half && mpz_odd_p(q.get_mpz_t()))) q += 1;
  std::string s = q.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = (value < 0 && q != 0) ? "-" : "";
  out += s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  return out;
}

// Exact text form: a terminating decimal when one exists, otherwise "p/q".
// parse_rational reads either form back to the same value.
inline std::string format_exact(const Rational& value) {
  mpz_class den = value.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return value.get_num().get_str() + "/" + value.get_den().get_str();
  unsigned digits = twos > fives ? twos : fives;
  if (digits == 0) return value.get_num().get_str();
  std::string s = format_fixed(value, digits);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace bpuc
