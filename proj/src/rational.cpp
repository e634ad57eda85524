// Copyright 2026 The sossubmod Authors.
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

#include "sossubmod/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace sossubmod {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_neg = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_neg = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw ParseError("invalid exponent in number '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_neg) exponent = -exponent;
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw ParseError("invalid number '" + std::string(text) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    frac_len = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw ParseError("invalid number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  mpz_class mantissa(digits, 10);
  long scale = exponent - frac_len;
  Rational q;
  if (scale >= 0) {
    q = Rational(mantissa * pow10(static_cast<unsigned long>(scale)));
  } else {
    q = Rational(mantissa, pow10(static_cast<unsigned long>(-scale)));
    q.canonicalize();
  }
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty numeric literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  mpz_class den = q.get_den();
  unsigned long twos = 0;
  unsigned long fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return q.get_num().get_str() + "/" + q.get_den().get_str();
  unsigned long places = std::max(twos, fives);
  mpz_class scaled = q.get_num() * pow10(places) / q.get_den();
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value cannot be made rational");
  Rational q(v);
  q.canonicalize();
  return q;
}

}  // namespace sossubmod
