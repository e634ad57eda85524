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

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sossubmod {

using Rational = mpq_class;

/// Thrown when an input exceeds the supported problem size.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Thrown on malformed textual input (JSON, CSV, numeric literals).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts integers, decimals ("-1.25"), scientific notation ("3e-2") and
// fractions ("7/3"). The value is reconstructed exactly.
Rational parse_rational(std::string_view text);

// Exact decimal when the reduced denominator is of the form 2^a 5^b,
// otherwise "p/q".
std::string format_rational(const Rational& q);

// Exact binary value of a finite double.
Rational rational_from_double(double v);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace sossubmod
