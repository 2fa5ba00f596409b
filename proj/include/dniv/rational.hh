/*
 * Copyright (c) 2026, the dniv authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DNIV_RATIONAL_HH_
#define DNIV_RATIONAL_HH_

#include <gmpxx.h>

#include <string>

namespace dniv {

// All probabilities and ratios are arbitrary-precision rationals; no
// floating point appears anywhere in the checking pipeline.
using Rat = mpq_class;

// q^e for any integer e; e < 0 requires q != 0.
Rat rat_pow(const Rat& q, long e);

// Accepts "num" or "num/den" with an optional leading '-'. Throws
// std::invalid_argument on malformed text or a zero denominator.
Rat parse_rat(const std::string& text);

// Canonical "num/den" rendering (denominator always printed).
std::string rat_str(const Rat& q);

// Multiplicative indistinguishability bound, always >= 1.
struct RatioBound {
  Rat value;

  explicit RatioBound(Rat v);
};

// a <= bound*b and b <= bound*a. Zero masses are within any bound only
// of other zero masses.
bool within_ratio(const Rat& a, const Rat& b, const RatioBound& bound);

}  // namespace dniv

#endif  // DNIV_RATIONAL_HH_
