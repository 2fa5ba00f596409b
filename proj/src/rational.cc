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

#include "dniv/rational.hh"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace dniv {

Rat rat_pow(const Rat& q, long e) {
  if (e == 0) return Rat(1);
  if (q == 0) {
    if (e < 0) throw std::domain_error("rat_pow: zero base with negative exponent");
    return Rat(0);
  }
  const unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), q.get_num_mpz_t(), mag);
  mpz_pow_ui(out.get_den_mpz_t(), q.get_den_mpz_t(), mag);
  if (e < 0) {
    if (out == 0) throw std::domain_error("rat_pow: zero base with negative exponent");
    out = 1 / out;
  }
  out.canonicalize();
  return out;
}

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  const auto check_digits = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = part[0] == '-' ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    }
    return true;
  };
  const std::size_t slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!check_digits(num) || !check_digits(den) || den[0] == '-') {
    throw std::invalid_argument("malformed rational: " + text);
  }
  Rat out;
  if (mpq_set_str(out.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0) {
    throw std::invalid_argument("malformed rational: " + text);
  }
  if (out.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  out.canonicalize();
  return out;
}

std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

RatioBound::RatioBound(Rat v) : value(std::move(v)) {
  if (value < 1) throw std::invalid_argument("ratio bound must be >= 1");
}

bool within_ratio(const Rat& a, const Rat& b, const RatioBound& bound) {
  return a <= bound.value * b && b <= bound.value * a;
}

}  // namespace dniv
