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

#ifndef DNIV_MECHANISMS_HH_
#define DNIV_MECHANISMS_HH_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dniv/model.hh"

namespace dniv {

// Two-sided geometric noise truncated to keep center + noise within
// [-bound, bound]; overflowing tails pile up on the two boundary
// offsets.
struct TgParams {
  long bound;    // >= 1
  long center;   // in [-bound, bound]
  Rat p;         // decay, in [0, 1); 0 gives a point mass at offset 0
};

void check_tg_params(const TgParams& par);

// Exact probability of noise offset n: p^|n| scaled by 1/(1+p) when
// center+n sits on a boundary and by (1-p)/(1+p) strictly inside.
Rat tg_pmf(const TgParams& par, long n);

// Seedable source of exact-rational Bernoulli draws. A flip on q
// compares a uniform integer below q's denominator against its
// numerator; q <= 0 and q >= 1 short-circuit. Deterministic per seed.
class CoinSource {
 public:
  explicit CoinSource(unsigned long seed);

  bool flip(const Rat& q);
  CoinSource fork();  // child source seeded from this stream
  long flips() const { return flips_; }

 private:
  gmp_randclass rng_;
  long flips_ = 0;
};

// One draw of the noise offset by a two-branch geometric walk: pick a
// sign, test the far boundary, then walk inward with a residual
// Bernoulli weight updated as q <- p*q/(1-q). Expected O(1) flips.
long tg_sample(const TgParams& par, CoinSource& coins);

struct TgDpReport {
  bool ok = false;
  bool infinite = false;  // outcome possible under one center only
  Rat worst_ratio = 1;
  long center1 = 0, center2 = 0, outcome = 0;
};

// Two-sided outcome-ratio check between all center pairs at most
// sensitivity apart, over all outcomes in [-bound, bound]. The
// single-argument form checks against p^-sensitivity.
TgDpReport tg_dp_check(long bound, const Rat& p, long sensitivity);
TgDpReport tg_dp_check(long bound, const Rat& p, long sensitivity, const RatioBound& rho);

struct TgTailReport {
  bool ok = false;
  Rat tail_mass = 0;
  Rat bound = 0;
};

// Pr[|noise| >= b] <= 2 p^b / (1+p), checked exactly.
TgTailReport tg_tail_check(const TgParams& par, long b);

// Databases are bounded multisets of integer-valued data points.
using Multiset = std::vector<long>;  // kept sorted
using OutcomeDist = std::map<long, Rat>;

// A released statistic with truncated geometric noise: the response is
// statistic(db) + noise + shift, where the statistic is centered into
// [-bound, bound] and shift only relocates the response range.
struct SanitizedQuery {
  std::string name;
  std::function<long(const Multiset&)> statistic;
  long bound;
  long sensitivity;  // worst-case statistic change per insertion
  Rat noise_p;
  long shift;
};

// Noisy size of the database, released in [0, 2*ceil(capacity/2)].
SanitizedQuery make_count_query(long capacity, const Rat& p);

// Noisy sum of data points valued in [-100, 100], released in
// [-100*capacity, 100*capacity].
SanitizedQuery make_sum_query(long capacity, const Rat& p);

// Noisy sum of data points valued in {-1, 0, 1}, released in
// [-capacity, capacity]. Unlike the count, this statistic moves by 2
// when one stored value is swapped for its negation.
SanitizedQuery make_unit_sum_query(long capacity, const Rat& p);

// Exact response distribution of a query on a database.
OutcomeDist query_outcomes(const SanitizedQuery& query, const Multiset& db);

OutcomeDist count_mechanism(const Multiset& db, long capacity, const Rat& p);
OutcomeDist sum_mechanism(const Multiset& db, long capacity, const Rat& p);

// The query run on one database as a closed program: a single hidden
// step from "run" into terminal states "ret<response>".
Automaton function_to_automaton(const SanitizedQuery& query, const Multiset& db);

// The geometric-walk sampler as a closed program: one hidden coin flip
// per state, terminals "ret<center+offset+shift>". Its absorption
// distribution equals the pmf exactly.
Automaton build_sampler_automaton(const TgParams& par, long shift);

struct FnDpWitness {
  Multiset db1, db2;
  long outcome = 0;
  Rat prob1 = 0, prob2 = 0;
};

struct FnDpReport {
  bool ok = false;
  bool infinite = false;
  Rat worst_ratio = 1;
  std::optional<FnDpWitness> witness;
};

// Certifies per-response two-sided ratios over explicit database
// pairs, comparing the hidden-closure outputs of the automaton
// encodings of the query runs.
FnDpReport check_function_dp(const SanitizedQuery& query,
                             const std::vector<std::pair<Multiset, Multiset>>& neighbor_pairs,
                             const RatioBound& rho);

}  // namespace dniv

#endif  // DNIV_MECHANISMS_HH_
