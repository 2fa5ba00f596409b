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

#include "dniv/mechanisms.hh"

#include <algorithm>
#include <stdexcept>

#include "dniv/closure.hh"

namespace dniv {
namespace {

long labs_long(long v) { return v < 0 ? -v : v; }

std::string ret_name(long response) { return "ret" + std::to_string(response); }

}  // namespace

void check_tg_params(const TgParams& par) {
  if (par.bound < 1) throw std::invalid_argument("noise bound must be >= 1");
  if (labs_long(par.center) > par.bound) {
    throw std::invalid_argument("noise center outside [-bound, bound]");
  }
  if (par.p < 0 || par.p >= 1) throw std::invalid_argument("noise decay must be in [0, 1)");
}

Rat tg_pmf(const TgParams& par, long n) {
  check_tg_params(par);
  const long shifted = par.center + n;
  if (labs_long(shifted) > par.bound) return 0;
  const Rat geom = rat_pow(par.p, labs_long(n));
  if (labs_long(shifted) == par.bound) return geom / (1 + par.p);
  return geom * (1 - par.p) / (1 + par.p);
}

CoinSource::CoinSource(unsigned long seed) : rng_(gmp_randinit_mt) { rng_.seed(seed); }

bool CoinSource::flip(const Rat& q) {
  ++flips_;
  if (q >= 1) return true;
  if (q <= 0) return false;
  const mpz_class draw = rng_.get_z_range(q.get_den());
  return draw < q.get_num();
}

CoinSource CoinSource::fork() {
  const mpz_class child = rng_.get_z_bits(64);
  return CoinSource(child.get_ui());
}

long tg_sample(const TgParams& par, CoinSource& coins) {
  check_tg_params(par);
  const long m = par.bound;
  const long c = par.center;
  const Rat& p = par.p;
  if (p == 0) return 0;

  if (coins.flip(p / (1 + p))) {
    if (coins.flip(rat_pow(p, m + c - 1))) return -m - c;
    Rat q = (1 - p) / (1 - rat_pow(p, m + c - 1));
    for (long n = -1; n > -m - c + 1; --n) {
      if (coins.flip(q)) return n;
      q = p * q / (1 - q);
    }
    return -m - c + 1;
  }
  if (coins.flip(rat_pow(p, m - c))) return m - c;
  Rat q = (1 - p) / (1 - rat_pow(p, m - c));
  for (long n = 0; n < m - c - 1; ++n) {
    if (coins.flip(q)) return n;
    q = p * q / (1 - q);
  }
  return m - c - 1;
}

TgDpReport tg_dp_check(long bound, const Rat& p, long sensitivity) {
  if (p == 0 && sensitivity > 0) {
    throw std::invalid_argument("no finite default bound for zero-decay noise");
  }
  return tg_dp_check(bound, p, sensitivity, RatioBound{rat_pow(p, -sensitivity)});
}

TgDpReport tg_dp_check(long bound, const Rat& p, long sensitivity, const RatioBound& rho) {
  if (sensitivity < 0) throw std::invalid_argument("sensitivity must be >= 0");
  check_tg_params({bound, 0, p});
  TgDpReport report;
  for (long c1 = -bound; c1 <= bound; ++c1) {
    for (long c2 = c1; c2 <= std::min(bound, c1 + sensitivity); ++c2) {
      for (long r = -bound; r <= bound; ++r) {
        const Rat p1 = tg_pmf({bound, c1, p}, r - c1);
        const Rat p2 = tg_pmf({bound, c2, p}, r - c2);
        if (p1 == 0 && p2 == 0) continue;
        if (p1 == 0 || p2 == 0) {
          if (!report.infinite) {
            report.infinite = true;
            report.center1 = c1;
            report.center2 = c2;
            report.outcome = r;
          }
          continue;
        }
        const Rat ratio = p1 >= p2 ? Rat(p1 / p2) : Rat(p2 / p1);
        if (ratio > report.worst_ratio) {
          report.worst_ratio = ratio;
          if (!report.infinite) {
            report.center1 = c1;
            report.center2 = c2;
            report.outcome = r;
          }
        }
      }
    }
  }
  report.ok = !report.infinite && report.worst_ratio <= rho.value;
  return report;
}

TgTailReport tg_tail_check(const TgParams& par, long b) {
  check_tg_params(par);
  if (b < 0) throw std::invalid_argument("tail offset must be >= 0");
  TgTailReport report;
  for (long n = -par.bound - par.center; n <= par.bound - par.center; ++n) {
    if (labs_long(n) >= b) report.tail_mass += tg_pmf(par, n);
  }
  report.bound = 2 * rat_pow(par.p, b) / (1 + par.p);
  report.ok = report.tail_mass <= report.bound;
  return report;
}

SanitizedQuery make_count_query(long capacity, const Rat& p) {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  const long half = (capacity + 1) / 2;
  return SanitizedQuery{
      "count",
      [half](const Multiset& db) { return static_cast<long>(db.size()) - half; },
      half,
      1,
      p,
      half,
  };
}

SanitizedQuery make_sum_query(long capacity, const Rat& p) {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  const long bound = 100 * capacity;
  return SanitizedQuery{
      "sum",
      [](const Multiset& db) {
        long total = 0;
        for (long v : db) {
          if (labs_long(v) > 100) throw std::invalid_argument("sum data point outside [-100, 100]");
          total += v;
        }
        return total;
      },
      bound,
      100,
      p,
      0,
  };
}

SanitizedQuery make_unit_sum_query(long capacity, const Rat& p) {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  return SanitizedQuery{
      "usum",
      [](const Multiset& db) {
        long total = 0;
        for (long v : db) {
          if (labs_long(v) > 1) throw std::invalid_argument("unit sum data point outside {-1,0,1}");
          total += v;
        }
        return total;
      },
      capacity,
      1,
      p,
      0,
  };
}

OutcomeDist query_outcomes(const SanitizedQuery& query, const Multiset& db) {
  const long center = query.statistic(db);
  const TgParams par{query.bound, center, query.noise_p};
  check_tg_params(par);
  OutcomeDist out;
  for (long n = -par.bound - center; n <= par.bound - center; ++n) {
    const Rat mass = tg_pmf(par, n);
    if (mass > 0) out[center + n + query.shift] = mass;
  }
  return out;
}

OutcomeDist count_mechanism(const Multiset& db, long capacity, const Rat& p) {
  return query_outcomes(make_count_query(capacity, p), db);
}

OutcomeDist sum_mechanism(const Multiset& db, long capacity, const Rat& p) {
  return query_outcomes(make_sum_query(capacity, p), db);
}

Automaton function_to_automaton(const SanitizedQuery& query, const Multiset& db) {
  const OutcomeDist outcomes = query_outcomes(query, db);
  PltsBuilder builder;
  builder.add_action("step", ActionKind::kHidden);
  builder.add_state("run");
  std::vector<std::pair<std::string, Rat>> targets;
  for (const auto& [response, mass] : outcomes) {
    builder.add_state(ret_name(response));
    targets.emplace_back(ret_name(response), mass);
  }
  builder.add_transition("run", "step", targets);
  return builder.build_automaton("run");
}

Automaton build_sampler_automaton(const TgParams& par, long shift) {
  check_tg_params(par);
  const long m = par.bound;
  const long c = par.center;
  const Rat& p = par.p;

  PltsBuilder builder;
  builder.add_action("step", ActionKind::kHidden);
  const auto ret = [&](long offset) {
    const std::string name = ret_name(c + offset + shift);
    if (!builder.has_state(name)) builder.add_state(name);
    return name;
  };
  // Coin-flip node: heads with weight w, clamped to certainty outside
  // (0, 1) so boundary centers degenerate exactly.
  const auto flip_node = [&](const std::string& name, const Rat& w, const std::string& heads,
                             const std::string& tails) {
    builder.add_state(name);
    if (w >= 1) {
      builder.add_transition(name, "step", {{heads, Rat(1)}});
    } else if (w <= 0) {
      builder.add_transition(name, "step", {{tails, Rat(1)}});
    } else {
      builder.add_transition(name, "step", {{heads, w}, {tails, 1 - w}});
    }
  };

  if (p == 0) {
    const std::string only = ret(0);
    builder.add_state("start");
    builder.add_transition("start", "step", {{only, Rat(1)}});
    return builder.build_automaton("start");
  }

  // One branch of the walk: far boundary first, then inward from the
  // first step with the residual weight recurrence.
  const auto branch = [&](const std::string& root, long span, long dir, const Rat& far_weight) {
    const long far = dir * span;
    if (far_weight >= 1) {
      flip_node(root, Rat(1), ret(far), ret(far));
      return;
    }
    std::vector<std::string> chain;  // walk nodes, outermost last
    const long last = dir * (span - 1);
    Rat q = (1 - p) / (1 - far_weight);
    // Walk offsets: dir=+1 covers 0..span-2, dir=-1 covers -1..-(span-2).
    std::vector<std::pair<long, Rat>> steps;
    for (long k = (dir > 0 ? 0 : 1); dir > 0 ? k <= span - 2 : k <= span - 2; ++k) {
      steps.emplace_back(dir * k, q);
      q = p * q / (1 - q);
    }
    std::string next = ret(last);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      const std::string name = "w" + std::to_string(it->first);
      flip_node(name, it->second, ret(it->first), next);
      next = name;
    }
    flip_node(root, far_weight, ret(far), next);
  };

  branch("neg", m + c, -1, rat_pow(p, m + c - 1));
  branch("pos", m - c, +1, rat_pow(p, m - c));
  flip_node("start", p / (1 + p), "neg", "pos");
  return builder.build_automaton("start");
}

FnDpReport check_function_dp(const SanitizedQuery& query,
                             const std::vector<std::pair<Multiset, Multiset>>& neighbor_pairs,
                             const RatioBound& rho) {
  FnDpReport report;
  for (const auto& [db1, db2] : neighbor_pairs) {
    const auto closure_by_response = [&](const Multiset& db) {
      const Automaton aut = function_to_automaton(query, db);
      Dist start;
      start.entries[aut.initial] = 1;
      const SubDist nu = hidden_closure(aut.plts, start);
      OutcomeDist out;
      for (const auto& [s, mass] : nu.entries) {
        out[std::stol(aut.plts.states[s].substr(3))] = mass;
      }
      return out;
    };
    const OutcomeDist o1 = closure_by_response(db1);
    const OutcomeDist o2 = closure_by_response(db2);
    std::map<long, bool> responses;
    for (const auto& [r, mass] : o1) responses[r] = true;
    for (const auto& [r, mass] : o2) responses[r] = true;
    for (const auto& [r, unused] : responses) {
      auto it1 = o1.find(r);
      auto it2 = o2.find(r);
      const Rat p1 = it1 == o1.end() ? Rat(0) : it1->second;
      const Rat p2 = it2 == o2.end() ? Rat(0) : it2->second;
      if (p1 == 0 || p2 == 0) {
        if (!report.infinite) {
          report.infinite = true;
          report.witness = FnDpWitness{db1, db2, r, p1, p2};
        }
        continue;
      }
      const Rat ratio = p1 >= p2 ? Rat(p1 / p2) : Rat(p2 / p1);
      if (ratio > report.worst_ratio) {
        report.worst_ratio = ratio;
        if (!report.infinite) report.witness = FnDpWitness{db1, db2, r, p1, p2};
      }
    }
  }
  report.ok = !report.infinite && report.worst_ratio <= rho.value;
  return report;
}

}  // namespace dniv
