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

#include "dniv/trace.hh"

#include <cstdlib>
#include <set>
#include <tuple>

#include "dniv/closure.hh"

namespace dniv {
namespace {

void check_inputs(const Plts& plts, const ActionSeq& inputs) {
  for (ActionRef a : inputs) {
    if (a < 0 || a >= static_cast<ActionRef>(plts.actions.size()) ||
        !is_input(plts.actions[a].kind)) {
      throw std::invalid_argument("input sequence contains a non-input action");
    }
  }
}

void check_observable(const Plts& plts, const ActionSeq& obs) {
  for (ActionRef a : obs) {
    if (a < 0 || a >= static_cast<ActionRef>(plts.actions.size()) ||
        !is_observable(plts.actions[a].kind)) {
      throw std::invalid_argument("observation contains a non-observable action");
    }
  }
}

// Mass of H-disabled states (or kBottom) tagged with the number of
// inputs consumed so far. Branches of a run consume inputs at their
// own pace, so the tag is per entry.
using Cfg = std::pair<StateRef, int>;
using Mixture = std::map<Cfg, Rat>;

void spread(Mixture& into, const SubDist& nu, int consumed, const Rat& mass) {
  for (const auto& [s, p] : nu.entries) into[{s, consumed}] += mass * p;
  if (nu.bottom > 0) into[{kBottom, 0}] += mass * nu.bottom;
}

// Silently consumes pending data points until every entry is either
// emitting (response due, or query at the input head), starved of
// inputs, terminal, or diverged.
Mixture settle(ClosureCache& cache, const Plts& plts, const ActionSeq& inputs, Mixture mix) {
  for (;;) {
    bool moved = false;
    Mixture next;
    for (const auto& [cfg, mass] : mix) {
      const auto& [s, consumed] = cfg;
      const SubDist* nu = nullptr;
      if (s != kBottom && consumed < static_cast<int>(inputs.size()) &&
          plts.actions[inputs[consumed]].kind == ActionKind::kDataPoint) {
        nu = cache.get(s, inputs[consumed]);
      }
      if (nu == nullptr) {
        next[cfg] += mass;
      } else {
        spread(next, *nu, consumed + 1, mass);
        moved = true;
      }
    }
    mix = std::move(next);
    if (!moved) return mix;
  }
}

// One observable emission from a settled mixture. Returns the (not yet
// settled) successor mixture; empty when the emission has probability
// zero.
Mixture emit(ClosureCache& cache, const Plts& plts, const ActionSeq& inputs, const Mixture& mix,
             ActionRef e) {
  const ActionKind kind = plts.actions[e].kind;
  Mixture next;
  for (const auto& [cfg, mass] : mix) {
    const auto& [s, consumed] = cfg;
    if (s == kBottom) continue;
    if (kind == ActionKind::kResponse) {
      if (const SubDist* nu = cache.get(s, e)) spread(next, *nu, consumed, mass);
    } else if (kind == ActionKind::kQuery && consumed < static_cast<int>(inputs.size()) &&
               inputs[consumed] == e) {
      if (const SubDist* nu = cache.get(s, e)) spread(next, *nu, consumed + 1, mass);
    }
  }
  return next;
}

Rat mixture_mass(const Mixture& mix) {
  Rat total = 0;
  for (const auto& [cfg, mass] : mix) total += mass;
  return total;
}

Mixture initial_mixture(const Automaton& aut) {
  Dist start;
  start.entries[aut.initial] = 1;
  Mixture mix;
  spread(mix, hidden_closure(aut.plts, start), 0, Rat(1));
  return mix;
}

}  // namespace

Rat trace_prefix_prob(const Automaton& aut, const ActionSeq& inputs, const ActionSeq& trace) {
  const Plts& plts = aut.plts;
  check_inputs(plts, inputs);
  for (ActionRef a : trace) {
    if (a < 0 || a >= static_cast<ActionRef>(plts.actions.size())) {
      throw std::invalid_argument("trace contains an unknown action");
    }
  }

  std::map<std::tuple<StateRef, int, int>, Rat> memo;
  const auto rec = [&](auto&& self, StateRef s, int consumed, int pos) -> Rat {
    if (pos == static_cast<int>(trace.size())) return 1;
    const auto key = std::make_tuple(s, consumed, pos);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const ActionRef a = trace[pos];
    const Dist* dist = plts.transition(s, a);
    Rat total = 0;
    if (dist != nullptr) {
      int next_consumed = consumed;
      bool feasible = true;
      if (is_input(plts.actions[a].kind)) {
        if (consumed < static_cast<int>(inputs.size()) && inputs[consumed] == a) {
          next_consumed = consumed + 1;
        } else {
          feasible = false;
        }
      }
      if (feasible) {
        for (const auto& [tgt, p] : dist->entries) {
          total += p * self(self, tgt, next_consumed, pos + 1);
        }
      }
    }
    memo.emplace(key, total);
    return total;
  };
  return rec(rec, aut.initial, 0, 0);
}

Rat observable_prefix_prob(const Automaton& aut, const ActionSeq& inputs, const ActionSeq& obs) {
  check_inputs(aut.plts, inputs);
  check_observable(aut.plts, obs);
  ClosureCache cache(aut.plts);
  Mixture mix = initial_mixture(aut);
  for (ActionRef e : obs) {
    mix = emit(cache, aut.plts, inputs, settle(cache, aut.plts, inputs, std::move(mix)), e);
    if (mix.empty()) return 0;
  }
  return mixture_mass(mix);
}

std::map<ActionSeq, Rat> observation_prefix_map(const Automaton& aut, const ActionSeq& inputs,
                                                int max_len) {
  check_inputs(aut.plts, inputs);
  ClosureCache cache(aut.plts);
  const std::vector<ActionRef> observable = [&] {
    std::vector<ActionRef> out;
    for (ActionRef a = 0; a < static_cast<ActionRef>(aut.plts.actions.size()); ++a) {
      if (is_observable(aut.plts.actions[a].kind)) out.push_back(a);
    }
    return out;
  }();

  std::map<ActionSeq, Rat> out;
  ActionSeq prefix;
  const auto rec = [&](auto&& self, const Mixture& mix) -> void {
    out[prefix] = mixture_mass(mix);
    if (static_cast<int>(prefix.size()) >= max_len) return;
    const Mixture settled = settle(cache, aut.plts, inputs, mix);
    for (ActionRef e : observable) {
      Mixture next = emit(cache, aut.plts, inputs, settled, e);
      if (next.empty()) continue;
      prefix.push_back(e);
      self(self, next);
      prefix.pop_back();
    }
  };
  rec(rec, initial_mixture(aut));
  return out;
}

std::vector<ActionSeq> neighbors_one(const Plts& plts, const ActionSeq& inputs) {
  check_inputs(plts, inputs);
  std::set<ActionSeq> out;
  for (ActionRef d : plts.actions_of_kind(ActionKind::kDataPoint)) {
    for (std::size_t pos = 0; pos <= inputs.size(); ++pos) {
      ActionSeq longer(inputs.begin(), inputs.begin() + pos);
      longer.push_back(d);
      longer.insert(longer.end(), inputs.begin() + pos, inputs.end());
      out.insert(std::move(longer));
    }
  }
  return {out.begin(), out.end()};
}

DniReport dni_check_bruteforce(const Automaton& aut, const DniOptions& options) {
  const Plts& plts = aut.plts;
  const std::vector<ActionRef> input_actions = [&] {
    std::vector<ActionRef> out;
    for (ActionRef a = 0; a < static_cast<ActionRef>(plts.actions.size()); ++a) {
      if (is_input(plts.actions[a].kind)) out.push_back(a);
    }
    return out;
  }();

  std::map<ActionSeq, std::map<ActionSeq, Rat>> maps;
  const auto prefix_map = [&](const ActionSeq& inputs) -> const std::map<ActionSeq, Rat>& {
    auto it = maps.find(inputs);
    if (it == maps.end()) {
      it = maps.emplace(inputs, observation_prefix_map(aut, inputs, options.max_obs_len)).first;
    }
    return it->second;
  };

  DniReport report;
  const auto compare = [&](const ActionSeq& base, const ActionSeq& nbr) {
    const auto& m1 = prefix_map(base);
    const auto& m2 = prefix_map(nbr);
    std::set<ActionSeq> keys;
    for (const auto& [obs, p] : m1) keys.insert(obs);
    for (const auto& [obs, p] : m2) keys.insert(obs);
    for (const ActionSeq& obs : keys) {
      if (++report.evaluated > options.eval_cap) {
        throw EnumerationCapExceeded("observation enumeration exceeded " +
                                     std::to_string(options.eval_cap) + " evaluations");
      }
      auto it1 = m1.find(obs);
      auto it2 = m2.find(obs);
      const Rat p1 = it1 == m1.end() ? Rat(0) : it1->second;
      const Rat p2 = it2 == m2.end() ? Rat(0) : it2->second;
      if (p1 == 0 && p2 == 0) continue;
      if (p1 == 0 || p2 == 0) {
        if (!report.ratio_infinite) {
          report.ratio_infinite = true;
          report.witness = DniWitness{base, nbr, obs, p1, p2};
        }
        continue;
      }
      const Rat ratio = p1 >= p2 ? Rat(p1 / p2) : Rat(p2 / p1);
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        if (!report.ratio_infinite) report.witness = DniWitness{base, nbr, obs, p1, p2};
      }
    }
  };

  ActionSeq base;
  const auto enumerate = [&](auto&& self) -> void {
    for (const ActionSeq& nbr : neighbors_one(plts, base)) compare(base, nbr);
    if (static_cast<int>(base.size()) >= options.max_input_len) return;
    for (ActionRef a : input_actions) {
      base.push_back(a);
      self(self);
      base.pop_back();
    }
  };
  enumerate(enumerate);

  report.pass = !report.ratio_infinite && report.max_ratio <= options.rho.value;
  return report;
}

long default_eval_cap() {
  if (const char* env = std::getenv("DNIV_EVAL_CAP")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) return cap;
  }
  return 1000000;
}

}  // namespace dniv
