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

#include "dniv/window.hh"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "dniv/closure.hh"
#include "dniv/composition.hh"

namespace dniv {
namespace {

using Kind = WindowStateInfo::Kind;

std::string multiset_str(const Multiset& m) {
  std::string out = "{";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(m[i]);
  }
  return out + "}";
}

std::string core_str(int cur, const std::vector<Multiset>& slots) {
  std::string out = std::to_string(cur);
  for (const Multiset& slot : slots) out += "|" + multiset_str(slot);
  return out;
}

std::string state_name_of(const WindowParams& params, const WindowStateInfo& info) {
  const std::string core = core_str(info.cur, info.slots);
  switch (info.kind) {
    case Kind::kInput: return "w[" + core + "]";
    case Kind::kCompute: return "c[" + core + "|q=" + params.queries[info.query].name + "]";
    case Kind::kOutput: return "o[" + core + "|r=" + std::to_string(info.response) + "]";
  }
  return "?";
}

std::string hidden_name_of(const WindowParams& params, const WindowStateInfo& info) {
  return "h[" + core_str(info.cur, info.slots) + "|q=" + params.queries[info.query].name + "]";
}

std::string data_name(long value) { return "d" + std::to_string(value); }
std::string response_name(long value) { return "r" + std::to_string(value); }

Multiset window_db(const std::vector<Multiset>& slots) {
  Multiset db;
  for (const Multiset& slot : slots) db.insert(db.end(), slot.begin(), slot.end());
  std::sort(db.begin(), db.end());
  return db;
}

void insert_sorted(Multiset& m, long value) {
  m.insert(std::lower_bound(m.begin(), m.end(), value), value);
}

WindowStateInfo with_add(const WindowStateInfo& base, int slot, long value, int cap) {
  WindowStateInfo out = base;
  if (static_cast<int>(out.slots[slot].size()) < cap) insert_sorted(out.slots[slot], value);
  return out;
}

WindowStateInfo with_swap(const WindowStateInfo& base, int slot, long added, long removed) {
  WindowStateInfo out = base;
  Multiset& m = out.slots[slot];
  m.erase(std::find(m.begin(), m.end(), removed));
  insert_sorted(m, added);
  return out;
}

StateRef state_of(const WindowSystem& system, const WindowStateInfo& info) {
  const StateRef s = system.aut.plts.state_index(state_name_of(system.params, info));
  if (s < 0) throw std::logic_error("window state lookup failed");
  return s;
}

// All multisets over the domain with at most cap elements, smallest first.
std::vector<Multiset> slot_fills(const std::vector<long>& domain, int cap) {
  std::vector<Multiset> out{{}};
  std::size_t begin = 0;
  for (int size = 1; size <= cap; ++size) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      // extend by values >= the last element to keep each multiset sorted
      for (long value : domain) {
        if (!out[i].empty() && value < out[i].back()) continue;
        Multiset next = out[i];
        next.push_back(value);
        out.push_back(std::move(next));
      }
    }
    begin = end;
  }
  return out;
}

void check_params(const WindowParams& params) {
  if (params.slots < 1) throw std::invalid_argument("window needs at least one slot");
  if (params.slot_cap < 1) throw std::invalid_argument("slot capacity must be >= 1");
  if (params.domain.empty()) throw std::invalid_argument("empty data domain");
  if (params.queries.empty()) throw std::invalid_argument("no queries");
  std::set<std::string> names;
  for (const SanitizedQuery& query : params.queries) {
    if (query.name.empty()) throw std::invalid_argument("unnamed query");
    if (!names.insert(query.name).second) {
      throw std::invalid_argument("duplicate query name '" + query.name + "'");
    }
    if (query.noise_p <= 0 || query.noise_p >= 1) {
      throw std::invalid_argument("query '" + query.name + "' needs noise in (0, 1)");
    }
    if (query.sensitivity < 0) throw std::invalid_argument("negative sensitivity");
  }
}

}  // namespace

WindowSystem build_window_system(const WindowParams& params) {
  check_params(params);
  WindowSystem system;
  system.params = params;
  std::vector<long>& domain = system.params.domain;
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

  const int t = params.slots;
  const std::vector<Multiset> fills = slot_fills(domain, params.slot_cap);

  std::vector<std::vector<Multiset>> tuples;
  std::vector<std::size_t> odometer(t, 0);
  for (;;) {
    std::vector<Multiset> tuple;
    for (int i = 0; i < t; ++i) tuple.push_back(fills[odometer[i]]);
    tuples.push_back(std::move(tuple));
    int pos = t - 1;
    while (pos >= 0 && ++odometer[pos] == fills.size()) odometer[pos--] = 0;
    if (pos < 0) break;
  }

  PltsBuilder builder;
  for (long value : domain) builder.add_action(data_name(value), ActionKind::kDataPoint);
  for (const SanitizedQuery& query : system.params.queries) {
    builder.add_action(query.name, ActionKind::kQuery);
  }

  std::map<std::string, WindowStateInfo> named;
  const auto declare = [&](const WindowStateInfo& info) {
    const std::string name = state_name_of(system.params, info);
    builder.add_state(name);
    named.emplace(name, info);
    return name;
  };

  for (const std::vector<Multiset>& tuple : tuples) {
    const Multiset db = window_db(tuple);
    std::vector<OutcomeDist> outcomes;
    for (const SanitizedQuery& query : system.params.queries) {
      outcomes.push_back(query_outcomes(query, db));
    }
    for (int cur = 0; cur < t; ++cur) {
      WindowStateInfo input{Kind::kInput, cur, tuple, -1, 0};
      const std::string iname = declare(input);

      for (long value : domain) {
        const WindowStateInfo next = with_add(input, cur, value, params.slot_cap);
        builder.add_transition(iname, data_name(value),
                               {{state_name_of(system.params, next), Rat(1)}});
      }

      std::set<long> responses;
      for (int qi = 0; qi < static_cast<int>(system.params.queries.size()); ++qi) {
        WindowStateInfo compute{Kind::kCompute, cur, tuple, qi, 0};
        const std::string cname = declare(compute);
        builder.add_transition(iname, system.params.queries[qi].name, {{cname, Rat(1)}});

        const std::string hname = hidden_name_of(system.params, compute);
        builder.add_action(hname, ActionKind::kHidden);
        std::vector<std::pair<std::string, Rat>> targets;
        for (const auto& [response, mass] : outcomes[qi]) {
          WindowStateInfo output{Kind::kOutput, cur, tuple, -1, response};
          targets.emplace_back(declare(output), mass);
          responses.insert(response);
        }
        builder.add_transition(cname, hname, targets);
      }

      const int next_cur = (cur + 1) % t;
      std::vector<Multiset> advanced = tuple;
      advanced[next_cur].clear();
      const WindowStateInfo next_input{Kind::kInput, next_cur, advanced, -1, 0};
      const std::string next_name = state_name_of(system.params, next_input);
      for (long response : responses) {
        WindowStateInfo output{Kind::kOutput, cur, tuple, -1, response};
        builder.add_action(response_name(response), ActionKind::kResponse);
        builder.add_transition(state_name_of(system.params, output), response_name(response),
                               {{next_name, Rat(1)}});
      }
    }
  }

  const std::vector<Multiset> empty_tuple(t);
  system.aut = builder.build_automaton(
      state_name_of(system.params, WindowStateInfo{Kind::kInput, 0, empty_tuple, -1, 0}));

  system.info.resize(system.aut.plts.states.size());
  for (const auto& [name, info] : named) {
    system.info[system.aut.plts.state_index(name)] = info;
  }
  for (long value : domain) {
    system.data_actions.push_back(system.aut.plts.action_index(data_name(value)));
  }
  for (const SanitizedQuery& query : system.params.queries) {
    system.query_actions.push_back(system.aut.plts.action_index(query.name));
    const Rat rho = rat_pow(query.noise_p, -2 * query.sensitivity);
    if (rho > system.step_rho) system.step_rho = rho;
  }
  return system;
}

RelationFamily build_window_family(const WindowSystem& system, StateRef state,
                                   ActionRef data_action) {
  const Plts& plts = system.aut.plts;
  plts.check_state(state);
  const WindowStateInfo& base = system.info[state];
  if (base.kind != Kind::kInput) throw std::invalid_argument("family root must be an input state");
  long value = 0;
  bool found = false;
  for (std::size_t i = 0; i < system.data_actions.size(); ++i) {
    if (system.data_actions[i] == data_action) {
      value = system.params.domain[i];
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("not a data-point action of this window");

  const int t = system.params.slots;
  const int c = base.cur;

  // states reachable from the root, bucketed by exact number of queries
  std::vector<std::set<StateRef>> by_queries(t + 1);
  std::set<std::pair<StateRef, int>> seen;
  std::vector<std::pair<StateRef, int>> todo{{state, 0}};
  seen.insert(todo.front());
  while (!todo.empty()) {
    const auto [s, queries] = todo.back();
    todo.pop_back();
    by_queries[queries].insert(s);
    for (const auto& [a, dist] : plts.trans[s]) {
      const int next = queries + (plts.actions[a].kind == ActionKind::kQuery ? 1 : 0);
      if (next > t) continue;
      for (const auto& [target, mass] : dist.entries) {
        if (seen.emplace(target, next).second) todo.emplace_back(target, next);
      }
    }
  }

  // relate a run to the same run with `value` added into slot c, and to
  // the runs where that addition displaced a later arrival
  const auto add_pairs = [&](Relation& rel, StateRef s1) {
    const WindowStateInfo& info = system.info[s1];
    rel.emplace(s1, state_of(system, with_add(info, c, value, system.params.slot_cap)));
    std::set<long> used;
    for (long removed : info.slots[c]) {
      if (!used.insert(removed).second) continue;
      rel.emplace(s1, state_of(system, with_swap(info, c, value, removed)));
    }
  };

  std::vector<Relation> levels(t + 1);
  for (int level = 1; level <= t; ++level) {
    for (StateRef s1 : by_queries[t - level]) {
      if (plts.h_disabled(s1)) add_pairs(levels[level], s1);
    }
  }
  for (StateRef s = 0; s < static_cast<StateRef>(plts.states.size()); ++s) {
    if (plts.h_disabled(s)) levels[0].emplace(s, s);
  }
  for (StateRef s1 : by_queries[t]) {
    if (plts.h_disabled(s1) && system.info[s1].kind == Kind::kOutput) add_pairs(levels[0], s1);
  }
  return RelationFamily{std::move(levels), RatioBound(system.step_rho)};
}

WindowVerifyReport verify_window_system(const WindowSystem& system) {
  WindowVerifyReport report;
  report.step = system.step_rho;
  report.claimed = rat_pow(system.step_rho, system.params.slots);
  std::map<FamilyKey, RelationFamily> families;
  for (StateRef s : reachable_states(system.aut)) {
    if (system.info[s].kind != Kind::kInput) continue;
    for (ActionRef a : system.data_actions) {
      families.emplace(FamilyKey{s, a}, build_window_family(system, s, a));
    }
  }
  report.cover =
      is_all_covered(system.aut, families, RatioBound(system.step_rho), system.params.slots);
  report.ok = report.cover.ok;
  return report;
}

Automaton build_window_inlined(const WindowSystem& system) {
  const Plts& plts = system.aut.plts;

  struct Job {
    std::string state;
    std::string action;
    TgParams par;
    long shift;
    std::vector<std::pair<std::string, std::string>> links;  // host target, terminal
  };
  std::vector<Job> jobs;
  for (StateRef s = 0; s < static_cast<StateRef>(plts.states.size()); ++s) {
    if (system.info[s].kind != Kind::kCompute) continue;
    const SanitizedQuery& query = system.params.queries[system.info[s].query];
    const long center = query.statistic(window_db(system.info[s].slots));
    Job job{plts.states[s],
            hidden_name_of(system.params, system.info[s]),
            TgParams{query.bound, center, query.noise_p},
            query.shift,
            {}};
    for (const auto& [target, mass] : plts.trans[s].begin()->second.entries) {
      job.links.emplace_back(plts.states[target],
                             "ret" + std::to_string(system.info[target].response));
    }
    jobs.push_back(std::move(job));
  }

  Automaton current = system.aut;
  for (const Job& job : jobs) {
    ReplacementSpec spec;
    spec.host_state = current.plts.state_index(job.state);
    spec.host_action = current.plts.action_index(job.action);
    spec.subroutine = build_sampler_automaton(job.par, job.shift);
    for (const auto& [host_name, terminal] : job.links) {
      spec.link[current.plts.state_index(host_name)] =
          spec.subroutine.plts.state_index(terminal);
    }
    spec.tag = job.state;
    if (!implements_check(current.plts, spec)) {
      throw std::runtime_error("sampler does not reproduce the release at " + job.state);
    }
    current = replace_transition(current, spec);
  }
  return current;
}

}  // namespace dniv
