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

#include "dniv/composition.hh"

#include <set>
#include <stdexcept>

#include "dniv/closure.hh"

namespace dniv {
namespace {

std::string tagged(const std::string& tag, const std::string& name) { return tag + "." + name; }

std::string return_action(const std::string& tag) { return tag + ":ret"; }

const Dist* replaced_dist(const Plts& host, const ReplacementSpec& spec) {
  return host.transition(spec.host_state, spec.host_action);
}

}  // namespace

std::vector<std::string> replacement_violations(const Plts& host, const ReplacementSpec& spec) {
  std::vector<std::string> out;
  if (spec.host_state < 0 || spec.host_state >= static_cast<StateRef>(host.states.size())) {
    out.push_back("host state out of range");
    return out;
  }
  if (spec.host_action < 0 || spec.host_action >= static_cast<ActionRef>(host.actions.size())) {
    out.push_back("host action out of range");
    return out;
  }
  if (host.actions[spec.host_action].kind != ActionKind::kHidden) {
    out.push_back("replaced action '" + host.actions[spec.host_action].name + "' is not hidden");
  }
  const Dist* dist = replaced_dist(host, spec);
  if (dist == nullptr) {
    out.push_back("host state '" + host.states[spec.host_state] + "' does not enable '" +
                  host.actions[spec.host_action].name + "'");
    return out;
  }
  for (StateRef s = 0; s < static_cast<StateRef>(host.states.size()); ++s) {
    if (s != spec.host_state && host.trans[s].count(spec.host_action)) {
      out.push_back("action '" + host.actions[spec.host_action].name +
                    "' labels another transition at '" + host.states[s] + "'");
    }
  }
  if (dist->entries.count(spec.host_state)) {
    out.push_back("replaced transition loops back to its own state");
  }

  const Plts& sub = spec.subroutine.plts;
  for (const Action& action : sub.actions) {
    if (action.kind != ActionKind::kHidden) {
      out.push_back("subroutine action '" + action.name + "' is not hidden");
    }
  }

  std::set<StateRef> used;
  for (const auto& [host_tgt, p] : dist->entries) {
    auto it = spec.link.find(host_tgt);
    if (it == spec.link.end()) {
      out.push_back("no link for replaced target '" + host.states[host_tgt] + "'");
      continue;
    }
    const StateRef terminal = it->second;
    if (terminal < 0 || terminal >= static_cast<StateRef>(sub.states.size())) {
      out.push_back("link for '" + host.states[host_tgt] + "' is out of range");
      continue;
    }
    if (!sub.trans[terminal].empty()) {
      out.push_back("linked state '" + sub.states[terminal] + "' is not a terminal");
    }
    if (!used.insert(terminal).second) {
      out.push_back("linked terminal '" + sub.states[terminal] + "' used twice");
    }
  }
  for (const auto& [host_tgt, terminal] : spec.link) {
    if (!dist->entries.count(host_tgt)) {
      out.push_back("link from a state outside the replaced distribution");
    }
  }

  if (spec.tag.empty()) {
    out.push_back("empty namespace tag");
  } else {
    for (const std::string& name : sub.states) {
      if (host.state_index(tagged(spec.tag, name)) >= 0) {
        out.push_back("inlined state name '" + tagged(spec.tag, name) + "' already taken");
      }
    }
    for (const Action& action : sub.actions) {
      if (host.action_index(tagged(spec.tag, action.name)) >= 0) {
        out.push_back("inlined action name '" + tagged(spec.tag, action.name) + "' already taken");
      }
    }
    if (host.action_index(return_action(spec.tag)) >= 0) {
      out.push_back("return action name '" + return_action(spec.tag) + "' already taken");
    }
  }
  return out;
}

bool implements_check(const Plts& host, const ReplacementSpec& spec) {
  const std::vector<std::string> violations = replacement_violations(host, spec);
  if (!violations.empty()) throw std::invalid_argument("bad replacement: " + violations.front());

  Dist start;
  start.entries[spec.subroutine.initial] = 1;
  const SubDist nu = hidden_closure(spec.subroutine.plts, start);
  if (nu.bottom != 0) return false;

  const Dist* dist = replaced_dist(host, spec);
  if (nu.entries.size() != dist->entries.size()) return false;
  for (const auto& [host_tgt, p] : dist->entries) {
    if (nu.at(spec.link.at(host_tgt)) != p) return false;
  }
  return true;
}

Automaton replace_transition(const Automaton& host, const ReplacementSpec& spec) {
  const Plts& hp = host.plts;
  const std::vector<std::string> violations = replacement_violations(hp, spec);
  if (!violations.empty()) throw std::invalid_argument("bad replacement: " + violations.front());

  const Plts& sub = spec.subroutine.plts;
  PltsBuilder builder;
  for (ActionRef a = 0; a < static_cast<ActionRef>(hp.actions.size()); ++a) {
    if (a != spec.host_action) builder.add_action(hp.actions[a].name, hp.actions[a].kind);
  }
  for (const Action& action : sub.actions) {
    builder.add_action(tagged(spec.tag, action.name), ActionKind::kHidden);
  }
  builder.add_action(return_action(spec.tag), ActionKind::kHidden);
  for (const std::string& name : hp.states) builder.add_state(name);
  for (const std::string& name : sub.states) builder.add_state(tagged(spec.tag, name));

  for (StateRef s = 0; s < static_cast<StateRef>(hp.states.size()); ++s) {
    for (const auto& [a, dist] : hp.trans[s]) {
      if (a == spec.host_action) continue;
      std::vector<std::pair<std::string, Rat>> targets;
      for (const auto& [tgt, p] : dist.entries) targets.emplace_back(hp.states[tgt], p);
      builder.add_transition(hp.states[s], hp.actions[a].name, targets);
    }
  }
  for (StateRef s = 0; s < static_cast<StateRef>(sub.states.size()); ++s) {
    for (const auto& [a, dist] : sub.trans[s]) {
      std::vector<std::pair<std::string, Rat>> targets;
      for (const auto& [tgt, p] : dist.entries) {
        targets.emplace_back(tagged(spec.tag, sub.states[tgt]), p);
      }
      builder.add_transition(tagged(spec.tag, sub.states[s]), tagged(spec.tag, sub.actions[a].name),
                             targets);
    }
  }
  builder.add_transition(hp.states[spec.host_state], return_action(spec.tag),
                         {{tagged(spec.tag, sub.states[spec.subroutine.initial]), Rat(1)}});
  for (const auto& [host_tgt, terminal] : spec.link) {
    builder.add_transition(tagged(spec.tag, sub.states[terminal]), return_action(spec.tag),
                           {{hp.states[host_tgt], Rat(1)}});
  }
  return builder.build_automaton(hp.states[host.initial]);
}

}  // namespace dniv
