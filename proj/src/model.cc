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

#include "dniv/model.hh"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dniv {
namespace {

const std::string kBottomName = "_bot_";

bool reserved_name(const std::string& name) {
  return name.empty() || name == kBottomName || name == "\xe2\x8a\xa5";
}

bool plain_token(const std::string& name) {
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
  }
  return !name.empty();
}

}  // namespace

bool is_input(ActionKind kind) {
  return kind == ActionKind::kDataPoint || kind == ActionKind::kQuery;
}

bool is_output(ActionKind kind) {
  return kind == ActionKind::kResponse || kind == ActionKind::kHidden;
}

bool is_observable(ActionKind kind) {
  return kind == ActionKind::kQuery || kind == ActionKind::kResponse;
}

const char* kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::kDataPoint: return "data";
    case ActionKind::kQuery: return "query";
    case ActionKind::kResponse: return "response";
    case ActionKind::kHidden: return "hidden";
  }
  return "?";
}

Rat Dist::mass() const {
  Rat total = 0;
  for (const auto& [s, p] : entries) total += p;
  return total;
}

Rat Dist::at(StateRef s) const {
  auto it = entries.find(s);
  return it == entries.end() ? Rat(0) : it->second;
}

Rat SubDist::mass() const {
  Rat total = bottom;
  for (const auto& [s, p] : entries) total += p;
  return total;
}

Rat SubDist::at(StateRef s) const {
  if (s == kBottom) return bottom;
  auto it = entries.find(s);
  return it == entries.end() ? Rat(0) : it->second;
}

int SubDist::support_size() const {
  return static_cast<int>(entries.size()) + (bottom > 0 ? 1 : 0);
}

StateRef Plts::state_index(std::string_view name) const {
  auto it = std::lower_bound(states.begin(), states.end(), name);
  if (it == states.end() || *it != name) return -1;
  return static_cast<StateRef>(it - states.begin());
}

ActionRef Plts::action_index(std::string_view name) const {
  auto it = std::lower_bound(actions.begin(), actions.end(), name,
                             [](const Action& a, std::string_view n) { return a.name < n; });
  if (it == actions.end() || it->name != name) return -1;
  return static_cast<ActionRef>(it - actions.begin());
}

const std::string& Plts::state_name(StateRef s) const {
  if (s == kBottom) return kBottomName;
  check_state(s);
  return states[s];
}

const Dist* Plts::transition(StateRef s, ActionRef a) const {
  check_state(s);
  auto it = trans[s].find(a);
  return it == trans[s].end() ? nullptr : &it->second;
}

bool Plts::enables(StateRef s, ActionRef a) const { return transition(s, a) != nullptr; }

bool Plts::h_enabled(StateRef s) const {
  check_state(s);
  for (const auto& [a, dist] : trans[s]) {
    if (actions[a].kind == ActionKind::kHidden) return true;
  }
  return false;
}

bool Plts::h_disabled(StateRef s) const { return !h_enabled(s); }

bool Plts::enables_kind(StateRef s, ActionKind kind) const {
  check_state(s);
  for (const auto& [a, dist] : trans[s]) {
    if (actions[a].kind == kind) return true;
  }
  return false;
}

std::vector<ActionRef> Plts::actions_of_kind(ActionKind kind) const {
  std::vector<ActionRef> out;
  for (ActionRef a = 0; a < static_cast<ActionRef>(actions.size()); ++a) {
    if (actions[a].kind == kind) out.push_back(a);
  }
  return out;
}

std::vector<ActionRef> Plts::visible_actions() const {
  std::vector<ActionRef> out;
  for (ActionRef a = 0; a < static_cast<ActionRef>(actions.size()); ++a) {
    if (actions[a].kind != ActionKind::kHidden) out.push_back(a);
  }
  return out;
}

void Plts::check_state(StateRef s) const {
  if (s < 0 || s >= static_cast<StateRef>(states.size())) {
    throw std::out_of_range("unknown state index " + std::to_string(s));
  }
}

void PltsBuilder::add_action(const std::string& name, ActionKind kind) {
  if (reserved_name(name) || !plain_token(name)) {
    throw std::invalid_argument("bad action name: '" + name + "'");
  }
  auto [it, inserted] = actions_.emplace(name, kind);
  if (!inserted && it->second != kind) {
    throw std::invalid_argument("action '" + name + "' redeclared with a different kind");
  }
}

void PltsBuilder::add_state(const std::string& name) {
  if (reserved_name(name) || !plain_token(name)) {
    throw std::invalid_argument("bad state name: '" + name + "'");
  }
  states_[name] = true;
}

bool PltsBuilder::has_state(const std::string& name) const { return states_.count(name) > 0; }

void PltsBuilder::add_transition(const std::string& src, const std::string& action,
                                 const std::vector<std::pair<std::string, Rat>>& targets) {
  trans_.emplace_back(src, action, targets);
}

Plts PltsBuilder::build() const {
  Plts plts;
  for (const auto& [name, kind] : actions_) plts.actions.push_back({name, kind});
  for (const auto& [name, unused] : states_) plts.states.push_back(name);
  plts.trans.resize(plts.states.size());

  for (const auto& [src, action, targets] : trans_) {
    const StateRef s = plts.state_index(src);
    if (s < 0) throw std::invalid_argument("transition from unknown state '" + src + "'");
    const ActionRef a = plts.action_index(action);
    if (a < 0) throw std::invalid_argument("transition on unknown action '" + action + "'");
    Dist dist;
    for (const auto& [target, prob] : targets) {
      const StateRef tgt = plts.state_index(target);
      if (tgt < 0) throw std::invalid_argument("transition to unknown state '" + target + "'");
      if (prob <= 0) {
        throw std::invalid_argument("nonpositive probability on '" + src + "' --" + action + "->");
      }
      auto [it, inserted] = dist.entries.emplace(tgt, prob);
      if (!inserted) {
        throw std::invalid_argument("duplicate target '" + target + "' on '" + src + "' --" +
                                    action + "->");
      }
    }
    if (dist.entries.empty()) {
      throw std::invalid_argument("empty distribution on '" + src + "' --" + action + "->");
    }
    auto [it, inserted] = plts.trans[s].emplace(a, std::move(dist));
    if (!inserted) {
      throw std::invalid_argument("duplicate transition '" + src + "' --" + action + "->");
    }
  }
  return plts;
}

Automaton PltsBuilder::build_automaton(const std::string& initial) const {
  Automaton aut{build(), 0};
  aut.initial = aut.plts.state_index(initial);
  if (aut.initial < 0) throw std::invalid_argument("unknown initial state '" + initial + "'");
  return aut;
}

const char* axiom_name(AxiomId axiom) {
  switch (axiom) {
    case AxiomId::kOutputDeterminism: return "output-determinism";
    case AxiomId::kQuasiInputEnabling: return "quasi-input-enabling";
    case AxiomId::kDistributionMass: return "distribution-mass";
  }
  return "?";
}

ValidationReport validate(const Plts& plts) {
  ValidationReport report;
  const auto inputs = [&] {
    std::vector<ActionRef> out;
    for (ActionRef a = 0; a < static_cast<ActionRef>(plts.actions.size()); ++a) {
      if (is_input(plts.actions[a].kind)) out.push_back(a);
    }
    return out;
  }();

  for (StateRef s = 0; s < static_cast<StateRef>(plts.states.size()); ++s) {
    bool any_output = false;
    bool any_input = false;
    for (const auto& [a, dist] : plts.trans[s]) {
      any_output |= is_output(plts.actions[a].kind);
      any_input |= is_input(plts.actions[a].kind);
      if (dist.mass() != 1) {
        report.violations.push_back({AxiomId::kDistributionMass, s, a,
                                     "mass " + rat_str(dist.mass()) + " on action '" +
                                         plts.actions[a].name + "'"});
      }
    }
    if (any_output && plts.trans[s].size() != 1) {
      report.violations.push_back({AxiomId::kOutputDeterminism, s, -1,
                                   "state '" + plts.states[s] + "' enables an output among " +
                                       std::to_string(plts.trans[s].size()) + " transitions"});
    }
    if (any_input) {
      for (ActionRef a : inputs) {
        if (!plts.trans[s].count(a)) {
          report.violations.push_back({AxiomId::kQuasiInputEnabling, s, a,
                                       "state '" + plts.states[s] + "' misses input '" +
                                           plts.actions[a].name + "'"});
        }
      }
    }
  }
  return report;
}

}  // namespace dniv
