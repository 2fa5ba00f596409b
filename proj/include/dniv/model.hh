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

#ifndef DNIV_MODEL_HH_
#define DNIV_MODEL_HH_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dniv/rational.hh"

namespace dniv {

// Actions are partitioned into inputs (data points fed by individuals,
// queries posed by the examiner) and outputs (responses the examiner
// sees, hidden steps it does not). Queries and responses together form
// the observable alphabet.
enum class ActionKind { kDataPoint, kQuery, kResponse, kHidden };

bool is_input(ActionKind kind);
bool is_output(ActionKind kind);
bool is_observable(ActionKind kind);

const char* kind_name(ActionKind kind);

struct Action {
  std::string name;
  ActionKind kind;
};

// States and actions are referenced by index into the owning Plts;
// both tables are sorted by name so every iteration order, matrix
// layout and report is deterministic.
using StateRef = int;
using ActionRef = int;

// Pseudo-state for nontermination inside hidden computation. It is
// never a real state; serialized as "_bot_".
inline constexpr StateRef kBottom = -1;

// Full-mass probability distribution over states.
struct Dist {
  std::map<StateRef, Rat> entries;  // all positive

  Rat mass() const;
  Rat at(StateRef s) const;  // 0 if absent
};

// Subprobability distribution over states plus explicit mass assigned
// to nontermination; entries + bottom sum to at most 1.
struct SubDist {
  std::map<StateRef, Rat> entries;  // all positive
  Rat bottom = 0;

  Rat mass() const;
  Rat at(StateRef s) const;  // s may be kBottom
  int support_size() const;  // entries plus bottom if positive

  bool operator==(const SubDist& other) const = default;
};

// Probabilistic labelled transition system with at most one transition
// per (state, action); that restriction is structural here, duplicate
// transitions are rejected while building.
struct Plts {
  std::vector<Action> actions;                    // sorted by name
  std::vector<std::string> states;                // sorted
  std::vector<std::map<ActionRef, Dist>> trans;   // per state

  StateRef state_index(std::string_view name) const;    // -1 if absent
  ActionRef action_index(std::string_view name) const;  // -1 if absent
  const std::string& state_name(StateRef s) const;      // handles kBottom

  const Dist* transition(StateRef s, ActionRef a) const;  // null if none
  bool enables(StateRef s, ActionRef a) const;
  bool h_enabled(StateRef s) const;   // some hidden action is enabled
  bool h_disabled(StateRef s) const;
  bool enables_kind(StateRef s, ActionKind kind) const;

  std::vector<ActionRef> actions_of_kind(ActionKind kind) const;
  std::vector<ActionRef> visible_actions() const;  // everything but hidden

  void check_state(StateRef s) const;  // throws std::out_of_range
};

struct Automaton {
  Plts plts;
  StateRef initial = 0;
};

// Name-keyed construction; build() sorts and resolves. Throws
// std::invalid_argument on duplicate or unresolved names, reserved
// identifiers, malformed distributions and duplicate transitions.
class PltsBuilder {
 public:
  void add_action(const std::string& name, ActionKind kind);
  void add_state(const std::string& name);
  bool has_state(const std::string& name) const;
  void add_transition(const std::string& src, const std::string& action,
                      const std::vector<std::pair<std::string, Rat>>& targets);

  Plts build() const;
  Automaton build_automaton(const std::string& initial) const;

 private:
  std::map<std::string, ActionKind> actions_;
  std::map<std::string, bool> states_;
  std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::string, Rat>>>>
      trans_;
};

enum class AxiomId {
  kOutputDeterminism,    // an output-enabled state has other transitions
  kQuasiInputEnabling,   // some input enabled but not all of them
  kDistributionMass,     // a transition distribution does not sum to 1
};

const char* axiom_name(AxiomId axiom);

struct AxiomViolation {
  AxiomId axiom;
  StateRef state;
  ActionRef action;  // -1 when the violation is not tied to one action
  std::string detail;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks the model axioms: output determinism, quasi-input enabling,
// and full mass on every transition distribution.
ValidationReport validate(const Plts& plts);

}  // namespace dniv

#endif  // DNIV_MODEL_HH_
