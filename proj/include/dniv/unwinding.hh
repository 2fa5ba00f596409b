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

#ifndef DNIV_UNWINDING_HH_
#define DNIV_UNWINDING_HH_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dniv/closure.hh"
#include "dniv/lifting.hh"
#include "dniv/model.hh"

namespace dniv {

// Indexed family of relations over H-disabled states (plus kBottom).
// levels[i] tolerates a cumulative ratio of step^i; a visible step
// either stays inside its level exactly or pays one step factor to
// drop a level.
struct RelationFamily {
  std::vector<Relation> levels;
  RatioBound step;
};

enum class UnwindFailureKind {
  kWrongLevelCount,      // family does not have budget+1 levels
  kNotHDisabled,         // a related state still enables hidden steps
  kEnablementMismatch,   // exactly one side of a pair enables an action
  kLiftingFailed,        // successor distributions admit no lifting
};

const char* unwind_failure_name(UnwindFailureKind kind);

struct UnwindFailure {
  UnwindFailureKind kind;
  int level = -1;
  StatePair pair{kBottom, kBottom};
  ActionRef action = -1;
  std::optional<SubDist> nu1, nu2;  // the unliftable successor pair
};

struct UnwindReport {
  bool ok = false;
  std::optional<UnwindFailure> failure;
};

// Checks the stepwise transfer conditions on every pair of every level
// against all visible actions (hidden actions are folded into the
// extended step): enabledness must agree, and the successor
// distributions must lift either at the same level exactly or at the
// level below within one step factor. Stops at the first failure in
// deterministic order.
UnwindReport is_unwind_fam(const Plts& plts, const std::vector<Relation>& levels,
                           const RatioBound& step, int budget, ClosureCache* cache = nullptr);

UnwindReport is_unwind_fam(const Plts& plts, const RelationFamily& family, int budget);

// States reachable from the initial state over any transitions.
std::vector<StateRef> reachable_states(const Automaton& aut);

enum class CoverFailureKind {
  kNonterminating,    // a data step loses mass to nontermination
  kMissingFamily,     // no family supplied for a reachable data step
  kMalformedFamily,   // wrong level count or step bound
  kSupportNotRelated, // a successor is not top-level related to its source
  kFamilyRejected,    // the family fails the unwinding conditions
};

const char* cover_failure_name(CoverFailureKind kind);

struct CoverFailure {
  CoverFailureKind kind;
  StateRef state = kBottom;
  ActionRef action = -1;
  StateRef successor = kBottom;          // for kSupportNotRelated
  std::optional<UnwindFailure> inner;    // for kFamilyRejected
};

struct CoverReport {
  bool ok = false;
  std::optional<CoverFailure> failure;
};

using FamilyKey = std::pair<StateRef, ActionRef>;

// Checks that every data-point step from a reachable state terminates,
// is covered by a supplied (budget+1)-level family whose top level
// relates the state to each successor, and that each family satisfies
// the unwinding conditions. Passing certifies a cumulative two-sided
// ratio bound of step^budget on all observation prefixes between
// one-insertion neighbors.
CoverReport is_all_covered(const Automaton& aut, const std::map<FamilyKey, RelationFamily>& rels,
                           const RatioBound& step, int budget);

}  // namespace dniv

#endif  // DNIV_UNWINDING_HH_
