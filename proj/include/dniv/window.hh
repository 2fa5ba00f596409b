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

// Sliding-window release systems.  A window keeps the most recent data in a
// ring of slots; each submitted query is answered from the union of all slots
// through a noisy integer release, after which the window advances and the
// oldest slot is discarded.

#ifndef DNIV_WINDOW_HH_
#define DNIV_WINDOW_HH_

#include <string>
#include <vector>

#include "dniv/mechanisms.hh"
#include "dniv/model.hh"
#include "dniv/unwinding.hh"

namespace dniv {

struct WindowParams {
  int slots = 1;              // ring length
  int slot_cap = 1;           // data points accepted per slot
  std::vector<long> domain;   // admissible data values
  std::vector<SanitizedQuery> queries;
};

struct WindowStateInfo {
  enum class Kind { kInput, kCompute, kOutput };
  Kind kind = Kind::kInput;
  int cur = 0;                      // slot currently filling
  std::vector<Multiset> slots;
  int query = -1;                   // compute states only
  long response = 0;                // output states only
};

struct WindowSystem {
  WindowParams params;
  Automaton aut;
  std::vector<WindowStateInfo> info;     // indexed by state
  std::vector<ActionRef> data_actions;   // parallel to params.domain
  std::vector<ActionRef> query_actions;  // parallel to params.queries
  Rat step_rho = 1;                      // worst per-step ratio over all queries
};

// Builds the full product-space automaton for the given window shape.  Input
// states accept any data point (dropped once the current slot is full) and
// any query; a query runs its release mechanism over the union of the slots
// and emits the result, after which the window advances by one slot.
WindowSystem build_window_system(const WindowParams& params);

// Relation family certifying one covered (input state, data action) pair.
// Level j relates runs that still have j window advances to go before the
// differing slot is discarded; level 0 collapses to the identity.
RelationFamily build_window_family(const WindowSystem& system, StateRef state,
                                   ActionRef data_action);

struct WindowVerifyReport {
  bool ok = false;
  Rat step = 1;      // per-step ratio shared by all families
  Rat claimed = 1;   // step ** slots, the certified end-to-end ratio
  CoverReport cover;
};

// Builds families for every reachable input state and data action and runs
// the covering check over them.
WindowVerifyReport verify_window_system(const WindowSystem& system);

// Replaces every one-shot release transition by the coin-flip sampler for
// its distribution, checking each sampler against the released distribution
// before splicing it in.  Observable behavior is preserved exactly.
Automaton build_window_inlined(const WindowSystem& system);

}  // namespace dniv

#endif  // DNIV_WINDOW_HH_
