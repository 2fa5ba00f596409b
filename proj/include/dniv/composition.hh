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

#ifndef DNIV_COMPOSITION_HH_
#define DNIV_COMPOSITION_HH_

#include <map>
#include <string>
#include <vector>

#include "dniv/model.hh"

namespace dniv {

// Replaces one hidden host transition by a closed subroutine program.
// The subroutine has no inputs and only hidden actions; link maps each
// target of the replaced transition to the subroutine terminal that
// returns to it.
struct ReplacementSpec {
  StateRef host_state;              // unique state enabling host_action
  ActionRef host_action;            // hidden, labels exactly one transition
  Automaton subroutine;
  std::map<StateRef, StateRef> link;  // host target -> subroutine terminal
  std::string tag;                    // namespace prefix for inlined states
};

// Structural requirements: hidden single-use host action, bijective
// link from the replaced distribution's support onto transitionless
// subroutine terminals, input-free hidden-only subroutine, nonempty
// tag. Returns human-readable violations; empty means well-formed.
std::vector<std::string> replacement_violations(const Plts& host, const ReplacementSpec& spec);

// Whether the subroutine realizes the replaced transition exactly: its
// hidden closure terminates with certainty and transports, through
// link, onto the replaced distribution.
bool implements_check(const Plts& host, const ReplacementSpec& spec);

// The host with the transition inlined: host keeps all other
// transitions, subroutine states are copied under the tag prefix, the
// host state dispatches into the subroutine entry, and each linked
// terminal returns to its host target by a fresh hidden action.
// Observable prefix probabilities are preserved exactly when
// implements_check holds.
Automaton replace_transition(const Automaton& host, const ReplacementSpec& spec);

}  // namespace dniv

#endif  // DNIV_COMPOSITION_HH_
