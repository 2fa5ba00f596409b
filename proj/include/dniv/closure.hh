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

#ifndef DNIV_CLOSURE_HH_
#define DNIV_CLOSURE_HH_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dniv/model.hh"

namespace dniv {

// Absorbing Markov chain in canonical block form: row i of [q | r] is
// the one-step distribution of the i-th transient state and sums to 1.
// Absorbing states may include kBottom for collapsed nontermination.
struct AbsorbingChain {
  std::vector<StateRef> transients;  // ascending
  std::vector<StateRef> absorbing;   // ascending (kBottom first if present)
  std::vector<std::vector<Rat>> q;   // |transients| x |transients|
  std::vector<std::vector<Rat>> r;   // |transients| x |absorbing|
};

// Exact absorption matrix (I - Q)^{-1} R, computed by Gaussian
// elimination over rationals on the system (I - Q) X = R. Row i is the
// absorption distribution from the i-th transient state. Throws
// std::domain_error when I - Q is singular, i.e. some transient mass
// can never be absorbed; the chain constructor below never produces
// such a system because it collapses those states into kBottom first.
std::vector<std::vector<Rat>> absorption_probabilities(const AbsorbingChain& chain);

// Pushes a distribution through hidden steps until it rests on
// H-disabled states: hidden-reachable states are collected, the ones
// that cannot reach the H-disabled frontier are collapsed into kBottom,
// and the remaining transient part is solved as an absorbing chain.
SubDist hidden_closure(const Plts& plts, const Dist& start);

// Extended step: the visible transition for a followed by hidden
// closure. Empty when s does not enable a.
std::optional<SubDist> step_closure(const Plts& plts, StateRef s, ActionRef a);

// Memoizes step_closure per (state, action); the relation checkers ask
// for the same extended steps many times.
class ClosureCache {
 public:
  explicit ClosureCache(const Plts& plts) : plts_(plts) {}

  const SubDist* get(StateRef s, ActionRef a);

 private:
  const Plts& plts_;
  std::map<std::pair<StateRef, ActionRef>, std::optional<SubDist>> memo_;
};

}  // namespace dniv

#endif  // DNIV_CLOSURE_HH_
