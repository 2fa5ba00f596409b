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

#ifndef DNIV_TRACE_HH_
#define DNIV_TRACE_HH_

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dniv/model.hh"

namespace dniv {

using ActionSeq = std::vector<ActionRef>;

// Probability that a run under the given available inputs starts with
// the given action trace (hidden steps spelled out). Inputs must be
// input actions; they are consumed left to right as the run asks for
// them.
Rat trace_prefix_prob(const Automaton& aut, const ActionSeq& inputs, const ActionSeq& trace);

// Probability that the observable projection of a run (queries and
// responses only) starts with obs. Data-point consumption and hidden
// computation are silent; mass that diverges inside hidden computation
// counts toward the observation made so far and never extends it.
Rat observable_prefix_prob(const Automaton& aut, const ActionSeq& inputs, const ActionSeq& obs);

// Every positive-probability observation prefix up to max_len, mapped
// to its probability. Absent prefixes have probability zero.
std::map<ActionSeq, Rat> observation_prefix_map(const Automaton& aut, const ActionSeq& inputs,
                                                int max_len);

// All sequences obtained by inserting one data point anywhere into
// inputs, deduplicated and sorted.
std::vector<ActionSeq> neighbors_one(const Plts& plts, const ActionSeq& inputs);

struct DniOptions {
  RatioBound rho;
  int max_input_len = 3;
  int max_obs_len = 3;
  long eval_cap = 1000000;  // (pair, observation) evaluations
};

// Extremal or diverging witness of a (pair, observation) comparison.
struct DniWitness {
  ActionSeq inputs1, inputs2;
  ActionSeq obs;
  Rat prob1, prob2;
};

struct DniReport {
  bool pass = false;
  bool ratio_infinite = false;   // some observation positive on one side only
  Rat max_ratio = 1;             // over observations positive on both sides
  std::optional<DniWitness> witness;
  long evaluated = 0;
};

struct EnumerationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ground-truth check straight from the trace semantics: enumerates all
// input sequences up to max_input_len, their one-insertion neighbors,
// and every observation prefix up to max_obs_len with positive
// probability on either side; passes when all two-sided ratios stay
// within rho. Exponential in the length limits; meant for small
// instances and for cross-checking the relation-based certification.
DniReport dni_check_bruteforce(const Automaton& aut, const DniOptions& options);

// Default eval_cap, overridable through the DNIV_EVAL_CAP environment
// variable.
long default_eval_cap();

}  // namespace dniv

#endif  // DNIV_TRACE_HH_
