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

#ifndef DNIV_LIFTING_HH_
#define DNIV_LIFTING_HH_

#include <set>
#include <utility>
#include <vector>

#include "dniv/model.hh"

namespace dniv {

// Binary relation over states extended with kBottom.
using StatePair = std::pair<StateRef, StateRef>;
using Relation = std::set<StatePair>;

struct BipartiteGraph {
  int left_size = 0;
  int right_size = 0;
  std::vector<std::vector<int>> adj;  // one edge list per left vertex
};

// Maximum matching size via Hopcroft-Karp.
int max_matching(const BipartiteGraph& g);

// A perfect matching covers every vertex on both sides.
bool has_perfect_matching(const BipartiteGraph& g);

// Decides whether nu1 and nu2 are related by a lifting of rel at the
// given bound: a bijection between the two supports (kBottom included
// when it carries mass) pairing related elements of pointwise-close
// probability. Reduces to perfect matching in the bipartite graph of
// admissible pairs.
bool in_lifted_relation(const Relation& rel, const RatioBound& bound, const SubDist& nu1,
                        const SubDist& nu2);

}  // namespace dniv

#endif  // DNIV_LIFTING_HH_
