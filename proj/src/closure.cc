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

#include "dniv/closure.hh"

#include <algorithm>
#include <stdexcept>

namespace dniv {
namespace {

// The hidden one-step distribution of s, if any. Output determinism
// makes it unique: an H-enabled state has exactly one transition.
const Dist* hidden_step(const Plts& plts, StateRef s) {
  for (const auto& [a, dist] : plts.trans[s]) {
    if (plts.actions[a].kind == ActionKind::kHidden) return &dist;
  }
  return nullptr;
}

}  // namespace

std::vector<std::vector<Rat>> absorption_probabilities(const AbsorbingChain& chain) {
  const int n = static_cast<int>(chain.transients.size());
  const int m = static_cast<int>(chain.absorbing.size());
  if (static_cast<int>(chain.q.size()) != n || static_cast<int>(chain.r.size()) != n) {
    throw std::invalid_argument("absorbing chain: block sizes disagree");
  }

  // Augmented system [I - Q | R], solved in place.
  std::vector<std::vector<Rat>> mat(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(chain.q[i].size()) != n || static_cast<int>(chain.r[i].size()) != m) {
      throw std::invalid_argument("absorbing chain: ragged row");
    }
    mat[i].resize(n + m);
    for (int j = 0; j < n; ++j) mat[i][j] = (i == j ? Rat(1) : Rat(0)) - chain.q[i][j];
    for (int j = 0; j < m; ++j) mat[i][n + j] = chain.r[i][j];
  }

  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (mat[row][col] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw std::domain_error("absorbing chain: I - Q is singular");
    std::swap(mat[col], mat[pivot]);
    const Rat inv = 1 / mat[col][col];
    for (int j = col; j < n + m; ++j) mat[col][j] *= inv;
    for (int row = 0; row < n; ++row) {
      if (row == col || mat[row][col] == 0) continue;
      const Rat factor = mat[row][col];
      for (int j = col; j < n + m; ++j) mat[row][j] -= factor * mat[col][j];
    }
  }

  std::vector<std::vector<Rat>> out(n, std::vector<Rat>(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) out[i][j] = mat[i][n + j];
  }
  return out;
}

SubDist hidden_closure(const Plts& plts, const Dist& start) {
  // Hidden-reachable region from the start support.
  std::vector<StateRef> stack;
  std::map<StateRef, const Dist*> region;  // state -> hidden step (null at frontier)
  for (const auto& [s, p] : start.entries) {
    plts.check_state(s);
    if (!region.count(s)) {
      region.emplace(s, hidden_step(plts, s));
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const StateRef s = stack.back();
    stack.pop_back();
    const Dist* step = region.at(s);
    if (step == nullptr) continue;
    for (const auto& [tgt, p] : step->entries) {
      if (!region.count(tgt)) {
        region.emplace(tgt, hidden_step(plts, tgt));
        stack.push_back(tgt);
      }
    }
  }

  // Transients that can ever be absorbed, via reverse reachability from
  // the H-disabled frontier along hidden edges.
  std::map<StateRef, std::vector<StateRef>> rev;
  std::vector<StateRef> frontier;
  for (const auto& [s, step] : region) {
    if (step == nullptr) {
      frontier.push_back(s);
      continue;
    }
    for (const auto& [tgt, p] : step->entries) rev[tgt].push_back(s);
  }
  std::map<StateRef, bool> absorbs;
  for (StateRef s : frontier) absorbs[s] = true;
  std::vector<StateRef> wave = frontier;
  while (!wave.empty()) {
    const StateRef s = wave.back();
    wave.pop_back();
    auto it = rev.find(s);
    if (it == rev.end()) continue;
    for (StateRef pred : it->second) {
      if (!absorbs.count(pred)) {
        absorbs[pred] = true;
        wave.push_back(pred);
      }
    }
  }

  AbsorbingChain chain;
  bool any_dead = false;
  for (const auto& [s, step] : region) {
    if (step == nullptr) {
      chain.absorbing.push_back(s);
    } else if (absorbs.count(s)) {
      chain.transients.push_back(s);
    } else {
      any_dead = true;
    }
  }
  if (any_dead) chain.absorbing.insert(chain.absorbing.begin(), kBottom);

  std::map<StateRef, int> trow, acol;
  for (int i = 0; i < static_cast<int>(chain.transients.size()); ++i) {
    trow[chain.transients[i]] = i;
  }
  for (int j = 0; j < static_cast<int>(chain.absorbing.size()); ++j) {
    acol[chain.absorbing[j]] = j;
  }

  const int n = static_cast<int>(chain.transients.size());
  const int m = static_cast<int>(chain.absorbing.size());
  chain.q.assign(n, std::vector<Rat>(n, Rat(0)));
  chain.r.assign(n, std::vector<Rat>(m, Rat(0)));
  for (int i = 0; i < n; ++i) {
    const Dist* step = region.at(chain.transients[i]);
    for (const auto& [tgt, p] : step->entries) {
      if (auto it = trow.find(tgt); it != trow.end()) {
        chain.q[i][it->second] += p;
      } else if (auto jt = acol.find(tgt); jt != acol.end()) {
        chain.r[i][jt->second] += p;
      } else {
        chain.r[i][acol.at(kBottom)] += p;  // collapsed dead state
      }
    }
  }

  std::vector<std::vector<Rat>> absorbed;
  if (n > 0) absorbed = absorption_probabilities(chain);

  SubDist out;
  const auto add = [&](StateRef s, const Rat& p) {
    if (p == 0) return;
    if (s == kBottom) {
      out.bottom += p;
    } else {
      out.entries[s] += p;
    }
  };
  for (const auto& [s, p] : start.entries) {
    if (region.at(s) == nullptr) {
      add(s, p);
    } else if (auto it = trow.find(s); it != trow.end()) {
      for (int j = 0; j < m; ++j) add(chain.absorbing[j], p * absorbed[it->second][j]);
    } else {
      add(kBottom, p);
    }
  }
  return out;
}

std::optional<SubDist> step_closure(const Plts& plts, StateRef s, ActionRef a) {
  const Dist* dist = plts.transition(s, a);
  if (dist == nullptr) return std::nullopt;
  return hidden_closure(plts, *dist);
}

const SubDist* ClosureCache::get(StateRef s, ActionRef a) {
  auto key = std::make_pair(s, a);
  auto it = memo_.find(key);
  if (it == memo_.end()) it = memo_.emplace(key, step_closure(plts_, s, a)).first;
  return it->second.has_value() ? &*it->second : nullptr;
}

}  // namespace dniv
