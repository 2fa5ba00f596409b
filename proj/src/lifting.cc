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

#include "dniv/lifting.hh"

#include <limits>
#include <queue>

namespace dniv {

namespace {
constexpr int kFree = -1;
}  // namespace

int max_matching(const BipartiteGraph& g) {
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> match_left(g.left_size, kFree);
  std::vector<int> match_right(g.right_size, kFree);
  std::vector<int> layer(g.left_size);

  const auto bfs = [&] {
    std::queue<int> queue;
    for (int u = 0; u < g.left_size; ++u) {
      if (match_left[u] == kFree) {
        layer[u] = 0;
        queue.push(u);
      } else {
        layer[u] = inf;
      }
    }
    bool reachable = false;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int v : g.adj[u]) {
        const int w = match_right[v];
        if (w == kFree) {
          reachable = true;
        } else if (layer[w] == inf) {
          layer[w] = layer[u] + 1;
          queue.push(w);
        }
      }
    }
    return reachable;
  };

  const auto dfs = [&](auto&& self, int u) -> bool {
    for (int v : g.adj[u]) {
      const int w = match_right[v];
      if (w == kFree || (layer[w] == layer[u] + 1 && self(self, w))) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    layer[u] = inf;
    return false;
  };

  int size = 0;
  while (bfs()) {
    for (int u = 0; u < g.left_size; ++u) {
      if (match_left[u] == kFree && dfs(dfs, u)) ++size;
    }
  }
  return size;
}

bool has_perfect_matching(const BipartiteGraph& g) {
  return g.left_size == g.right_size && max_matching(g) == g.left_size;
}

bool in_lifted_relation(const Relation& rel, const RatioBound& bound, const SubDist& nu1,
                        const SubDist& nu2) {
  std::vector<std::pair<StateRef, Rat>> left, right;
  const auto collect = [](const SubDist& nu, std::vector<std::pair<StateRef, Rat>>& out) {
    if (nu.bottom > 0) out.emplace_back(kBottom, nu.bottom);
    for (const auto& [s, p] : nu.entries) out.emplace_back(s, p);
  };
  collect(nu1, left);
  collect(nu2, right);
  if (left.size() != right.size()) return false;

  BipartiteGraph g;
  g.left_size = static_cast<int>(left.size());
  g.right_size = static_cast<int>(right.size());
  g.adj.resize(g.left_size);
  for (int u = 0; u < g.left_size; ++u) {
    for (int v = 0; v < g.right_size; ++v) {
      if (rel.count({left[u].first, right[v].first}) &&
          within_ratio(left[u].second, right[v].second, bound)) {
        g.adj[u].push_back(v);
      }
    }
  }
  return has_perfect_matching(g);
}

}  // namespace dniv
