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

#include "dniv/unwinding.hh"

#include <algorithm>

namespace dniv {

const char* unwind_failure_name(UnwindFailureKind kind) {
  switch (kind) {
    case UnwindFailureKind::kWrongLevelCount: return "wrong-level-count";
    case UnwindFailureKind::kNotHDisabled: return "not-h-disabled";
    case UnwindFailureKind::kEnablementMismatch: return "enablement-mismatch";
    case UnwindFailureKind::kLiftingFailed: return "lifting-failed";
  }
  return "?";
}

UnwindReport is_unwind_fam(const Plts& plts, const std::vector<Relation>& levels,
                           const RatioBound& step, int budget, ClosureCache* cache) {
  UnwindReport report;
  if (static_cast<int>(levels.size()) != budget + 1) {
    report.failure = UnwindFailure{UnwindFailureKind::kWrongLevelCount};
    report.failure->level = static_cast<int>(levels.size());
    return report;
  }

  std::optional<ClosureCache> own;
  if (cache == nullptr) cache = &own.emplace(plts);

  const auto h_disabled_ext = [&](StateRef s) { return s == kBottom || plts.h_disabled(s); };
  for (int i = 0; i <= budget; ++i) {
    for (const StatePair& pair : levels[i]) {
      for (StateRef s : {pair.first, pair.second}) {
        if (s != kBottom) plts.check_state(s);
        if (!h_disabled_ext(s)) {
          report.failure = UnwindFailure{UnwindFailureKind::kNotHDisabled, i, pair};
          return report;
        }
      }
    }
  }

  const std::vector<ActionRef> visible = plts.visible_actions();
  const RatioBound exact{Rat(1)};
  for (int i = 0; i <= budget; ++i) {
    for (const StatePair& pair : levels[i]) {
      for (ActionRef a : visible) {
        const SubDist* nu1 = pair.first == kBottom ? nullptr : cache->get(pair.first, a);
        const SubDist* nu2 = pair.second == kBottom ? nullptr : cache->get(pair.second, a);
        if ((nu1 == nullptr) != (nu2 == nullptr)) {
          report.failure = UnwindFailure{UnwindFailureKind::kEnablementMismatch, i, pair, a};
          return report;
        }
        if (nu1 == nullptr) continue;
        if (in_lifted_relation(levels[i], exact, *nu1, *nu2)) continue;
        if (i > 0 && in_lifted_relation(levels[i - 1], step, *nu1, *nu2)) continue;
        report.failure = UnwindFailure{UnwindFailureKind::kLiftingFailed, i, pair, a, *nu1, *nu2};
        return report;
      }
    }
  }
  report.ok = true;
  return report;
}

UnwindReport is_unwind_fam(const Plts& plts, const RelationFamily& family, int budget) {
  return is_unwind_fam(plts, family.levels, family.step, budget);
}

std::vector<StateRef> reachable_states(const Automaton& aut) {
  std::vector<bool> seen(aut.plts.states.size(), false);
  std::vector<StateRef> stack{aut.initial};
  aut.plts.check_state(aut.initial);
  seen[aut.initial] = true;
  while (!stack.empty()) {
    const StateRef s = stack.back();
    stack.pop_back();
    for (const auto& [a, dist] : aut.plts.trans[s]) {
      for (const auto& [tgt, p] : dist.entries) {
        if (!seen[tgt]) {
          seen[tgt] = true;
          stack.push_back(tgt);
        }
      }
    }
  }
  std::vector<StateRef> out;
  for (StateRef s = 0; s < static_cast<StateRef>(seen.size()); ++s) {
    if (seen[s]) out.push_back(s);
  }
  return out;
}

const char* cover_failure_name(CoverFailureKind kind) {
  switch (kind) {
    case CoverFailureKind::kNonterminating: return "nonterminating";
    case CoverFailureKind::kMissingFamily: return "missing-family";
    case CoverFailureKind::kMalformedFamily: return "malformed-family";
    case CoverFailureKind::kSupportNotRelated: return "support-not-related";
    case CoverFailureKind::kFamilyRejected: return "family-rejected";
  }
  return "?";
}

CoverReport is_all_covered(const Automaton& aut, const std::map<FamilyKey, RelationFamily>& rels,
                           const RatioBound& step, int budget) {
  const Plts& plts = aut.plts;
  ClosureCache cache(plts);
  CoverReport report;

  const std::vector<ActionRef> data = plts.actions_of_kind(ActionKind::kDataPoint);
  for (StateRef s : reachable_states(aut)) {
    for (ActionRef d : data) {
      if (!plts.enables(s, d)) continue;
      const SubDist* nu = cache.get(s, d);
      if (nu->bottom != 0) {
        report.failure = CoverFailure{CoverFailureKind::kNonterminating, s, d};
        return report;
      }
      const auto it = rels.find({s, d});
      if (it == rels.end()) {
        report.failure = CoverFailure{CoverFailureKind::kMissingFamily, s, d};
        return report;
      }
      const RelationFamily& family = it->second;
      if (static_cast<int>(family.levels.size()) != budget + 1 ||
          family.step.value != step.value) {
        report.failure = CoverFailure{CoverFailureKind::kMalformedFamily, s, d};
        return report;
      }
      for (const auto& [succ, p] : nu->entries) {
        if (!family.levels[budget].count({s, succ})) {
          report.failure = CoverFailure{CoverFailureKind::kSupportNotRelated, s, d, succ};
          return report;
        }
      }
      UnwindReport inner = is_unwind_fam(plts, family.levels, step, budget, &cache);
      if (!inner.ok) {
        report.failure = CoverFailure{CoverFailureKind::kFamilyRejected, s, d, kBottom,
                                      std::move(inner.failure)};
        return report;
      }
    }
  }
  report.ok = true;
  return report;
}

}  // namespace dniv
