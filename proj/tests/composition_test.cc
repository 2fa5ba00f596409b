// Copyright (c) 2026, the dniv authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dniv/composition.hh"

#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dniv/model.hh"
#include "dniv/trace.hh"

namespace dniv {
namespace {

// Two queries answered by differently biased hidden coins.
Automaton two_query_host() {
  PltsBuilder b;
  b.add_action("d", ActionKind::kDataPoint);
  b.add_action("q1", ActionKind::kQuery);
  b.add_action("q2", ActionKind::kQuery);
  b.add_action("h1", ActionKind::kHidden);
  b.add_action("h2", ActionKind::kHidden);
  b.add_action("r0", ActionKind::kResponse);
  b.add_action("r1", ActionKind::kResponse);
  b.add_state("w");
  b.add_state("m1");
  b.add_state("m2");
  b.add_state("a1");
  b.add_state("b1");
  b.add_state("a2");
  b.add_state("b2");
  b.add_transition("w", "d", {{"w", Rat(1)}});
  b.add_transition("w", "q1", {{"m1", Rat(1)}});
  b.add_transition("w", "q2", {{"m2", Rat(1)}});
  b.add_transition("m1", "h1", {{"a1", Rat(1) / 2}, {"b1", Rat(1) / 2}});
  b.add_transition("m2", "h2", {{"a2", Rat(1) / 3}, {"b2", Rat(2) / 3}});
  b.add_transition("a1", "r0", {{"w", Rat(1)}});
  b.add_transition("b1", "r1", {{"w", Rat(1)}});
  b.add_transition("a2", "r0", {{"w", Rat(1)}});
  b.add_transition("b2", "r1", {{"w", Rat(1)}});
  return b.build_automaton("w");
}

// Closed two-terminal program; the entry distribution is arbitrary.
Automaton coin_sub(const Rat& to_a, bool retry = false) {
  PltsBuilder b;
  b.add_action("g", ActionKind::kHidden);
  b.add_state("in");
  b.add_state("a");
  b.add_state("b");
  if (retry) {
    b.add_transition("in", "g",
                     {{"in", Rat(1) / 2}, {"a", to_a / 2}, {"b", (1 - to_a) / 2}});
  } else {
    b.add_transition("in", "g", {{"a", to_a}, {"b", 1 - to_a}});
  }
  return b.build_automaton("in");
}

ReplacementSpec coin_spec(const Automaton& host, const char* state, const char* action,
                          const Automaton& sub, const char* tag) {
  const Plts& p = host.plts;
  return ReplacementSpec{
      p.state_index(state),
      p.action_index(action),
      sub,
      {{p.state_index(state[1] == '1' ? "a1" : "a2"), sub.plts.state_index("a")},
       {p.state_index(state[1] == '1' ? "b1" : "b2"), sub.plts.state_index("b")}},
      tag,
  };
}

TEST_CASE("a faithful subroutine passes the implementation check") {
  const Automaton host = two_query_host();
  const Automaton sub = coin_sub(Rat(1) / 2);
  const ReplacementSpec spec = coin_spec(host, "m1", "h1", sub, "s");
  CHECK(replacement_violations(host.plts, spec).empty());
  CHECK(implements_check(host.plts, spec));
}

TEST_CASE("a retry loop that terminates almost surely still implements") {
  const Automaton host = two_query_host();
  const Automaton sub = coin_sub(Rat(1) / 2, true);
  CHECK(implements_check(host.plts, coin_spec(host, "m1", "h1", sub, "s")));
}

TEST_CASE("a biased subroutine fails the implementation check") {
  const Automaton host = two_query_host();
  const Automaton sub = coin_sub(Rat(2) / 3);
  CHECK_FALSE(implements_check(host.plts, coin_spec(host, "m1", "h1", sub, "s")));
}

TEST_CASE("a diverging subroutine fails the implementation check") {
  PltsBuilder b;
  b.add_action("g", ActionKind::kHidden);
  b.add_state("in");
  b.add_state("loop");
  b.add_state("a");
  b.add_state("b");
  b.add_transition("in", "g", {{"loop", Rat(1) / 2}, {"a", Rat(1) / 4}, {"b", Rat(1) / 4}});
  b.add_transition("loop", "g", {{"loop", Rat(1)}});
  const Automaton sub = b.build_automaton("in");
  const Automaton host = two_query_host();
  CHECK_FALSE(implements_check(host.plts, coin_spec(host, "m1", "h1", sub, "s")));
}

TEST_CASE("structural violations are reported") {
  const Automaton host = two_query_host();
  const Plts& p = host.plts;
  const Automaton sub = coin_sub(Rat(1) / 2);
  const ReplacementSpec good = coin_spec(host, "m1", "h1", sub, "s");

  auto expect_bad = [&](ReplacementSpec spec) {
    CHECK_FALSE(replacement_violations(p, spec).empty());
    CHECK_THROWS_AS(implements_check(p, spec), std::invalid_argument);
    CHECK_THROWS_AS(replace_transition(host, spec), std::invalid_argument);
  };

  {
    ReplacementSpec spec = good;
    spec.host_state = 99;
    expect_bad(spec);
  }
  {
    ReplacementSpec spec = good;
    spec.host_action = -1;
    expect_bad(spec);
  }
  {
    // Replacing a visible action is not allowed.
    ReplacementSpec spec = good;
    spec.host_action = p.action_index("q1");
    expect_bad(spec);
  }
  {
    // The host state must enable the replaced action.
    ReplacementSpec spec = good;
    spec.host_state = p.state_index("w");
    expect_bad(spec);
  }
  {
    ReplacementSpec spec = good;
    spec.link.erase(p.state_index("a1"));
    expect_bad(spec);
  }
  {
    ReplacementSpec spec = good;
    spec.link[p.state_index("w")] = sub.plts.state_index("a");
    expect_bad(spec);
  }
  {
    ReplacementSpec spec = good;
    spec.link[p.state_index("a1")] = 42;
    expect_bad(spec);
  }
  {
    // Linking into a non-terminal subroutine state.
    ReplacementSpec spec = good;
    spec.link[p.state_index("a1")] = sub.plts.state_index("in");
    expect_bad(spec);
  }
  {
    // Two targets cannot share a terminal.
    ReplacementSpec spec = good;
    spec.link[p.state_index("a1")] = sub.plts.state_index("b");
    expect_bad(spec);
  }
  {
    ReplacementSpec spec = good;
    spec.tag = "";
    expect_bad(spec);
  }
  {
    // Subroutines may not emit visible actions.
    PltsBuilder b;
    b.add_action("g", ActionKind::kResponse);
    b.add_state("in");
    b.add_state("a");
    b.add_state("b");
    b.add_transition("in", "g", {{"a", Rat(1) / 2}, {"b", Rat(1) / 2}});
    ReplacementSpec spec = good;
    spec.subroutine = b.build_automaton("in");
    spec.link = {{p.state_index("a1"), spec.subroutine.plts.state_index("a")},
                 {p.state_index("b1"), spec.subroutine.plts.state_index("b")}};
    expect_bad(spec);
  }
}

TEST_CASE("a shared action label blocks the replacement") {
  PltsBuilder b;
  b.add_action("h", ActionKind::kHidden);
  b.add_state("s");
  b.add_state("t");
  b.add_state("u");
  b.add_transition("s", "h", {{"t", Rat(1)}});
  b.add_transition("u", "h", {{"t", Rat(1)}});
  const Automaton host = b.build_automaton("s");
  PltsBuilder sb;
  sb.add_action("g", ActionKind::kHidden);
  sb.add_state("in");
  sb.add_state("end");
  sb.add_transition("in", "g", {{"end", Rat(1)}});
  const Automaton sub = sb.build_automaton("in");
  const ReplacementSpec spec{host.plts.state_index("s"), host.plts.action_index("h"), sub,
                             {{host.plts.state_index("t"), sub.plts.state_index("end")}},
                             "s"};
  CHECK_FALSE(replacement_violations(host.plts, spec).empty());
}

TEST_CASE("name collisions with the tag are refused") {
  PltsBuilder b;
  b.add_action("h", ActionKind::kHidden);
  b.add_action("s:ret", ActionKind::kHidden);
  b.add_state("m");
  b.add_state("t");
  b.add_state("z");
  b.add_transition("m", "h", {{"t", Rat(1)}});
  b.add_transition("z", "s:ret", {{"t", Rat(1)}});
  const Automaton host = b.build_automaton("m");
  PltsBuilder sb;
  sb.add_action("g", ActionKind::kHidden);
  sb.add_state("in");
  sb.add_state("end");
  sb.add_transition("in", "g", {{"end", Rat(1)}});
  const Automaton sub = sb.build_automaton("in");
  ReplacementSpec spec{host.plts.state_index("m"), host.plts.action_index("h"), sub,
                       {{host.plts.state_index("t"), sub.plts.state_index("end")}},
                       "s"};
  CHECK_FALSE(replacement_violations(host.plts, spec).empty());
  spec.tag = "ok";
  CHECK(replacement_violations(host.plts, spec).empty());
}

TEST_CASE("inlining rewires the host around the subroutine") {
  const Automaton host = two_query_host();
  const Automaton sub = coin_sub(Rat(1) / 2);
  const Automaton out = replace_transition(host, coin_spec(host, "m1", "h1", sub, "s"));
  const Plts& p = out.plts;

  CHECK(validate(p).ok());
  CHECK(p.state_name(out.initial) == "w");
  CHECK(p.action_index("h1") == -1);
  CHECK(p.action_index("h2") >= 0);
  CHECK(p.state_index("s.in") >= 0);
  CHECK(p.state_index("s.a") >= 0);
  CHECK(p.state_index("s.b") >= 0);

  const ActionRef ret = p.action_index("s:ret");
  REQUIRE(ret >= 0);
  CHECK(p.actions[ret].kind == ActionKind::kHidden);
  const ActionRef g = p.action_index("s.g");
  REQUIRE(g >= 0);

  const Dist* dispatch = p.transition(p.state_index("m1"), ret);
  REQUIRE(dispatch != nullptr);
  CHECK(dispatch->at(p.state_index("s.in")) == 1);
  const Dist* flip = p.transition(p.state_index("s.in"), g);
  REQUIRE(flip != nullptr);
  CHECK(flip->at(p.state_index("s.a")) == Rat(1) / 2);
  const Dist* back = p.transition(p.state_index("s.a"), ret);
  REQUIRE(back != nullptr);
  CHECK(back->at(p.state_index("a1")) == 1);
}

TEST_CASE("inlining preserves observable prefix probabilities") {
  const Automaton host = two_query_host();
  const Automaton sub = coin_sub(Rat(1) / 2, true);
  const Automaton out = replace_transition(host, coin_spec(host, "m1", "h1", sub, "s"));

  const ActionRef d = host.plts.action_index("d");
  const ActionRef q1 = host.plts.action_index("q1");
  const ActionRef q2 = host.plts.action_index("q2");
  const ActionRef od = out.plts.action_index("d");
  const ActionRef oq1 = out.plts.action_index("q1");
  const ActionRef oq2 = out.plts.action_index("q2");

  const std::vector<std::pair<ActionSeq, ActionSeq>> inputs = {
      {{}, {}},
      {{q1}, {oq1}},
      {{q2}, {oq2}},
      {{d, q1}, {od, oq1}},
      {{q1, q2}, {oq1, oq2}},
      {{q1, q1, q2}, {oq1, oq1, oq2}},
  };
  for (const auto& [host_in, out_in] : inputs) {
    const auto expected = observation_prefix_map(host, host_in, 4);
    const auto actual = observation_prefix_map(out, out_in, 4);
    REQUIRE(expected.size() == actual.size());
    for (const auto& [obs, prob] : expected) {
      ActionSeq renamed;
      for (ActionRef a : obs) renamed.push_back(out.plts.action_index(host.plts.actions[a].name));
      CHECK(actual.at(renamed) == prob);
    }
  }
}

TEST_CASE("two replacements commute") {
  const Automaton host = two_query_host();
  const Automaton sub1 = coin_sub(Rat(1) / 2);
  const Automaton sub2 = coin_sub(Rat(1) / 3);

  const auto apply = [&](const Automaton& aut, const char* state, const char* action,
                         const Automaton& sub, const char* tag) {
    // Resolve by name against the current automaton; indices shift as
    // states are added.
    return replace_transition(aut, coin_spec(aut, state, action, sub, tag));
  };

  const Automaton ab = apply(apply(host, "m1", "h1", sub1, "f"), "m2", "h2", sub2, "g");
  const Automaton ba = apply(apply(host, "m2", "h2", sub2, "g"), "m1", "h1", sub1, "f");

  CHECK(validate(ab.plts).ok());
  REQUIRE(ab.plts.states == ba.plts.states);
  REQUIRE(ab.plts.actions.size() == ba.plts.actions.size());
  for (size_t i = 0; i < ab.plts.actions.size(); ++i) {
    CHECK(ab.plts.actions[i].name == ba.plts.actions[i].name);
    CHECK(ab.plts.actions[i].kind == ba.plts.actions[i].kind);
  }
  CHECK(ab.initial == ba.initial);
  for (StateRef s = 0; s < static_cast<StateRef>(ab.plts.states.size()); ++s) {
    REQUIRE(ab.plts.trans[s].size() == ba.plts.trans[s].size());
    for (const auto& [a, dist] : ab.plts.trans[s]) {
      const Dist* other = ba.plts.transition(s, a);
      REQUIRE(other != nullptr);
      CHECK(dist.entries == other->entries);
    }
  }
}

}  // namespace
}  // namespace dniv
