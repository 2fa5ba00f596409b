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

#include "dniv/io.hh"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace dniv {
namespace {

const std::string kBottomName = "_bot_";

struct Line {
  int number;
  std::vector<std::string> tokens;
};

class Reader {
 public:
  explicit Reader(std::istream& in) {
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      std::istringstream split(raw);
      Line line{number, {}};
      std::string token;
      while (split >> token) line.tokens.push_back(token);
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
    }
  }

  bool done() const { return pos_ >= lines_.size(); }

  const Line& peek() const {
    if (done()) throw ParseError(0, "unexpected end of file");
    return lines_[pos_];
  }

  Line next() {
    Line line = peek();
    ++pos_;
    return line;
  }

  void expect_magic(const std::string& word) {
    const Line line = next();
    if (line.tokens.size() != 1 || line.tokens[0] != word) {
      throw ParseError(line.number, "expected '" + word + "' header");
    }
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

void need_tokens(const Line& line, std::size_t count) {
  if (line.tokens.size() != count) {
    throw ParseError(line.number, "'" + line.tokens[0] + "' takes " + std::to_string(count - 1) +
                                      " arguments");
  }
}

Rat read_rat(const Line& line, const std::string& token) {
  try {
    return parse_rat(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line.number, e.what());
  }
}

long read_long(const Line& line, const std::string& token) {
  try {
    std::size_t used = 0;
    const long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ParseError(line.number, "bad integer '" + token + "'");
  }
}

ActionKind read_kind(const Line& line, const std::string& token) {
  if (token == "data") return ActionKind::kDataPoint;
  if (token == "query") return ActionKind::kQuery;
  if (token == "response") return ActionKind::kResponse;
  if (token == "hidden") return ActionKind::kHidden;
  throw ParseError(line.number, "bad action kind '" + token + "'");
}

StateRef read_state(const Line& line, const Plts& plts, const std::string& token) {
  if (token == kBottomName) return kBottom;
  const StateRef s = plts.state_index(token);
  if (s < 0) throw ParseError(line.number, "unknown state '" + token + "'");
  return s;
}

StateRef read_real_state(const Line& line, const Plts& plts, const std::string& token) {
  const StateRef s = plts.state_index(token);
  if (s < 0) throw ParseError(line.number, "unknown state '" + token + "'");
  return s;
}

// level blocks shared by family and covering files; stops before a
// token in `stops`
std::vector<Relation> read_levels(Reader& reader, const Plts& plts, int count,
                                  const std::vector<std::string>& stops) {
  std::vector<Relation> levels(count);
  int current = -1;
  while (!reader.done()) {
    const std::string& head = reader.peek().tokens[0];
    bool stop = false;
    for (const std::string& word : stops) stop |= head == word;
    if (stop) break;
    const Line line = reader.next();
    if (head == "level") {
      need_tokens(line, 2);
      const long index = read_long(line, line.tokens[1]);
      if (index != current + 1) {
        throw ParseError(line.number, "expected 'level " + std::to_string(current + 1) + "'");
      }
      if (index >= count) throw ParseError(line.number, "more levels than declared");
      current = static_cast<int>(index);
    } else if (head == "pair") {
      need_tokens(line, 3);
      if (current < 0) throw ParseError(line.number, "'pair' before any 'level'");
      levels[current].emplace(read_state(line, plts, line.tokens[1]),
                              read_state(line, plts, line.tokens[2]));
    } else {
      throw ParseError(line.number, "unknown directive '" + head + "'");
    }
  }
  if (current + 1 != count) {
    throw ParseError(0, "declared " + std::to_string(count) + " levels, found " +
                            std::to_string(current + 1));
  }
  return levels;
}

Rat read_step_header(Reader& reader) {
  const Line line = reader.next();
  if (line.tokens[0] != "step") throw ParseError(line.number, "expected 'step'");
  need_tokens(line, 2);
  const Rat step = read_rat(line, line.tokens[1]);
  if (step < 1) throw ParseError(line.number, "step ratio below 1");
  return step;
}

int read_levels_header(Reader& reader) {
  const Line line = reader.next();
  if (line.tokens[0] != "levels") throw ParseError(line.number, "expected 'levels'");
  need_tokens(line, 2);
  const long count = read_long(line, line.tokens[1]);
  if (count < 1) throw ParseError(line.number, "need at least one level");
  return static_cast<int>(count);
}

void write_levels(std::ostream& out, const Plts& plts, const std::vector<Relation>& levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out << "level " << i << "\n";
    for (const auto& [a, b] : levels[i]) {
      out << "pair " << plts.state_name(a) << " " << plts.state_name(b) << "\n";
    }
  }
}

}  // namespace

Automaton load_automaton(std::istream& in) {
  Reader reader(in);
  reader.expect_magic("plts");
  PltsBuilder builder;
  std::optional<std::string> initial;
  while (!reader.done()) {
    const Line line = reader.next();
    const std::string& head = line.tokens[0];
    try {
      if (head == "action") {
        need_tokens(line, 3);
        builder.add_action(line.tokens[1], read_kind(line, line.tokens[2]));
      } else if (head == "state") {
        need_tokens(line, 2);
        builder.add_state(line.tokens[1]);
      } else if (head == "initial") {
        if (initial) throw ParseError(line.number, "duplicate 'initial'");
        need_tokens(line, 2);
        initial = line.tokens[1];
      } else if (head == "trans") {
        if (line.tokens.size() < 5 || (line.tokens.size() - 3) % 2 != 0) {
          throw ParseError(line.number, "'trans' takes a source, an action and target/probability pairs");
        }
        std::vector<std::pair<std::string, Rat>> targets;
        for (std::size_t i = 3; i < line.tokens.size(); i += 2) {
          targets.emplace_back(line.tokens[i], read_rat(line, line.tokens[i + 1]));
        }
        builder.add_transition(line.tokens[1], line.tokens[2], targets);
      } else {
        throw ParseError(line.number, "unknown directive '" + head + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(line.number, e.what());
    }
  }
  if (!initial) throw ParseError(0, "missing 'initial'");
  try {
    return builder.build_automaton(*initial);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

void save_automaton(std::ostream& out, const Automaton& aut) {
  const Plts& plts = aut.plts;
  out << "plts\n";
  for (const Action& action : plts.actions) {
    out << "action " << action.name << " " << kind_name(action.kind) << "\n";
  }
  for (const std::string& state : plts.states) out << "state " << state << "\n";
  out << "initial " << plts.state_name(aut.initial) << "\n";
  for (StateRef s = 0; s < static_cast<StateRef>(plts.states.size()); ++s) {
    for (const auto& [a, dist] : plts.trans[s]) {
      out << "trans " << plts.states[s] << " " << plts.actions[a].name;
      for (const auto& [target, mass] : dist.entries) {
        out << " " << plts.states[target] << " " << rat_str(mass);
      }
      out << "\n";
    }
  }
}

Relation load_relation(std::istream& in, const Plts& plts) {
  Reader reader(in);
  reader.expect_magic("relation");
  Relation relation;
  while (!reader.done()) {
    const Line line = reader.next();
    if (line.tokens[0] != "pair") {
      throw ParseError(line.number, "unknown directive '" + line.tokens[0] + "'");
    }
    need_tokens(line, 3);
    relation.emplace(read_state(line, plts, line.tokens[1]),
                     read_state(line, plts, line.tokens[2]));
  }
  return relation;
}

void save_relation(std::ostream& out, const Plts& plts, const Relation& relation) {
  out << "relation\n";
  for (const auto& [a, b] : relation) {
    out << "pair " << plts.state_name(a) << " " << plts.state_name(b) << "\n";
  }
}

RelationFamily load_family(std::istream& in, const Plts& plts) {
  Reader reader(in);
  reader.expect_magic("unwind-family");
  const Rat step = read_step_header(reader);
  const int count = read_levels_header(reader);
  std::vector<Relation> levels = read_levels(reader, plts, count, {});
  return RelationFamily{std::move(levels), RatioBound(step)};
}

void save_family(std::ostream& out, const Plts& plts, const RelationFamily& family) {
  out << "unwind-family\n";
  out << "step " << rat_str(family.step.value) << "\n";
  out << "levels " << family.levels.size() << "\n";
  write_levels(out, plts, family.levels);
}

CoveringFile load_covering(std::istream& in, const Plts& plts) {
  Reader reader(in);
  reader.expect_magic("covering");
  CoveringFile covering;
  covering.step = read_step_header(reader);
  const int count = read_levels_header(reader);
  covering.budget = count - 1;
  while (!reader.done()) {
    const Line line = reader.next();
    if (line.tokens[0] != "family") {
      throw ParseError(line.number, "expected 'family'");
    }
    need_tokens(line, 3);
    const StateRef state = read_real_state(line, plts, line.tokens[1]);
    const ActionRef action = plts.action_index(line.tokens[2]);
    if (action < 0) throw ParseError(line.number, "unknown action '" + line.tokens[2] + "'");
    std::vector<Relation> levels = read_levels(reader, plts, count, {"family"});
    const bool fresh =
        covering.families
            .emplace(FamilyKey{state, action},
                     RelationFamily{std::move(levels), RatioBound(covering.step)})
            .second;
    if (!fresh) {
      throw ParseError(line.number, "duplicate family for '" + line.tokens[1] + "' and '" +
                                        line.tokens[2] + "'");
    }
  }
  return covering;
}

void save_covering(std::ostream& out, const Plts& plts, const CoveringFile& covering) {
  out << "covering\n";
  out << "step " << rat_str(covering.step) << "\n";
  out << "levels " << covering.budget + 1 << "\n";
  for (const auto& [key, family] : covering.families) {
    if (family.step.value != covering.step ||
        static_cast<int>(family.levels.size()) != covering.budget + 1) {
      throw std::invalid_argument("family shape disagrees with the covering header");
    }
    out << "family " << plts.state_name(key.first) << " " << plts.actions[key.second].name << "\n";
    write_levels(out, plts, family.levels);
  }
}

SubDist load_subdist(std::istream& in, const Plts& plts) {
  Reader reader(in);
  reader.expect_magic("subdist");
  SubDist dist;
  bool saw_bottom = false;
  while (!reader.done()) {
    const Line line = reader.next();
    const std::string& head = line.tokens[0];
    if (head == "mass") {
      need_tokens(line, 3);
      const StateRef s = read_real_state(line, plts, line.tokens[1]);
      const Rat mass = read_rat(line, line.tokens[2]);
      if (mass <= 0) throw ParseError(line.number, "nonpositive mass");
      if (!dist.entries.emplace(s, mass).second) {
        throw ParseError(line.number, "repeated state '" + line.tokens[1] + "'");
      }
    } else if (head == "bottom") {
      if (saw_bottom) throw ParseError(line.number, "duplicate 'bottom'");
      need_tokens(line, 2);
      dist.bottom = read_rat(line, line.tokens[1]);
      if (dist.bottom < 0) throw ParseError(line.number, "negative mass");
      saw_bottom = true;
    } else {
      throw ParseError(line.number, "unknown directive '" + head + "'");
    }
  }
  if (dist.mass() > 1) throw ParseError(0, "total mass above 1");
  return dist;
}

void save_subdist(std::ostream& out, const Plts& plts, const SubDist& dist) {
  out << "subdist\n";
  for (const auto& [s, mass] : dist.entries) {
    out << "mass " << plts.state_name(s) << " " << rat_str(mass) << "\n";
  }
  if (dist.bottom > 0) out << "bottom " << rat_str(dist.bottom) << "\n";
}

}  // namespace dniv
