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

// Line-oriented text formats. Every file starts with a magic word,
// '#' starts a comment, probabilities are exact "num/den" rationals
// and the bottom pseudo-state is written "_bot_". Writers emit a
// canonical form: sorted, one fact per line.

#ifndef DNIV_IO_HH_
#define DNIV_IO_HH_

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "dniv/lifting.hh"
#include "dniv/model.hh"
#include "dniv/unwinding.hh"

namespace dniv {

struct ParseError : std::runtime_error {
  int line;

  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}
};

// automaton:  "plts", then "action <name> data|query|response|hidden",
// "state <name>", "initial <name>", "trans <src> <action> (<tgt> <prob>)+"
Automaton load_automaton(std::istream& in);
void save_automaton(std::ostream& out, const Automaton& aut);

// relation:  "relation", then "pair <state> <state>"
Relation load_relation(std::istream& in, const Plts& plts);
void save_relation(std::ostream& out, const Plts& plts, const Relation& relation);

// family:  "unwind-family", "step <rat>", "levels <n>", then n blocks
// "level <i>" of pair lines, i ascending from 0
RelationFamily load_family(std::istream& in, const Plts& plts);
void save_family(std::ostream& out, const Plts& plts, const RelationFamily& family);

struct CoveringFile {
  Rat step = 1;
  int budget = 0;  // families carry budget+1 levels
  std::map<FamilyKey, RelationFamily> families;
};

// covering:  "covering", "step <rat>", "levels <n>", then per covered
// pair "family <state> <data-action>" followed by its level blocks
CoveringFile load_covering(std::istream& in, const Plts& plts);
void save_covering(std::ostream& out, const Plts& plts, const CoveringFile& covering);

// subdist:  "subdist", then "mass <state> <rat>" and "bottom <rat>"
SubDist load_subdist(std::istream& in, const Plts& plts);
void save_subdist(std::ostream& out, const Plts& plts, const SubDist& dist);

}  // namespace dniv

#endif  // DNIV_IO_HH_
