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

// Command line front end. Every check prints "key value" report lines
// on stdout and exits 0 when the property holds, 1 when it fails and
// 2 on usage, parse or resource errors.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dniv/closure.hh"
#include "dniv/composition.hh"
#include "dniv/io.hh"
#include "dniv/lifting.hh"
#include "dniv/mechanisms.hh"
#include "dniv/model.hh"
#include "dniv/trace.hh"
#include "dniv/unwinding.hh"
#include "dniv/window.hh"

namespace {

using namespace dniv;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

Automaton read_automaton(const std::string& path) {
  std::ifstream in = open_file(path);
  return load_automaton(in);
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::string item;
  std::istringstream split(text);
  while (std::getline(split, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stol(item, &used));
    if (used != item.size()) throw std::runtime_error("bad integer '" + item + "'");
  }
  return out;
}

SanitizedQuery pick_query(const std::string& mech, long capacity, const Rat& p) {
  if (mech == "count") return make_count_query(capacity, p);
  if (mech == "sum") return make_sum_query(capacity, p);
  if (mech == "usum") return make_unit_sum_query(capacity, p);
  throw std::runtime_error("unknown mechanism '" + mech + "' (count, sum, usum)");
}

std::string seq_str(const Plts& plts, const ActionSeq& seq) {
  std::string out;
  for (ActionRef a : seq) {
    if (!out.empty()) out += " ";
    out += plts.actions[a].name;
  }
  return out.empty() ? "-" : out;
}

std::string subdist_str(const Plts& plts, const SubDist& nu) {
  std::string out;
  for (const auto& [s, mass] : nu.entries) {
    if (!out.empty()) out += " ";
    out += plts.state_name(s) + ":" + rat_str(mass);
  }
  if (nu.bottom > 0) {
    if (!out.empty()) out += " ";
    out += "_bot_:" + rat_str(nu.bottom);
  }
  return out.empty() ? "-" : out;
}

void print_unwind_failure(const Plts& plts, const UnwindFailure& failure) {
  std::cout << "failure " << unwind_failure_name(failure.kind) << "\n";
  if (failure.kind == UnwindFailureKind::kWrongLevelCount) {
    std::cout << "levels " << failure.level << "\n";
    return;
  }
  std::cout << "level " << failure.level << "\n";
  std::cout << "pair " << plts.state_name(failure.pair.first) << " "
            << plts.state_name(failure.pair.second) << "\n";
  if (failure.action >= 0) std::cout << "action " << plts.actions[failure.action].name << "\n";
  if (failure.nu1) std::cout << "nu1 " << subdist_str(plts, *failure.nu1) << "\n";
  if (failure.nu2) std::cout << "nu2 " << subdist_str(plts, *failure.nu2) << "\n";
}

int print_cover_report(const Plts& plts, const CoverReport& report) {
  if (report.ok) {
    std::cout << "ok true\n";
    return kPass;
  }
  const CoverFailure& failure = *report.failure;
  std::cout << "ok false\n";
  std::cout << "cover-failure " << cover_failure_name(failure.kind) << "\n";
  if (failure.state != kBottom) std::cout << "state " << plts.state_name(failure.state) << "\n";
  if (failure.action >= 0) std::cout << "action " << plts.actions[failure.action].name << "\n";
  if (failure.kind == CoverFailureKind::kSupportNotRelated) {
    std::cout << "successor " << plts.state_name(failure.successor) << "\n";
  }
  if (failure.inner) print_unwind_failure(plts, *failure.inner);
  return kFail;
}

int run_validate(const std::string& path) {
  const Automaton aut = read_automaton(path);
  std::cout << "states " << aut.plts.states.size() << "\n";
  std::cout << "actions " << aut.plts.actions.size() << "\n";
  const ValidationReport report = validate(aut.plts);
  for (const AxiomViolation& violation : report.violations) {
    std::cout << "violation " << axiom_name(violation.axiom) << ": " << violation.detail << "\n";
  }
  std::cout << "ok " << (report.ok() ? "true" : "false") << "\n";
  return report.ok() ? kPass : kFail;
}

int run_closure(const std::string& path, const std::string& state, const std::string& action) {
  const Automaton aut = read_automaton(path);
  const StateRef s = aut.plts.state_index(state);
  if (s < 0) throw std::runtime_error("unknown state '" + state + "'");
  SubDist nu;
  if (action.empty()) {
    Dist start;
    start.entries[s] = 1;
    nu = hidden_closure(aut.plts, start);
  } else {
    const ActionRef a = aut.plts.action_index(action);
    if (a < 0) throw std::runtime_error("unknown action '" + action + "'");
    const auto stepped = step_closure(aut.plts, s, a);
    if (!stepped) {
      std::cout << "enabled false\n";
      return kFail;
    }
    nu = *stepped;
  }
  save_subdist(std::cout, aut.plts, nu);
  return kPass;
}

int run_check_lift(const std::string& path, const std::string& rel_path,
                   const std::string& nu1_path, const std::string& nu2_path,
                   const std::string& rho_text) {
  const Automaton aut = read_automaton(path);
  std::ifstream rel_in = open_file(rel_path);
  const Relation relation = load_relation(rel_in, aut.plts);
  std::ifstream nu1_in = open_file(nu1_path);
  const SubDist nu1 = load_subdist(nu1_in, aut.plts);
  std::ifstream nu2_in = open_file(nu2_path);
  const SubDist nu2 = load_subdist(nu2_in, aut.plts);
  const bool ok = in_lifted_relation(relation, RatioBound(parse_rat(rho_text)), nu1, nu2);
  std::cout << "lifted " << (ok ? "true" : "false") << "\n";
  return ok ? kPass : kFail;
}

int run_check_unwind(const std::string& path, const std::string& family_path, int budget) {
  const Automaton aut = read_automaton(path);
  std::ifstream family_in = open_file(family_path);
  const RelationFamily family = load_family(family_in, aut.plts);
  if (budget < 0) budget = static_cast<int>(family.levels.size()) - 1;
  std::cout << "step " << rat_str(family.step.value) << "\n";
  std::cout << "budget " << budget << "\n";
  const UnwindReport report = is_unwind_fam(aut.plts, family, budget);
  if (!report.ok) print_unwind_failure(aut.plts, *report.failure);
  std::cout << "ok " << (report.ok ? "true" : "false") << "\n";
  return report.ok ? kPass : kFail;
}

int run_check_covered(const std::string& path, const std::string& covering_path) {
  const Automaton aut = read_automaton(path);
  std::ifstream covering_in = open_file(covering_path);
  const CoveringFile covering = load_covering(covering_in, aut.plts);
  std::cout << "families " << covering.families.size() << "\n";
  std::cout << "step " << rat_str(covering.step) << "\n";
  std::cout << "claimed " << rat_str(rat_pow(covering.step, covering.budget)) << "\n";
  const CoverReport report =
      is_all_covered(aut, covering.families, RatioBound(covering.step), covering.budget);
  return print_cover_report(aut.plts, report);
}

int run_check_dni(const std::string& path, const std::string& rho_text, int max_input_len,
                  int max_obs_len, long eval_cap) {
  const Automaton aut = read_automaton(path);
  DniOptions options{RatioBound(parse_rat(rho_text)), max_input_len, max_obs_len,
                     eval_cap > 0 ? eval_cap : default_eval_cap()};
  const DniReport report = dni_check_bruteforce(aut, options);
  std::cout << "evaluated " << report.evaluated << "\n";
  std::cout << "max-ratio " << (report.ratio_infinite ? "infinite" : rat_str(report.max_ratio))
            << "\n";
  if (report.witness) {
    const DniWitness& w = *report.witness;
    std::cout << "witness-inputs-a " << seq_str(aut.plts, w.inputs1) << "\n";
    std::cout << "witness-inputs-b " << seq_str(aut.plts, w.inputs2) << "\n";
    std::cout << "witness-observation " << seq_str(aut.plts, w.obs) << "\n";
    std::cout << "witness-prob-a " << rat_str(w.prob1) << "\n";
    std::cout << "witness-prob-b " << rat_str(w.prob2) << "\n";
  }
  std::cout << "ok " << (report.pass ? "true" : "false") << "\n";
  return report.pass ? kPass : kFail;
}

int run_check_mech(long bound, const std::string& p_text, long sensitivity,
                   const std::string& rho_text) {
  const Rat p = parse_rat(p_text);
  const TgDpReport report = rho_text.empty()
                                ? tg_dp_check(bound, p, sensitivity)
                                : tg_dp_check(bound, p, sensitivity, RatioBound(parse_rat(rho_text)));
  std::cout << "worst-ratio " << (report.infinite ? "infinite" : rat_str(report.worst_ratio))
            << "\n";
  if (!report.ok) {
    std::cout << "witness-centers " << report.center1 << " " << report.center2 << "\n";
    std::cout << "witness-outcome " << report.outcome << "\n";
  }
  std::cout << "ok " << (report.ok ? "true" : "false") << "\n";
  return report.ok ? kPass : kFail;
}

int run_check_tail(long bound, long center, const std::string& p_text, long b) {
  const TgTailReport report = tg_tail_check(TgParams{bound, center, parse_rat(p_text)}, b);
  std::cout << "tail-mass " << rat_str(report.tail_mass) << "\n";
  std::cout << "tail-bound " << rat_str(report.bound) << "\n";
  std::cout << "ok " << (report.ok ? "true" : "false") << "\n";
  return report.ok ? kPass : kFail;
}

int run_check_fn_dp(const std::string& mech, long capacity, const std::string& p_text,
                    const std::vector<std::string>& pair_texts, const std::string& rho_text) {
  const Rat p = parse_rat(p_text);
  const SanitizedQuery query = pick_query(mech, capacity, p);
  std::vector<std::pair<Multiset, Multiset>> pairs;
  for (const std::string& text : pair_texts) {
    const auto bar = text.find('|');
    if (bar == std::string::npos) throw std::runtime_error("pair needs 'db1|db2'");
    Multiset a = parse_long_list(text.substr(0, bar));
    Multiset b = parse_long_list(text.substr(bar + 1));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    pairs.emplace_back(std::move(a), std::move(b));
  }
  const RatioBound rho(rho_text.empty() ? rat_pow(p, -query.sensitivity)
                                        : parse_rat(rho_text));
  const FnDpReport report = check_function_dp(query, pairs, rho);
  std::cout << "rho " << rat_str(rho.value) << "\n";
  std::cout << "worst-ratio " << (report.infinite ? "infinite" : rat_str(report.worst_ratio))
            << "\n";
  std::cout << "ok " << (report.ok ? "true" : "false") << "\n";
  return report.ok ? kPass : kFail;
}

int run_sample_mech(long bound, long center, const std::string& p_text, long shift,
                    unsigned long seed, long count) {
  const TgParams par{bound, center, parse_rat(p_text)};
  check_tg_params(par);
  CoinSource coins(seed);
  std::map<long, long> histogram;
  for (long i = 0; i < count; ++i) histogram[center + shift + tg_sample(par, coins)]++;
  for (long n = -bound - center; n <= bound - center; ++n) {
    std::cout << "expected " << center + shift + n << " " << rat_str(tg_pmf(par, n)) << "\n";
  }
  for (const auto& [outcome, hits] : histogram) {
    std::cout << "outcome " << outcome << " " << hits << "\n";
  }
  std::cout << "flips " << coins.flips() << "\n";
  return kPass;
}

WindowSystem window_from_flags(int t, int v, const std::string& domain_text,
                               const std::string& mech, const std::string& p_text) {
  WindowParams params;
  params.slots = t;
  params.slot_cap = v;
  params.domain = parse_long_list(domain_text);
  params.queries.push_back(pick_query(mech, static_cast<long>(t) * v, parse_rat(p_text)));
  return build_window_system(params);
}

int run_gen_example(int t, int v, const std::string& domain_text, const std::string& mech,
                    const std::string& p_text, bool inlined, const std::string& out_path) {
  const WindowSystem system = window_from_flags(t, v, domain_text, mech, p_text);
  const Automaton aut = inlined ? build_window_inlined(system) : system.aut;
  if (out_path.empty()) {
    save_automaton(std::cout, aut);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    save_automaton(out, aut);
  }
  return kPass;
}

int run_verify_example(int t, int v, const std::string& domain_text, const std::string& mech,
                       const std::string& p_text) {
  const WindowSystem system = window_from_flags(t, v, domain_text, mech, p_text);
  std::cout << "states " << system.aut.plts.states.size() << "\n";
  const WindowVerifyReport report = verify_window_system(system);
  std::cout << "step " << rat_str(report.step) << "\n";
  std::cout << "claimed " << rat_str(report.claimed) << "\n";
  return print_cover_report(system.aut.plts, report.cover);
}

int run_compose(const std::string& host_path, const std::string& state, const std::string& action,
                const std::string& sub_path, const std::string& link_text, const std::string& tag,
                const std::string& out_path) {
  const Automaton host = read_automaton(host_path);
  ReplacementSpec spec;
  spec.host_state = host.plts.state_index(state);
  if (spec.host_state < 0) throw std::runtime_error("unknown state '" + state + "'");
  spec.host_action = host.plts.action_index(action);
  if (spec.host_action < 0) throw std::runtime_error("unknown action '" + action + "'");
  spec.subroutine = read_automaton(sub_path);
  spec.tag = tag;
  std::string item;
  std::istringstream split(link_text);
  while (std::getline(split, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("link needs 'host=terminal' entries");
    const StateRef host_target = host.plts.state_index(item.substr(0, eq));
    const StateRef terminal = spec.subroutine.plts.state_index(item.substr(eq + 1));
    if (host_target < 0 || terminal < 0) throw std::runtime_error("unknown state in link entry");
    spec.link[host_target] = terminal;
  }

  for (const std::string& violation : replacement_violations(host.plts, spec)) {
    std::cout << "violation " << violation << "\n";
  }
  const bool fits = implements_check(host.plts, spec);
  std::cout << "implements " << (fits ? "true" : "false") << "\n";
  if (!fits) return kFail;
  const Automaton composed = replace_transition(host, spec);
  if (out_path.empty()) {
    save_automaton(std::cout, composed);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    save_automaton(out, composed);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checker for differential noninterference of probabilistic transition systems"};
  app.require_subcommand(1);
  int rc = kPass;

  std::string aut_path, state, action, rel_path, nu1_path, nu2_path, family_path, covering_path;
  std::string rho_text, p_text = "1/2", mech = "count", domain_text = "0", link_text, tag;
  std::string out_path;
  std::vector<std::string> pair_texts;
  int budget = -1, max_input_len = 3, max_obs_len = 3, t = 1, v = 1;
  long eval_cap = 0, bound = 1, center = 0, sensitivity = 1, shift = 0, tail_b = 1, count = 1000;
  unsigned long seed = 1;
  bool inlined = false;

  CLI::App* validate = app.add_subcommand("validate", "check the model axioms");
  validate->add_option("automaton", aut_path)->required();
  validate->callback([&] { rc = run_validate(aut_path); });

  CLI::App* closure = app.add_subcommand("closure", "hidden closure of a state or one step");
  closure->add_option("automaton", aut_path)->required();
  closure->add_option("--state", state)->required();
  closure->add_option("--action", action);
  closure->callback([&] { rc = run_closure(aut_path, state, action); });

  CLI::App* lift = app.add_subcommand("check-lift", "approximate lifting between two subdists");
  lift->add_option("automaton", aut_path)->required();
  lift->add_option("--rel", rel_path)->required();
  lift->add_option("--nu1", nu1_path)->required();
  lift->add_option("--nu2", nu2_path)->required();
  lift->add_option("--rho", rho_text)->required();
  lift->callback([&] { rc = run_check_lift(aut_path, rel_path, nu1_path, nu2_path, rho_text); });

  CLI::App* unwind = app.add_subcommand("check-unwind", "stepwise conditions of one family");
  unwind->add_option("automaton", aut_path)->required();
  unwind->add_option("--family", family_path)->required();
  unwind->add_option("--budget", budget);
  unwind->callback([&] { rc = run_check_unwind(aut_path, family_path, budget); });

  CLI::App* covered = app.add_subcommand("check-covered", "covering check over supplied families");
  covered->add_option("automaton", aut_path)->required();
  covered->add_option("--covering", covering_path)->required();
  covered->callback([&] { rc = run_check_covered(aut_path, covering_path); });

  CLI::App* dni = app.add_subcommand("check-dni", "brute-force differential noninterference");
  dni->add_option("automaton", aut_path)->required();
  dni->add_option("--rho", rho_text)->required();
  dni->add_option("--max-input-len", max_input_len);
  dni->add_option("--max-obs-len", max_obs_len);
  dni->add_option("--eval-cap", eval_cap);
  dni->callback([&] { rc = run_check_dni(aut_path, rho_text, max_input_len, max_obs_len, eval_cap); });

  CLI::App* mech_cmd = app.add_subcommand("check-mech", "noise ratios between nearby centers");
  mech_cmd->add_option("--m", bound)->required();
  mech_cmd->add_option("--p", p_text)->required();
  mech_cmd->add_option("--sens", sensitivity);
  mech_cmd->add_option("--rho", rho_text);
  mech_cmd->callback([&] { rc = run_check_mech(bound, p_text, sensitivity, rho_text); });

  CLI::App* tail = app.add_subcommand("check-tail", "noise tail mass against its bound");
  tail->add_option("--m", bound)->required();
  tail->add_option("--center", center);
  tail->add_option("--p", p_text)->required();
  tail->add_option("--b", tail_b)->required();
  tail->callback([&] { rc = run_check_tail(bound, center, p_text, tail_b); });

  CLI::App* fn_dp = app.add_subcommand("check-fn-dp", "response ratios over database pairs");
  fn_dp->add_option("--mech", mech);
  fn_dp->add_option("--capacity", bound)->required();
  fn_dp->add_option("--p", p_text)->required();
  fn_dp->add_option("--pair", pair_texts)->required();
  fn_dp->add_option("--rho", rho_text);
  fn_dp->callback([&] { rc = run_check_fn_dp(mech, bound, p_text, pair_texts, rho_text); });

  CLI::App* sample = app.add_subcommand("sample-mech", "draw noise through the coin-flip walk");
  sample->add_option("--m", bound)->required();
  sample->add_option("--center", center);
  sample->add_option("--p", p_text)->required();
  sample->add_option("--shift", shift);
  sample->add_option("--seed", seed);
  sample->add_option("--count", count);
  sample->callback([&] { rc = run_sample_mech(bound, center, p_text, shift, seed, count); });

  CLI::App* gen = app.add_subcommand("gen-example", "emit a sliding-window release system");
  gen->add_option("--t", t);
  gen->add_option("--v", v);
  gen->add_option("--domain", domain_text);
  gen->add_option("--mech", mech);
  gen->add_option("--p", p_text);
  gen->add_flag("--inlined", inlined, "splice the samplers in place of one-shot releases");
  gen->add_option("--out", out_path);
  gen->callback([&] { rc = run_gen_example(t, v, domain_text, mech, p_text, inlined, out_path); });

  CLI::App* verify = app.add_subcommand("verify-example", "build and certify a window system");
  verify->add_option("--t", t);
  verify->add_option("--v", v);
  verify->add_option("--domain", domain_text);
  verify->add_option("--mech", mech);
  verify->add_option("--p", p_text);
  verify->callback([&] { rc = run_verify_example(t, v, domain_text, mech, p_text); });

  CLI::App* compose = app.add_subcommand("compose", "splice a subroutine over a hidden step");
  compose->add_option("automaton", aut_path)->required();
  compose->add_option("--state", state)->required();
  compose->add_option("--action", action)->required();
  compose->add_option("--sub", nu1_path)->required();
  compose->add_option("--link", link_text)->required();
  compose->add_option("--tag", tag)->required();
  compose->add_option("--out", out_path);
  compose->callback(
      [&] { rc = run_compose(aut_path, state, action, nu1_path, link_text, tag, out_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return rc;
}
