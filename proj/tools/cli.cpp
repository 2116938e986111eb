// Copyright 2026 The sspg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sspg/diag.hpp"
#include "sspg/generator.hpp"
#include "sspg/io.hpp"
#include "sspg/matgame.hpp"
#include "sspg/model.hpp"
#include "sspg/operators.hpp"
#include "sspg/qlearn.hpp"
#include "sspg/solve.hpp"
#include "sspg/structure.hpp"

namespace sspg::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  std::string out;
  std::string csv;
  std::string config;
  std::string ref;
  std::string init;
  std::string mu;
  std::string nu;
  std::string matrix;
  std::string stepsize = "1,1,0.75";
  std::string scheduler = "all";
  std::string delay_schedule;
  std::size_t delay = 0;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::size_t max_iters = 100000;
  std::size_t threads = 1;
  std::size_t metrics_every = 1;
  bool strict = false;
  bool upper = false;

  std::size_t n_states = 3;
  std::size_t max_controls = 2;
  double floor = 0.1;
  double cost_lo = -1.0;
  double cost_hi = 1.0;
  std::string family = "contraction";
};

// Which flags the user actually passed to the chosen subcommand.
struct Given {
  const CLI::App* sub = nullptr;

  bool operator()(const char* name) const {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  }
};

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

void emit_csv(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string read_input(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what);
  return read_text_file(path);
}

GameModel model_from(const Options& o) { return load_model(read_input(o.model, "--model")); }

std::string fixed6(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string value_line(const ValueVector& J) {
  std::string s = "J=(";
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (i) s += ", ";
    s += fixed6(J[i]);
  }
  return s + ")\n";
}

ojson parse_ojson(const std::string& text) { return ojson::parse(text); }

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string trace_csv(const SolveTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

std::optional<StationaryPolicy> policy_from(const std::string& path, const GameModel& m,
                                            Player expected, const char* flag) {
  if (path.empty()) return std::nullopt;
  StationaryPolicy p = load_policy(read_input(path, flag), m);
  if (p.player != expected) {
    throw UsageError(std::string(flag) + " expects a policy of player " +
                     (expected == Player::I ? "I" : "II"));
  }
  return p;
}

SolveOptions solve_options(const Options& o) {
  SolveOptions s;
  s.tol = o.tol;
  s.max_iter = o.max_iters;
  return s;
}

int status_code(SolveStatus s) { return s == SolveStatus::Converged ? kOk : kNotConverged; }

int cmd_validate(const Options& o, std::ostream& out) {
  const GameModel m = model_from(o);
  ojson j;
  j["valid"] = true;
  j["states"] = m.num_states();
  j["triplets"] = m.num_triplets();
  emit(o, dump(j), out);
  return kOk;
}

int cmd_matgame(const Options& o, std::ostream& out) {
  const MatrixGame g = load_matrix_game(read_input(o.matrix, "--matrix"));
  emit(o, matrix_game_solution_json(solve_matrix_game(g)), out);
  return kOk;
}

int cmd_solve_vi(const Options& o, std::ostream& out) {
  const GameModel m = model_from(o);
  const ValueResult r = value_iteration(m, ValueVector(m.num_states(), 0.0), solve_options(o));
  out << value_line(r.J);
  if (!o.out.empty()) {
    ojson j;
    j["status"] = to_string(r.trace.status);
    j["iterations"] = r.trace.rows.size();
    j["residual"] = r.trace.final_residual();
    j["J"] = parse_ojson(value_vector_json(r.J, m));
    emit(o, dump(j), out);
  }
  emit_csv(o.csv, trace_csv(r.trace));
  return status_code(r.trace.status);
}

int cmd_solve_qvi(const Options& o, std::ostream& out) {
  const GameModel m = model_from(o);
  const QValueResult r = q_value_iteration(m, QTable(m), solve_options(o));
  ojson j = parse_ojson(save_qtable(r.Q, m));
  j["status"] = to_string(r.trace.status);
  j["iterations"] = r.trace.rows.size();
  j["residual"] = r.trace.final_residual();
  const PolicyPair greedy = greedy_policies(m, r.Q);
  j["mu"] = parse_ojson(save_policy(greedy.mu, m));
  j["nu"] = parse_ojson(save_policy(greedy.nu, m));
  if (check_ssp_game_assumption(m).overall() != Verdict::Holds) {
    j["warning"] = "assumption not established; mu and nu are stage-game optimal only";
  }
  emit(o, dump(j), out);
  emit_csv(o.csv, trace_csv(r.trace));
  return status_code(r.trace.status);
}

// First pure policy of player p that terminates against every opponent.
std::optional<StationaryPolicy> find_proper_start(const GameModel& m, Player p) {
  const auto count = pure_policy_count(m, p);
  if (!count) return std::nullopt;
  for (std::size_t k = 0; k < *count; ++k) {
    StationaryPolicy pol = nth_pure_policy(m, p, k);
    const std::vector<bool> ok = forall_termination(m, pol);
    if (std::all_of(ok.begin(), ok.end(), [](bool b) { return b; })) return pol;
  }
  return std::nullopt;
}

int cmd_solve_pi(const Options& o, std::ostream& out, std::ostream& err) {
  const GameModel m = model_from(o);
  if (!o.mu.empty() && !o.nu.empty()) throw UsageError("give at most one of --mu and --nu");
  std::optional<StationaryPolicy> start = policy_from(o.mu, m, Player::I, "--mu");
  if (!start) start = policy_from(o.nu, m, Player::II, "--nu");
  if (!start) start = find_proper_start(m, Player::I);
  if (!start) throw UsageError("no proper pure policy of player I found; pass --mu or --nu");

  PolicyIterationOptions opts;
  opts.tol = o.tol;
  opts.max_outer = std::min<std::size_t>(o.max_iters, 100000);
  const PolicyIterationResult r = policy_iteration(m, *start, opts);
  if (r.warning) err << "warning: " << *r.warning << '\n';
  out << value_line(r.x);
  if (!o.out.empty()) {
    ojson j;
    j["status"] = to_string(r.trace.status);
    j["outer_iterations"] = r.policies.size();
    j["residual"] = r.trace.final_residual();
    j["J"] = parse_ojson(value_vector_json(r.x, m));
    j["policy"] = parse_ojson(save_policy(r.policies.back(), m));
    if (r.warning) j["warning"] = *r.warning;
    emit(o, dump(j), out);
  }
  emit_csv(o.csv, trace_csv(r.trace));
  return status_code(r.trace.status);
}

int cmd_evaluate_pair(const Options& o, std::ostream& out) {
  const GameModel m = model_from(o);
  const auto mu = policy_from(o.mu, m, Player::I, "--mu");
  const auto nu = policy_from(o.nu, m, Player::II, "--nu");
  if (!mu || !nu) throw UsageError("evaluate-pair needs --mu and --nu");
  emit(o, pair_evaluation_json(evaluate_pair(m, *mu, *nu), m), out);
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  const GameModel m = model_from(o);
  const AssumptionReport r = check_ssp_game_assumption(m);
  ojson j = parse_ojson(assumption_report_json(r, m));
  bool violated = r.overall() == Verdict::Violated;
  if (auto mu = policy_from(o.mu, m, Player::I, "--mu")) {
    const ProperCheck c = is_essentially_proper(m, *mu);
    j["mu_essentially_proper"] = parse_ojson(proper_check_json(c, m));
    violated = violated || c.verdict == Verdict::Violated;
  }
  if (auto nu = policy_from(o.nu, m, Player::II, "--nu")) {
    const ProperCheck c = is_essentially_proper(m, *nu);
    j["nu_essentially_proper"] = parse_ojson(proper_check_json(c, m));
    violated = violated || c.verdict == Verdict::Violated;
  }
  emit(o, dump(j), out);
  for (const PairWitness& w : r.witnesses) err << "prolonging pair " << w.description << '\n';
  return o.strict && violated ? kAssumptionViolated : kOk;
}

StationaryPolicy nu_or_uniform(const Options& o, const GameModel& m) {
  auto nu = policy_from(o.nu, m, Player::II, "--nu");
  return nu ? *nu : uniform_policy(m, Player::II);
}

int cmd_sspa_build(const Options& o, std::ostream& out) {
  const GameModel m = model_from(o);
  const SspA s = build_sspa(m, nu_or_uniform(o, m));
  const SingleCheck c = check_single_player_ssp(s);
  ojson j;
  j["sspa"] = parse_ojson(sspa_json(s));
  j["check"] = parse_ojson(single_check_json(c, s));
  emit(o, dump(j), out);
  return o.strict && c.verdict == Verdict::Violated ? kAssumptionViolated : kOk;
}

int cmd_certificate(const Options& o, std::ostream& out) {
  const GameModel m = model_from(o);
  const ContractionCertificate c = build_contraction_certificate(m, nu_or_uniform(o, m));
  emit(o, certificate_json(c, m), out);
  return kOk;
}

QLearnConfig qlearn_config(const Options& o, const Given& g) {
  QLearnConfig cfg;
  if (!o.config.empty()) cfg = load_qlearn_config(read_input(o.config, "--config"));
  if (g("--seed")) cfg.seed = o.seed;
  cfg.seed = seed_from_environment(cfg.seed);
  if (g("--max-iters") || o.config.empty()) cfg.max_iters = o.max_iters;
  if (g("--stepsize") || o.config.empty()) {
    try {
      cfg.stepsize = parse_stepsize(o.stepsize);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (g("--scheduler")) {
    try {
      cfg.scheduler = parse_scheduler(o.scheduler);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (g("--delay") && g("--delay-schedule")) {
    throw UsageError("give at most one of --delay and --delay-schedule");
  }
  if (g("--delay")) {
    cfg.delay = DelayModel{};
    if (o.delay > 0) {
      cfg.delay.kind = DelayKind::UniformBounded;
      cfg.delay.bound = o.delay;
    }
  }
  if (g("--delay-schedule")) {
    std::istringstream is(read_input(o.delay_schedule, "--delay-schedule"));
    try {
      cfg.delay = parse_delay_schedule(is);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (g("--metrics-every")) cfg.metrics_every = std::max<std::size_t>(1, o.metrics_every);
  return cfg;
}

std::string qlearn_csv(const GameModel& m, const QLearnRun& run) {
  std::ostringstream os;
  write_qlearn_csv(os, m, run);
  return os.str();
}

int cmd_qlearn(const Options& o, const Given& g, std::ostream& out) {
  const GameModel m = model_from(o);
  QLearnConfig cfg = qlearn_config(o, g);
  if (!o.ref.empty()) cfg.reference = load_qtable(read_input(o.ref, "--ref"), m);
  const QTable Q0 = o.init.empty() ? QTable(m) : load_qtable(read_input(o.init, "--init"), m);
  if (o.threads == 0) throw UsageError("--threads must be at least 1");
  const QLearnResult r =
      o.threads > 1 ? run_qlearning_parallel(m, cfg, Q0, o.threads) : run_qlearning(m, cfg, Q0);

  ojson j = parse_ojson(save_qtable(r.Q, m));
  j["iterations"] = r.run.iterations;
  j["seed"] = cfg.seed;
  j["peak_abs_q"] = r.run.peak_abs_q;
  if (o.threads == 1) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.run.digest));
    j["digest"] = hex;
  }
  if (cfg.reference) j["sup_dist_to_ref"] = sup_distance(r.Q.values(), cfg.reference->values());
  emit(o, dump(j), out);
  emit_csv(o.csv, qlearn_csv(m, r.run));
  return kOk;
}

int cmd_couple(const Options& o, const Given& g, std::ostream& out) {
  if (o.threads != 1) {
    throw UsageError("coupling replays the deterministic engine; --threads must be 1");
  }
  const GameModel original = model_from(o);
  // The upper process is the lower process of the game seen by player II.
  const GameModel m = o.upper ? swap_players(original) : original;
  StationaryPolicy fixed;
  if (o.upper) {
    auto mu = policy_from(o.mu, original, Player::I, "--mu");
    fixed = swap_players(mu ? *mu : uniform_policy(original, Player::I));
  } else {
    fixed = nu_or_uniform(o, original);
  }

  QLearnConfig cfg = qlearn_config(o, g);
  cfg.record_full_history = true;
  const QTable Q0(m);
  const QLearnResult r = run_qlearning(m, cfg, Q0);
  const CouplingReport rep = run_coupled_lower_process(m, fixed, r.run, Q0);

  ojson j;
  j["process"] = o.upper ? "upper" : "lower";
  j["iterations"] = r.run.iterations;
  j["violations"] = rep.violation_count;
  double worst = 0.0;
  for (double x : rep.min_gap) worst = std::min(worst, x);
  // Gaps of the upper process are reported for −Q, so they are ≥ 0 as well.
  j["min_gap"] = worst;
  ojson first = ojson::array();
  for (const CouplingViolation& v : rep.violations) {
    ojson e;
    e["t"] = v.t;
    e["component"] = m.describe(m.triplet(v.component));
    e["gap"] = v.gap;
    first.push_back(std::move(e));
  }
  j["first_violations"] = std::move(first);
  emit(o, dump(j), out);
  if (!o.csv.empty()) {
    std::ostringstream os;
    write_coupling_csv(os, m, rep);
    emit_csv(o.csv, os.str());
  }
  return o.strict && rep.violation_count > 0 ? kAssumptionViolated : kOk;
}

int cmd_gen(const Options& o, const Given& g, std::ostream& out) {
  GeneratorConfig cfg;
  if (!o.config.empty()) {
    cfg = load_generator_config(read_input(o.config, "--config"));
  } else {
    cfg.n_states = o.n_states;
    cfg.max_controls = o.max_controls;
    cfg.termination_floor = o.floor;
    cfg.cost_lo = o.cost_lo;
    cfg.cost_hi = o.cost_hi;
    try {
      cfg.family = family_from_string(o.family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (g("--seed")) cfg.seed = o.seed;
  cfg.seed = seed_from_environment(cfg.seed);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(o, save_model(generate_model(cfg)), out);
  return kOk;
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Write the primary output here instead of stdout");
}

void add_model(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "Game model JSON")->required();
}

void add_solver(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Stopping tolerance on the sup-norm residual")
      ->capture_default_str();
  sub->add_option("--max-iters,--iters", o.max_iters, "Iteration cap")->capture_default_str();
  sub->add_option("--csv", o.csv, "Write the trace as CSV");
}

void add_threads(CLI::App* sub, Options& o) {
  sub->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
}

void add_qlearn(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Random seed (SSPG_SEED overrides)");
  sub->add_option("--stepsize", o.stepsize, "a,b,p for a/(b+m)^p")->capture_default_str();
  sub->add_option("--scheduler", o.scheduler, "all | uniform-random:K | round-robin:K");
  sub->add_option("--delay", o.delay, "Uniform delay bound D (0 for none)");
  sub->add_option("--delay-schedule", o.delay_schedule, "CSV of t,l,ltilde,offset");
  sub->add_option("--metrics-every", o.metrics_every, "Metrics sampling period");
  sub->add_option("--config", o.config, "JSON run configuration; flags override it");
}

}  // namespace

int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic shortest path games: solvers, Q-learning and diagnostics", "sspg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");
  Options o;

  auto* validate = app.add_subcommand("validate", "Parse and validate a model");
  add_model(validate, o);
  add_output(validate, o);

  auto* matgame = app.add_subcommand("matgame", "Solve a matrix game");
  matgame->add_option("--matrix", o.matrix, "Matrix JSON")->required();
  add_output(matgame, o);

  auto* vi = app.add_subcommand("solve-vi", "Value iteration on J from zero");
  add_model(vi, o);
  add_solver(vi, o);
  add_output(vi, o);

  auto* qvi = app.add_subcommand("solve-qvi", "Value iteration on Q-factors from zero");
  add_model(qvi, o);
  add_solver(qvi, o);
  add_output(qvi, o);

  auto* pi = app.add_subcommand("solve-pi", "Policy iteration from a start policy");
  add_model(pi, o);
  add_solver(pi, o);
  add_output(pi, o);
  pi->add_option("--mu", o.mu, "Start policy of player I");
  pi->add_option("--nu", o.nu, "Start policy of player II");

  auto* ev = app.add_subcommand("evaluate-pair", "Total cost of a stationary policy pair");
  add_model(ev, o);
  add_output(ev, o);
  ev->add_option("--mu", o.mu, "Policy of player I")->required();
  ev->add_option("--nu", o.nu, "Policy of player II")->required();

  auto* analyze = app.add_subcommand("analyze", "Check the model assumption");
  add_model(analyze, o);
  add_output(analyze, o);
  analyze->add_flag("--strict", o.strict, "Exit 4 on a violation");
  analyze->add_option("--mu", o.mu, "Also check this policy of player I");
  analyze->add_option("--nu", o.nu, "Also check this policy of player II");

  auto* sspa = app.add_subcommand("sspa-build", "Single-player problem under a fixed opponent");
  add_model(sspa, o);
  add_output(sspa, o);
  sspa->add_option("--nu", o.nu, "Policy of player II (default uniform)");
  sspa->add_flag("--strict", o.strict, "Exit 4 when the check fails");

  auto* cert = app.add_subcommand("certificate", "Weighted sup-norm contraction certificate");
  add_model(cert, o);
  add_output(cert, o);
  cert->add_option("--nu", o.nu, "Proper policy of player II (default uniform)");

  auto* ql = app.add_subcommand("qlearn", "Asynchronous minimax Q-learning");
  add_model(ql, o);
  add_output(ql, o);
  add_threads(ql, o);
  add_qlearn(ql, o);
  ql->add_option("--max-iters,--iters", o.max_iters, "Iterations");
  ql->add_option("--csv", o.csv, "Write the run trace as CSV");
  ql->add_option("--ref", o.ref, "Reference Q table for distances");
  ql->add_option("--init", o.init, "Initial Q table (default zero)");

  auto* couple = app.add_subcommand("couple", "Replay a run next to the coupled bound process");
  add_model(couple, o);
  add_output(couple, o);
  add_threads(couple, o);
  add_qlearn(couple, o);
  couple->add_option("--max-iters,--iters", o.max_iters, "Iterations");
  couple->add_option("--csv", o.csv, "Write per-component minimum gaps as CSV");
  couple->add_option("--nu", o.nu, "Fixed policy of player II (default uniform)");
  couple->add_option("--mu", o.mu, "Fixed policy of player I for --upper (default uniform)");
  couple->add_flag("--upper", o.upper, "Run the upper process instead of the lower one");
  couple->add_flag("--strict", o.strict, "Exit 4 on any violation");

  auto* gen = app.add_subcommand("gen", "Generate a random model");
  add_output(gen, o);
  gen->add_option("--seed", o.seed, "Random seed (SSPG_SEED overrides)");
  gen->add_option("--n-states", o.n_states, "Number of states")->capture_default_str();
  gen->add_option("--max-controls", o.max_controls, "Controls per player, at most")
      ->capture_default_str();
  gen->add_option("--floor", o.floor, "Minimum termination probability per triplet")
      ->capture_default_str();
  gen->add_option("--cost-lo", o.cost_lo, "Lower end of the cost range")->capture_default_str();
  gen->add_option("--cost-hi", o.cost_hi, "Upper end of the cost range")->capture_default_str();
  gen->add_option("--family", o.family, "contraction | loopy | sequential")
      ->capture_default_str();
  gen->add_option("--config", o.config, "Generator configuration JSON");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  const Given g{app.get_subcommands().front()};
  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (matgame->parsed()) return cmd_matgame(o, out);
    if (vi->parsed()) return cmd_solve_vi(o, out);
    if (qvi->parsed()) return cmd_solve_qvi(o, out);
    if (pi->parsed()) return cmd_solve_pi(o, out, err);
    if (ev->parsed()) return cmd_evaluate_pair(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out, err);
    if (sspa->parsed()) return cmd_sspa_build(o, out);
    if (cert->parsed()) return cmd_certificate(o, out);
    if (ql->parsed()) return cmd_qlearn(o, g, out);
    if (couple->parsed()) return cmd_couple(o, g, out);
    if (gen->parsed()) return cmd_gen(o, g, out);
  } catch (const UsageError& e) {
    err << "sspg: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "sspg: invalid model\n" << e.report().summary() << '\n';
    return kInvalidInput;
  } catch (const ParseError& e) {
    err << "sspg: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const CertificateError& e) {
    err << "sspg: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DivergenceError& e) {
    err << "sspg: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "sspg: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kUsage;
}

}  // namespace sspg::cli
