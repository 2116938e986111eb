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

#include "sspg/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sspg {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix and its
    // own position text; the position is reported as line and column.
    if (auto p = msg.find("] "); p != std::string::npos) msg = msg.substr(p + 2);
    if (msg.rfind("parse error at ", 0) == 0) {
      if (auto p = msg.find(": "); p != std::string::npos) msg = "parse error: " + msg.substr(p + 2);
    }
    throw ParseError(line_column(text, e.byte == 0 ? 0 : e.byte - 1), msg);
  }
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path, "expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ParseError(path, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  return v;
}

std::string idx_path(const std::string& base, std::size_t k) {
  return base + "[" + std::to_string(k) + "]";
}

json number_or_infinity(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "+inf" : "-inf";
}

StateId state_by_name(const GameModel& m, const std::string& name, const std::string& path) {
  auto s = m.find_state(name);
  if (!s) throw ParseError(path, "unknown state \"" + name + "\"");
  return *s;
}

std::size_t control_by_label(const GameModel& m, Player p, StateId i, const std::string& label,
                             const std::string& path) {
  auto c = m.find_control(p, i, label);
  if (!c) {
    throw ParseError(path, "unknown control \"" + label + "\" at state " + m.state_name(i));
  }
  return *c;
}

ojson rule_json(const DecisionRule& r, const std::vector<std::string>& labels) {
  if (auto k = r.pure_index()) return labels[*k];
  ojson o = ojson::object();
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (r[c] != 0.0) o[labels[c]] = r[c];
  }
  return o;
}

ojson policy_ojson(const StationaryPolicy& p, const GameModel& m) {
  ojson o;
  o["player"] = p.player == Player::I ? "I" : "II";
  ojson rules = ojson::object();
  for (StateId i = 0; i < m.num_states(); ++i) {
    rules[m.state_name(i)] = rule_json(p[i], m.controls(p.player, i));
  }
  o["rules"] = std::move(rules);
  return o;
}

ojson classes_ojson(const std::vector<RecurrentClass>& classes, const GameModel& m) {
  ojson arr = ojson::array();
  for (const RecurrentClass& rc : classes) {
    ojson c;
    ojson nodes = ojson::array();
    for (NodeId j : rc.nodes) nodes.push_back(m.node_name(j));
    c["states"] = std::move(nodes);
    c["gain"] = rc.gain;
    arr.push_back(std::move(c));
  }
  return arr;
}

ojson values_ojson(const ValueVector& x, const GameModel& m) {
  ojson o = ojson::object();
  for (StateId i = 0; i < m.num_states(); ++i) o[m.state_name(i)] = number_or_infinity(x[i]);
  return o;
}

ojson pair_ojson(const PairEvaluation& ev, const GameModel& m) {
  ojson o;
  o["values"] = values_ojson(ev.values, m);
  o["prolonging"] = ev.prolonging;
  o["zero_gain_prolonging"] = ev.zero_gain_prolonging;
  ojson reach = ojson::object();
  for (StateId i = 0; i < m.num_states(); ++i) {
    reach[m.state_name(i)] = static_cast<bool>(ev.reaches_termination[i]);
  }
  o["reaches_termination"] = std::move(reach);
  o["recurrent_classes"] = classes_ojson(ev.classes, m);
  return o;
}

ojson clause_ojson(const ClauseResult& c, const GameModel& m) {
  ojson o;
  o["verdict"] = to_string(c.verdict);
  o["note"] = c.note;
  if (c.witness) o["witness"] = policy_ojson(*c.witness, m);
  return o;
}

}  // namespace

ParseError::ParseError(std::string where, const std::string& message)
    : std::runtime_error(where.empty() ? message : where + ": " + message),
      where_(std::move(where)) {}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GameModel load_model(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("", "model document must be a JSON object");

  GameModel m;
  const json& states = as_array(field(doc, "states", ""), "states");
  const json& c1 = field(doc, "controls1", "");
  const json& c2 = field(doc, "controls2", "");
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string name = as_string(states[k], idx_path("states", k));
    if (name == "0") throw ParseError(idx_path("states", k), "\"0\" is reserved for termination");
    auto labels = [&](const json& table, const char* key) {
      const std::string path = std::string(key) + "." + name;
      if (!table.is_object()) throw ParseError(key, "expected an object");
      auto it = table.find(name);
      if (it == table.end()) throw ParseError(path, "missing control list");
      const json& arr = as_array(*it, path);
      std::vector<std::string> out;
      for (std::size_t c = 0; c < arr.size(); ++c) out.push_back(as_string(arr[c], idx_path(path, c)));
      return out;
    };
    m.add_state(name, labels(c1, "controls1"), labels(c2, "controls2"));
  }
  for (StateId i = 0; i < m.num_states(); ++i) {
    for (StateId k = 0; k < i; ++k) {
      if (m.state_name(k) == m.state_name(i)) {
        throw ParseError("states", "duplicate state \"" + m.state_name(i) + "\"");
      }
    }
  }

  const json& rows = as_array(field(doc, "transitions", ""), "transitions");
  std::vector<bool> seen(m.num_triplets(), false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string path = idx_path("transitions", r);
    const json& row = rows[r];
    const StateId i = state_by_name(m, as_string(field(row, "i", path), path + ".i"), path + ".i");
    const std::size_t u = control_by_label(m, Player::I, i,
                                           as_string(field(row, "u", path), path + ".u"), path + ".u");
    const std::size_t v = control_by_label(m, Player::II, i,
                                           as_string(field(row, "v", path), path + ".v"), path + ".v");
    const Triplet t{i, u, v};
    const std::size_t idx = m.triplet_index(t);
    if (seen[idx]) throw ParseError(path, "duplicate transition row for " + m.describe(t));
    seen[idx] = true;

    const json& next = as_array(field(row, "next", path), path + ".next");
    std::vector<Outcome> outs;
    double mass = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      const std::string np = idx_path(path + ".next", k);
      const std::string j = as_string(field(next[k], "j", np), np + ".j");
      NodeId node = kTermination;
      if (j != "0") node = node_of(state_by_name(m, j, np + ".j"));
      const double p = as_number(field(next[k], "p", np), np + ".p");
      const double cost = as_number(field(next[k], "cost", np), np + ".cost");
      outs.push_back(Outcome{node, p, cost});
      mass += p;
    }
    std::stable_sort(outs.begin(), outs.end(),
                     [](const Outcome& a, const Outcome& b) { return a.next < b.next; });
    // Rounding-level drift is left alone so that loading is idempotent.
    const double drift = std::abs(mass - 1.0);
    if (drift > 1e-13 && drift <= kProbabilityTolerance) {
      for (Outcome& o : outs) o.prob /= mass;
    }
    m.set_outcomes(t, std::move(outs));
  }

  ValidationReport report = validate_model(m);
  if (!report.ok()) throw ValidationError(std::move(report));
  return m;
}

GameModel load_model_file(const std::filesystem::path& path) {
  return load_model(read_text_file(path));
}

std::string save_model(const GameModel& m) {
  ojson doc;
  ojson states = ojson::array();
  ojson c1 = ojson::object();
  ojson c2 = ojson::object();
  for (StateId i = 0; i < m.num_states(); ++i) {
    states.push_back(m.state_name(i));
    c1[m.state_name(i)] = m.controls(Player::I, i);
    c2[m.state_name(i)] = m.controls(Player::II, i);
  }
  doc["states"] = std::move(states);
  doc["controls1"] = std::move(c1);
  doc["controls2"] = std::move(c2);
  ojson rows = ojson::array();
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    ojson row;
    row["i"] = m.state_name(t.state);
    row["u"] = m.controls(Player::I, t.state)[t.u];
    row["v"] = m.controls(Player::II, t.state)[t.v];
    std::vector<Outcome> outs = m.outcomes(idx);
    std::stable_sort(outs.begin(), outs.end(),
                     [](const Outcome& a, const Outcome& b) { return a.next < b.next; });
    ojson next = ojson::array();
    for (const Outcome& o : outs) {
      ojson e;
      e["j"] = m.node_name(o.next);
      e["p"] = o.prob;
      e["cost"] = o.cost;
      next.push_back(std::move(e));
    }
    row["next"] = std::move(next);
    rows.push_back(std::move(row));
  }
  doc["transitions"] = std::move(rows);
  return doc.dump(2) + "\n";
}

StationaryPolicy load_policy(std::string_view text, const GameModel& m) {
  const json doc = parse_json(text);
  const std::string who = as_string(field(doc, "player", ""), "player");
  Player p;
  if (who == "I" || who == "1") {
    p = Player::I;
  } else if (who == "II" || who == "2") {
    p = Player::II;
  } else {
    throw ParseError("player", "expected \"I\" or \"II\"");
  }
  const json& rules = field(doc, "rules", "");
  if (!rules.is_object()) throw ParseError("rules", "expected an object");
  StationaryPolicy policy{p, {}};
  for (StateId i = 0; i < m.num_states(); ++i) {
    const std::string path = "rules." + m.state_name(i);
    auto it = rules.find(m.state_name(i));
    if (it == rules.end()) throw ParseError(path, "missing decision rule");
    const std::size_t k = m.num_controls(p, i);
    if (it->is_string()) {
      policy.rules.push_back(DecisionRule::pure(k, control_by_label(m, p, i, it->get<std::string>(), path)));
      continue;
    }
    if (!it->is_object()) throw ParseError(path, "expected a label or a map from labels to probabilities");
    std::vector<double> probs(k, 0.0);
    for (auto e = it->begin(); e != it->end(); ++e) {
      const std::size_t c = control_by_label(m, p, i, e.key(), path + "." + e.key());
      probs[c] = as_number(e.value(), path + "." + e.key());
    }
    try {
      policy.rules.emplace_back(std::move(probs));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(path, ex.what());
    }
  }
  for (auto it = rules.begin(); it != rules.end(); ++it) {
    if (!m.find_state(it.key())) throw ParseError("rules." + it.key(), "unknown state");
  }
  return policy;
}

std::string save_policy(const StationaryPolicy& p, const GameModel& m) {
  return policy_ojson(p, m).dump(2) + "\n";
}

QTable load_qtable(std::string_view text, const GameModel& m) {
  const json doc = parse_json(text);
  const json& arr = as_array(field(doc, "q", ""), "q");
  QTable q(m);
  std::vector<bool> seen(m.num_triplets(), false);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string path = idx_path("q", k);
    const StateId i = state_by_name(m, as_string(field(arr[k], "i", path), path + ".i"), path + ".i");
    const std::size_t u = control_by_label(m, Player::I, i,
                                           as_string(field(arr[k], "u", path), path + ".u"), path + ".u");
    const std::size_t v = control_by_label(m, Player::II, i,
                                           as_string(field(arr[k], "v", path), path + ".v"), path + ".v");
    const std::size_t idx = m.triplet_index(Triplet{i, u, v});
    if (seen[idx]) throw ParseError(path, "duplicate entry");
    seen[idx] = true;
    const double value = as_number(field(arr[k], "value", path), path + ".value");
    if (!std::isfinite(value)) throw ParseError(path + ".value", "non-finite Q entry");
    q[idx] = value;
  }
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    if (!seen[idx]) throw ParseError("q", "missing entry for " + m.describe(m.triplet(idx)));
  }
  return q;
}

std::string save_qtable(const QTable& q, const GameModel& m) {
  if (q.size() != m.num_triplets()) throw std::invalid_argument("Q size mismatch");
  ojson arr = ojson::array();
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    ojson e;
    e["i"] = m.state_name(t.state);
    e["u"] = m.controls(Player::I, t.state)[t.u];
    e["v"] = m.controls(Player::II, t.state)[t.v];
    e["value"] = q[idx];
    arr.push_back(std::move(e));
  }
  ojson doc;
  doc["q"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string value_vector_json(const ValueVector& x, const GameModel& m) {
  return values_ojson(x, m).dump(2) + "\n";
}

std::string pair_evaluation_json(const PairEvaluation& ev, const GameModel& m) {
  return pair_ojson(ev, m).dump(2) + "\n";
}

std::string assumption_report_json(const AssumptionReport& r, const GameModel& m) {
  ojson o;
  o["verdict"] = to_string(r.overall());
  o["clause_i"] = clause_ojson(r.safeguard_player1, m);
  o["clause_ii"] = clause_ojson(r.safeguard_player2, m);
  o["clause_iii"] = clause_ojson(r.prolonging_pairs, m);
  o["pure_policy_caveat"] = r.pure_policy_caveat;
  o["pairs_examined"] = r.pairs_examined;
  ojson ws = ojson::array();
  for (const PairWitness& w : r.witnesses) {
    ojson e;
    e["pair"] = w.description;
    e["mu"] = policy_ojson(w.mu, m);
    e["nu"] = policy_ojson(w.nu, m);
    e["evaluation"] = pair_ojson(w.evaluation, m);
    ws.push_back(std::move(e));
  }
  o["witnesses"] = std::move(ws);
  return o.dump(2) + "\n";
}

std::string proper_check_json(const ProperCheck& c, const GameModel& m) {
  ojson o;
  o["verdict"] = to_string(c.verdict);
  o["reason"] = c.reason;
  if (c.witness) o["witness"] = policy_ojson(*c.witness, m);
  if (c.witness_state) o["witness_state"] = m.state_name(*c.witness_state);
  return o.dump(2) + "\n";
}

std::string certificate_json(const ContractionCertificate& c, const GameModel& m) {
  ojson o;
  o["beta"] = c.beta;
  o["worst_slack"] = c.worst_slack;
  o["iterations"] = c.iterations;
  ojson xi = ojson::array();
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    ojson e;
    e["i"] = m.state_name(t.state);
    e["u"] = m.controls(Player::I, t.state)[t.u];
    e["v"] = m.controls(Player::II, t.state)[t.v];
    e["xi"] = c.xi[idx];
    xi.push_back(std::move(e));
  }
  o["xi"] = std::move(xi);
  ojson xn = ojson::object();
  for (StateId i = 0; i < m.num_states(); ++i) {
    ojson row = ojson::object();
    for (std::size_t u = 0; u < c.xi_nu[i].size(); ++u) row[m.controls(Player::I, i)[u]] = c.xi_nu[i][u];
    xn[m.state_name(i)] = std::move(row);
  }
  o["xi_nu"] = std::move(xn);
  ojson jh = ojson::object();
  for (StateId i = 0; i < m.num_states(); ++i) jh[m.state_name(i)] = c.j_hat[i];
  o["j_hat"] = std::move(jh);
  return o.dump(2) + "\n";
}

std::string sspa_json(const SspA& s) {
  auto node_name = [&](NodeId j) { return j == kTermination ? std::string("0") : s.names[state_of(j)]; };
  ojson o;
  o["num_states"] = s.num_states;
  o["num_triplets"] = s.num_triplets;
  ojson states = ojson::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    ojson st;
    st["name"] = s.names[k];
    st["kind"] = k < s.num_states ? "S" : "R";
    ojson controls = ojson::array();
    for (std::size_t c = 0; c < s.rows[k].size(); ++c) {
      ojson row;
      row["control"] = s.controls[k][c];
      row["cost"] = s.rows[k][c].cost;
      ojson next = ojson::array();
      for (const auto& [j, p] : s.rows[k][c].next) {
        ojson e;
        e["j"] = node_name(j);
        e["p"] = p;
        next.push_back(std::move(e));
      }
      row["next"] = std::move(next);
      controls.push_back(std::move(row));
    }
    st["controls"] = std::move(controls);
    states.push_back(std::move(st));
  }
  o["states"] = std::move(states);
  return o.dump(2) + "\n";
}

std::string single_check_json(const SingleCheck& c, const SspA& s) {
  ojson o;
  o["verdict"] = to_string(c.verdict);
  o["reason"] = c.reason;
  if (c.witness) {
    ojson w = ojson::object();
    for (std::size_t i = 0; i < c.witness->size(); ++i) w[s.names[i]] = s.controls[i][(*c.witness)[i]];
    o["witness"] = std::move(w);
  }
  return o.dump(2) + "\n";
}

std::string matrix_game_solution_json(const MatrixGameSolution& s) {
  ojson o;
  o["value"] = s.value;
  o["row_strategy"] = std::vector<double>(s.row_strategy.probabilities().begin(),
                                          s.row_strategy.probabilities().end());
  o["col_strategy"] = std::vector<double>(s.col_strategy.probabilities().begin(),
                                          s.col_strategy.probabilities().end());
  return o.dump(2) + "\n";
}

Stepsize parse_stepsize(std::string_view text) {
  Stepsize s;
  double* slots[3] = {&s.a, &s.b, &s.p};
  std::size_t k = 0;
  std::size_t pos = 0;
  while (k < 3) {
    const std::size_t comma = text.find(',', pos);
    const std::string part(text.substr(pos, comma == std::string_view::npos ? text.size() - pos
                                                                            : comma - pos));
    try {
      std::size_t used = 0;
      *slots[k] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("stepsize must be a,b,p; got \"" + std::string(text) + "\"");
    }
    ++k;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (k != 3 || text.find(',', pos) != std::string_view::npos) {
    throw std::invalid_argument("stepsize must be a,b,p; got \"" + std::string(text) + "\"");
  }
  s.validate();
  return s;
}

Scheduler parse_scheduler(std::string_view text) {
  Scheduler s;
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  std::size_t k = 1;
  if (colon != std::string_view::npos) {
    const std::string_view num = text.substr(colon + 1);
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc() || p != num.data() + num.size() || k == 0) {
      throw std::invalid_argument("scheduler count must be a positive integer");
    }
  }
  if (kind == "all") {
    s.kind = SchedulerKind::All;
  } else if (kind == "uniform-random") {
    s.kind = SchedulerKind::UniformRandom;
  } else if (kind == "round-robin") {
    s.kind = SchedulerKind::RoundRobin;
  } else {
    throw std::invalid_argument("unknown scheduler \"" + std::string(text) +
                                "\"; expected all, uniform-random:K or round-robin:K");
  }
  s.k = k;
  return s;
}

QLearnConfig load_qlearn_config(std::string_view text, QLearnConfig base) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("", "config must be a JSON object");
  if (doc.contains("seed")) base.seed = as_count(doc["seed"], "seed");
  if (doc.contains("max_iters")) base.max_iters = as_count(doc["max_iters"], "max_iters");
  if (doc.contains("record_full_history")) {
    if (!doc["record_full_history"].is_boolean()) {
      throw ParseError("record_full_history", "expected a boolean");
    }
    base.record_full_history = doc["record_full_history"].get<bool>();
  }
  if (doc.contains("metrics_every")) base.metrics_every = as_count(doc["metrics_every"], "metrics_every");
  if (doc.contains("residual_every")) {
    base.residual_every = as_count(doc["residual_every"], "residual_every");
  }
  if (doc.contains("stepsize")) {
    const json& s = doc["stepsize"];
    if (s.contains("a")) base.stepsize.a = as_number(s["a"], "stepsize.a");
    if (s.contains("b")) base.stepsize.b = as_number(s["b"], "stepsize.b");
    if (s.contains("p")) base.stepsize.p = as_number(s["p"], "stepsize.p");
    try {
      base.stepsize.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError("stepsize", e.what());
    }
  }
  if (doc.contains("scheduler")) {
    const json& s = doc["scheduler"];
    const std::string kind = as_string(field(s, "kind", "scheduler"), "scheduler.kind");
    if (kind == "custom") {
      base.scheduler.kind = SchedulerKind::Custom;
      base.scheduler.sets.clear();
      const json& sets = as_array(field(s, "sets", "scheduler"), "scheduler.sets");
      for (std::size_t k = 0; k < sets.size(); ++k) {
        const json& set = as_array(sets[k], idx_path("scheduler.sets", k));
        std::vector<std::size_t> v;
        for (std::size_t c = 0; c < set.size(); ++c) {
          v.push_back(as_count(set[c], idx_path(idx_path("scheduler.sets", k), c)));
        }
        base.scheduler.sets.push_back(std::move(v));
      }
    } else {
      std::string spec = kind;
      if (s.contains("k")) spec += ":" + std::to_string(as_count(s["k"], "scheduler.k"));
      try {
        base.scheduler = parse_scheduler(spec);
      } catch (const std::invalid_argument& e) {
        throw ParseError("scheduler", e.what());
      }
    }
  }
  if (doc.contains("delay")) {
    const json& d = doc["delay"];
    const std::string kind = as_string(field(d, "kind", "delay"), "delay.kind");
    if (kind == "zero") {
      base.delay = DelayModel{};
    } else if (kind == "uniform-bounded") {
      base.delay = DelayModel{};
      base.delay.kind = DelayKind::UniformBounded;
      base.delay.bound = as_count(field(d, "bound", "delay"), "delay.bound");
    } else if (kind == "fixed-schedule") {
      const std::string path = as_string(field(d, "schedule", "delay"), "delay.schedule");
      std::ifstream in(path);
      if (!in) throw ParseError("delay.schedule", "cannot open " + path);
      try {
        base.delay = parse_delay_schedule(in);
      } catch (const std::invalid_argument& e) {
        throw ParseError("delay.schedule", e.what());
      }
    } else {
      throw ParseError("delay.kind", "expected zero, uniform-bounded or fixed-schedule");
    }
  }
  return base;
}

MatrixGame load_matrix_game(std::string_view text) {
  const json doc = parse_json(text);
  const json& rows = doc.is_array() ? doc : as_array(field(doc, "entries", ""), "entries");
  const std::string base = doc.is_array() ? "" : "entries";
  if (rows.empty()) throw ParseError(base, "matrix game needs at least one row");
  std::vector<double> entries;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& row = as_array(rows[r], idx_path(base, r));
    if (r == 0) cols = row.size();
    if (row.size() != cols) throw ParseError(idx_path(base, r), "ragged matrix");
    for (std::size_t c = 0; c < row.size(); ++c) {
      entries.push_back(as_number(row[c], idx_path(idx_path(base, r), c)));
    }
  }
  try {
    return MatrixGame(rows.size(), cols, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(base, e.what());
  }
}

GeneratorConfig load_generator_config(std::string_view text, GeneratorConfig base) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("", "generator config must be a JSON object");
  if (doc.contains("n_states")) base.n_states = as_count(doc["n_states"], "n_states");
  if (doc.contains("max_controls")) base.max_controls = as_count(doc["max_controls"], "max_controls");
  if (doc.contains("termination_floor")) {
    base.termination_floor = as_number(doc["termination_floor"], "termination_floor");
  }
  if (doc.contains("cost_range")) {
    const json& r = as_array(doc["cost_range"], "cost_range");
    if (r.size() != 2) throw ParseError("cost_range", "expected [lo, hi]");
    base.cost_lo = as_number(r[0], "cost_range[0]");
    base.cost_hi = as_number(r[1], "cost_range[1]");
  }
  if (doc.contains("family")) {
    try {
      base.family = family_from_string(as_string(doc["family"], "family"));
    } catch (const std::invalid_argument& e) {
      throw ParseError("family", e.what());
    }
  }
  if (doc.contains("seed")) base.seed = as_count(doc["seed"], "seed");
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError("", e.what());
  }
  return base;
}

}  // namespace sspg
