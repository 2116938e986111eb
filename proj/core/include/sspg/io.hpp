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

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sspg/diag.hpp"
#include "sspg/generator.hpp"
#include "sspg/model.hpp"
#include "sspg/operators.hpp"
#include "sspg/qlearn.hpp"
#include "sspg/solve.hpp"
#include "sspg/structure.hpp"

namespace sspg {

/// Malformed document. `where()` is "line L, column C" for syntax errors and
/// a field path such as "transitions[2].next[0].p" otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& message);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses a game document, renormalizes probability vectors that are within
/// tolerance of 1, and validates. Throws ParseError or ValidationError.
GameModel load_model(std::string_view text);
GameModel load_model_file(const std::filesystem::path& path);

/// Canonical form: model order throughout, successors sorted with "0" first.
std::string save_model(const GameModel& m);

/// {"player": "I", "rules": {"1": {"a": 0.5, "b": 0.5}, "2": "a"}}. A bare
/// label is a pure rule; states without a rule are rejected.
StationaryPolicy load_policy(std::string_view text, const GameModel& m);
std::string save_policy(const StationaryPolicy& p, const GameModel& m);

/// {"q": [{"i": "1", "u": "a", "v": "x", "value": 2.0}, ...]} covering R.
QTable load_qtable(std::string_view text, const GameModel& m);
std::string save_qtable(const QTable& q, const GameModel& m);

std::string value_vector_json(const ValueVector& x, const GameModel& m);
std::string pair_evaluation_json(const PairEvaluation& ev, const GameModel& m);
std::string assumption_report_json(const AssumptionReport& r, const GameModel& m);
std::string proper_check_json(const ProperCheck& c, const GameModel& m);
std::string certificate_json(const ContractionCertificate& c, const GameModel& m);
std::string sspa_json(const SspA& s);
std::string single_check_json(const SingleCheck& c, const SspA& s);
std::string matrix_game_solution_json(const MatrixGameSolution& s);

/// Overlays the fields present in `text` on `base`:
/// {"seed", "max_iters", "stepsize": {"a","b","p"},
///  "scheduler": {"kind": "all|uniform-random|round-robin|custom", "k", "sets"},
///  "delay": {"kind": "zero|uniform-bounded|fixed-schedule", "bound", "schedule": "path.csv"},
///  "record_full_history", "metrics_every", "residual_every"}.
QLearnConfig load_qlearn_config(std::string_view text, QLearnConfig base = {});

/// Parses "1,1,0.75" style stepsize triples.
Stepsize parse_stepsize(std::string_view text);
/// "all", "uniform-random:K", "round-robin:K".
Scheduler parse_scheduler(std::string_view text);
/// {"rows": m, "cols": n, "entries": [[...], ...]} or a bare array of rows.
MatrixGame load_matrix_game(std::string_view text);

GeneratorConfig load_generator_config(std::string_view text, GeneratorConfig base = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace sspg
