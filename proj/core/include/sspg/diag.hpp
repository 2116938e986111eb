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

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "sspg/model.hpp"
#include "sspg/operators.hpp"
#include "sspg/qlearn.hpp"

namespace sspg {

/// (F_ν̄ Q)(i,u,v) = g(i,u,v) + Σ_j p_ij(u,v) min_ũ Σ_ṽ ν̄(ṽ|j) Q(j,ũ,ṽ).
QTable apply_F_nu(const GameModel& m, const StationaryPolicy& nu_bar, const QTable& Q);

/// Weighted sup-norm max_ℓ |x(ℓ)| / ξ(ℓ).
double weighted_sup_norm(std::span<const double> x, std::span<const double> xi);

struct ContractionCertificate {
  std::vector<double> xi;                  ///< over R, ≥ 1
  std::vector<std::vector<double>> xi_nu;  ///< xi_nu[i][u]
  std::vector<double> j_hat;               ///< Ĵ* on S
  double beta = 0.0;
  /// max over R of Σ_j p sup_ũ ξ_ν̄(j,ũ) − β ξ(ℓ); ≤ 1e-8 when valid.
  double worst_slack = 0.0;
  std::size_t iterations = 0;
};

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds ξ from the all-costs-(−1) problem under ν̄, which must be proper.
ContractionCertificate build_contraction_certificate(const GameModel& m,
                                                     const StationaryPolicy& nu_bar);

/// Σ_j p_ij(u,v) sup_ũ ξ_ν̄(j,ũ) ≤ β ξ(i,u,v) + slack on every triplet.
bool certificate_inequality_holds(const GameModel& m, const ContractionCertificate& c,
                                  double slack = 1e-8);

struct CouplingViolation {
  std::size_t t = 0;
  std::size_t component = 0;
  double gap = 0.0;  ///< Q_t(ℓ) − Q̂_t(ℓ)
};

struct CouplingReport {
  QTable q_final;
  QTable q_hat_final;
  /// min over t of Q_t(ℓ) − Q̂_t(ℓ), per component.
  std::vector<double> min_gap;
  std::vector<CouplingViolation> violations;
  std::size_t violation_count = 0;
};

/// Replays the run next to the lower process Q̂ driven by the same
/// stepsizes, samples and delays, with the successor's column player fixed at
/// ν̄. Q̂_0 = Q0, which must be the run's initial table.
CouplingReport run_coupled_lower_process(const GameModel& m, const StationaryPolicy& nu_bar,
                                         const QLearnRun& run, const QTable& Q0,
                                         double tolerance = 1e-9);

/// component,min_gap rows.
void write_coupling_csv(std::ostream& os, const GameModel& m, const CouplingReport& r);

/// Empirical cost and transition-frequency trackers.
struct TrackerState {
  std::vector<double> g_tilde;              ///< over R
  std::vector<std::vector<double>> q_hat;   ///< q_hat[ℓ] over S ∪ {0}
};

/// g̃ = 0; each q^ℓ starts as a point mass on the first positive-probability
/// successor of ℓ.
TrackerState initial_trackers(const GameModel& m);

struct TrackerEvent {
  std::size_t component = 0;
  double gamma = 0.0;
  NodeId successor = kTermination;
  double cost = 0.0;
};

/// g̃(ℓ) ← (1−γ)g̃(ℓ) + γĝ and q^ℓ ← (1−γ)q^ℓ + γe_j.
void update_trackers(TrackerState& state, const TrackerEvent& e);

/// supp(q^ℓ) ⊆ supp(p^ℓ) for every ℓ.
bool tracker_support_ok(const GameModel& m, const TrackerState& state);

}  // namespace sspg
