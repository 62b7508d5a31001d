// Copyright 2026 The qsdp Authors
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

// Gibbs-state preparation and trace estimation.
//
// Purified outputs are represented by their density operators. Amplitude
// amplification and estimation are emulated by exact renormalization and
// exact probabilities; their query cost is charged through the registered
// formulas.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qsdp/block_encoding.hpp"
#include "qsdp/input_models.hpp"
#include "qsdp/ledger.hpp"
#include "qsdp/linalg.hpp"
#include "qsdp/vector_store.hpp"

namespace qsdp {

using Rng = std::mt19937_64;

// exp(-sum_j y_j A_j)/Tr for j = 0..m, with A_0 = -C.
DensityOperator gibbs_exact(const RealVector& y, const SdpInstance& inst);
// exp(-sum_j y_j mats[j])/Tr.
DensityOperator gibbs_exact(const RealVector& y, const std::vector<Matrix>& mats);

struct GibbsResult {
  DensityOperator state;
  Count charge = 0;
};

// Gibbs state of sum_j y_j A_j from encodings sharing alpha: LCU with a
// prep pair of normalization K, then exp(-(x - lambda_min)/2) via the smooth
// function construction applied to I/n, then renormalized. y may be signed.
GibbsResult gibbs_operator_model(const std::vector<BlockEncoding>& encs, const RealVector& y, double K,
                                 double theta, QueryLedger* ledger = nullptr);
GibbsResult gibbs_operator_model(const OperatorOracle& oracle, const SparseVectorTree& tree, double K,
                                 double theta, QueryLedger* ledger = nullptr);

struct SubnormalizedGibbsPart {
  Matrix part;
  Projector subspace;
  double scale = 0.0;
};

// Maps rho_tilde through V = (sqrt(q)/2) rho_tilde^-1/2 (negative power with
// c = 1/2) so that qPi <= rho gives about (q/4) Pi. Preconditions are checked
// and reported by name.
SubnormalizedGibbsPart project_uniform(const Matrix& rho, const Matrix& rho_tilde, const Projector& pi, double q,
                                       double nu, QueryLedger* ledger = nullptr);

struct StateModelOptions {
  bool strict_beta_range = true;
  bool strict_q_range = true;
  // When false, eigenvalues within eta of q are mislabeled with probability
  // 1/2 each; only used to exercise failure paths.
  bool enforce_separation = true;
  std::uint64_t seed = 0;
};

struct StateModelDetails {
  double high_trace = 0.0;
  double low_trace = 0.0;
  double lambda_tilde = 0.0;
  double xi = 0.0;
  bool empty_high = false;
  bool separation_violated = false;
  int search_rounds = 0;
  double delta_prime = 0.0;
};

struct StateModelResult {
  DensityOperator state;
  Count charge = 0;
  StateModelDetails details;
};

// Approximates exp(beta H)/Tr with H = (rho_plus - rho_minus)/2 by the
// threshold-projector procedure.
StateModelResult gibbs_state_model(const DensityOperator& rho_plus, const DensityOperator& rho_minus, double beta,
                                   double q, double eta, double delta, const StateModelOptions& opts = {},
                                   QueryLedger* ledger = nullptr);

struct SeededResult {
  DensityOperator state;
  Count charge = 0;
  bool seed_failed = false;
  bool delegated = false;
  double q = 0.0;
  double eta = 0.0;
  std::string failure;
};

int seed_bits(double beta, double delta);
// Approximates exp(-beta H)/Tr with H = (rho_plus - rho_minus)/2; the seed
// selects the threshold q in [1/(2 beta), 1/beta].
SeededResult gibbs_state_model_seeded(const DensityOperator& rho_plus, const DensityOperator& rho_minus, double beta,
                                      double theta, double delta, std::uint64_t seed, QueryLedger* ledger = nullptr);

// Gibbs state of sum_j y_j A_j in the state model. Identity terms are
// dropped and beta = 2 K B.
SeededResult gibbs_state_decomposition(const StateDecomposition& decomp, const RealVector& y, double K, double theta,
                                       std::uint64_t seed, QueryLedger* ledger = nullptr);

// Biased estimator of Tr(A rho) with outcomes {14, -2}.
class TraceEstimator {
 public:
  // enc encodes A (any alpha); theta only sets the charged precision.
  explicit TraceEstimator(const BlockEncoding& enc, double theta = 1e-3);

  // 1/8 + Tr(A rho)/16 computed from the realized encoding.
  double success_probability(const Matrix& rho) const;
  double sample(const Matrix& rho, Rng& rng, QueryLedger* ledger = nullptr) const;
  Count charge_per_sample() const { return per_sample_; }

  static double mean(double p) { return 16.0 * p - 2.0; }
  static double variance(double p) { return 256.0 * p * (1.0 - p); }

 private:
  Matrix b_;
  double theta_;
  Count per_sample_;
};

double trace_estimator_sample(const BlockEncoding& enc, const DensityOperator& rho, Rng& rng,
                              QueryLedger* ledger = nullptr);

// Above this hit-count variance trace_mean_estimate draws a rounded normal
// instead of a binomial.
inline constexpr double kNormalHitsVariance = 1e6;

// Mean of k estimator draws with success probability p, drawn as one
// binomial variate (normal approximation for huge k). Charges k Gibbs preparations (each gibbs_cost queries)
// and k estimator calls (each trace_cost queries).
double trace_mean_estimate(double p, std::int64_t k, Rng& rng, QueryLedger* ledger = nullptr, Count gibbs_cost = 1,
                           Count trace_cost = 1);
// k = ceil(6 (4 sigma gamma)^2).
std::int64_t trace_mean_copies(double gamma, double sigma = 6.0);

}  // namespace qsdp
