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

// Matrix multiplicative weights SDP solvers: the Arora-Kale loop with a
// theta-oracle, the primal-oracle loop, binary search on the objective
// guess, and certificate verification.
//
// Each iteration uses the exact Gibbs state of the stored dual vector plus
// simulated estimator noise, and charges the registered per-iteration
// formula (Gibbs copies times two-phase samples times T_Gibbs, plus
// copies times test applications times T_Tr).

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qsdp/gibbs.hpp"
#include "qsdp/input_models.hpp"
#include "qsdp/ledger.hpp"

namespace qsdp {

// ---------------------------------------------------------------------------
// Two-phase search and minimum finding (simulated).

// Returns a 1-based index j with p[j-1] >= 1/3, chosen uniformly among such
// indices, or nullopt when none qualifies. Whenever some p >= 2/3 an index is
// returned.
std::optional<int> two_phase_search_sim(const std::vector<double>& p, double nu, Rng& rng,
                                        QueryLedger* ledger = nullptr);

// 1-based j with a_j - eta_j <= min_i (a_i + eta_i) + delta, by binary search
// on the threshold over [-M, M] with ceil(log2(2M/delta)) rounds.
int two_phase_min_find_sim(const std::vector<double>& a, const std::vector<double>& eta, double delta, double M,
                           double nu, Rng& rng, QueryLedger* ledger = nullptr);

// ---------------------------------------------------------------------------
// Theta-oracle.

// y~ = e_0/(2r) + c e_j + c2 e_k (k = -1 when single-index).
struct ThetaStep {
  bool empty = true;
  int j = 0;
  double c = 0.0;
  int k = -1;
  double c2 = 0.0;
};

// Finds y~ >= 0 with y~_0 = 1/(2r), ||y~||_1 <= 1, b.y~ <= 0 and
// sum_j y~_j trace(j) >= -delta. b[0] = -g is the objective bound. Single
// indices are tried first (smallest j, then smallest c); when none is
// feasible, index pairs are tried as a 2-variable LP. trace(j) is only
// evaluated when needed.
ThetaStep theta_oracle(const std::function<double(int)>& trace, const RealVector& b, double r, double delta);

// ---------------------------------------------------------------------------
// Solvers.

enum class InputModel { Sparse, State, Operator, Hamiltonian };
enum class Framework { Full, Primal };
const char* model_name(InputModel m);
InputModel parse_model(const std::string& s);

struct SolverConfig {
  double epsilon = 0.1;
  // Overall failure budget zeta.
  double failure = 0.1;
  double guess = 0.0;
  Framework framework = Framework::Full;
  InputModel model = InputModel::Sparse;
  double sigma = 6.0;
  std::uint64_t seed = 0;
  // Hamiltonian model time scale; ignored by the other models.
  double tau = 1.0;
  bool record_trace = false;
  // Number of solver calls sharing the failure budget.
  int calls = 1;
};

// Framework constants for one instance.
struct FrameworkParams {
  double gamma = 0.0;
  double theta = 0.0;
  std::int64_t iterations = 0;
  std::int64_t copies = 0;  // k = ceil(6 (4 sigma gamma)^2)
  double nu = 0.0;          // per-iteration failure probability
  double store_grid = 0.0;  // SparseVectorTree step
};
FrameworkParams framework_params(const SdpInstance& inst, const SolverConfig& cfg, Framework fw);

// Per-iteration query charge of a framework under an input model.
struct IterationCharge {
  Count gibbs = 0;
  Count trace = 0;
  Count total() const { return checked_add(gibbs, trace); }
};
// T_Gibbs and T_Tr for the model at precision 1/gamma.
Count model_gibbs_cost(const SdpInstance& inst, const SolverConfig& cfg, double gamma, int dim);
Count model_trace_cost(const SdpInstance& inst, const SolverConfig& cfg, double gamma);
IterationCharge iteration_charge(const SdpInstance& inst, const SolverConfig& cfg, Framework fw);

// Exact Gibbs state of sum_j y_j M_j, updated one term at a time. Diagonal
// and real-symmetric inputs take cheaper paths. Call refresh() after add()
// and before trace() or state().
class GibbsTracker {
 public:
  explicit GibbsTracker(const std::vector<Matrix>& mats);
  void add(int j, double dy);
  void refresh();
  // Exact Tr(M_j rho).
  double trace(int j) const;
  Matrix state() const;
  bool diagonal() const { return diag_; }

 private:
  int n_;
  bool diag_ = false, real_ = false;
  std::vector<RealVector> d_;
  RealVector h_, p_;
  std::vector<Eigen::MatrixXd> r_;
  Eigen::MatrixXd hr_, rhor_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er_;
  std::vector<Matrix> c_;
  Matrix hc_, rhoc_;
  Eigen::SelfAdjointEigenSolver<Matrix> ec_;
};

enum class Verdict { OptAtMost, OptAbove, Feasible, Infeasible };
const char* verdict_name(Verdict v);

struct IterationRecord {
  std::int64_t t = 0;
  int j = -1;
  double c = 0.0;
  int k = -1;
  double c2 = 0.0;
  double trace0 = 0.0;
};

struct SolveOutcome {
  Verdict verdict = Verdict::OptAtMost;
  double guess = 0.0;
  Framework framework = Framework::Full;
  // Dual certificate, indexed j = 0..m; entry 0 is the objective
  // coordinate and is 0 after the final correction.
  std::optional<RealVector> dual;
  // Primal certificate: z rho with rho = exp(-sum_{j>=1} y'_j A_j + y'_0 C)/Tr.
  std::optional<RealVector> primal_y;
  double z = 0.0;
  std::int64_t iterations = 0;
  FrameworkParams params;
  IterationCharge per_iteration;
  LedgerSnapshot ledger;
  std::vector<IterationRecord> trace;
};

SolveOutcome arora_kale_solve(const SdpInstance& inst, const SolverConfig& cfg, QueryLedger* ledger = nullptr);
SolveOutcome primal_oracle_solve(const SdpInstance& inst, const SolverConfig& cfg, QueryLedger* ledger = nullptr);

struct Violation {
  std::string condition;
  double margin = 0.0;
};

struct VerifyReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::string summary() const;
};

// sum_{j>=1} y_j A_j - C >= -eps I, y >= 0, sum_{j>=1} b_j y_j <= g + eps.
VerifyReport verify_dual(const RealVector& y, const SdpInstance& inst, double g, double eps);
// Tr(z rho A_j) <= b_j + eps for j >= 1 and Tr(z rho C) >= g - eps.
VerifyReport verify_primal(const RealVector& yp, double z, const SdpInstance& inst, double g, double eps);
// The normalized rho of a primal certificate.
DensityOperator primal_state(const RealVector& yp, const SdpInstance& inst);

struct SearchStep {
  double g = 0.0;
  Verdict verdict = Verdict::OptAtMost;
  std::int64_t iterations = 0;
};

struct SdpSolution {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<SearchStep> steps;
  SolveOutcome dual_run;
  SolveOutcome primal_run;
  VerifyReport dual_report;
  VerifyReport primal_report;
  std::int64_t full_iterations = 0;
  std::int64_t primal_iterations = 0;
  IterationCharge full_charge;
  IterationCharge primal_charge;
  LedgerSnapshot ledger;
  bool verified() const { return dual_report.pass && primal_report.pass; }
};

// Binary search over g in [-R, R] to width epsilon with the Arora-Kale
// verdict, then one primal-oracle solve at the located lower end.
SdpSolution sdp_solve(const SdpInstance& inst, const SolverConfig& cfg, QueryLedger* ledger = nullptr);

// Composite ledger value of a full solve: full iterations times the
// full-framework charge plus primal iterations times the primal charge.
Count solve_formula_total(const SdpSolution& sol);

}  // namespace qsdp
