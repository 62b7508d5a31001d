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

// Application SDPs: the hard LP family, state discrimination, E-optimal
// design, shadow tomography, and the measurement-to-block-encoding map.

#pragma once

#include <cstdint>
#include <vector>

#include "qsdp/block_encoding.hpp"
#include "qsdp/input_models.hpp"
#include "qsdp/solver.hpp"

namespace qsdp {

// ---------------------------------------------------------------------------
// Lower-bound LP: n = 2, C = diag(1, 0), A_1 = I with b_1 = R = 2, then
// m constraints A = tau H_j with b = 1. Case 'a': every H_j = I/(2 tau).
// Case 'b': H_{j*} = diag(1/2 + eps, 1/2 - eps)/tau, the rest I/(2 tau).

struct LowerBoundLp {
  SdpInstance instance;
  // Hamiltonian time scales t_j for j = 0..m+1.
  std::vector<double> t;
  double opt = 0.0;
  char kase = 'a';
  int j_star = 1;
  double eps = 0.0;
  double tau = 1.0;
};

LowerBoundLp build_lower_bound_lp(int m, double eps, double tau, char kase, int j_star = 1);
HamiltonianOracle lower_bound_oracle(const LowerBoundLp& lp);

// ---------------------------------------------------------------------------
// State discrimination: maximize sum_i Tr(rho_i M_i) over POVMs.

struct DiscriminationTask {
  std::vector<DensityOperator> states;
};

// Block-diagonal instance with n = k d. Each Hermitian basis element E of
// the d x d matrices contributes the pair (+-(E (+) ... (+) E), +-Tr E), so
// m = 1 + 2 d^2; R = d + 1 and r = d^2.
SdpInstance build_state_discrimination(const DiscriminationTask& task);

struct DiscriminationResult {
  double opt = 0.0;
  std::vector<Matrix> povm;
  Matrix Y;
  // ||sum_i M_i - I|| and its allowed bound 3 k eps d.
  double povm_residual = 0.0;
  double povm_bound = 0.0;
  double min_povm_eigenvalue = 0.0;
  // min_i lambda_min(Y - rho_i).
  double dual_margin = 0.0;
  SdpSolution solution;
};

DiscriminationResult solve_state_discrimination(const DiscriminationTask& task, double eps, std::uint64_t seed = 0,
                                                QueryLedger* ledger = nullptr);

// ---------------------------------------------------------------------------
// E-optimal design: maximize lambda_min(F_p), F_p = sum_i p_i u_i u_i^T / s_i^2.

struct DesignTask {
  std::vector<RealVector> u;
  std::vector<double> sigma;
};

// n = d + 1, m = k + 2: A_1 = I, the k experiment constraints
// diag(-1, u u^T/s^2) scaled to unit norm, and diag(0, -I) with b = -1.
SdpInstance build_e_optimal(const DesignTask& task);

struct DesignResult {
  double t = 0.0;
  RealVector p;
  double lambda_min_fp = 0.0;
  SdpSolution solution;
};

DesignResult solve_e_optimal(const DesignTask& task, double eps, std::uint64_t seed = 0,
                             QueryLedger* ledger = nullptr);
Matrix fisher_matrix(const DesignTask& task, const RealVector& p);

// ---------------------------------------------------------------------------
// Shadow tomography.

struct ShadowTask {
  DensityOperator tau;
  std::vector<Matrix> E;
  double eps = 0.1;
};

struct ShadowResult {
  // y[2j-1] and y[2j] weight +E_j and -E_j (j = 1..m); y[0] is unused.
  RealVector y;
  DensityOperator sigma;
  RealVector estimates;
  RealVector exact;
  double max_error = 0.0;
  std::int64_t iterations = 0;
  std::int64_t iteration_budget = 0;
  bool converged = false;
  Count sample_budget = 0;
  Count samples_consumed = 0;
  std::int64_t final_shots = 0;
};

// Primal-oracle loop on { sigma : |Tr(E_j sigma) - Tr(E_j tau)| <= eps/2 }
// with theta = eps/4. Each check estimates Tr(E_j (rho - tau)) from
// E_j (x) I - I (x) E_j on rho (x) tau. The tau-sample budget is charged up
// front; final estimates use ceil(8 ln(20 m)/eps^2) shots per operator.
ShadowResult shadow_tomography(const ShadowTask& task, std::uint64_t seed = 0, QueryLedger* ledger = nullptr);

// ---------------------------------------------------------------------------
// Measurement to block-encoding.

// U acts on [anc a qubits][system n]; the measurement accepts when the most
// significant ancilla qubit reads 0. Returns M = <0|U^dag P_acc U|0>.
Matrix povm_accept_operator(const Matrix& U, int a, int n);
// (1, a + 1, eps) encoding U'^dag (CNOT) U' of M with U' = I_2 (x) U; the
// CNOT is controlled on the outcome qubit reading 1 and targets the new flag.
BlockEncoding povm_to_block_encoding(const Matrix& U, int a, int n, double eps);

}  // namespace qsdp
