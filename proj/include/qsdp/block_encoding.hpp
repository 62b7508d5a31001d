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

// Block-encodings as explicit unitaries.
//
// Register convention: the ancilla register is the high-order factor, so a
// basis index is anc * n + sys and the encoded block is the top-left n x n
// corner. Realized ancilla counts (the qubits actually present in the
// unitary) are kept separate from reported_ancillas, which follows the
// asymptotic ancilla expressions with all constants set to 1.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qsdp/ledger.hpp"
#include "qsdp/linalg.hpp"

namespace qsdp {

struct BlockEncoding {
  Matrix unitary;
  double alpha = 1.0;
  int ancillas = 0;
  int reported_ancillas = 0;
  double epsilon = 0.0;
  int n = 0;
  // Base-oracle queries spent by one application of the unitary.
  CostVector cost;
  // Matrix this encoding is meant to represent, when known.
  std::optional<Matrix> target;

  int dim() const { return static_cast<int>(unitary.rows()); }
  // alpha times the top-left n x n block.
  Matrix block() const;
  // ||target - block()||, or 0 when no target is attached.
  double target_error() const;
};

Matrix extract_block(const BlockEncoding& enc);

// One-ancilla exact encoding of Hermitian A with normalization alpha.
BlockEncoding dilate(const Matrix& a, double alpha);
// One-ancilla exact encoding of an arbitrary contraction M (||M|| <= 1).
BlockEncoding dilate_contraction(const Matrix& m);
// Adds `extra` ancilla qubits initialized to zero.
BlockEncoding pad_ancillas(const BlockEncoding& enc, int extra);
BlockEncoding identity_encoding(int n);
BlockEncoding zero_encoding(int n, double alpha = 1.0);

// A unitary G on [system n][flag 2][anc anc_dim] whose first column is a
// purification of a subnormalized state: the flag=0 component carries the
// state, flag=1 carries the missing trace.
struct Purification {
  Matrix G;
  int n = 0;
  int anc_dim = 1;
};

// Minimal purification; the ancilla holds rank(rho) padded to a power of two.
Purification purify(const DensityOperator& rho);

// V = (I (x) G^dag)(SWAP (x) I)(I (x) G), with the input register reordered to
// be least significant. Charges one G and one G^-1 query to `base`.
BlockEncoding purified_density_encoding(const Purification& p, QueryLedger* ledger = nullptr,
                                        Counter base = Counter::StatePrep);

struct StatePrepPair {
  Vector c;  // left amplitudes
  Vector d;  // right amplitudes
  double beta = 1.0;
  double precision = 0.0;
  bool symmetric = true;
  // Coefficients this pair is meant to prepare (length <= c.size()).
  RealVector target;

  int qubits() const;
  // sum_j |beta conj(c_j) d_j - y_j| over the target's support.
  double reconstruction_error() const;
  // Throws ContractViolation if unit norms or the precision bound fail.
  void validate() const;
};

// Symmetric pair c = d = sqrt(|y_j|/beta) padded to a power of two, with the
// first free slot carrying the remaining mass. Signs are placed on d.
StatePrepPair make_prep_pair(const RealVector& y, double beta);

// Encoding of sum_j y_j A_j from encodings with equal alpha. Pads ancillas to
// the largest count; slots beyond the list act as identity. Result
// (alpha beta, a + b, alpha eps1 + beta eps2).
BlockEncoding linear_combination(const std::vector<BlockEncoding>& encs, const StatePrepPair& pair,
                                 QueryLedger* ledger = nullptr);

// (1, a+2, eps) encoding of exp(i t H) where H = enc.block().
BlockEncoding hamiltonian_simulation(const BlockEncoding& enc, double t, double eps,
                                     QueryLedger* ledger = nullptr);

struct ControlledSimUnitary {
  std::int64_t M = 1;
  int J = 0;
  double tau = 0.0;
  int n = 0;
  // blocks[u] = exp(i m tau H) with m = u for u < M and u - 2M otherwise.
  std::vector<Matrix> blocks;
  double error = 0.0;
  Matrix H;
  std::optional<Matrix> target_H;
  double alpha = 1.0;
  int reported_ancillas = 0;
  CostVector cost;

  static std::int64_t signed_index(std::int64_t u, std::int64_t M) { return u < M ? u : u - 2 * M; }
  Matrix dense() const;
};

ControlledSimUnitary controlled_simulation(const BlockEncoding& enc, std::int64_t M, double tau,
                                          double eps, QueryLedger* ledger = nullptr);
// Controlled simulation from direct access to exp(iH), as in the Hamiltonian
// input model; charges nothing.
ControlledSimUnitary controlled_simulation_exact(const Matrix& h, std::int64_t M, double tau,
                                                double eps);

struct TaylorSpec {
  double x0 = 0.0;
  double r = 1.0;
  double delta = 0.5;
  double K = 1.0;
  // Taylor coefficients of f around x0.
  std::function<double(int)> coeff;
  std::function<double(double)> f;
  double eps_prime = 1e-6;
};

// Sum of (r+delta)^l |a_l| with a ratio-test tail bound. Returns the
// truncated sum plus the tail estimate.
double taylor_k_sum(const TaylorSpec& spec, double* tail = nullptr);
// Truncation order whose analytic tail is at most K eps'/2.
int taylor_truncation_order(const TaylorSpec& spec);

// (K, a + ceil(log2(r ln(1/eps')/delta)), K eps') encoding of f(H). The block
// is f(H)/K from the eigendecomposition; a truncated Taylor series is checked
// against it within K eps'.
BlockEncoding smooth_function(const ControlledSimUnitary& ctrl, const TaylorSpec& spec);
// Builds the controlled simulation with M = next power of two of
// r ln(1/eps')/delta and tau = pi/(2(r+delta)).
BlockEncoding smooth_function(const BlockEncoding& enc, const TaylorSpec& spec,
                              QueryLedger* ledger = nullptr);

// (2 kappa^c, a', eps) encoding of H^-c; requires spectrum in [1/kappa, 1].
BlockEncoding negative_power(const BlockEncoding& enc, double kappa, double c, double eps,
                             QueryLedger* ledger = nullptr);
// (2, a', eps) encoding of H^c for c in (0, 1].
BlockEncoding positive_power(const BlockEncoding& enc, double kappa, double c, double eps,
                             QueryLedger* ledger = nullptr);

std::int64_t next_pow2(double x);

}  // namespace qsdp
