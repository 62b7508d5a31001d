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

// SDP instances and the oracle input models built on top of them.
//
// Indexing follows the standard form: constraints are A_1..A_m with A_1 = I
// and b_1 = R, and index 0 is the objective view A_0 = -C.

#pragma once

#include <string>
#include <vector>

#include "qsdp/block_encoding.hpp"
#include "qsdp/ledger.hpp"
#include "qsdp/linalg.hpp"

namespace qsdp {

struct SdpInstance {
  int n = 0;
  int m = 0;
  int s = 0;
  double R = 1.0;
  double r = 1.0;
  Matrix C;
  // A[j - 1] holds A_j.
  std::vector<Matrix> A;
  // b[j - 1] holds b_j.
  RealVector b;

  // A_j for j in 1..m, or -C for j = 0.
  Matrix constraint(int j) const;
  double bound(int j) const { return b(j - 1); }
  bool all_diagonal() const;
  // Largest number of nonzeros in any row of any A_j.
  int max_row_nonzeros() const;

  // Throws InvalidInstance naming the first failing invariant.
  void validate() const;

  std::string to_json() const;
  static SdpInstance from_json(const std::string& text);
  static SdpInstance load(const std::string& path);
};

// Assembles an instance, fills s from the data when s <= 0, and validates.
SdpInstance make_instance(const Matrix& C, std::vector<Matrix> A, const RealVector& b, double R, double r,
                          int s = 0);

struct SparseAnswer {
  int index = 0;
  // Set when l exceeds the row support; index then echoes l.
  bool sentinel = false;
};

class SparseOracle {
 public:
  explicit SparseOracle(const SdpInstance& inst, QueryLedger* ledger = nullptr);

  // Column of the l-th nonzero (l is 1-based) of row k of A_j, j in 0..m.
  SparseAnswer sparse_access(int j, int k, int l) const;
  cplx entry_access(int j, int k, int i) const;
  double b_access(int j) const;

  const SdpInstance& instance() const { return inst_; }
  QueryLedger* ledger() const { return ledger_; }
  // Uncharged read used by the simulated circuit constructions.
  const Matrix& matrix(int j) const { return mats_[j]; }

 private:
  void check_jk(int j, int k) const;

  const SdpInstance& inst_;
  QueryLedger* ledger_;
  std::vector<Matrix> mats_;
  std::vector<std::vector<std::vector<int>>> cols_;
};

// (s, w + log2(s/eps), eps) encoding of A_j via the dilation; charges
// 2 index and 2 entry queries.
BlockEncoding to_block_encoding_sparse(const SparseOracle& oracle, int j, double eps);

struct StateTerm {
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  double mu_id = 0.0;
  DensityOperator rho_plus;
  DensityOperator rho_minus;
  Purification g_plus;
  Purification g_minus;

  Matrix reconstruct() const;
};

// terms[j] decomposes A_j for j in 0..m (term 0 is A_0 = -C).
struct StateDecomposition {
  int n = 0;
  double B = 0.0;
  std::vector<StateTerm> terms;

  void validate(const SdpInstance* inst = nullptr) const;
};

StateTerm make_state_term(double mu_plus, const DensityOperator& rho_plus, double mu_minus,
                          const DensityOperator& rho_minus, double mu_id);
// Splits each A_j into positive and negative parts; multiples of I go to mu_id.
StateDecomposition decompose_instance(const SdpInstance& inst);

// (B, a', eps') encoding of A_j as the combination mu+ V+ - mu- V- + mu_I I.
// Charges one query to G+, G-, and each inverse, plus one mu query.
BlockEncoding to_block_encoding_state(const StateDecomposition& decomp, int j, QueryLedger* ledger = nullptr);

class OperatorOracle {
 public:
  OperatorOracle(const SdpInstance& inst, double alpha = 1.0);
  OperatorOracle(std::vector<BlockEncoding> encs, double alpha);

  double alpha() const { return alpha_; }
  int ancillas() const { return a_; }
  int size() const { return static_cast<int>(encs_.size()); }
  // Applies O_U for index j; charges one operator-U query.
  const BlockEncoding& query(int j, QueryLedger* ledger = nullptr) const;
  const BlockEncoding& encoding(int j) const { return encs_[j]; }

 private:
  std::vector<BlockEncoding> encs_;
  double alpha_;
  int a_;
};

class HamiltonianOracle {
 public:
  // t[j] is the time scale of A_j for j in 0..m.
  HamiltonianOracle(const SdpInstance& inst, std::vector<double> t);

  double tau() const { return tau_; }
  double t(int j) const { return t_[j]; }
  int size() const { return static_cast<int>(t_.size()); }
  // exp(i A_j / t_j); charges one hamiltonian query.
  const Matrix& evolution(int j, QueryLedger* ledger = nullptr) const;
  const Matrix& backing(int j) const { return mats_[j]; }

 private:
  std::vector<Matrix> mats_;
  std::vector<Matrix> evo_;
  std::vector<double> t_;
  double tau_;
};

// (2 tau, a', eps) encoding of A_j, obtained from the smooth-function
// construction with f(x) = x, x0 = 0, r = 1, delta = pi/2 - 1, K = 2.
BlockEncoding hamiltonian_to_operator(const HamiltonianOracle& oracle, int j, double eps,
                                      QueryLedger* ledger = nullptr);

// rho+- = (I +- A_j/t_j)/(2n) with mu+- = n t_j, for diagonal A_j.
StateTerm hamiltonian_to_state(const HamiltonianOracle& oracle, int j, double eps, QueryLedger* ledger = nullptr);
// All terms; B = 2 n tau.
StateDecomposition hamiltonian_to_state_decomposition(const HamiltonianOracle& oracle, double eps,
                                                      QueryLedger* ledger = nullptr);

}  // namespace qsdp
