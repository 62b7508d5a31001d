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

#include "qsdp/input_models.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "qsdp/cost.hpp"

namespace qsdp {

namespace {

using nlohmann::json;

constexpr double kNormTol = 1e-9;

[[noreturn]] void fail(const std::string& invariant, const std::string& detail) {
  throw InvalidInstance("invariant '" + invariant + "' violated: " + detail);
}

int row_nonzeros(const Matrix& a) {
  int best = 0;
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    int cnt = 0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      if (a(k, i) != cplx(0.0, 0.0)) ++cnt;
    best = std::max(best, cnt);
  }
  return best;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) fail("dimension", what + " must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      fail("dimension", what + " has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = cplx(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        fail("complex-entry", what + " entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

Matrix SdpInstance::constraint(int j) const {
  if (j == 0) return -C;
  if (j < 1 || j > m) throw std::out_of_range("SdpInstance::constraint: index out of range");
  return A[j - 1];
}

bool SdpInstance::all_diagonal() const {
  if (!is_exactly_diagonal(C)) return false;
  for (const auto& a : A)
    if (!is_exactly_diagonal(a)) return false;
  return true;
}

int SdpInstance::max_row_nonzeros() const {
  int best = 0;
  for (const auto& a : A) best = std::max(best, row_nonzeros(a));
  return best;
}

void SdpInstance::validate() const {
  std::ostringstream os;
  if (n < 1) fail("dimension", "n must be >= 1");
  if (m < 1) fail("dimension", "m must be >= 1 (A_1 = I is required)");
  if (static_cast<int>(A.size()) != m) fail("dimension", "number of constraint matrices differs from m");
  if (b.size() != m) fail("dimension", "length of b differs from m");
  if (C.rows() != n || C.cols() != n) fail("dimension", "C is not n x n");
  for (int j = 1; j <= m; ++j)
    if (A[j - 1].rows() != n || A[j - 1].cols() != n) fail("dimension", "A_" + std::to_string(j) + " is not n x n");
  if (!(R >= 1.0)) fail("R >= 1", "R = " + std::to_string(R));
  if (!(r >= 1.0)) fail("r >= 1", "r = " + std::to_string(r));
  if (s < 1 || s > n) fail("sparsity", "s must lie in [1, n]");
  if (hermitian_residual(C) > kHermitianReject) fail("Hermitian", "C is not Hermitian");
  for (int j = 1; j <= m; ++j)
    if (hermitian_residual(A[j - 1]) > kHermitianReject) fail("Hermitian", "A_" + std::to_string(j) + " is not Hermitian");
  if ((A[0] - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) fail("A_1 = I", "A_1 differs from the identity");
  if (std::abs(b(0) - R) > 1e-12 * std::max(1.0, R)) fail("b_1 = R", "b_1 = " + std::to_string(b(0)) + ", R = " + std::to_string(R));
  if (!b.allFinite()) fail("b finite", "b has non-finite entries");
  const double cn = operator_norm(hermitian_part(C));
  if (cn > 1.0 + kNormTol) fail("||C|| <= 1", "||C|| = " + std::to_string(cn));
  for (int j = 1; j <= m; ++j) {
    const double an = operator_norm(hermitian_part(A[j - 1]));
    if (an > 1.0 + kNormTol) fail("||A_j|| <= 1", "||A_" + std::to_string(j) + "|| = " + std::to_string(an));
    const int nz = row_nonzeros(A[j - 1]);
    if (nz > s) fail("sparsity", "A_" + std::to_string(j) + " has " + std::to_string(nz) + " nonzeros in a row, s = " + std::to_string(s));
  }
}

std::string SdpInstance::to_json() const {
  json j;
  j["n"] = n;
  j["m"] = m;
  j["s"] = s;
  j["R"] = R;
  j["r"] = r;
  j["C"] = matrix_to_json(C);
  json as = json::array();
  for (const auto& a : A) as.push_back(matrix_to_json(a));
  j["A"] = as;
  j["b"] = std::vector<double>(b.data(), b.data() + b.size());
  return j.dump();
}

SdpInstance SdpInstance::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInstance(std::string("invariant 'well-formed JSON' violated: ") + e.what());
  }
  SdpInstance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.m = j.at("m").get<int>();
    inst.s = j.at("s").get<int>();
    inst.R = j.at("R").get<double>();
    inst.r = j.at("r").get<double>();
    inst.C = matrix_from_json(j.at("C"), "C");
    for (std::size_t k = 0; k < j.at("A").size(); ++k)
      inst.A.push_back(matrix_from_json(j.at("A")[k], "A_" + std::to_string(k + 1)));
    const auto bv = j.at("b").get<std::vector<double>>();
    inst.b = Eigen::Map<const RealVector>(bv.data(), static_cast<Eigen::Index>(bv.size()));
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("invariant 'required fields' violated: ") + e.what());
  }
  inst.validate();
  inst.C = hermitian_part(inst.C);
  for (auto& a : inst.A) a = hermitian_part(a);
  return inst;
}

SdpInstance SdpInstance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance("invariant 'readable file' violated: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

SdpInstance make_instance(const Matrix& C, std::vector<Matrix> A, const RealVector& b, double R, double r, int s) {
  SdpInstance inst;
  inst.n = static_cast<int>(C.rows());
  inst.m = static_cast<int>(A.size());
  inst.C = hermitian_part(C);
  for (auto& a : A) a = hermitian_part(a);
  inst.A = std::move(A);
  inst.b = b;
  inst.R = R;
  inst.r = r;
  inst.s = s > 0 ? s : std::max(1, inst.max_row_nonzeros());
  inst.validate();
  return inst;
}

SparseOracle::SparseOracle(const SdpInstance& inst, QueryLedger* ledger) : inst_(inst), ledger_(ledger) {
  mats_.reserve(inst.m + 1);
  for (int j = 0; j <= inst.m; ++j) mats_.push_back(inst.constraint(j));
  cols_.resize(mats_.size());
  for (std::size_t j = 0; j < mats_.size(); ++j) {
    const Matrix& a = mats_[j];
    cols_[j].resize(inst.n);
    for (int k = 0; k < inst.n; ++k)
      for (int i = 0; i < inst.n; ++i)
        if (a(k, i) != cplx(0.0, 0.0)) cols_[j][k].push_back(i);
  }
}

void SparseOracle::check_jk(int j, int k) const {
  if (j < 0 || j > inst_.m) throw std::out_of_range("SparseOracle: constraint index out of range");
  if (k < 0 || k >= inst_.n) throw std::out_of_range("SparseOracle: row index out of range");
}

SparseAnswer SparseOracle::sparse_access(int j, int k, int l) const {
  check_jk(j, k);
  if (l < 1 || l > inst_.s) throw std::out_of_range("SparseOracle: l outside [1, s]");
  charge_if(ledger_, Counter::SparseIndex);
  const auto& row = cols_[j][k];
  if (static_cast<std::size_t>(l) > row.size()) return {l, true};
  return {row[l - 1], false};
}

cplx SparseOracle::entry_access(int j, int k, int i) const {
  check_jk(j, k);
  if (i < 0 || i >= inst_.n) throw std::out_of_range("SparseOracle: column index out of range");
  charge_if(ledger_, Counter::SparseEntry);
  return mats_[j](k, i);
}

double SparseOracle::b_access(int j) const {
  if (j < 1 || j > inst_.m) throw std::out_of_range("SparseOracle: b index out of range");
  charge_if(ledger_, Counter::BVector);
  return inst_.b(j - 1);
}

BlockEncoding to_block_encoding_sparse(const SparseOracle& oracle, int j, double eps) {
  if (!(eps > 0)) throw ContractViolation("to_block_encoding_sparse: eps must be positive");
  if (j < 0 || j > oracle.instance().m) throw std::out_of_range("to_block_encoding_sparse: index out of range");
  const double s = oracle.instance().s;
  BlockEncoding enc = dilate(oracle.matrix(j), s);
  enc.epsilon = eps;
  enc.reported_ancillas = static_cast<int>(std::ceil(std::log2(oracle.instance().n))) +
                          std::max(1, static_cast<int>(std::ceil(std::log2(s / eps))));
  CostVector c;
  c.c[static_cast<int>(Counter::SparseIndex)] = cost::kSparseIndexPerBlock;
  c.c[static_cast<int>(Counter::SparseEntry)] = cost::kSparseEntryPerBlock;
  enc.cost = c;
  charge_if(oracle.ledger(), Formula::SparseToBlock, c);
  return enc;
}

Matrix StateTerm::reconstruct() const {
  const int n = rho_plus.dim();
  return mu_plus * rho_plus.matrix() - mu_minus * rho_minus.matrix() + mu_id * Matrix::Identity(n, n);
}

void StateDecomposition::validate(const SdpInstance* inst) const {
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const auto& t = terms[j];
    if (t.mu_plus < 0 || t.mu_minus < 0) throw ContractViolation("StateDecomposition: negative mu");
    const double w = t.mu_plus + t.mu_minus + std::abs(t.mu_id);
    if (w > B * (1 + 1e-12)) {
      std::ostringstream os;
      os << "StateDecomposition: mu+ + mu- + |muI| = " << w << " exceeds B = " << B << " at j = " << j;
      throw ContractViolation(os.str());
    }
    if (inst) {
      const double err = operator_norm(inst->constraint(static_cast<int>(j)) - t.reconstruct());
      if (err > 1e-9) {
        std::ostringstream os;
        os << "StateDecomposition: reconstruction error " << err << " at j = " << j;
        throw ContractViolation(os.str());
      }
    }
  }
}

StateTerm make_state_term(double mu_plus, const DensityOperator& rho_plus, double mu_minus,
                          const DensityOperator& rho_minus, double mu_id) {
  StateTerm t;
  t.mu_plus = mu_plus;
  t.mu_minus = mu_minus;
  t.mu_id = mu_id;
  t.rho_plus = rho_plus;
  t.rho_minus = rho_minus;
  t.g_plus = purify(rho_plus);
  t.g_minus = purify(rho_minus);
  return t;
}

StateDecomposition decompose_instance(const SdpInstance& inst) {
  StateDecomposition d;
  d.n = inst.n;
  const int n = inst.n;
  const DensityOperator mixed = DensityOperator::maximally_mixed(n);
  for (int j = 0; j <= inst.m; ++j) {
    const Matrix a = inst.constraint(j);
    const cplx c0 = a(0, 0);
    if ((a - c0 * Matrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0) {
      d.terms.push_back(make_state_term(0.0, mixed, 0.0, mixed, c0.real()));
      continue;
    }
    const Eigh e = eigh(a);
    Matrix pos = Matrix::Zero(n, n), neg = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const Matrix proj = e.vectors.col(i) * e.vectors.col(i).adjoint();
      if (e.values(i) > 0) pos += e.values(i) * proj;
      if (e.values(i) < 0) neg -= e.values(i) * proj;
    }
    const double mp = pos.trace().real(), mm = neg.trace().real();
    const DensityOperator rp = mp > 0 ? DensityOperator(Matrix(pos / mp)) : mixed;
    const DensityOperator rm = mm > 0 ? DensityOperator(Matrix(neg / mm)) : mixed;
    d.terms.push_back(make_state_term(mp, rp, mm, rm, 0.0));
  }
  for (const auto& t : d.terms) d.B = std::max(d.B, t.mu_plus + t.mu_minus + std::abs(t.mu_id));
  return d;
}

BlockEncoding to_block_encoding_state(const StateDecomposition& decomp, int j, QueryLedger* ledger) {
  if (j < 0 || j >= static_cast<int>(decomp.terms.size()))
    throw std::out_of_range("to_block_encoding_state: index out of range");
  const StateTerm& t = decomp.terms[j];
  const double w = t.mu_plus + t.mu_minus + std::abs(t.mu_id);
  if (w > decomp.B * (1 + 1e-12)) throw ContractViolation("to_block_encoding_state: mu weights exceed B");
  std::vector<BlockEncoding> encs;
  encs.push_back(purified_density_encoding(t.g_plus, nullptr));
  encs.push_back(purified_density_encoding(t.g_minus, nullptr));
  encs.push_back(identity_encoding(decomp.n));
  RealVector y(3);
  y << t.mu_plus, -t.mu_minus, t.mu_id;
  BlockEncoding out = linear_combination(encs, make_prep_pair(y, decomp.B), nullptr);
  CostVector c;
  c.c[static_cast<int>(Counter::StatePrep)] = cost::kStatePrepPerBlock;
  c.c[static_cast<int>(Counter::Mu)] = cost::kMuPerBlock;
  out.cost = c;
  out.target = t.reconstruct();
  charge_if(ledger, Formula::StateToBlock, c);
  return out;
}

OperatorOracle::OperatorOracle(const SdpInstance& inst, double alpha) : alpha_(alpha), a_(1) {
  for (int j = 0; j <= inst.m; ++j) encs_.push_back(dilate(inst.constraint(j), alpha));
}

OperatorOracle::OperatorOracle(std::vector<BlockEncoding> encs, double alpha) : encs_(std::move(encs)), alpha_(alpha) {
  if (encs_.empty()) throw ContractViolation("OperatorOracle: no encodings");
  a_ = encs_.front().ancillas;
  for (const auto& e : encs_) {
    if (std::abs(e.alpha - alpha_) > 1e-12 * alpha_) throw ContractViolation("OperatorOracle: alpha mismatch");
    if (e.ancillas != a_) throw ContractViolation("OperatorOracle: ancilla count mismatch");
  }
}

const BlockEncoding& OperatorOracle::query(int j, QueryLedger* ledger) const {
  if (j < 0 || j >= size()) throw std::out_of_range("OperatorOracle: index out of range");
  charge_if(ledger, Counter::OperatorU);
  return encs_[j];
}

HamiltonianOracle::HamiltonianOracle(const SdpInstance& inst, std::vector<double> t) : t_(std::move(t)) {
  if (static_cast<int>(t_.size()) != inst.m + 1) throw DimensionMismatch("HamiltonianOracle: need one time scale per index 0..m");
  tau_ = 0.0;
  for (int j = 0; j <= inst.m; ++j) {
    if (!(t_[j] > 0)) throw ContractViolation("HamiltonianOracle: time scales must be positive");
    tau_ = std::max(tau_, t_[j]);
    mats_.push_back(inst.constraint(j));
    const Eigh e = eigh(mats_.back());
    const Vector ph = (cplx(0.0, 1.0 / t_[j]) * e.values.cast<cplx>()).array().exp().matrix();
    evo_.push_back(e.vectors * ph.asDiagonal() * e.vectors.adjoint());
  }
}

const Matrix& HamiltonianOracle::evolution(int j, QueryLedger* ledger) const {
  if (j < 0 || j >= size()) throw std::out_of_range("HamiltonianOracle: index out of range");
  charge_if(ledger, Counter::Hamiltonian);
  return evo_[j];
}

BlockEncoding hamiltonian_to_operator(const HamiltonianOracle& oracle, int j, double eps, QueryLedger* ledger) {
  if (j < 0 || j >= oracle.size()) throw std::out_of_range("hamiltonian_to_operator: index out of range");
  if (oracle.t(j) < 2.0) throw ContractViolation("hamiltonian_to_operator: t_j must be >= 2");
  if (!(eps > 0)) throw ContractViolation("hamiltonian_to_operator: eps must be positive");
  const double tau = oracle.tau();
  const double tj = oracle.t(j);
  const Matrix& a = oracle.backing(j);
  TaylorSpec spec;
  spec.x0 = 0.0;
  spec.r = 1.0;
  spec.delta = std::numbers::pi / 2 - 1;
  spec.K = 2.0;
  spec.coeff = [](int l) { return l == 1 ? 1.0 : 0.0; };
  spec.f = [](double x) { return x; };
  spec.eps_prime = eps / (2.0 * tau);
  const Matrix h = a / tj;
  const std::int64_t M = next_pow2(spec.r * std::log(1.0 / spec.eps_prime) / spec.delta);
  const auto ctrl = controlled_simulation_exact(h, M, std::numbers::pi / (2 * (spec.r + spec.delta)), spec.eps_prime);
  const BlockEncoding f = smooth_function(ctrl, spec);
  // f encodes A_j / t_j with normalization 2; rescale to the common 2 tau.
  BlockEncoding out = dilate(a, 2.0 * tau);
  out.epsilon = eps;
  out.reported_ancillas = f.reported_ancillas;
  out.cost = CostVector::of(Counter::Hamiltonian, cost::hamiltonian_to_operator(eps));
  charge_if(ledger, Formula::HamiltonianToOperator, out.cost);
  return out;
}

StateTerm hamiltonian_to_state(const HamiltonianOracle& oracle, int j, double eps, QueryLedger* ledger) {
  if (j < 0 || j >= oracle.size()) throw std::out_of_range("hamiltonian_to_state: index out of range");
  const Matrix& a = oracle.backing(j);
  if (!is_exactly_diagonal(a)) throw ContractViolation("hamiltonian_to_state: A_j must be diagonal");
  if (oracle.t(j) < 2.0) throw ContractViolation("hamiltonian_to_state: t_j must be >= 2");
  if (!(eps > 0)) throw ContractViolation("hamiltonian_to_state: eps must be positive");
  const int n = static_cast<int>(a.rows());
  const double tj = oracle.t(j);
  const Matrix id = Matrix::Identity(n, n);
  // sqrt(x/2) around x0 = 1 prepares the amplitudes of (I + A/t)/2.
  TaylorSpec spec;
  spec.x0 = 1.0;
  spec.r = 0.5;
  spec.delta = std::numbers::pi / 6 - 0.5;
  spec.K = 1.0;
  spec.coeff = [](int l) {
    double c = 1.0;
    for (int k = 0; k < l; ++k) c *= (0.5 - k) / (k + 1);
    return c / std::sqrt(2.0);
  };
  spec.f = [](double x) { return std::sqrt(x / 2.0); };
  spec.eps_prime = eps;
  for (double sign : {1.0, -1.0}) {
    const Matrix h = id + sign * a / tj;
    const std::int64_t M = next_pow2(spec.r * std::log(1.0 / eps) / spec.delta);
    smooth_function(controlled_simulation_exact(h, M, std::numbers::pi / (2 * (spec.r + spec.delta)), eps), spec);
  }
  const DensityOperator rp(Matrix((id + a / tj) / (2.0 * n)));
  const DensityOperator rm(Matrix((id - a / tj) / (2.0 * n)));
  const double mu = n * tj;
  charge_if(ledger, Formula::HamiltonianToOperator, Counter::Hamiltonian, cost::hamiltonian_to_operator(eps));
  return make_state_term(mu, rp, mu, rm, 0.0);
}

StateDecomposition hamiltonian_to_state_decomposition(const HamiltonianOracle& oracle, double eps, QueryLedger* ledger) {
  StateDecomposition d;
  d.n = static_cast<int>(oracle.backing(0).rows());
  d.B = 2.0 * d.n * oracle.tau();
  for (int j = 0; j < oracle.size(); ++j) d.terms.push_back(hamiltonian_to_state(oracle, j, eps, ledger));
  return d;
}

}  // namespace qsdp
