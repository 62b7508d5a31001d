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

#include "qsdp/block_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsdp/cost.hpp"

namespace qsdp {

namespace {

int log2_exact(std::int64_t x) {
  int k = 0;
  while ((std::int64_t{1} << k) < x) ++k;
  return k;
}

bool is_pow2(std::int64_t x) { return x > 0 && (x & (x - 1)) == 0; }

// Embeds U into a larger unitary by a direct sum with the identity.
Matrix embed(const Matrix& u, Eigen::Index dim) {
  Matrix out = Matrix::Identity(dim, dim);
  out.topLeftCorner(u.rows(), u.cols()) = u;
  return out;
}

Matrix hermitian_block(const BlockEncoding& enc, const char* who) {
  Matrix h = enc.block();
  if (hermitian_residual(h) > kHermitianReject)
    throw ContractViolation(std::string(who) + ": encoded block is not Hermitian");
  return (h + h.adjoint()) * 0.5;
}

// Unitary on (2^a n) whose top-left n x n block is zero: flips the lowest
// ancilla qubit.
Matrix zero_block_unitary(int a, int n) {
  const Eigen::Index dim = (Eigen::Index{1} << a) * n;
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index anc = i / n, sys = i % n;
    u((anc ^ 1) * n + sys, i) = 1.0;
  }
  return u;
}

}  // namespace

std::int64_t next_pow2(double x) {
  std::int64_t p = 1;
  while (static_cast<double>(p) < x) p <<= 1;
  return p;
}

Matrix BlockEncoding::block() const { return alpha * unitary.topLeftCorner(n, n); }

double BlockEncoding::target_error() const {
  if (!target) return 0.0;
  return operator_norm(*target - block());
}

Matrix extract_block(const BlockEncoding& enc) { return enc.block(); }

BlockEncoding dilate(const Matrix& a, double alpha) {
  if (a.rows() != a.cols()) throw DimensionMismatch("dilate: matrix is not square");
  if (!(alpha > 0)) throw ContractViolation("dilate: alpha must be positive");
  if (hermitian_residual(a) > kHermitianReject) throw ContractViolation("dilate: matrix is not Hermitian");
  const Matrix h = (a + a.adjoint()) * 0.5;
  const Eigh e = eigh(h);
  const double norm = e.values.cwiseAbs().maxCoeff();
  if (norm > alpha * (1 + 1e-12) + 1e-14) {
    std::ostringstream os;
    os << "dilate: ||A|| = " << norm << " exceeds alpha = " << alpha;
    throw ContractViolation(os.str());
  }
  const int n = static_cast<int>(h.rows());
  const Matrix b = h / alpha;
  const Matrix s = apply_function(e, [alpha](double x) {
    const double v = x / alpha;
    return std::sqrt(std::max(0.0, 1.0 - v * v));
  });
  BlockEncoding enc;
  enc.unitary.resize(2 * n, 2 * n);
  enc.unitary << b, s, s, -b;
  enc.alpha = alpha;
  enc.ancillas = 1;
  enc.reported_ancillas = 1;
  enc.n = n;
  enc.cost = CostVector::of(Counter::OperatorU);
  enc.target = h;
  return enc;
}

BlockEncoding dilate_contraction(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("dilate_contraction: matrix is not square");
  const int n = static_cast<int>(m.rows());
  if (operator_norm(m) > 1 + 1e-12) throw ContractViolation("dilate_contraction: ||M|| exceeds 1");
  const Matrix id = Matrix::Identity(n, n);
  BlockEncoding enc;
  enc.unitary.resize(2 * n, 2 * n);
  enc.unitary << m, psd_sqrt(id - m * m.adjoint()), psd_sqrt(id - m.adjoint() * m), -m.adjoint();
  enc.alpha = 1.0;
  enc.ancillas = 1;
  enc.reported_ancillas = 1;
  enc.n = n;
  enc.cost = CostVector::of(Counter::OperatorU);
  enc.target = m;
  return enc;
}

BlockEncoding pad_ancillas(const BlockEncoding& enc, int extra) {
  if (extra <= 0) return enc;
  BlockEncoding out = enc;
  out.unitary = kron(Matrix::Identity(Eigen::Index{1} << extra, Eigen::Index{1} << extra), enc.unitary);
  out.ancillas = enc.ancillas + extra;
  out.reported_ancillas = enc.reported_ancillas + extra;
  return out;
}

BlockEncoding identity_encoding(int n) {
  BlockEncoding enc;
  enc.unitary = Matrix::Identity(n, n);
  enc.n = n;
  enc.target = Matrix::Identity(n, n);
  return enc;
}

BlockEncoding zero_encoding(int n, double alpha) {
  BlockEncoding enc;
  enc.unitary = zero_block_unitary(1, n);
  enc.alpha = alpha;
  enc.ancillas = 1;
  enc.reported_ancillas = 1;
  enc.n = n;
  enc.target = Matrix::Zero(n, n);
  return enc;
}

Purification purify(const DensityOperator& rho) {
  const int n = rho.dim();
  const Eigh e = eigh(rho.matrix());
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (e.values(i) > 1e-14) support.push_back(i);
  const int anc = static_cast<int>(next_pow2(std::max<double>(1.0, static_cast<double>(support.size()))));
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * 2 * anc;
  Vector psi = Vector::Zero(dim);
  double tr = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const int i = support[k];
    const double amp = std::sqrt(e.values(i));
    tr += e.values(i);
    for (int s = 0; s < n; ++s) psi((static_cast<Eigen::Index>(s) * 2 + 0) * anc + k) = amp * e.vectors(s, i);
  }
  const double rest = std::max(0.0, 1.0 - tr);
  psi((0 * 2 + 1) * anc + 0) = std::sqrt(rest);
  psi /= psi.norm();
  Purification p;
  p.G = unitary_with_first_column(psi);
  p.n = n;
  p.anc_dim = anc;
  return p;
}

BlockEncoding purified_density_encoding(const Purification& p, QueryLedger* ledger, Counter base) {
  const Eigen::Index n = p.n, A = p.anc_dim;
  const Eigen::Index ng = n * 2 * A;
  if (p.G.rows() != ng || p.G.cols() != ng)
    throw DimensionMismatch("purified_density_encoding: G has the wrong dimension");
  if (unitarity_residual(p.G) > 1e-9) throw ContractViolation("purified_density_encoding: G is not unitary");
  const Eigen::Index outer = 2 * n;  // [in n][f' 2]
  const Eigen::Index dim = outer * ng;
  // Order [in][f'][s][flag][anc]; X = I (x) G.
  Matrix y = Matrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < outer; ++b) {
    // SWAP exchanges (in, f') with (s, flag); the anc factor is untouched.
    for (Eigen::Index g = 0; g < ng; ++g) {
      const Eigen::Index sf = g / A, anc = g % A;
      const Eigen::Index src = b * ng + g;
      const Eigen::Index dst = sf * ng + b * A + anc;
      y.row(dst) = Matrix::Zero(1, dim);
      y.block(dst, b * ng, 1, ng) = p.G.row(g);
      (void)src;
    }
  }
  const Matrix gd = p.G.adjoint();
  Matrix v(dim, dim);
  for (Eigen::Index b = 0; b < outer; ++b) v.middleRows(b * ng, ng) = gd * y.middleRows(b * ng, ng);
  // Reorder to [f'][s][flag][anc][in] so that the input register is least significant.
  std::vector<Eigen::Index> perm(dim);
  for (Eigen::Index in = 0; in < n; ++in)
    for (Eigen::Index f = 0; f < 2; ++f)
      for (Eigen::Index g = 0; g < ng; ++g) perm[(in * 2 + f) * ng + g] = (f * ng + g) * n + in;
  Matrix w(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) w(perm[r], perm[c]) = v(r, c);
  const Eigen::Index anc_dim = dim / n;
  const int a = log2_exact(anc_dim);
  BlockEncoding enc;
  enc.unitary = embed(w, (Eigen::Index{1} << a) * n);
  enc.alpha = 1.0;
  enc.ancillas = a;
  enc.reported_ancillas = 1 + log2_exact(n) + 1 + log2_exact(A);
  enc.n = static_cast<int>(n);
  enc.cost = CostVector::of(base, 2);
  Matrix rho = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < A; ++k) {
    Vector col(n);
    for (Eigen::Index s = 0; s < n; ++s) col(s) = p.G((s * 2 + 0) * A + k, 0);
    rho += col * col.adjoint();
  }
  enc.target = rho;
  charge_if(ledger, enc.cost);
  return enc;
}

int StatePrepPair::qubits() const { return log2_exact(c.size()); }

double StatePrepPair::reconstruction_error() const {
  double err = 0.0;
  for (Eigen::Index j = 0; j < target.size(); ++j)
    err += std::abs(beta * std::conj(c(j)) * d(j) - target(j));
  return err;
}

void StatePrepPair::validate() const {
  if (c.size() != d.size() || !is_pow2(c.size()))
    throw ContractViolation("StatePrepPair: amplitude vectors must share a power-of-two length");
  if (std::abs(c.norm() - 1.0) > 1e-9 || std::abs(d.norm() - 1.0) > 1e-9)
    throw ContractViolation("StatePrepPair: amplitude vectors must be unit norm");
  if (symmetric && (c - d).cwiseAbs().maxCoeff() > 0)
    throw ContractViolation("StatePrepPair: symmetric pair with c != d");
  const double err = reconstruction_error();
  if (err > precision + 1e-12) {
    std::ostringstream os;
    os << "StatePrepPair: reconstruction error " << err << " exceeds precision " << precision;
    throw ContractViolation(os.str());
  }
}

StatePrepPair make_prep_pair(const RealVector& y, double beta) {
  const double mass = y.cwiseAbs().sum();
  if (beta < mass * (1 - 1e-12)) throw ContractViolation("make_prep_pair: beta below ||y||_1");
  const Eigen::Index len = next_pow2(static_cast<double>(y.size() + 1));
  StatePrepPair pair;
  pair.c = Vector::Zero(len);
  pair.d = Vector::Zero(len);
  pair.beta = beta;
  pair.symmetric = true;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double amp = std::sqrt(std::abs(y(j)) / beta);
    pair.c(j) = amp;
    pair.d(j) = y(j) < 0 ? -amp : amp;
    if (y(j) < 0) pair.symmetric = false;
  }
  const double rest = std::sqrt(std::max(0.0, 1.0 - mass / beta));
  pair.c(y.size()) = rest;
  pair.d(y.size()) = rest;
  pair.c /= pair.c.norm();
  pair.d /= pair.d.norm();
  pair.target = y;
  pair.precision = pair.reconstruction_error();
  return pair;
}

BlockEncoding linear_combination(const std::vector<BlockEncoding>& encs, const StatePrepPair& pair,
                                 QueryLedger* ledger) {
  if (encs.empty()) throw ContractViolation("linear_combination: no encodings");
  const int n = encs.front().n;
  const double alpha = encs.front().alpha;
  int a = 1;
  double eps2 = 0.0;
  for (const auto& e : encs) {
    if (e.n != n) throw DimensionMismatch("linear_combination: encodings act on different dimensions");
    if (std::abs(e.alpha - alpha) > 1e-12 * std::max(1.0, alpha))
      throw ContractViolation("linear_combination: encodings must share alpha");
    a = std::max(a, e.ancillas);
    eps2 = std::max(eps2, e.epsilon);
  }
  const Eigen::Index P = pair.c.size();
  if (pair.d.size() != P || !is_pow2(P)) throw DimensionMismatch("linear_combination: malformed pair");
  if (static_cast<Eigen::Index>(encs.size()) > P)
    throw DimensionMismatch("linear_combination: pair shorter than the encoding list");
  const Eigen::Index D = (Eigen::Index{1} << a) * n;
  // Slots beyond the list get a zero block, so padding mass contributes nothing.
  std::vector<Matrix> us;
  us.reserve(P);
  for (const auto& e : encs) us.push_back(pad_ancillas(e, a - e.ancillas).unitary);
  const Matrix zero = zero_block_unitary(a, n);
  while (static_cast<Eigen::Index>(us.size()) < P) us.push_back(zero);
  const Matrix pl = unitary_with_first_column(pair.c);
  const Matrix pr = unitary_with_first_column(pair.d);
  Matrix out = Matrix::Zero(P * D, P * D);
  for (Eigen::Index i = 0; i < P; ++i)
    for (Eigen::Index k = 0; k < P; ++k) {
      auto blk = out.block(i * D, k * D, D, D);
      for (Eigen::Index j = 0; j < P; ++j) {
        const cplx w = std::conj(pl(j, i)) * pr(j, k);
        if (w != cplx(0.0, 0.0)) blk += w * us[j];
      }
    }
  BlockEncoding res;
  res.unitary = std::move(out);
  res.alpha = alpha * pair.beta;
  res.ancillas = a + pair.qubits();
  int rep = 0;
  for (const auto& e : encs) rep = std::max(rep, e.reported_ancillas);
  res.reported_ancillas = rep + pair.qubits();
  res.epsilon = alpha * pair.precision + pair.beta * eps2;
  res.n = n;
  for (const auto& e : encs) res.cost = res.cost + e.cost;
  bool have_targets = true;
  for (const auto& e : encs) have_targets = have_targets && e.target.has_value();
  if (have_targets) {
    Matrix t = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < encs.size() && static_cast<Eigen::Index>(j) < pair.target.size(); ++j)
      t += pair.target(j) * *encs[j].target;
    res.target = t;
  }
  charge_if(ledger, res.cost);
  return res;
}

BlockEncoding hamiltonian_simulation(const BlockEncoding& enc, double t, double eps, QueryLedger* ledger) {
  if (!(eps > 0)) throw ContractViolation("hamiltonian_simulation: eps must be positive");
  const int n = enc.n;
  if (t == 0.0) {
    BlockEncoding id = pad_ancillas(identity_encoding(n), enc.ancillas + 2);
    id.reported_ancillas = enc.reported_ancillas + 2;
    id.epsilon = eps;
    return id;
  }
  const double need = eps / std::abs(2 * t);
  if (enc.epsilon > need * (1 + 1e-9))
    throw PreconditionError("encoding-precision", "input encoding error exceeds eps/|2t|");
  const Matrix h = hermitian_block(enc, "hamiltonian_simulation");
  const Eigh e = eigh(h);
  const Vector ph = (cplx(0.0, t) * e.values.cast<cplx>()).array().exp().matrix();
  const Matrix u = e.vectors * ph.asDiagonal() * e.vectors.adjoint();
  BlockEncoding out;
  const int a = enc.ancillas + 2;
  out.unitary = kron(Matrix::Identity(Eigen::Index{1} << a, Eigen::Index{1} << a), u);
  out.alpha = 1.0;
  out.ancillas = a;
  out.reported_ancillas = enc.reported_ancillas + 2;
  out.epsilon = eps;
  out.n = n;
  if (enc.target) {
    const Eigh et = eigh((*enc.target + enc.target->adjoint()) * 0.5);
    const Vector pt = (cplx(0.0, t) * et.values.cast<cplx>()).array().exp().matrix();
    out.target = et.vectors * pt.asDiagonal() * et.vectors.adjoint();
  } else {
    out.target = u;
  }
  out.cost = enc.cost.scaled(cost::hamiltonian_simulation(enc.alpha, t, eps));
  charge_if(ledger, Formula::HamiltonianSimulation, out.cost);
  return out;
}

Matrix ControlledSimUnitary::dense() const {
  const Eigen::Index dim = 2 * M * n;
  Matrix w = Matrix::Zero(dim, dim);
  for (std::int64_t u = 0; u < 2 * M; ++u) w.block(u * n, u * n, n, n) = blocks[u];
  return w;
}

namespace {

ControlledSimUnitary build_controlled(const Matrix& h, std::int64_t M, double tau) {
  if (!is_pow2(M)) throw ContractViolation("controlled_simulation: M must be a power of two");
  ControlledSimUnitary c;
  c.M = M;
  c.J = log2_exact(M);
  c.tau = tau;
  c.n = static_cast<int>(h.rows());
  c.H = h;
  const Eigh e = eigh(h);
  c.blocks.reserve(2 * M);
  for (std::int64_t u = 0; u < 2 * M; ++u) {
    const double m = static_cast<double>(ControlledSimUnitary::signed_index(u, M));
    const Vector ph = (cplx(0.0, m * tau) * e.values.cast<cplx>()).array().exp().matrix();
    c.blocks.push_back(e.vectors * ph.asDiagonal() * e.vectors.adjoint());
  }
  return c;
}

}  // namespace

ControlledSimUnitary controlled_simulation(const BlockEncoding& enc, std::int64_t M, double tau, double eps,
                                          QueryLedger* ledger) {
  if (!is_pow2(M)) throw ContractViolation("controlled_simulation: M must be a power of two");
  if (!(eps > 0)) throw ContractViolation("controlled_simulation: eps must be positive");
  const int J = log2_exact(M);
  const double need = eps / std::abs(2.0 * (J + 1) * (J + 1) * static_cast<double>(M) * tau);
  if (enc.epsilon > need * (1 + 1e-9))
    throw PreconditionError("encoding-precision", "input encoding error exceeds eps/|2(J+1)^2 M tau|");
  ControlledSimUnitary c = build_controlled(hermitian_block(enc, "controlled_simulation"), M, tau);
  c.error = eps;
  if (enc.target) c.target_H = (*enc.target + enc.target->adjoint()) * 0.5;
  c.alpha = enc.alpha;
  c.reported_ancillas = enc.reported_ancillas + 2;
  c.cost = enc.cost.scaled(cost::controlled_simulation(enc.alpha, M, tau, eps));
  charge_if(ledger, Formula::ControlledSimulation, c.cost);
  return c;
}

ControlledSimUnitary controlled_simulation_exact(const Matrix& h, std::int64_t M, double tau, double eps) {
  if (hermitian_residual(h) > kHermitianReject) throw ContractViolation("controlled_simulation: H not Hermitian");
  ControlledSimUnitary c = build_controlled((h + h.adjoint()) * 0.5, M, tau);
  c.error = eps;
  c.target_H = c.H;
  return c;
}

double taylor_k_sum(const TaylorSpec& spec, double* tail) {
  const double rad = spec.r + spec.delta;
  double sum = 0.0;
  double prev = -1.0;
  int zeros = 0;
  int good_ratios = 0;
  double est_tail = 0.0;
  double pw = 1.0;
  for (int l = 0; l < 20000; ++l) {
    const double term = std::abs(spec.coeff(l)) * pw;
    if (!std::isfinite(term)) throw ContractViolation("smooth_function: non-finite Taylor term");
    sum += term;
    pw *= rad;
    if (term == 0.0) {
      if (++zeros >= 32) {
        est_tail = 0.0;
        break;
      }
      prev = 0.0;
      continue;
    }
    zeros = 0;
    if (prev > 0.0) {
      const double ratio = term / prev;
      good_ratios = ratio < 0.95 ? good_ratios + 1 : 0;
      if (good_ratios >= 8) {
        est_tail = term * ratio / (1.0 - ratio);
        if (est_tail < 1e-13 * spec.K) break;
      }
    }
    prev = term;
  }
  if (tail) *tail = est_tail;
  return sum + est_tail;
}

int taylor_truncation_order(const TaylorSpec& spec) {
  const double rho = spec.r / (spec.r + spec.delta);
  const double l = std::log(2.0 / (spec.eps_prime * (1.0 - rho))) / std::log(1.0 / rho) - 1.0;
  return std::max(1, static_cast<int>(std::ceil(l)));
}

BlockEncoding smooth_function(const ControlledSimUnitary& ctrl, const TaylorSpec& spec) {
  if (!(spec.delta > 0) || spec.delta > spec.r * (1 + 1e-12))
    throw ContractViolation("smooth_function: delta must lie in (0, r]");
  if (!(spec.eps_prime > 0)) throw ContractViolation("smooth_function: eps' must be positive");
  const int n = ctrl.n;
  const Eigh e = eigh(ctrl.H);
  const double spread = (e.values.array() - spec.x0).abs().maxCoeff();
  if (spread > spec.r * (1 + 1e-12) + 1e-12) {
    std::ostringstream os;
    os << "smooth_function: ||H - x0 I|| = " << spread << " exceeds r = " << spec.r;
    throw PreconditionError("spectral-radius", os.str());
  }
  double tail = 0.0;
  const double ksum = taylor_k_sum(spec, &tail);
  if (tail >= spec.K / 100.0 || ksum > spec.K * (1 + 1e-9)) {
    std::ostringstream os;
    os << "smooth_function: sum (r+delta)^l |a_l| = " << ksum << " (tail " << tail << ") exceeds K = " << spec.K;
    throw PreconditionError("coefficient-sum", os.str());
  }
  const Matrix fh = apply_function(e, spec.f);
  // Independent path: truncated Taylor series by Horner on H - x0 I.
  const int order = taylor_truncation_order(spec);
  const Matrix shifted = ctrl.H - spec.x0 * Matrix::Identity(n, n);
  Matrix horner = spec.coeff(order) * Matrix::Identity(n, n);
  for (int l = order - 1; l >= 0; --l) {
    horner = shifted * horner;
    horner.diagonal().array() += spec.coeff(l);
  }
  const double gap = operator_norm(Matrix((horner - fh + (horner - fh).adjoint()) * 0.5));
  if (gap > spec.K * spec.eps_prime) {
    std::ostringstream os;
    os << "smooth_function: Taylor validator disagrees by " << gap << " > K eps' = " << spec.K * spec.eps_prime;
    throw ContractViolation(os.str());
  }
  BlockEncoding out = dilate(fh, spec.K);
  out.epsilon = spec.K * spec.eps_prime;
  const double extra = std::log2(std::max(2.0, spec.r * std::log(1.0 / spec.eps_prime) / spec.delta));
  out.reported_ancillas = ctrl.reported_ancillas + static_cast<int>(std::ceil(extra));
  out.cost = ctrl.cost;
  if (ctrl.target_H) out.target = matrix_function(HermitianOperator(*ctrl.target_H), spec.f).matrix();
  return out;
}

BlockEncoding smooth_function(const BlockEncoding& enc, const TaylorSpec& spec, QueryLedger* ledger) {
  const std::int64_t M = next_pow2(spec.r * std::log(1.0 / spec.eps_prime) / spec.delta);
  const double tau = std::numbers::pi / (2.0 * (spec.r + spec.delta));
  return smooth_function(controlled_simulation(enc, M, tau, spec.eps_prime, ledger), spec);
}

namespace {

BlockEncoding power_encoding(const BlockEncoding& enc, double kappa, double c, double eps, bool negative,
                             QueryLedger* ledger) {
  const char* who = negative ? "negative_power" : "positive_power";
  if (kappa < 2.0) throw ContractViolation(std::string(who) + ": kappa must be >= 2");
  if (!(c > 0) || (!negative && c > 1.0)) throw ContractViolation(std::string(who) + ": exponent out of range");
  if (!(eps > 0)) throw ContractViolation(std::string(who) + ": eps must be positive");
  const Matrix h = hermitian_block(enc, who);
  const Eigh e = eigh(h);
  const double lo = e.values.minCoeff(), hi = e.values.maxCoeff();
  if (lo < 1.0 / kappa - 1e-9 || hi > 1.0 + 1e-9) {
    std::ostringstream os;
    os << who << ": spectrum [" << lo << ", " << hi << "] outside [1/kappa, 1] with kappa = " << kappa;
    throw PreconditionError("spectrum", os.str());
  }
  const double pc = negative ? -c : c;
  auto fn = [kappa, pc](double x) { return std::pow(std::clamp(x, 1.0 / kappa, 1.0), pc); };
  const Matrix f = apply_function(e, fn);
  const double alpha = negative ? 2.0 * std::pow(kappa, c) : 2.0;
  BlockEncoding out = dilate(f, alpha);
  out.epsilon = eps;
  const double loglog = negative ? std::log2(cost::L(std::pow(kappa, c) / eps)) : std::log2(cost::L(1.0 / eps));
  out.reported_ancillas = enc.reported_ancillas + 1 + static_cast<int>(std::ceil(loglog));
  if (enc.target) out.target = apply_function(eigh((*enc.target + enc.target->adjoint()) * 0.5), fn);
  const Count q = negative ? cost::negative_power(kappa, c, eps) : cost::positive_power(kappa, eps);
  out.cost = enc.cost.scaled(q);
  charge_if(ledger, negative ? Formula::NegativePower : Formula::PositivePower, out.cost);
  return out;
}

}  // namespace

BlockEncoding negative_power(const BlockEncoding& enc, double kappa, double c, double eps, QueryLedger* ledger) {
  return power_encoding(enc, kappa, c, eps, true, ledger);
}

BlockEncoding positive_power(const BlockEncoding& enc, double kappa, double c, double eps, QueryLedger* ledger) {
  return power_encoding(enc, kappa, c, eps, false, ledger);
}

}  // namespace qsdp
