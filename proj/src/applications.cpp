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

#include "qsdp/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qsdp/cost.hpp"
#include "qsdp/errors.hpp"
#include "qsdp/vector_store.hpp"

namespace qsdp {

// ---------------------------------------------------------------------------
// Lower-bound LP.

LowerBoundLp build_lower_bound_lp(int m, double eps, double tau, char kase, int j_star) {
  if (!(eps > 0 && eps <= 0.5)) throw ContractViolation("build_lower_bound_lp: eps must lie in (0, 1/2]");
  if (m < 2) throw ContractViolation("build_lower_bound_lp: m must be >= 2");
  if (!(tau >= 1)) throw ContractViolation("build_lower_bound_lp: tau must be >= 1");
  if (kase != 'a' && kase != 'b') throw ContractViolation("build_lower_bound_lp: case must be 'a' or 'b'");
  if (kase == 'b' && (j_star < 1 || j_star > m)) throw ContractViolation("build_lower_bound_lp: j* must lie in [1, m]");

  Matrix C = Matrix::Zero(2, 2);
  C(0, 0) = 1.0;
  std::vector<Matrix> A;
  A.reserve(m + 1);
  A.push_back(Matrix::Identity(2, 2));
  RealVector b = RealVector::Ones(m + 1);
  b(0) = 2.0;
  for (int j = 1; j <= m; ++j) {
    Matrix a = Matrix::Identity(2, 2) * 0.5;
    if (kase == 'b' && j == j_star) {
      a(0, 0) = 0.5 + eps;
      a(1, 1) = 0.5 - eps;
    }
    A.push_back(std::move(a));
  }

  LowerBoundLp lp;
  lp.instance = make_instance(C, std::move(A), b, 2.0, 2.0);
  lp.t.assign(m + 2, tau);
  lp.opt = kase == 'a' ? 2.0 : 1.0 / (0.5 + eps);
  lp.kase = kase;
  lp.j_star = kase == 'b' ? j_star : 0;
  lp.eps = eps;
  lp.tau = tau;
  return lp;
}

HamiltonianOracle lower_bound_oracle(const LowerBoundLp& lp) { return HamiltonianOracle(lp.instance, lp.t); }

// ---------------------------------------------------------------------------
// State discrimination.

namespace {

void check_states(const DiscriminationTask& task) {
  if (task.states.empty()) throw ContractViolation("discrimination: at least one state is required");
  const int d = task.states.front().dim();
  for (const auto& s : task.states)
    if (s.dim() != d) throw DimensionMismatch("discrimination: states must share one dimension");
}

bool real_task(const DiscriminationTask& task) {
  for (const auto& s : task.states)
    if (s.matrix().imag().cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

// Hermitian basis of d x d matrices: E_ss, E_st + E_ts, then (when
// requested) -i E_st + i E_ts for s < t.
std::vector<Matrix> hermitian_basis(int d, bool with_imaginary) {
  std::vector<Matrix> out;
  for (int s = 0; s < d; ++s) {
    Matrix e = Matrix::Zero(d, d);
    e(s, s) = 1.0;
    out.push_back(std::move(e));
  }
  for (int s = 0; s < d; ++s)
    for (int t = s + 1; t < d; ++t) {
      Matrix e = Matrix::Zero(d, d);
      e(s, t) = e(t, s) = 1.0;
      out.push_back(std::move(e));
      if (with_imaginary) {
        Matrix f = Matrix::Zero(d, d);
        f(s, t) = cplx(0, -1);
        f(t, s) = cplx(0, 1);
        out.push_back(std::move(f));
      }
    }
  return out;
}

Matrix block_diag_copies(const Matrix& e, int k) { return kron(Matrix::Identity(k, k), e); }

}  // namespace

// Real tasks use the symmetric basis only: the real part of an optimal X is
// optimal, and the antisymmetric constraints hold for any real symmetric X.
SdpInstance build_state_discrimination(const DiscriminationTask& task) {
  check_states(task);
  const int k = static_cast<int>(task.states.size());
  const int d = task.states.front().dim();
  const int n = k * d;
  Matrix C = Matrix::Zero(n, n);
  for (int i = 0; i < k; ++i) C.block(i * d, i * d, d, d) = task.states[i].matrix();

  const std::vector<Matrix> basis = hermitian_basis(d, !real_task(task));
  std::vector<Matrix> A;
  A.reserve(1 + 2 * basis.size());
  A.push_back(Matrix::Identity(n, n));
  RealVector b(1 + 2 * static_cast<int>(basis.size()));
  const double R = d + 1.0;
  b(0) = R;
  int j = 1;
  for (const auto& e : basis) {
    const Matrix big = block_diag_copies(e, k);
    const double tr = e.trace().real();
    A.push_back(big);
    b(j++) = tr;
    A.push_back(-big);
    b(j++) = -tr;
  }
  return make_instance(C, std::move(A), b, R, static_cast<double>(d) * d);
}

DiscriminationResult solve_state_discrimination(const DiscriminationTask& task, double eps, std::uint64_t seed,
                                                QueryLedger* ledger) {
  const SdpInstance inst = build_state_discrimination(task);
  const int k = static_cast<int>(task.states.size());
  const int d = task.states.front().dim();
  const std::vector<Matrix> basis = hermitian_basis(d, !real_task(task));

  SolverConfig cfg;
  cfg.epsilon = eps;
  cfg.model = InputModel::Sparse;
  cfg.seed = seed;
  DiscriminationResult res;
  res.solution = sdp_solve(inst, cfg, ledger);
  res.opt = res.solution.estimate;

  if (res.solution.primal_run.primal_y) {
    const Matrix x = res.solution.primal_run.z * primal_state(*res.solution.primal_run.primal_y, inst).matrix();
    Matrix sum = Matrix::Zero(d, d);
    res.min_povm_eigenvalue = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      Matrix mi = x.block(i * d, i * d, d, d);
      mi = (mi + mi.adjoint()) * 0.5;
      sum += mi;
      res.min_povm_eigenvalue = std::min(res.min_povm_eigenvalue, eigh(mi).values.minCoeff());
      res.povm.push_back(std::move(mi));
    }
    res.povm_residual = operator_norm(sum - Matrix::Identity(d, d));
  }
  res.povm_bound = 3.0 * k * eps * d;

  if (res.solution.dual_run.dual) {
    const RealVector& y = *res.solution.dual_run.dual;
    res.Y = y(1) * Matrix::Identity(d, d);
    for (std::size_t e = 0; e < basis.size(); ++e) {
      const int jp = 2 + 2 * static_cast<int>(e);
      res.Y += (y(jp) - y(jp + 1)) * basis[e];
    }
    res.dual_margin = std::numeric_limits<double>::infinity();
    for (const auto& s : task.states) {
      const Matrix gap = res.Y - s.matrix();
      res.dual_margin = std::min(res.dual_margin, eigh((gap + gap.adjoint()) * 0.5).values.minCoeff());
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// E-optimal design.

namespace {

void check_design(const DesignTask& task) {
  if (task.u.empty()) throw ContractViolation("e_optimal: at least one experiment is required");
  if (task.sigma.size() != task.u.size()) throw DimensionMismatch("e_optimal: one noise scale per experiment");
  const auto d = task.u.front().size();
  for (std::size_t i = 0; i < task.u.size(); ++i) {
    if (task.u[i].size() != d) throw DimensionMismatch("e_optimal: experiment vectors must share one dimension");
    if (std::abs(task.u[i].norm() - 1.0) > 1e-9) throw ContractViolation("e_optimal: experiment vectors must be unit");
    if (!(task.sigma[i] > 0)) throw ContractViolation("e_optimal: noise scales must be positive");
  }
}

// Unit-norm scaling of the experiment constraint diag(-1, u u^T / s^2).
double experiment_scale(double sigma) { return 1.0 / std::max(1.0, 1.0 / (sigma * sigma)); }

}  // namespace

SdpInstance build_e_optimal(const DesignTask& task) {
  check_design(task);
  const int k = static_cast<int>(task.u.size());
  const int d = static_cast<int>(task.u.front().size());
  const int n = d + 1;
  double inv_min = 0.0;  // 1 / min_i sigma_i^2
  for (double s : task.sigma) inv_min = std::max(inv_min, 1.0 / (s * s));

  Matrix C = Matrix::Zero(n, n);
  C(0, 0) = -1.0;
  std::vector<Matrix> A;
  A.reserve(k + 2);
  A.push_back(Matrix::Identity(n, n));
  RealVector b = RealVector::Zero(k + 2);
  const double R = 1.0 + inv_min;
  b(0) = R;
  for (int i = 0; i < k; ++i) {
    const double s2 = task.sigma[i] * task.sigma[i];
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = -1.0;
    a.bottomRightCorner(d, d) = (task.u[i] * task.u[i].transpose()).cast<cplx>() / s2;
    A.push_back(experiment_scale(task.sigma[i]) * a);
  }
  Matrix at = Matrix::Zero(n, n);
  at.bottomRightCorner(d, d) = -Matrix::Identity(d, d);
  A.push_back(std::move(at));
  b(k + 1) = -1.0;
  return make_instance(C, std::move(A), b, R, std::max(1.0, inv_min) + inv_min);
}

Matrix fisher_matrix(const DesignTask& task, const RealVector& p) {
  check_design(task);
  if (p.size() != static_cast<int>(task.u.size())) throw DimensionMismatch("fisher_matrix: one weight per experiment");
  const int d = static_cast<int>(task.u.front().size());
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < task.u.size(); ++i)
    f += p(static_cast<int>(i)) * task.u[i] * task.u[i].transpose() / (task.sigma[i] * task.sigma[i]);
  return f.cast<cplx>();
}

DesignResult solve_e_optimal(const DesignTask& task, double eps, std::uint64_t seed, QueryLedger* ledger) {
  const SdpInstance inst = build_e_optimal(task);
  const int k = static_cast<int>(task.u.size());
  SolverConfig cfg;
  cfg.epsilon = eps;
  cfg.model = InputModel::Sparse;
  cfg.seed = seed;
  DesignResult res;
  res.solution = sdp_solve(inst, cfg, ledger);
  res.t = -res.solution.estimate;
  res.p = RealVector::Zero(k);
  if (res.solution.dual_run.dual) {
    const RealVector& y = *res.solution.dual_run.dual;
    for (int i = 0; i < k; ++i) res.p(i) = experiment_scale(task.sigma[i]) * y(i + 2);
  }
  res.lambda_min_fp = eigh(fisher_matrix(task, res.p)).values.minCoeff();
  return res;
}

// ---------------------------------------------------------------------------
// Shadow tomography.

ShadowResult shadow_tomography(const ShadowTask& task, std::uint64_t seed, QueryLedger* ledger) {
  const double eps = task.eps;
  if (!(eps > 0 && eps < 1)) throw ContractViolation("shadow_tomography: eps must lie in (0, 1)");
  if (task.E.empty()) throw ContractViolation("shadow_tomography: at least one measurement operator is required");
  const int n = task.tau.dim();
  const int m = static_cast<int>(task.E.size());
  for (const auto& e : task.E) {
    if (e.rows() != n || e.cols() != n) throw DimensionMismatch("shadow_tomography: operator dimension differs from tau");
    if (hermitian_residual(e) > 1e-9) throw ContractViolation("shadow_tomography: operators must be Hermitian");
    const RealVector ev = eigh((e + e.adjoint()) * 0.5).values;
    if (ev.minCoeff() < -1e-9 || ev.maxCoeff() > 1 + 1e-9)
      throw ContractViolation("shadow_tomography: operators must satisfy 0 <= E <= I");
  }

  const double theta = eps / 4.0;
  const double gamma = 12.0 / eps;
  const auto copies = static_cast<std::int64_t>(cost::trace_mean_copies(gamma, 6.0));
  const std::int64_t budget_iters = cost::shadow_iterations(n, eps);
  const double nu = eps * eps / 144.0;
  // Each check measures E_j (x) I - I (x) E_j on rho (x) tau, so every Gibbs
  // copy is paired with one tau sample.
  const Count per_iter = checked_mul(static_cast<Count>(copies), cost::two_phase_samples(2 * m, nu));
  const double threshold = eps / 2.0 + 1.0 / (2.0 * gamma);

  ShadowResult res;
  res.iteration_budget = budget_iters;
  res.sample_budget = cost::shadow_samples(m, n, eps);
  charge_if(ledger, Formula::ShadowSamples, Counter::StateSample, res.sample_budget);

  // Index 2j-1 weights +E_j and 2j weights -E_j; index 0 is unused.
  std::vector<Matrix> mats(2 * m + 1);
  mats[0] = Matrix::Zero(n, n);
  res.exact = RealVector(m);
  for (int j = 0; j < m; ++j) {
    mats[2 * j + 1] = task.E[j];
    mats[2 * j + 2] = -task.E[j];
    res.exact(j) = trace_product(task.tau.matrix(), task.E[j]);
  }
  GibbsTracker gibbs(mats);
  SparseVectorTree tree(2 * m, 1.0 / (16.0 * gamma * static_cast<double>(budget_iters)));
  Rng rng(seed);

  for (std::int64_t t = 0; t < budget_iters; ++t) {
    gibbs.refresh();
    res.iterations = t + 1;
    res.samples_consumed = checked_add(res.samples_consumed, per_iter);
    charge_if(ledger, Counter::GibbsPrep, per_iter);
    int violated = -1;
    for (int idx = 1; idx <= 2 * m && violated < 0; ++idx) {
      const int j = (idx - 1) / 2;
      const double sign = idx % 2 == 1 ? 1.0 : -1.0;
      const double diff = sign * (gibbs.trace(2 * j + 1) - res.exact(j));
      const double p = std::clamp(0.125 + diff / 16.0, 0.0, 1.0);
      if (trace_mean_estimate(p, copies, rng, nullptr) >= threshold) violated = idx;
    }
    if (violated < 0) {
      res.converged = true;
      break;
    }
    const std::vector<std::int64_t> inc = tree.add_sparse_grid({{violated, theta}});
    gibbs.add(violated, static_cast<double>(inc[0]) * tree.grid());
  }
  // tau satisfies every constraint, so converged == false means the noisy
  // checks misfired; callers see it in the result.
  gibbs.refresh();

  res.y = tree.values();
  res.sigma = DensityOperator(gibbs.state());
  res.final_shots = static_cast<std::int64_t>(std::ceil(8.0 * std::log(20.0 * m) / (eps * eps)));
  charge_if(ledger, Counter::GibbsPrep, checked_mul(static_cast<Count>(res.final_shots), static_cast<Count>(m)));
  res.estimates = RealVector(m);
  for (int j = 0; j < m; ++j) {
    const double p = std::clamp(trace_product(res.sigma.matrix(), task.E[j]), 0.0, 1.0);
    std::binomial_distribution<std::int64_t> shots(res.final_shots, p);
    res.estimates(j) = static_cast<double>(shots(rng)) / static_cast<double>(res.final_shots);
  }
  res.max_error = (res.estimates - res.exact).cwiseAbs().maxCoeff();
  return res;
}

// ---------------------------------------------------------------------------
// Measurement to block-encoding.

namespace {

void check_measurement(const Matrix& U, int a, int n) {
  if (a < 1) throw ContractViolation("povm: at least one ancilla qubit is required");
  if (n < 1) throw ContractViolation("povm: system dimension must be positive");
  const Eigen::Index dim = (Eigen::Index{1} << a) * n;
  if (U.rows() != dim || U.cols() != dim) throw DimensionMismatch("povm: U must act on 2^a * n dimensions");
  if (unitarity_residual(U) > 1e-9) throw ContractViolation("povm: U is not unitary");
}

}  // namespace

Matrix povm_accept_operator(const Matrix& U, int a, int n) {
  check_measurement(U, a, n);
  const Eigen::Index half = U.rows() / 2;
  // Rows of U with the outcome qubit at 0, restricted to the |0^a> input.
  const Matrix acc = U.topLeftCorner(half, n);
  const Matrix m = acc.adjoint() * acc;
  return (m + m.adjoint()) * 0.5;
}

BlockEncoding povm_to_block_encoding(const Matrix& U, int a, int n, double eps) {
  check_measurement(U, a, n);
  if (!(eps >= 0)) throw ContractViolation("povm_to_block_encoding: eps must be non-negative");
  const Eigen::Index dim = U.rows();
  const Matrix up = kron(Matrix::Identity(2, 2), U);
  // Flag is the most significant qubit of [flag][anc][sys]; flip it when the
  // outcome qubit (most significant ancilla) reads 1.
  Matrix cnot = Matrix::Zero(2 * dim, 2 * dim);
  for (Eigen::Index i = 0; i < 2 * dim; ++i) {
    const bool flag = i >= dim;
    const Eigen::Index rest = flag ? i - dim : i;
    const bool outcome = rest >= dim / 2;
    const Eigen::Index j = outcome ? (flag ? rest : rest + dim) : i;
    cnot(j, i) = 1.0;
  }
  BlockEncoding enc;
  enc.unitary = up.adjoint() * cnot * up;
  enc.alpha = 1.0;
  enc.ancillas = a + 1;
  enc.reported_ancillas = a + 1;
  enc.epsilon = eps;
  enc.n = n;
  enc.cost = CostVector::of(Counter::OperatorU, 2);
  enc.target = povm_accept_operator(U, a, n);
  return enc;
}

}  // namespace qsdp
