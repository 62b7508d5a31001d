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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsdp/applications.hpp"
#include "qsdp/cost.hpp"
#include "test_util.hpp"

namespace qsdp {
namespace {

using testing::diag;

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(n, n);
}

TEST(LowerBoundLpTest, ClosedFormOptima) {
  auto a = build_lower_bound_lp(4, 0.1, 2.0, 'a');
  EXPECT_DOUBLE_EQ(a.opt, 2.0);
  auto b = build_lower_bound_lp(4, 0.1, 2.0, 'b', 3);
  EXPECT_DOUBLE_EQ(b.opt, 1.0 / 0.6);
  EXPECT_EQ(b.instance.m, 5);
  EXPECT_EQ(b.instance.n, 2);
  // A_{j*} = diag(1/2 + eps, 1/2 - eps); every other constraint is I/2.
  EXPECT_LE((b.instance.A[3] - diag({0.6, 0.4})).norm(), 1e-15);
  EXPECT_LE((b.instance.A[1] - diag({0.5, 0.5})).norm(), 1e-15);
  EXPECT_THROW(build_lower_bound_lp(1, 0.1, 2.0, 'a'), ContractViolation);
  EXPECT_THROW(build_lower_bound_lp(4, 0.6, 2.0, 'a'), ContractViolation);
  EXPECT_THROW(build_lower_bound_lp(4, 0.1, 2.0, 'b', 5), ContractViolation);
}

// Any feasible X = diag(x0, x1) satisfies x0 (1/2 + eps) + x1 (1/2 - eps) <= 1
// so x0 <= 1/(1/2 + eps); scanning the feasible corner confirms the bracket.
TEST(LowerBoundLpTest, CaseBOptimumByScan) {
  const double e = 0.2;
  auto lp = build_lower_bound_lp(3, e, 2.0, 'b', 2);
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x0 = 2.0 * i / 2000;
    bool ok = x0 <= 2.0;
    for (int j = 1; j <= lp.instance.m; ++j) ok = ok && x0 * lp.instance.A[j - 1](0, 0).real() <= lp.instance.b(j - 1) + 1e-12;
    if (ok) best = std::max(best, x0);
  }
  EXPECT_NEAR(best, lp.opt, 2e-3);
  EXPECT_GE(lp.opt, 2.0 - 4 * e);
  EXPECT_LE(lp.opt, 2.0 - 2 * e);
}

TEST(LowerBoundLpTest, SolverEstimateIndependentOfMarkedIndex) {
  const double e = 0.2;
  for (int js : {1, 3}) {
    auto lp = build_lower_bound_lp(3, e, 2.0, 'b', js);
    SolverConfig cfg;
    cfg.epsilon = 0.1;
    cfg.seed = 10 + js;
    auto sol = sdp_solve(lp.instance, cfg);
    EXPECT_NEAR(sol.estimate, lp.opt, 0.1) << "j* = " << js;
  }
}

TEST(LowerBoundLpTest, OracleEvolvesScaledConstraints) {
  auto lp = build_lower_bound_lp(2, 0.1, 2.0, 'b');
  auto oracle = lower_bound_oracle(lp);
  EXPECT_EQ(lp.t.size(), 4u);
  for (double t : lp.t) EXPECT_EQ(t, 2.0);
  (void)oracle;
}

TEST(Discrimination, InstanceShape) {
  Vector z = Vector::Zero(2), w = Vector::Zero(2);
  z(0) = 1;
  w(1) = 1;
  DiscriminationTask real{{DensityOperator::pure(z), DensityOperator::pure(w)}};
  auto inst = build_state_discrimination(real);
  EXPECT_EQ(inst.n, 4);
  EXPECT_EQ(inst.m, 1 + 2 * 3);
  EXPECT_DOUBLE_EQ(inst.R, 3.0);
  EXPECT_DOUBLE_EQ(inst.r, 4.0);
  Vector c(2);
  c << 1.0, cplx(0, 1);
  DiscriminationTask complex{{DensityOperator::pure(c / std::sqrt(2.0))}};
  EXPECT_EQ(build_state_discrimination(complex).m, 1 + 2 * 4);
  EXPECT_THROW(build_state_discrimination(DiscriminationTask{}), ContractViolation);
}

TEST(Discrimination, SingleStateIsCertain) {
  Vector z = Vector::Zero(2);
  z(0) = 1;
  const double eps = 0.1;
  auto r = solve_state_discrimination({{DensityOperator::pure(z)}}, eps, 1);
  EXPECT_NEAR(r.opt, 1.0, eps);
  ASSERT_EQ(r.povm.size(), 1u);
  EXPECT_LE(r.povm_residual, r.povm_bound);
  EXPECT_GE(r.min_povm_eigenvalue, -eps);
  EXPECT_GE(r.dual_margin, -eps);
}

TEST(Discrimination, MixedPairMatchesHelstrom) {
  // Two states with equal weight: sum_i Tr(rho_i M_i) = 1 + ||rho_1 - rho_2||_1 / 2.
  const double eps = 0.1;
  DensityOperator r1(diag({0.8, 0.2})), r2(diag({0.3, 0.7}));
  auto r = solve_state_discrimination({{r1, r2}}, eps, 2);
  const double helstrom = 1.0 + trace_distance(r1, r2);
  EXPECT_NEAR(r.opt, helstrom, eps);
  EXPECT_LE(r.povm_residual, r.povm_bound);
  EXPECT_GE(r.dual_margin, -eps);
}

TEST(Design, InstanceShapeAndFisher) {
  DesignTask task;
  RealVector u(2);
  u << 1.0, 0.0;
  task.u.push_back(u);
  u << 0.0, 1.0;
  task.u.push_back(u);
  task.sigma = {1.0, 0.5};
  auto inst = build_e_optimal(task);
  EXPECT_EQ(inst.n, 3);
  EXPECT_EQ(inst.m, 4);
  for (const auto& a : inst.A) EXPECT_LE(operator_norm(a), 1.0 + 1e-12);
  RealVector p(2);
  p << 0.5, 0.5;
  EXPECT_LE((fisher_matrix(task, p) - diag({0.5, 2.0})).norm(), 1e-14);
  task.u[0] << 2.0, 0.0;
  EXPECT_THROW(build_e_optimal(task), ContractViolation);
  task.u[0] << 1.0, 0.0;
  task.sigma = {1.0};
  EXPECT_THROW(build_e_optimal(task), DimensionMismatch);
}

TEST(Design, CoordinateExperimentsEqualWeight) {
  const double eps = 0.1;
  DesignTask task;
  for (int i = 0; i < 2; ++i) {
    RealVector u = RealVector::Zero(2);
    u(i) = 1.0;
    task.u.push_back(u);
    task.sigma.push_back(1.0);
  }
  auto r = solve_e_optimal(task, eps, 3);
  EXPECT_NEAR(r.t, 0.5, eps);
  EXPECT_NEAR(r.lambda_min_fp, 0.5, eps);
}

TEST(Design, NoiseScalesTheOptimum) {
  // sigma^2 = 2 halves every Fisher entry: t = (1/d)/sigma^2 = 1/4.
  const double eps = 0.1;
  DesignTask task;
  for (int i = 0; i < 2; ++i) {
    RealVector u = RealVector::Zero(2);
    u(i) = 1.0;
    task.u.push_back(u);
    task.sigma.push_back(std::sqrt(2.0));
  }
  auto r = solve_e_optimal(task, eps, 4);
  EXPECT_NEAR(r.t, 0.25, eps);
}

TEST(Shadow, MaximallyMixedWithIdentityConvergesImmediately) {
  ShadowTask task{DensityOperator::maximally_mixed(2), {Matrix::Identity(2, 2)}, 0.2};
  QueryLedger l;
  auto r = shadow_tomography(task, 1, &l);
  EXPECT_TRUE(r.converged);
  // One check round, no multiplicative update.
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.y.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(r.exact(0), 1.0, 1e-12);
  EXPECT_LE(r.max_error, 0.2);
  EXPECT_EQ(r.sample_budget, cost::shadow_samples(1, 2, 0.2));
  EXPECT_EQ(l.tally(Formula::ShadowSamples).total, r.sample_budget);
}

TEST(Shadow, SmallRandomCase) {
  std::mt19937_64 rng(5);
  const double eps = 0.2;
  std::vector<Matrix> E;
  for (int j = 0; j < 3; ++j) {
    Vector v = testing::random_state(2, rng);
    E.push_back(v * v.adjoint());
  }
  ShadowTask task{DensityOperator(testing::random_density(2, rng)), E, eps};
  auto r = shadow_tomography(task, 6);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, r.iteration_budget);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(r.exact(j), trace_product(task.tau.matrix(), E[j]), 1e-12);
    EXPECT_NEAR(trace_product(r.sigma.matrix(), E[j]), r.exact(j), eps);
  }
  EXPECT_LE(r.max_error, eps);
}

TEST(Shadow, RejectsInvalidOperators) {
  ShadowTask task{DensityOperator::maximally_mixed(2), {2.0 * Matrix::Identity(2, 2)}, 0.2};
  EXPECT_THROW(shadow_tomography(task), ContractViolation);
  task.E = {Matrix::Identity(3, 3)};
  EXPECT_THROW(shadow_tomography(task), DimensionMismatch);
  task.E.clear();
  EXPECT_THROW(shadow_tomography(task), ContractViolation);
}

TEST(Povm, IdentityCircuitAcceptsEverything) {
  const Matrix U = Matrix::Identity(4, 4);
  EXPECT_LE((povm_accept_operator(U, 1, 2) - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Povm, CnotCopiesTheSystemBit) {
  // Layout [anc][sys]: |0, s> -> |s, s>, so only s = 0 reads outcome 0.
  Matrix U = Matrix::Identity(4, 4);
  U(1, 1) = U(3, 3) = 0.0;
  U(3, 1) = U(1, 3) = 1.0;
  EXPECT_LE((povm_accept_operator(U, 1, 2) - diag({1.0, 0.0})).norm(), 1e-15);
  auto enc = povm_to_block_encoding(U, 1, 2, 0.0);
  EXPECT_LE((enc.block() - diag({1.0, 0.0})).norm(), 1e-12);
  EXPECT_EQ(enc.ancillas, 2);
}

TEST(Povm, RandomCircuitsMatchDirectSimulation) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const int a = 1 + t % 2, n = 2 + t % 3;
    const int dim = (1 << a) * n;
    const Matrix U = random_unitary(dim, rng);
    const Matrix M = povm_accept_operator(U, a, n);
    const RealVector ev = eigh(M).values;
    EXPECT_GE(ev.minCoeff(), -1e-12);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
    auto enc = povm_to_block_encoding(U, a, n, 0.0);
    EXPECT_LE(unitarity_residual(enc.unitary), 1e-9);
    EXPECT_LE((enc.block() - M).norm(), 1e-9);
    // Acceptance probability of a pure input by evolving |0^a> (x) psi.
    const Vector psi = testing::random_state(n, rng);
    Vector in = Vector::Zero(dim);
    in.head(n) = psi;
    const Vector out = U * in;
    const double p_acc = out.head(dim / 2).squaredNorm();
    EXPECT_NEAR(p_acc, (psi.adjoint() * M * psi)(0, 0).real(), 1e-12);
  }
}

TEST(Povm, RejectsBadShapes) {
  EXPECT_THROW(povm_accept_operator(Matrix::Identity(4, 4), 0, 4), ContractViolation);
  EXPECT_THROW(povm_accept_operator(Matrix::Identity(6, 6), 1, 2), DimensionMismatch);
  Matrix bad = Matrix::Identity(4, 4);
  bad(0, 0) = 2.0;
  EXPECT_THROW(povm_accept_operator(bad, 1, 2), ContractViolation);
}

}  // namespace
}  // namespace qsdp
