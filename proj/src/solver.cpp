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

#include "qsdp/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsdp/cost.hpp"
#include "qsdp/vector_store.hpp"

namespace qsdp {

const char* model_name(InputModel m) {
  switch (m) {
    case InputModel::Sparse: return "sparse";
    case InputModel::State: return "state";
    case InputModel::Operator: return "operator";
    case InputModel::Hamiltonian: return "hamiltonian";
  }
  return "?";
}

InputModel parse_model(const std::string& s) {
  if (s == "sparse") return InputModel::Sparse;
  if (s == "state") return InputModel::State;
  if (s == "operator") return InputModel::Operator;
  if (s == "hamiltonian") return InputModel::Hamiltonian;
  throw ContractViolation("unknown input model '" + s + "'");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::OptAtMost: return "OPT <= g + eps";
    case Verdict::OptAbove: return "OPT > g";
    case Verdict::Feasible: return "feasible-certificate";
    case Verdict::Infeasible: return "infeasible";
  }
  return "?";
}

FrameworkParams framework_params(const SdpInstance& inst, const SolverConfig& cfg, Framework fw) {
  if (!(cfg.epsilon > 0 && cfg.epsilon <= 1)) throw ContractViolation("solver: epsilon must lie in (0, 1]");
  if (!(cfg.failure > 0 && cfg.failure < 1)) throw ContractViolation("solver: failure must lie in (0, 1)");
  FrameworkParams p;
  double ln_n;
  if (fw == Framework::Full) {
    p.gamma = 6.0 * inst.R * inst.r / cfg.epsilon;
    p.theta = 1.0 / p.gamma;
    ln_n = std::log(std::max(inst.n, 2));
  } else {
    p.gamma = 6.0 * inst.R / cfg.epsilon;
    p.theta = cfg.epsilon / (2.0 * inst.R);
    ln_n = std::log(inst.n + 1.0);
  }
  p.iterations = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(ln_n / (p.theta * p.theta))));
  p.copies = trace_mean_copies(p.gamma, cfg.sigma);
  p.nu = cfg.failure / std::max(1, cfg.calls) / (2.0 * static_cast<double>(p.iterations));
  p.store_grid = 1.0 / (16.0 * p.gamma * static_cast<double>(p.iterations));
  return p;
}

Count model_gibbs_cost(const SdpInstance& inst, const SolverConfig& cfg, double gamma, int dim) {
  const double prec = 1.0 / gamma;
  switch (cfg.model) {
    case InputModel::Sparse: return cost::gibbs_operator(inst.s, gamma, dim, prec);
    case InputModel::Operator: return cost::gibbs_operator(1.0, gamma, dim, prec);
    case InputModel::Hamiltonian:
      return checked_mul(cost::gibbs_operator(2.0 * cfg.tau, gamma, dim, prec), cost::hamiltonian_to_operator(prec));
    case InputModel::State: return cost::gibbs_decomposition(decompose_instance(inst).B, gamma);
  }
  return 0;
}

Count model_trace_cost(const SdpInstance& inst, const SolverConfig& cfg, double gamma) {
  const double prec = 1.0 / gamma;
  switch (cfg.model) {
    case InputModel::Sparse: return cost::trace_estimator(inst.s, prec);
    case InputModel::Operator: return cost::trace_estimator(1.0, prec);
    case InputModel::Hamiltonian:
      return checked_mul(cost::trace_estimator(2.0 * cfg.tau, prec), cost::hamiltonian_to_operator(prec));
    case InputModel::State: return cost::trace_estimator(decompose_instance(inst).B, prec);
  }
  return 0;
}

IterationCharge iteration_charge(const SdpInstance& inst, const SolverConfig& cfg, Framework fw) {
  const FrameworkParams p = framework_params(inst, cfg, fw);
  const std::int64_t indices = inst.m + 1;
  // Minimum finding over the angle objective adds a binary-search factor.
  const Count rounds = fw == Framework::Full ? cost::min_finding_rounds(std::numbers::pi, 1.0 / p.gamma) : 1;
  const Count samples = checked_mul(rounds, cost::two_phase_samples(indices, p.nu));
  const Count apps = checked_mul(rounds, cost::two_phase_applications(indices, p.nu));
  const int dim = fw == Framework::Full ? inst.n : inst.n + 1;
  const Count k = static_cast<Count>(p.copies);
  IterationCharge c;
  c.gibbs = checked_mul(checked_mul(k, samples), model_gibbs_cost(inst, cfg, p.gamma, dim));
  c.trace = checked_mul(checked_mul(k, apps), model_trace_cost(inst, cfg, p.gamma));
  return c;
}

GibbsTracker::GibbsTracker(const std::vector<Matrix>& mats) : n_(static_cast<int>(mats.front().rows())) {
  diag_ = std::all_of(mats.begin(), mats.end(), [](const Matrix& m) { return is_exactly_diagonal(m); });
  real_ = std::all_of(mats.begin(), mats.end(), [](const Matrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0; });
  if (diag_) {
    for (const auto& m : mats) d_.push_back(m.diagonal().real());
    h_ = RealVector::Zero(n_);
  } else if (real_) {
    for (const auto& m : mats) r_.push_back(m.real());
    hr_ = Eigen::MatrixXd::Zero(n_, n_);
  } else {
    c_ = mats;
    hc_ = Matrix::Zero(n_, n_);
  }
}

void GibbsTracker::add(int j, double dy) {
  if (dy == 0.0) return;
  if (diag_) h_ += dy * d_[j];
  else if (real_) hr_ += dy * r_[j];
  else hc_ += dy * c_[j];
}

void GibbsTracker::refresh() {
  if (diag_) {
    p_ = (-(h_.array() - h_.minCoeff())).exp().matrix();
    p_ /= p_.sum();
  } else if (real_) {
    er_.compute(hr_);
    RealVector w = (-(er_.eigenvalues().array() - er_.eigenvalues().minCoeff())).exp().matrix();
    w /= w.sum();
    rhor_ = er_.eigenvectors() * w.asDiagonal() * er_.eigenvectors().transpose();
  } else {
    ec_.compute(hc_);
    RealVector w = (-(ec_.eigenvalues().array() - ec_.eigenvalues().minCoeff())).exp().matrix();
    w /= w.sum();
    rhoc_ = ec_.eigenvectors() * w.cast<cplx>().asDiagonal() * ec_.eigenvectors().adjoint();
  }
}

double GibbsTracker::trace(int j) const {
  if (diag_) return d_[j].dot(p_);
  if (real_) return r_[j].cwiseProduct(rhor_).sum();
  return (c_[j].conjugate().array() * rhoc_.array()).sum().real();
}

Matrix GibbsTracker::state() const {
  if (diag_) return Matrix(p_.cast<cplx>().asDiagonal());
  if (real_) return rhor_.cast<cplx>();
  return rhoc_;
}

namespace {

// Mean of k estimator draws on a trace t in [-1, 1].
double noisy_trace(double t, std::int64_t k, Rng& rng) {
  const double p = std::clamp(0.125 + t / 16.0, 0.0, 1.0);
  return trace_mean_estimate(p, k, rng, nullptr);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void charge_iteration(QueryLedger& ledger, const IterationCharge& c) {
  ledger.charge(Formula::SolverGibbs, Counter::GibbsPrep, c.gibbs);
  ledger.charge(Formula::SolverTrace, Counter::TraceEst, c.trace);
}

}  // namespace

SolveOutcome arora_kale_solve(const SdpInstance& inst, const SolverConfig& cfg, QueryLedger* ledger) {
  SolveOutcome out;
  out.guess = cfg.guess;
  out.framework = Framework::Full;
  out.params = framework_params(inst, cfg, Framework::Full);
  out.per_iteration = iteration_charge(inst, cfg, Framework::Full);
  const FrameworkParams& P = out.params;
  const int m = inst.m;

  std::vector<Matrix> mats;
  mats.reserve(m + 1);
  for (int j = 0; j <= m; ++j) mats.push_back(inst.constraint(j));
  RealVector b(m + 1);
  b(0) = -cfg.guess;
  b.tail(m) = inst.b;

  QueryLedger local;
  SparseVectorTree tree(m, P.store_grid);
  GibbsTracker gibbs(mats);
  Rng rng(cfg.seed);
  std::vector<double> est(m + 1);
  std::vector<char> have(m + 1);
  // The objective weight is stored on the grid; the oracle works with the
  // stored value so that dividing by y_0 at the end is exact.
  const double y0 = std::round(P.theta / (2.0 * inst.r) / P.store_grid) * P.store_grid / P.theta;
  const double r_eff = 1.0 / (2.0 * y0);
  // Other weights round toward the side that keeps b.y~ <= 0.
  auto snap = [&](int j, double w) {
    const double k = w / P.store_grid;
    if (b(j) > 0) return std::floor(k) * P.store_grid;
    if (b(j) < 0) return std::ceil(k) * P.store_grid;
    return w;
  };
  bool empty = false;

  for (std::int64_t t = 0; t < P.iterations; ++t) {
    gibbs.refresh();
    std::fill(have.begin(), have.end(), 0);
    auto tr = [&](int j) {
      if (!have[j]) {
        est[j] = noisy_trace(gibbs.trace(j), P.copies, rng);
        have[j] = 1;
      }
      return est[j];
    };
    const ThetaStep step = theta_oracle(tr, b, r_eff, P.theta / 2.0);
    charge_iteration(local, out.per_iteration);
    out.iterations = t + 1;
    if (cfg.record_trace) out.trace.push_back({t, step.empty ? -1 : step.j, step.c, step.k, step.c2, est[0]});
    if (step.empty) {
      empty = true;
      break;
    }
    std::vector<std::pair<int, double>> delta{{0, P.theta * y0}};
    if (step.j > 0 && step.c > 0) delta.emplace_back(step.j, snap(step.j, P.theta * step.c));
    if (step.k > 0 && step.c2 > 0) delta.emplace_back(step.k, snap(step.k, P.theta * step.c2));
    const std::vector<std::int64_t> inc = tree.add_sparse_grid(delta);
    for (std::size_t i = 0; i < delta.size(); ++i)
      gibbs.add(delta[i].first, static_cast<double>(inc[i]) * P.store_grid);
  }

  if (empty) {
    out.verdict = Verdict::OptAbove;
  } else {
    out.verdict = Verdict::OptAtMost;
    // Average of 2r y~ over the run: dividing by the stored y_0 makes the
    // objective coordinate exactly 1, so the -e_0 correction zeroes it.
    const RealVector y = tree.values();
    RealVector dual = y / y(0);
    dual(0) = 0.0;
    if (m >= 1) dual(1) += cfg.epsilon / inst.R;
    out.dual = dual;
  }
  out.ledger = local.snapshot();
  if (ledger) ledger->merge(out.ledger);
  return out;
}

SolveOutcome primal_oracle_solve(const SdpInstance& inst, const SolverConfig& cfg, QueryLedger* ledger) {
  SolveOutcome out;
  out.guess = cfg.guess;
  out.framework = Framework::Primal;
  out.params = framework_params(inst, cfg, Framework::Primal);
  out.per_iteration = iteration_charge(inst, cfg, Framework::Primal);
  const FrameworkParams& P = out.params;
  const int n = inst.n, m = inst.m;

  // rho = [X' 0; 0 omega]: every constraint gets a zero slack row/column.
  std::vector<Matrix> mats;
  mats.reserve(m + 1);
  for (int j = 0; j <= m; ++j) {
    Matrix e = Matrix::Zero(n + 1, n + 1);
    e.topLeftCorner(n, n) = inst.constraint(j);
    mats.push_back(std::move(e));
  }
  RealVector b(m + 1);
  b(0) = -cfg.guess / inst.R;
  b.tail(m) = inst.b / inst.R;

  QueryLedger local;
  SparseVectorTree tree(m, P.store_grid);
  GibbsTracker gibbs(mats);
  Rng rng(cfg.seed);
  bool clean = false;

  for (std::int64_t t = 0; t < P.iterations; ++t) {
    gibbs.refresh();
    charge_iteration(local, out.per_iteration);
    out.iterations = t + 1;
    int violated = -1;
    for (int j = 0; j <= m && violated < 0; ++j)
      if (noisy_trace(gibbs.trace(j), P.copies, rng) >= b(j) + P.theta / 2.0) violated = j;
    if (cfg.record_trace) out.trace.push_back({t, violated, violated >= 0 ? P.theta : 0.0, -1, 0.0, gibbs.trace(0)});
    if (violated < 0) {
      clean = true;
      break;
    }
    const std::vector<std::int64_t> inc = tree.add_sparse_grid({{violated, P.theta}});
    gibbs.add(violated, static_cast<double>(inc[0]) * P.store_grid);
  }

  if (clean) {
    out.verdict = Verdict::Feasible;
    const Matrix rho = gibbs.state();
    out.z = inst.R * rho.topLeftCorner(n, n).trace().real();
    out.primal_y = tree.values();
  } else {
    out.verdict = Verdict::Infeasible;
  }
  out.ledger = local.snapshot();
  if (ledger) ledger->merge(out.ledger);
  return out;
}

std::string VerifyReport::summary() const {
  if (pass) return "pass";
  std::ostringstream os;
  os << "fail:";
  for (const auto& v : violations) os << " [" << v.condition << " margin " << v.margin << "]";
  return os.str();
}

VerifyReport verify_dual(const RealVector& y, const SdpInstance& inst, double g, double eps) {
  VerifyReport rep;
  if (y.size() != inst.m + 1) throw DimensionMismatch("verify_dual: y must have length m + 1");
  auto fail = [&rep](std::string c, double margin) {
    rep.pass = false;
    rep.violations.push_back({std::move(c), margin});
  };
  Matrix s = -inst.C;
  double by = 0.0;
  for (int j = 1; j <= inst.m; ++j) {
    if (y(j) < -1e-12) fail("y_" + std::to_string(j) + " >= 0", y(j));
    s += y(j) * inst.A[j - 1];
    by += inst.b(j - 1) * y(j);
  }
  const double lmin = eigh((s + s.adjoint()) * 0.5).values.minCoeff();
  if (lmin < -eps) fail("sum y_j A_j - C >= -eps I", lmin + eps);
  if (by > g + eps) fail("b.y <= g + eps", g + eps - by);
  return rep;
}

DensityOperator primal_state(const RealVector& yp, const SdpInstance& inst) {
  if (yp.size() != inst.m + 1) throw DimensionMismatch("primal_state: y' must have length m + 1");
  Matrix h = -yp(0) * inst.C;
  for (int j = 1; j <= inst.m; ++j) h += yp(j) * inst.A[j - 1];
  return DensityOperator(gibbs_matrix(eigh((h + h.adjoint()) * 0.5)));
}

VerifyReport verify_primal(const RealVector& yp, double z, const SdpInstance& inst, double g, double eps) {
  VerifyReport rep;
  auto fail = [&rep](std::string c, double margin) {
    rep.pass = false;
    rep.violations.push_back({std::move(c), margin});
  };
  if (!(z >= 0)) fail("z >= 0", z);
  const Matrix rho = primal_state(yp, inst).matrix();
  for (int j = 1; j <= inst.m; ++j) {
    const double v = z * trace_product(rho, inst.A[j - 1]);
    if (v > inst.b(j - 1) + eps) fail("Tr(z rho A_" + std::to_string(j) + ") <= b_j + eps", inst.b(j - 1) + eps - v);
  }
  const double obj = z * trace_product(rho, inst.C);
  if (obj < g - eps) fail("Tr(z rho C) >= g - eps", obj - (g - eps));
  return rep;
}

SdpSolution sdp_solve(const SdpInstance& inst, const SolverConfig& cfg, QueryLedger* ledger) {
  SdpSolution sol;
  SolverConfig c = cfg;
  const double eps = cfg.epsilon;
  c.calls = static_cast<int>(std::ceil(std::log2(2.0 * inst.R / eps))) + 1;
  QueryLedger local;
  std::uint64_t call = 0;
  auto run_full = [&](double g) {
    SolverConfig cc = c;
    cc.guess = g;
    cc.seed = mix_seed(cfg.seed, call++);
    SolveOutcome o = arora_kale_solve(inst, cc, &local);
    sol.steps.push_back({g, o.verdict, o.iterations});
    sol.full_iterations += o.iterations;
    return o;
  };

  double lo = -inst.R, hi = inst.R;
  bool have_dual = false;
  while (hi - lo > eps) {
    const double g = 0.5 * (lo + hi);
    SolveOutcome o = run_full(g);
    if (o.verdict == Verdict::OptAtMost) {
      hi = g;
      sol.dual_run = std::move(o);
      have_dual = true;
    } else {
      lo = g;
    }
  }
  if (!have_dual) {
    // g = R always admits the j = 1 step, so this run ends with a dual.
    SolveOutcome o = run_full(inst.R);
    if (o.verdict == Verdict::OptAtMost) {
      sol.dual_run = std::move(o);
      have_dual = true;
    }
  }
  sol.lo = lo;
  sol.hi = hi;
  sol.estimate = 0.5 * (lo + std::min(inst.R, hi + eps));

  auto run_primal = [&](double g) {
    SolverConfig cc = c;
    cc.guess = g;
    cc.seed = mix_seed(cfg.seed, call++);
    SolveOutcome o = primal_oracle_solve(inst, cc, &local);
    sol.steps.push_back({g, o.verdict, o.iterations});
    sol.primal_iterations += o.iterations;
    return o;
  };
  sol.primal_run = run_primal(lo);
  if (sol.primal_run.verdict == Verdict::Infeasible) sol.primal_run = run_primal(lo - eps / 2.0);

  sol.full_charge = iteration_charge(inst, c, Framework::Full);
  sol.primal_charge = iteration_charge(inst, c, Framework::Primal);

  if (have_dual) {
    sol.dual_report = verify_dual(*sol.dual_run.dual, inst, sol.dual_run.guess, eps);
  } else {
    sol.dual_report.pass = false;
    sol.dual_report.violations.push_back({"dual certificate produced", 0.0});
  }
  if (sol.primal_run.verdict == Verdict::Feasible) {
    sol.primal_report = verify_primal(*sol.primal_run.primal_y, sol.primal_run.z, inst, sol.primal_run.guess, eps);
  } else {
    sol.primal_report.pass = false;
    sol.primal_report.violations.push_back({"primal certificate produced", 0.0});
  }
  sol.ledger = local.snapshot();
  if (ledger) ledger->merge(sol.ledger);
  return sol;
}

Count solve_formula_total(const SdpSolution& sol) {
  const Count full = checked_mul(static_cast<Count>(sol.full_iterations), sol.full_charge.total());
  const Count primal = checked_mul(static_cast<Count>(sol.primal_iterations), sol.primal_charge.total());
  return checked_add(full, primal);
}

}  // namespace qsdp
