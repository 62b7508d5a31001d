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

// qsdp_cli: JSON front end for the solver, the Gibbs samplers, the trace
// estimator, and the application drivers.
//
// Exit codes: 0 solved, 2 infeasible verdict, 3 invalid input.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qsdp/applications.hpp"
#include "qsdp/cost.hpp"
#include "qsdp/errors.hpp"
#include "qsdp/gibbs.hpp"
#include "qsdp/solver.hpp"

namespace {

using json = nlohmann::json;
using namespace qsdp;

constexpr int kExitSolved = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;

json vec_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).imag() == 0.0) row.push_back(m(i, j).real());
      else row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

Matrix mat_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw InvalidInstance("matrix has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      m(r, c) = e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>()) : cplx(e.get<double>(), 0.0);
    }
  }
  return m;
}

json ledger_json(const LedgerSnapshot& s) { return json::parse(s.to_json()); }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInstance("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_trace_csv(const std::string& path, const SolveOutcome& o) {
  std::ofstream f(path);
  f << "t,j,c,k,c2,trace0\n";
  for (const auto& r : o.trace) f << r.t << ',' << r.j << ',' << r.c << ',' << r.k << ',' << r.c2 << ',' << r.trace0 << '\n';
}

json solution_json(const SdpSolution& sol) {
  json j;
  j["verdict"] = sol.primal_run.verdict == Verdict::Infeasible ? "infeasible" : "solved";
  j["opt"] = sol.estimate;
  j["bracket"] = {sol.lo, sol.hi};
  json cert;
  if (sol.dual_run.dual) cert["dual"] = vec_json(*sol.dual_run.dual);
  cert["dual_guess"] = sol.dual_run.guess;
  cert["dual_check"] = sol.dual_report.summary();
  if (sol.primal_run.primal_y) cert["primal_y"] = vec_json(*sol.primal_run.primal_y);
  cert["primal_z"] = sol.primal_run.z;
  cert["primal_guess"] = sol.primal_run.guess;
  cert["primal_check"] = sol.primal_report.summary();
  j["certificates"] = cert;
  json steps = json::array();
  for (const auto& s : sol.steps) steps.push_back({{"g", s.g}, {"verdict", verdict_name(s.verdict)}, {"iterations", s.iterations}});
  j["search"] = steps;
  j["iterations"] = {{"full", sol.full_iterations}, {"primal", sol.primal_iterations}};
  j["formula_total"] = count_to_string(solve_formula_total(sol));
  j["ledger"] = ledger_json(sol.ledger);
  return j;
}

int emit(const json& j, int code) {
  std::cout << j.dump(2) << '\n';
  return code;
}

int verdict_code(const SdpSolution& sol) {
  return sol.primal_run.verdict == Verdict::Infeasible ? kExitInfeasible : kExitSolved;
}

DensityOperator random_state(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  return DensityOperator(rho / rho.trace().real());
}

Matrix random_projector(int n, int rank, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = cplx(g(rng), g(rng));
  const Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
  return q * q.adjoint();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsdp: quantum SDP solver simulator"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  double eps = 0.1;
  std::string trace_csv;

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an SDP instance from JSON");
  std::string instance_path, model = "sparse";
  double tau = 1.0;
  solve->add_option("--instance", instance_path, "Instance JSON file")->required();
  solve->add_option("--eps", eps, "Additive accuracy");
  solve->add_option("--model", model, "Input model: sparse, operator, hamiltonian, state");
  solve->add_option("--tau", tau, "Hamiltonian model time scale");
  solve->add_option("--seed", seed, "RNG seed");
  solve->add_option("--trace-csv", trace_csv, "Write the accepted dual run's iterations as CSV");

  // gibbs
  auto* gibbs = app.add_subcommand("gibbs", "Operator-model Gibbs state of sum_j y_j A_j");
  std::vector<double> yv;
  double theta = 1e-3;
  gibbs->add_option("--instance", instance_path, "Instance JSON file")->required();
  gibbs->add_option("--y", yv, "Weights y_0..y_m (y_0 multiplies -C)")->required()->delimiter(',');
  gibbs->add_option("--theta", theta, "Trace-distance target");

  // trace-est
  auto* trace_est = app.add_subcommand("trace-est", "Sample the trace estimator on A_j and I/n");
  int index = 1;
  std::int64_t draws = 1000;
  trace_est->add_option("--instance", instance_path, "Instance JSON file")->required();
  trace_est->add_option("--j", index, "Constraint index (0 is -C)");
  trace_est->add_option("--draws", draws, "Number of draws");
  trace_est->add_option("--theta", theta, "Bias target");
  trace_est->add_option("--seed", seed, "RNG seed");

  // app
  auto* apps = app.add_subcommand("app", "Application drivers");
  apps->require_subcommand(1);
  auto* shadow = apps->add_subcommand("shadow", "Shadow tomography on a random state and projectors");
  int dim = 4, count = 16;
  shadow->add_option("--n", dim, "Dimension");
  shadow->add_option("--m", count, "Number of projectors");
  shadow->add_option("--eps", eps, "Accuracy");
  shadow->add_option("--seed", seed, "RNG seed");

  auto* disc = apps->add_subcommand("discriminate", "State discrimination");
  std::string preset = "orthogonal", states_path;
  disc->add_option("--preset", preset, "orthogonal or identical (ignored with --states)");
  disc->add_option("--states", states_path, "JSON array of density matrices");
  disc->add_option("--eps", eps, "Accuracy");
  disc->add_option("--seed", seed, "RNG seed");

  auto* design = apps->add_subcommand("design", "E-optimal design");
  std::string design_preset = "standard";
  design->add_option("--preset", design_preset, "standard (d = k unit vectors) or single (k = 1)");
  design->add_option("--d", dim, "Dimension");
  design->add_option("--sigma", tau, "Common noise scale");
  design->add_option("--eps", eps, "Accuracy");
  design->add_option("--seed", seed, "RNG seed");

  auto* lower = apps->add_subcommand("lowerbound", "Hard LP family");
  double eps_inst = 0.25;
  std::string kase = "a";
  int j_star = 1;
  lower->add_option("--m", count, "Number of Hamiltonian constraints");
  lower->add_option("--tau", tau, "Time scale");
  lower->add_option("--eps-inst", eps_inst, "Instance gap; the solver runs at eps-inst/4");
  lower->add_option("--case", kase, "a or b")->check(CLI::IsMember({"a", "b"}));
  lower->add_option("--j-star", j_star, "Perturbed index for case b");
  lower->add_option("--seed", seed, "RNG seed");

  // ledger
  auto* ledger_cmd = app.add_subcommand("ledger", "Registered cost formulas and per-iteration charges");
  ledger_cmd->add_option("--instance", instance_path, "Instance JSON file");
  ledger_cmd->add_option("--eps", eps, "Additive accuracy");
  ledger_cmd->add_option("--model", model, "Input model");
  ledger_cmd->add_option("--tau", tau, "Hamiltonian model time scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*solve) {
      const SdpInstance inst = SdpInstance::load(instance_path);
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.model = parse_model(model);
      cfg.tau = tau;
      cfg.seed = seed;
      cfg.record_trace = !trace_csv.empty();
      const SdpSolution sol = sdp_solve(inst, cfg);
      json j = solution_json(sol);
      if (!trace_csv.empty()) {
        write_trace_csv(trace_csv, sol.dual_run);
        j["trace_csv_path"] = trace_csv;
      }
      return emit(j, verdict_code(sol));
    }
    if (*gibbs) {
      const SdpInstance inst = SdpInstance::load(instance_path);
      if (static_cast<int>(yv.size()) != inst.m + 1) throw DimensionMismatch("--y must have m + 1 entries");
      const RealVector y = Eigen::Map<const RealVector>(yv.data(), static_cast<Eigen::Index>(yv.size()));
      const OperatorOracle oracle(inst);
      std::vector<BlockEncoding> encs;
      for (int j = 0; j <= inst.m; ++j) encs.push_back(oracle.encoding(j));
      QueryLedger ledger;
      const double K = std::max(y.cwiseAbs().sum(), 1e-12);
      const GibbsResult g = gibbs_operator_model(encs, y, K, theta, &ledger);
      const DensityOperator exact = gibbs_exact(y, inst);
      json j;
      j["state"] = mat_json(g.state.matrix());
      j["trace_distance"] = trace_distance(g.state, exact);
      j["charge"] = count_to_string(g.charge);
      j["ledger"] = ledger_json(ledger.snapshot());
      return emit(j, kExitSolved);
    }
    if (*trace_est) {
      const SdpInstance inst = SdpInstance::load(instance_path);
      if (index < 0 || index > inst.m) throw ContractViolation("--j outside [0, m]");
      const TraceEstimator est(dilate(inst.constraint(index), 1.0), theta);
      const Matrix rho = DensityOperator::maximally_mixed(inst.n).matrix();
      Rng rng(seed);
      QueryLedger ledger;
      double sum = 0.0, sq = 0.0;
      for (std::int64_t t = 0; t < draws; ++t) {
        const double v = est.sample(rho, rng, &ledger);
        sum += v;
        sq += v * v;
      }
      const double mean = sum / static_cast<double>(draws);
      const double p = est.success_probability(rho);
      json j;
      j["exact"] = trace_product(inst.constraint(index), rho);
      j["mean"] = mean;
      j["std"] = std::sqrt(std::max(0.0, sq / static_cast<double>(draws) - mean * mean));
      j["success_probability"] = p;
      j["analytic_mean"] = TraceEstimator::mean(p);
      j["analytic_variance"] = TraceEstimator::variance(p);
      j["ledger"] = ledger_json(ledger.snapshot());
      return emit(j, kExitSolved);
    }
    if (*shadow) {
      Rng rng(seed);
      ShadowTask task{random_state(dim, rng), {}, eps};
      for (int j = 0; j < count; ++j) task.E.push_back(random_projector(dim, std::max(1, dim / 2), rng));
      QueryLedger ledger;
      const ShadowResult r = shadow_tomography(task, seed, &ledger);
      json j;
      j["verdict"] = r.converged ? "solved" : "budget-exhausted";
      j["estimates"] = vec_json(r.estimates);
      j["exact"] = vec_json(r.exact);
      j["max_error"] = r.max_error;
      j["y"] = vec_json(r.y);
      j["iterations"] = r.iterations;
      j["iteration_budget"] = r.iteration_budget;
      j["sample_budget"] = count_to_string(r.sample_budget);
      j["samples_consumed"] = count_to_string(r.samples_consumed);
      j["ledger"] = ledger_json(ledger.snapshot());
      return emit(j, kExitSolved);
    }
    if (*disc) {
      DiscriminationTask task;
      if (!states_path.empty()) {
        const json arr = json::parse(read_file(states_path));
        for (const auto& s : arr) task.states.emplace_back(mat_from_json(s));
      } else if (preset == "orthogonal" || preset == "identical") {
        Vector a = Vector::Zero(2), b = Vector::Zero(2);
        a(0) = 1.0;
        b(preset == "orthogonal" ? 1 : 0) = 1.0;
        task.states = {DensityOperator::pure(a), DensityOperator::pure(b)};
      } else {
        throw ContractViolation("unknown preset '" + preset + "'");
      }
      QueryLedger ledger;
      const DiscriminationResult r = solve_state_discrimination(task, eps, seed, &ledger);
      json j = solution_json(r.solution);
      json povm = json::array();
      for (const auto& m : r.povm) povm.push_back(mat_json(m));
      j["povm"] = povm;
      j["Y"] = mat_json(r.Y);
      j["povm_residual"] = r.povm_residual;
      j["povm_bound"] = r.povm_bound;
      j["dual_margin"] = r.dual_margin;
      return emit(j, verdict_code(r.solution));
    }
    if (*design) {
      DesignTask task;
      if (design_preset == "standard") {
        for (int i = 0; i < dim; ++i) {
          RealVector u = RealVector::Zero(dim);
          u(i) = 1.0;
          task.u.push_back(u);
          task.sigma.push_back(tau);
        }
      } else if (design_preset == "single") {
        RealVector u = RealVector::Zero(dim);
        u(0) = 1.0;
        task.u.push_back(u);
        task.sigma.push_back(tau);
      } else {
        throw ContractViolation("unknown preset '" + design_preset + "'");
      }
      QueryLedger ledger;
      const DesignResult r = solve_e_optimal(task, eps, seed, &ledger);
      json j = solution_json(r.solution);
      j["t"] = r.t;
      j["p"] = vec_json(r.p);
      j["lambda_min_fp"] = r.lambda_min_fp;
      return emit(j, verdict_code(r.solution));
    }
    if (*lower) {
      const LowerBoundLp lp = build_lower_bound_lp(count, eps_inst, tau, kase[0], j_star);
      SolverConfig cfg;
      cfg.epsilon = eps_inst / 4.0;
      cfg.model = InputModel::Hamiltonian;
      cfg.tau = tau;
      cfg.seed = seed;
      const SdpSolution sol = sdp_solve(lp.instance, cfg);
      json j = solution_json(sol);
      j["closed_form_opt"] = lp.opt;
      j["bracket_b"] = {2.0 - 4.0 * eps_inst, 2.0 - 2.0 * eps_inst};
      return emit(j, verdict_code(sol));
    }
    if (*ledger_cmd) {
      json j;
      json formulas = json::array();
      for (int f = 0; f < kNumFormulas; ++f)
        formulas.push_back({{"name", formula_name(static_cast<Formula>(f))},
                            {"expression", formula_expression(static_cast<Formula>(f))}});
      j["formulas"] = formulas;
      if (!instance_path.empty()) {
        const SdpInstance inst = SdpInstance::load(instance_path);
        SolverConfig cfg;
        cfg.epsilon = eps;
        cfg.model = parse_model(model);
        cfg.tau = tau;
        for (const Framework fw : {Framework::Full, Framework::Primal}) {
          const FrameworkParams p = framework_params(inst, cfg, fw);
          const IterationCharge c = iteration_charge(inst, cfg, fw);
          j[fw == Framework::Full ? "full" : "primal"] = {{"gamma", p.gamma},
                                                          {"theta", p.theta},
                                                          {"iterations", p.iterations},
                                                          {"copies", p.copies},
                                                          {"per_iteration_gibbs", count_to_string(c.gibbs)},
                                                          {"per_iteration_trace", count_to_string(c.trace)}};
        }
      }
      return emit(j, kExitSolved);
    }
  } catch (const std::invalid_argument& e) {
    // InvalidInstance, ContractViolation and PreconditionError all land here.
    return emit({{"verdict", "input-invalid"}, {"error", e.what()}}, kExitInvalid);
  } catch (const std::exception& e) {
    return emit({{"verdict", "error"}, {"error", e.what()}}, 1);
  }
  return kExitInvalid;
}
