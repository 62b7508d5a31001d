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

#include "qsdp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsdp/cost.hpp"

namespace qsdp {

namespace {

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

DensityOperator normalize(const Matrix& m) {
  const double tr = m.trace().real();
  if (!(tr > 0)) throw DomainError("gibbs: unnormalizable output");
  return DensityOperator(hermitize(m / tr));
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double factorial_ratio(double base, int l) {
  // base^l / l!
  double v = 1.0;
  for (int i = 1; i <= l; ++i) v *= base / i;
  return v;
}

}  // namespace

DensityOperator gibbs_exact(const RealVector& y, const std::vector<Matrix>& mats) {
  if (static_cast<std::size_t>(y.size()) != mats.size())
    throw DimensionMismatch("gibbs_exact: coefficient and matrix counts differ");
  if (mats.empty()) throw ContractViolation("gibbs_exact: empty matrix list");
  const Eigen::Index n = mats.front().rows();
  Matrix h = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < mats.size(); ++j)
    if (y(static_cast<Eigen::Index>(j)) != 0.0) h += y(static_cast<Eigen::Index>(j)) * mats[j];
  return DensityOperator(gibbs_matrix(eigh(hermitize(h))));
}

DensityOperator gibbs_exact(const RealVector& y, const SdpInstance& inst) {
  std::vector<Matrix> mats;
  mats.reserve(inst.m + 1);
  for (int j = 0; j <= inst.m; ++j) mats.push_back(inst.constraint(j));
  return gibbs_exact(y, mats);
}

namespace {

// alpha is the shared normalization of the constituent encodings.
GibbsResult operator_model_from_lcu(const BlockEncoding& lcu, double alpha, double K, double theta,
                                    QueryLedger* ledger) {
  const int n = lcu.n;
  const Matrix h = hermitize(lcu.block());
  const double lmin = eigh(h).values.minCoeff();
  // exp(-(x - lmin)/2) expanded around lmin + r; the coefficient sum is
  // exp(delta/2) with delta = 1.
  const double r = std::max(lcu.alpha, 1.0);
  TaylorSpec spec;
  spec.x0 = lmin + r;
  spec.r = r;
  spec.delta = 1.0;
  spec.K = std::exp(0.5);
  const double shift = std::exp(-r / 2.0);
  spec.coeff = [shift](int l) { return shift * factorial_ratio(-0.5, l); };
  spec.f = [lmin](double x) { return std::exp(-(x - lmin) / 2.0); };
  spec.eps_prime = theta / 10.0;
  const BlockEncoding sf = smooth_function(lcu, spec, nullptr);
  // Apply to the maximally mixed state and renormalize.
  const Matrix g = sf.block();
  GibbsResult out{normalize(g * g.adjoint() / static_cast<double>(n)), cost::gibbs_operator(alpha, K, n, theta)};
  charge_if(ledger, Formula::GibbsOperatorModel, Counter::OperatorU, out.charge);
  return out;
}

}  // namespace

GibbsResult gibbs_operator_model(const std::vector<BlockEncoding>& encs, const RealVector& y, double K, double theta,
                                 QueryLedger* ledger) {
  if (static_cast<std::size_t>(y.size()) != encs.size())
    throw DimensionMismatch("gibbs_operator_model: coefficient and encoding counts differ");
  if (!(theta > 0 && theta < 1)) throw ContractViolation("gibbs_operator_model: theta must lie in (0, 1)");
  const double l1 = y.cwiseAbs().sum();
  if (K < l1 * (1 - 1e-12)) throw ContractViolation("gibbs_operator_model: K = " + num(K) + " below ||y||_1 = " + num(l1));
  const BlockEncoding lcu = linear_combination(encs, make_prep_pair(y, std::max(K, 1e-300)), nullptr);
  return operator_model_from_lcu(lcu, encs.front().alpha, K, theta, ledger);
}

GibbsResult gibbs_operator_model(const OperatorOracle& oracle, const SparseVectorTree& tree, double K, double theta,
                                 QueryLedger* ledger) {
  if (tree.m() + 1 != oracle.size())
    throw DimensionMismatch("gibbs_operator_model: tree and oracle sizes differ");
  if (!(theta > 0 && theta < 1)) throw ContractViolation("gibbs_operator_model: theta must lie in (0, 1)");
  StatePrepPair pair = tree.prep_pair(K);
  // The encoded vector is the stored one; grid rounding is not an error here.
  pair.target = tree.values();
  pair.precision = pair.reconstruction_error();
  std::vector<BlockEncoding> encs;
  encs.reserve(oracle.size());
  for (int j = 0; j < oracle.size(); ++j) encs.push_back(oracle.encoding(j));
  const BlockEncoding lcu = linear_combination(encs, pair, nullptr);
  return operator_model_from_lcu(lcu, oracle.alpha(), K, theta, ledger);
}

SubnormalizedGibbsPart project_uniform(const Matrix& rho, const Matrix& rho_tilde, const Projector& pi, double q,
                                       double nu, QueryLedger* ledger) {
  const int n = pi.dim();
  if (rho.rows() != n || rho_tilde.rows() != n) throw DimensionMismatch("project_uniform: dimension mismatch");
  if (!(q > 0 && q <= 1)) throw ContractViolation("project_uniform: q must lie in (0, 1]");
  if (pi.rank() == 0) throw ContractViolation("project_uniform: empty subspace");
  const Matrix P = pi.matrix();
  const Matrix Q = Matrix::Identity(n, n) - P;
  const double support = operator_norm(hermitize(Q * rho * Q));
  if (support > 1e-9)
    throw PreconditionError("support", "rho has weight " + num(support) + " outside the subspace");
  // Orthonormal basis V of the subspace; check V^dag (rho - q I) V >= 0.
  const Eigh ep = eigh(P);
  const Matrix V = ep.vectors.rightCols(pi.rank());
  const Matrix restricted = hermitize(V.adjoint() * rho * V);
  const double low = eigh(restricted).values.minCoeff();
  if (low < q - 1e-9)
    throw PreconditionError("q-domination", "smallest eigenvalue on the subspace " + num(low) + " below q = " + num(q));
  const double close = trace_norm_hermitian(rho - rho_tilde);
  if (close > 4.0 * nu + 1e-12)
    throw PreconditionError("closeness", "||rho - rho~||_1 = " + num(close) + " exceeds 4 nu = " + num(4 * nu));

  // Clip rho~ on the subspace to [q, 1] and embed; outside the subspace use 1
  // so that the operator stays in [1/kappa, 1].
  const Eigh et = eigh(hermitize(V.adjoint() * rho_tilde * V));
  const RealVector vals = et.values.cwiseMax(q).cwiseMin(1.0);
  const Matrix W = V * et.vectors;
  const Matrix clipped = W * vals.cast<cplx>().asDiagonal() * W.adjoint() + Q;
  const double kappa = std::max(2.0, 1.0 / q);
  const BlockEncoding inv = negative_power(dilate(hermitize(clipped), 1.0), kappa, 0.5, q / 8.0, nullptr);
  // The block is clipped^-1/2; rescale it to (sqrt(q)/2) rho~^-1/2 on the subspace.
  const Matrix Vop = P * (inv.block() * (std::sqrt(q) / 2.0)) * P;
  SubnormalizedGibbsPart out;
  out.part = hermitize(Vop * rho * Vop.adjoint());
  out.subspace = pi;
  out.scale = q / 4.0;
  charge_if(ledger, Formula::ProjectUniform, Counter::StatePrep, cost::project_uniform(q));
  return out;
}

StateModelResult gibbs_state_model(const DensityOperator& rho_plus, const DensityOperator& rho_minus, double beta,
                                   double q, double eta, double delta, const StateModelOptions& opts,
                                   QueryLedger* ledger) {
  const int n = rho_plus.dim();
  if (rho_minus.dim() != n) throw DimensionMismatch("gibbs_state_model: dimension mismatch");
  if (!(beta >= 1.0) || (opts.strict_beta_range && beta > n / 2.0 * (1 + 1e-12)))
    throw PreconditionError("beta-range", "beta = " + num(beta) + " outside [1, n/2]");
  if (!(q > 0) || q > (1.0 / beta) * (1 + 1e-12) || (opts.strict_q_range && q < (2.0 / n) * (1 - 1e-12)))
    throw PreconditionError("q-range", "q = " + num(q) + " outside [2/n, 1/beta]");
  if (!(delta > 0 && delta < 1)) throw PreconditionError("delta-range", "delta = " + num(delta) + " outside (0, 1)");
  if (!(eta > 0)) throw PreconditionError("eta-separation", "eta must be positive");

  const Matrix H = hermitize((rho_plus.matrix() - rho_minus.matrix()) * 0.5);
  const Eigh eh = eigh(H);
  StateModelResult res;
  StateModelDetails& d = res.details;
  d.delta_prime = delta * q * q / 64.0;

  // Threshold labels; eigenvalues within eta of q are ambiguous.
  Rng rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  Matrix P = Matrix::Zero(n, n);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    const double lam = eh.values(i);
    bool high = lam > q;
    if (std::abs(lam - q) < eta) {
      d.separation_violated = true;
      if (opts.enforce_separation)
        throw PreconditionError("eta-separation",
                                "eigenvalue " + num(lam) + " within eta = " + num(eta) + " of q = " + num(q));
      if (coin(rng)) high = !high;
    }
    if (high) {
      P += eh.vectors.col(i) * eh.vectors.col(i).adjoint();
      ++rank;
    }
  }
  const Projector pi(hermitize(P));
  const Matrix Plow = Matrix::Identity(n, n) - pi.matrix();

  const Matrix sigma = hermitize(pi.matrix() * (rho_plus.matrix() + rho_minus.matrix()) * 0.5 * pi.matrix());
  d.empty_high = rank == 0 || sigma.trace().real() < q / 2.0;

  Matrix high = Matrix::Zero(n, n);
  if (!d.empty_high) {
    // Binary search for an upper estimate of the top eigenvalue on (q, 1].
    double lo = q, hi = 1.0;
    const double top = eh.values.maxCoeff();
    d.search_rounds = static_cast<int>(std::ceil(std::log2(2.0 * beta)));
    for (int k = 0; k < d.search_rounds; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (top > mid) lo = mid; else hi = mid;
    }
    d.lambda_tilde = hi;
    const double lt = hi;

    const SubnormalizedGibbsPart unif = project_uniform(sigma, sigma, pi, q, d.delta_prime, nullptr);

    // exp(beta (x - lt)/2) on [-1, lt]; coefficient sum exp(beta delta/2) <= 2.
    TaylorSpec spec;
    spec.x0 = (lt - 1.0) / 2.0;
    spec.r = (lt + 1.0) / 2.0;
    spec.delta = std::min(spec.r, 2.0 * std::log(2.0) / beta);
    spec.K = 2.0;
    const double base = std::exp(beta * (spec.x0 - lt) / 2.0);
    spec.coeff = [base, beta](int l) { return base * factorial_ratio(beta / 2.0, l); };
    spec.f = [beta, lt](double x) { return std::exp(beta * (x - lt) / 2.0); };
    spec.eps_prime = d.delta_prime / 4.0;
    const std::int64_t M = next_pow2(spec.r * std::log(1.0 / spec.eps_prime) / spec.delta);
    const double tau = std::numbers::pi / (2.0 * (spec.r + spec.delta));
    const BlockEncoding b = smooth_function(controlled_simulation_exact(H, M, tau, spec.eps_prime), spec);
    const Matrix Bop = b.block() / spec.K;
    high = hermitize(Bop * unif.part * Bop.adjoint());
    // (q/16) exp(-beta lt) Pi exp(beta H) up to the approximation error.
    d.xi = std::min(q * std::exp(-beta * lt) / 16.0, 1.0 / (4.0 * std::numbers::e * n));
  } else {
    d.lambda_tilde = q;
    d.xi = 1.0 / (4.0 * std::numbers::e * n);
  }

  // Low part: Pi_low exp(beta H/2) / (2 sqrt(e)) applied to I/n.
  const Matrix ghalf = apply_function(eh, [beta](double x) { return std::exp(beta * x / 2.0); });
  const Matrix G = Plow * ghalf / (2.0 * std::sqrt(std::numbers::e));
  const double gnorm = operator_norm(G);
  if (gnorm > 1.0 + 1e-9)
    throw PreconditionError("low-part-norm", "low-part operator norm " + num(gnorm) + " exceeds 1");
  const Matrix low = hermitize(G * G.adjoint() / static_cast<double>(n));
  d.high_trace = high.trace().real();
  d.low_trace = low.trace().real();

  // Damp both branches to coefficient xi and mix with weight 1/2 each.
  Matrix mix = 0.5 * (d.xi / (1.0 / (4.0 * std::numbers::e * n))) * low;
  if (!d.empty_high) {
    const double hscale = q * std::exp(-beta * d.lambda_tilde) / 16.0;
    mix += 0.5 * (d.xi / hscale) * high;
  }
  res.state = normalize(mix);
  res.charge = cost::gibbs_state_model(q, eta);
  charge_if(ledger, Formula::GibbsStateModel, Counter::StatePrep, res.charge);
  return res;
}

int seed_bits(double beta, double delta) {
  if (!(beta > 0 && delta > 0)) throw ContractViolation("seed_bits: beta and delta must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::log2(16.0 * beta / delta))));
}

SeededResult gibbs_state_model_seeded(const DensityOperator& rho_plus, const DensityOperator& rho_minus, double beta,
                                      double theta, double delta, std::uint64_t seed, QueryLedger* ledger) {
  const int n = rho_plus.dim();
  if (rho_minus.dim() != n) throw DimensionMismatch("gibbs_state_model_seeded: dimension mismatch");
  if (!(beta >= 1.0)) throw ContractViolation("gibbs_state_model_seeded: beta must be >= 1");
  if (!(delta > 0 && delta < 1)) throw ContractViolation("gibbs_state_model_seeded: delta must lie in (0, 1)");
  if (!(theta > 0 && theta < 1)) throw ContractViolation("gibbs_state_model_seeded: theta must lie in (0, 1)");
  SeededResult res;
  if (beta >= n / 2.0) {
    // Large beta: operator model on the two dilations, K = beta.
    const std::vector<BlockEncoding> encs{dilate(rho_plus.matrix(), 1.0), dilate(rho_minus.matrix(), 1.0)};
    RealVector y(2);
    y << beta / 2.0, -beta / 2.0;
    GibbsResult g = gibbs_operator_model(encs, y, beta, theta, nullptr);
    res.state = g.state;
    res.delegated = true;
    res.charge = g.charge;
    charge_if(ledger, Formula::GibbsOperatorModel, Counter::OperatorU, res.charge);
    return res;
  }
  const int bits = seed_bits(beta, delta);
  const std::uint64_t slots = std::uint64_t{1} << bits;
  if (seed >= slots) throw std::out_of_range("gibbs_state_model_seeded: seed must be below 2^" + std::to_string(bits));
  res.q = 1.0 / (2.0 * beta) * (1.0 + (static_cast<double>(seed) + 0.5) / static_cast<double>(slots));
  res.eta = delta / (8.0 * beta * beta);
  StateModelOptions opts;
  // q >= 2/n holds automatically when beta <= n/4.
  opts.strict_q_range = beta <= n / 4.0;
  try {
    // exp(-beta H) is exp(beta H') for H' = (rho_minus - rho_plus)/2.
    StateModelResult s = gibbs_state_model(rho_minus, rho_plus, beta, res.q, res.eta, delta, opts, nullptr);
    res.state = s.state;
  } catch (const PreconditionError& e) {
    res.seed_failed = true;
    res.failure = e.name();
    res.state = DensityOperator::maximally_mixed(n);
  }
  res.charge = cost::gibbs_seeded(beta, delta);
  charge_if(ledger, Formula::GibbsSeeded, Counter::StatePrep, res.charge);
  return res;
}

SeededResult gibbs_state_decomposition(const StateDecomposition& decomp, const RealVector& y, double K, double theta,
                                       std::uint64_t seed, QueryLedger* ledger) {
  const int n = decomp.n;
  if (static_cast<std::size_t>(y.size()) != decomp.terms.size())
    throw DimensionMismatch("gibbs_state_decomposition: coefficient count differs from the decomposition");
  if ((y.array() < 0).any()) throw ContractViolation("gibbs_state_decomposition: y must be nonnegative");
  if (K < y.sum() * (1 - 1e-12)) throw ContractViolation("gibbs_state_decomposition: K below ||y||_1");
  const double KB = K * decomp.B;
  if (!(KB > 0)) throw ContractViolation("gibbs_state_decomposition: K B must be positive");
  Matrix plus = Matrix::Zero(n, n), minus = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < decomp.terms.size(); ++j) {
    const StateTerm& t = decomp.terms[j];
    const double yj = y(static_cast<Eigen::Index>(j));
    if (yj == 0.0) continue;
    plus += (yj * t.mu_plus / KB) * t.rho_plus.matrix();
    minus += (yj * t.mu_minus / KB) * t.rho_minus.matrix();
  }
  // sum_j y_j A_j - identity part = K B (rho+ - rho-) = 2 K B H.
  double beta = 2.0 * KB;
  if (beta < 1.0) {
    // Fold the temperature into the states so that beta = 1.
    plus *= beta;
    minus *= beta;
    beta = 1.0;
  }
  SeededResult res = gibbs_state_model_seeded(DensityOperator(hermitize(plus)), DensityOperator(hermitize(minus)),
                                              beta, theta, 0.2, seed, nullptr);
  res.charge = cost::gibbs_decomposition(decomp.B, K);
  charge_if(ledger, Formula::GibbsDecomposition, Counter::StatePrep, res.charge);
  return res;
}

TraceEstimator::TraceEstimator(const BlockEncoding& enc, double theta) : theta_(theta) {
  if (!(theta > 0 && theta < 1)) throw ContractViolation("TraceEstimator: theta must lie in (0, 1)");
  // H' = I/2 + A/4 from an LCU of the identity and the encoding of A/alpha.
  BlockEncoding unit = enc;
  unit.alpha = 1.0;
  if (unit.target) unit.target = *enc.target / enc.alpha;
  const BlockEncoding id = pad_ancillas(identity_encoding(enc.n), enc.ancillas);
  RealVector y(2);
  y << 0.5, enc.alpha / 4.0;
  const BlockEncoding hp = linear_combination({id, unit}, make_prep_pair(y, y.sum()), nullptr);
  const BlockEncoding root = positive_power(hp, 4.0, 0.5, theta / 4.0, nullptr);
  // Realized amplitude block sqrt(H')/2.
  b_ = root.unitary.topLeftCorner(enc.n, enc.n);
  per_sample_ = cost::trace_estimator(enc.alpha, theta);
}

double TraceEstimator::success_probability(const Matrix& rho) const {
  if (rho.rows() != b_.rows()) throw DimensionMismatch("TraceEstimator: state dimension mismatch");
  return std::clamp((b_ * rho * b_.adjoint()).trace().real(), 0.0, 1.0);
}

double TraceEstimator::sample(const Matrix& rho, Rng& rng, QueryLedger* ledger) const {
  std::bernoulli_distribution flag(success_probability(rho));
  charge_if(ledger, Formula::TraceEstimator, Counter::TraceEst, per_sample_);
  return flag(rng) ? 14.0 : -2.0;
}

double trace_estimator_sample(const BlockEncoding& enc, const DensityOperator& rho, Rng& rng, QueryLedger* ledger) {
  return TraceEstimator(enc).sample(rho.matrix(), rng, ledger);
}

std::int64_t trace_mean_copies(double gamma, double sigma) {
  const Count k = cost::trace_mean_copies(gamma, sigma);
  if (k > static_cast<Count>(INT64_MAX)) throw std::overflow_error("trace_mean_copies: count exceeds int64");
  return static_cast<std::int64_t>(k);
}

double trace_mean_estimate(double p, std::int64_t k, Rng& rng, QueryLedger* ledger, Count gibbs_cost,
                           Count trace_cost) {
  if (k < 1) throw ContractViolation("trace_mean_estimate: k must be >= 1");
  if (!(p >= 0 && p <= 1)) throw ContractViolation("trace_mean_estimate: p must lie in [0, 1]");
  double hits;
  const double var = static_cast<double>(k) * p * (1.0 - p);
  if (var > kNormalHitsVariance) {
    // Berry-Esseen bounds the CDF gap by about 0.5/sqrt(var) < 1e-3 here.
    std::normal_distribution<double> draw(static_cast<double>(k) * p, std::sqrt(var));
    hits = std::clamp(std::round(draw(rng)), 0.0, static_cast<double>(k));
  } else {
    std::binomial_distribution<std::int64_t> draw(k, p);
    hits = static_cast<double>(draw(rng));
  }
  if (ledger) {
    CostVector v = CostVector::of(Counter::GibbsPrep, checked_mul(static_cast<Count>(k), gibbs_cost));
    v.c[static_cast<int>(Counter::TraceEst)] = checked_mul(static_cast<Count>(k), trace_cost);
    ledger->charge(Formula::TraceMeanEstimate, v);
  }
  return 16.0 * hits / static_cast<double>(k) - 2.0;
}

}  // namespace qsdp
