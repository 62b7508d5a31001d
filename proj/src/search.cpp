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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qsdp/cost.hpp"
#include "qsdp/solver.hpp"

namespace qsdp {

std::optional<int> two_phase_search_sim(const std::vector<double>& p, double nu, Rng& rng, QueryLedger* ledger) {
  if (!(nu > 0 && nu < 1)) throw ContractViolation("two_phase_search_sim: nu must lie in (0, 1)");
  std::vector<int> ok;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0 && p[i] <= 1)) throw ContractViolation("two_phase_search_sim: probabilities must lie in [0, 1]");
    if (p[i] >= 1.0 / 3.0) ok.push_back(static_cast<int>(i) + 1);
  }
  if (ledger) {
    const auto m = static_cast<std::int64_t>(std::max<std::size_t>(p.size(), 1));
    ledger->charge(Formula::TwoPhaseSamples, Counter::GibbsPrep, cost::two_phase_samples(m, nu));
    ledger->charge(Formula::TwoPhaseApplications, Counter::Reflection, cost::two_phase_applications(m, nu));
  }
  if (ok.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, ok.size() - 1);
  return ok[pick(rng)];
}

int two_phase_min_find_sim(const std::vector<double>& a, const std::vector<double>& eta, double delta, double M,
                           double nu, Rng& rng, QueryLedger* ledger) {
  if (a.empty()) throw ContractViolation("two_phase_min_find_sim: empty index set");
  if (eta.size() != a.size()) throw DimensionMismatch("two_phase_min_find_sim: value and error-bar counts differ");
  if (!(delta > 0) || !(M > 0)) throw ContractViolation("two_phase_min_find_sim: delta and M must be positive");
  double smallest = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) + std::abs(eta[i]) < smallest) smallest = std::abs(a[i]) + std::abs(eta[i]);
    if (a[i] + eta[i] < a[arg] + eta[arg]) arg = i;
  }
  if (smallest > M) throw ContractViolation("two_phase_min_find_sim: min |a_j| + |eta_j| exceeds M");
  const Count rounds = cost::min_finding_rounds(M, delta);
  double lo = -M, hi = M;
  int found = 0;
  std::vector<double> p(a.size());
  for (Count r = 0; r < rounds; ++r) {
    const double v = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + eta[i] <= v ? 1.0 : 0.0;
    const auto j = two_phase_search_sim(p, nu, rng, nullptr);
    if (j) {
      found = *j;
      hi = v;
    } else {
      lo = v;
    }
  }
  // No threshold below M qualified: the minimum itself lies within delta of M.
  if (found == 0) found = static_cast<int>(arg) + 1;
  if (ledger) {
    const auto m = static_cast<std::int64_t>(a.size());
    CostVector v = CostVector::of(Counter::GibbsPrep, checked_mul(rounds, cost::two_phase_samples(m, nu)));
    v.c[static_cast<int>(Counter::Reflection)] = checked_mul(rounds, cost::two_phase_applications(m, nu));
    ledger->charge(Formula::MinFinding, v);
  }
  return found;
}

namespace {

struct PairBest {
  bool feasible = false;
  double cj = 0.0, ck = 0.0, value = -std::numeric_limits<double>::infinity();
};

// max cj tj + ck tk  s.t.  cj bj + ck bk <= G, cj + ck <= S, c >= 0.
PairBest pair_lp(double bj, double bk, double tj, double tk, double G, double S) {
  // Lines as (a1, a2, rhs): c_j = 0, c_k = 0, c_j + c_k = S, b.c = G.
  const std::array<std::array<double, 3>, 4> lines{{{1, 0, 0}, {0, 1, 0}, {1, 1, S}, {bj, bk, G}}};
  constexpr double tol = 1e-12;
  PairBest best;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      const auto& L = lines[u];
      const auto& N = lines[v];
      const double det = L[0] * N[1] - L[1] * N[0];
      if (std::abs(det) < 1e-15) continue;
      const double cj = (L[2] * N[1] - L[1] * N[2]) / det;
      const double ck = (L[0] * N[2] - L[2] * N[0]) / det;
      if (cj < -tol || ck < -tol || cj + ck > S + tol || bj * cj + bk * ck > G + tol) continue;
      const double val = cj * tj + ck * tk;
      if (!best.feasible || val > best.value) best = {true, std::max(cj, 0.0), std::max(ck, 0.0), val};
    }
  return best;
}

}  // namespace

ThetaStep theta_oracle(const std::function<double(int)>& trace, const RealVector& b, double r, double delta) {
  if (!(r > 0.5)) throw ContractViolation("theta_oracle: r must exceed 1/2");
  const int m = static_cast<int>(b.size()) - 1;
  const double y0 = 1.0 / (2.0 * r);
  const double S = 1.0 - y0;
  // b.y~ <= 0  <=>  sum_{j>=1} c_j b_j <= G;  trace condition  <=>  sum c_j t_j >= T.
  const double G = -b(0) * y0;
  const double t0 = trace(0);
  const double T = -delta - t0 * y0;
  ThetaStep step;
  if (G >= 0 && T <= 0) {
    step.empty = false;
    return step;
  }
  for (int j = 1; j <= m; ++j) {
    const double bj = b(j);
    const double tj = trace(j);
    double lo = 0.0, hi = S;
    if (bj > 0) hi = std::min(hi, G / bj);
    else if (bj < 0) lo = std::max(lo, G / bj);
    else if (G < 0) continue;
    if (tj > 0) lo = std::max(lo, T / tj);
    else if (tj < 0) hi = std::min(hi, T / tj);
    else if (T > 0) continue;
    if (lo <= hi) {
      step.empty = false;
      step.j = j;
      step.c = lo;
      return step;
    }
  }
  // Pairs: a 2-variable LP per (j, k); the best vertex is returned.
  std::vector<double> t(m + 1);
  for (int j = 1; j <= m; ++j) t[j] = trace(j);
  for (int j = 1; j <= m; ++j)
    for (int k = j + 1; k <= m; ++k) {
      const PairBest pb = pair_lp(b(j), b(k), t[j], t[k], G, S);
      if (pb.feasible && pb.value >= T) {
        step.empty = false;
        step.j = j;
        step.c = pb.cj;
        step.k = k;
        step.c2 = pb.ck;
        return step;
      }
    }
  return step;
}

}  // namespace qsdp
