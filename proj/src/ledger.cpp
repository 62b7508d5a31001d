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

#include "qsdp/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

#include "qsdp/cost.hpp"

namespace qsdp {

namespace {

constexpr Count kCountMax = ~Count(0);

constexpr const char* kCounterNames[kNumCounters] = {
    "sparse-index", "sparse-entry", "b-vector",   "mu",        "state-prep", "operator-U",
    "hamiltonian",  "gibbs-prep",   "trace-est", "reflection", "state-sample"};

struct FormulaInfo {
  const char* name;
  const char* expression;
};

constexpr FormulaInfo kFormulas[kNumFormulas] = {
    {"sparse-to-block", "2 index + 2 entry queries"},
    {"state-to-block", "4 state-prep (G+, G-, inverses) + 1 mu query"},
    {"hamiltonian-to-operator", "ceil(ln(1/eps)/(pi/2-1))"},
    {"hamiltonian-simulation", "ceil(|alpha t|) + ceil(ln(1/eps)/max(1, ln ln(1/eps)))"},
    {"controlled-simulation", "ceil(|alpha M tau|) + ceil(J ln(J/eps)/max(1, ln ln(J/eps)))"},
    {"negative-power", "ceil(kappa max(1,c) max(1, ln(kappa^c/eps)))"},
    {"positive-power", "ceil(kappa max(1, ln(1/eps)))"},
    {"gibbs-operator-model", "ceil(alpha max(K,1) sqrt(n) L(1/theta))"},
    {"project-uniform", "ceil(L(1/q)/q)"},
    {"gibbs-state-model", "ceil(q^-1.5/eta)"},
    {"gibbs-seeded", "ceil(beta^3.5/delta)"},
    {"gibbs-decomposition", "ceil(5 (2KB)^3.5)"},
    {"trace-estimator", "ceil(alpha L(1/theta))"},
    {"trace-mean-estimate", "k = ceil(6 (4 sigma gamma)^2) Gibbs copies and estimator calls"},
    {"two-phase-samples", "ceil(L(m)^4 L(1/nu))"},
    {"two-phase-applications", "ceil(sqrt(m) L(1/nu))"},
    {"min-finding", "ceil(log2(2M/delta)) search rounds"},
    {"solver-gibbs", "k S T_Gibbs per iteration"},
    {"solver-trace", "k A T_Tr per iteration"},
    {"shadow-samples",
     "ceil(16 ln n/eps^2) ceil(3456 (12/eps)^2) ceil(L(2m)^4 L(eps^2/144))"},
};

}  // namespace

std::string count_to_string(Count c) {
  if (c == 0) return "0";
  std::string s;
  while (c > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
    c /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Count count_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("count_from_string: empty");
  Count c = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("count_from_string: not a decimal: " + s);
    c = checked_add(checked_mul(c, 10), static_cast<Count>(ch - '0'));
  }
  return c;
}

Count ceil_count(double v) {
  if (!std::isfinite(v) || v < 0) throw std::overflow_error("ceil_count: value not finite and nonnegative");
  // Values within relative 1e-12 of an integer are taken as that integer,
  // so algebraically equal expressions round the same way.
  const double near = std::round(v);
  const double c = std::abs(v - near) <= 1e-12 * std::max(1.0, v) ? near : std::ceil(v);
  if (c >= 3.4e38) throw std::overflow_error("ceil_count: value exceeds 128-bit range");
  if (c < 1.8e19) return static_cast<Count>(static_cast<std::uint64_t>(c));
  // Split to keep the conversion exact for values above 2^64.
  const double hi = std::floor(c / 18446744073709551616.0);
  const double lo = c - hi * 18446744073709551616.0;
  return (static_cast<Count>(static_cast<std::uint64_t>(hi)) << 64) +
         static_cast<Count>(static_cast<std::uint64_t>(lo));
}

Count checked_mul(Count a, Count b) {
  if (a != 0 && b > kCountMax / a) throw std::overflow_error("ledger count overflow");
  return a * b;
}

Count checked_add(Count a, Count b) {
  if (b > kCountMax - a) throw std::overflow_error("ledger count overflow");
  return a + b;
}

const char* counter_name(Counter c) { return kCounterNames[static_cast<int>(c)]; }
const char* formula_name(Formula f) { return kFormulas[static_cast<int>(f)].name; }
const char* formula_expression(Formula f) { return kFormulas[static_cast<int>(f)].expression; }

Count CostVector::total() const {
  Count t = 0;
  for (Count x : c) t = checked_add(t, x);
  return t;
}

CostVector CostVector::scaled(Count factor) const {
  CostVector out;
  for (int i = 0; i < kNumCounters; ++i) out.c[i] = checked_mul(c[i], factor);
  return out;
}

CostVector CostVector::operator+(const CostVector& o) const {
  CostVector out;
  for (int i = 0; i < kNumCounters; ++i) out.c[i] = checked_add(c[i], o.c[i]);
  return out;
}

Count LedgerSnapshot::total() const {
  Count t = 0;
  for (Count c : counters) t = checked_add(t, c);
  return t;
}

std::string LedgerSnapshot::to_json() const {
  nlohmann::json j;
  nlohmann::json cs = nlohmann::json::object();
  for (int i = 0; i < kNumCounters; ++i) cs[kCounterNames[i]] = count_to_string(counters[i]);
  j["counters"] = cs;
  nlohmann::json fs = nlohmann::json::object();
  for (int i = 0; i < kNumFormulas; ++i) {
    if (formulas[i].invocations == 0) continue;
    fs[kFormulas[i].name] = {{"invocations", count_to_string(formulas[i].invocations)},
                             {"total", count_to_string(formulas[i].total)},
                             {"expression", kFormulas[i].expression}};
  }
  j["formulas"] = fs;
  j["total"] = count_to_string(total());
  return j.dump();
}

void QueryLedger::charge(Counter c, Count amount) {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = s_.counters[static_cast<int>(c)];
  slot = checked_add(slot, amount);
}

void QueryLedger::charge(Formula f, Counter c, Count amount) {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = s_.counters[static_cast<int>(c)];
  slot = checked_add(slot, amount);
  auto& t = s_.formulas[static_cast<int>(f)];
  t.invocations = checked_add(t.invocations, 1);
  t.total = checked_add(t.total, amount);
}

void QueryLedger::charge(Formula f, const CostVector& v) {
  std::lock_guard<std::mutex> lock(mu_);
  for (int i = 0; i < kNumCounters; ++i) s_.counters[i] = checked_add(s_.counters[i], v.c[i]);
  auto& t = s_.formulas[static_cast<int>(f)];
  t.invocations = checked_add(t.invocations, 1);
  t.total = checked_add(t.total, v.total());
}

void QueryLedger::charge(const CostVector& v) {
  std::lock_guard<std::mutex> lock(mu_);
  for (int i = 0; i < kNumCounters; ++i) s_.counters[i] = checked_add(s_.counters[i], v.c[i]);
}

void QueryLedger::merge(const LedgerSnapshot& other) {
  std::lock_guard<std::mutex> lock(mu_);
  for (int i = 0; i < kNumCounters; ++i) s_.counters[i] = checked_add(s_.counters[i], other.counters[i]);
  for (int i = 0; i < kNumFormulas; ++i) {
    s_.formulas[i].invocations = checked_add(s_.formulas[i].invocations, other.formulas[i].invocations);
    s_.formulas[i].total = checked_add(s_.formulas[i].total, other.formulas[i].total);
  }
}

Count QueryLedger::count(Counter c) const {
  std::lock_guard<std::mutex> lock(mu_);
  return s_.counters[static_cast<int>(c)];
}

FormulaTally QueryLedger::tally(Formula f) const {
  std::lock_guard<std::mutex> lock(mu_);
  return s_.formulas[static_cast<int>(f)];
}

Count QueryLedger::total() const {
  std::lock_guard<std::mutex> lock(mu_);
  return s_.total();
}

LedgerSnapshot QueryLedger::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return s_;
}

namespace cost {

namespace {
void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}
double lnln_floor(double x) { return std::max(1.0, std::log(std::log(x))); }
}  // namespace

double L(double x) { return x <= 2.0 ? 1.0 : std::max(1.0, std::log2(x)); }

Count hamiltonian_to_operator(double eps) {
  require_positive(eps, "eps");
  return ceil_count(std::max(0.0, std::log(1.0 / eps)) / (std::numbers::pi / 2 - 1));
}

Count hamiltonian_simulation(double alpha, double t, double eps) {
  require_positive(eps, "eps");
  const double inv = 1.0 / eps;
  const double tail = inv > 1.0 ? std::log(inv) / (inv > std::exp(1.0) ? lnln_floor(inv) : 1.0) : 0.0;
  return checked_add(ceil_count(std::abs(alpha * t)), ceil_count(tail));
}

Count controlled_simulation(double alpha, std::int64_t M, double tau, double eps) {
  require_positive(eps, "eps");
  const int J = static_cast<int>(std::lround(std::log2(static_cast<double>(M))));
  Count head = ceil_count(std::abs(alpha * static_cast<double>(M) * tau));
  if (J == 0) return head;
  const double x = J / eps;
  const double tail = J * std::log(x) / (x > std::exp(1.0) ? lnln_floor(x) : 1.0);
  return checked_add(head, ceil_count(std::max(0.0, tail)));
}

Count negative_power(double kappa, double c, double eps) {
  require_positive(eps, "eps");
  return ceil_count(kappa * std::max(1.0, c) * std::max(1.0, c * std::log(kappa) - std::log(eps)));
}

Count positive_power(double kappa, double eps) {
  require_positive(eps, "eps");
  return ceil_count(kappa * std::max(1.0, std::log(1.0 / eps)));
}

double gibbs_operator_value(double alpha, double K, int n, double theta) {
  require_positive(theta, "theta");
  return alpha * std::max(K, 1.0) * std::sqrt(static_cast<double>(n)) * L(1.0 / theta);
}

Count gibbs_operator(double alpha, double K, int n, double theta) {
  return ceil_count(gibbs_operator_value(alpha, K, n, theta));
}

Count project_uniform(double q) {
  require_positive(q, "q");
  return ceil_count(L(1.0 / q) / q);
}

double gibbs_state_model_value(double q, double eta) {
  require_positive(q, "q");
  require_positive(eta, "eta");
  return std::pow(q, -1.5) / eta;
}

Count gibbs_state_model(double q, double eta) { return ceil_count(gibbs_state_model_value(q, eta)); }

double gibbs_seeded_value(double beta, double delta) {
  require_positive(delta, "delta");
  return std::pow(beta, 3.5) / delta;
}

Count gibbs_seeded(double beta, double delta) { return ceil_count(gibbs_seeded_value(beta, delta)); }

double gibbs_decomposition_value(double B, double K) { return gibbs_seeded_value(2.0 * K * B, 0.2); }

Count gibbs_decomposition(double B, double K) { return ceil_count(gibbs_decomposition_value(B, K)); }

Count trace_estimator(double alpha, double theta) {
  require_positive(theta, "theta");
  return ceil_count(alpha * L(1.0 / theta));
}

Count trace_mean_copies(double gamma, double sigma) {
  const double s = 4.0 * sigma * gamma;
  return ceil_count(6.0 * s * s);
}

Count two_phase_samples(std::int64_t m, double nu) {
  require_positive(nu, "nu");
  const double lm = L(static_cast<double>(m));
  return ceil_count(lm * lm * lm * lm * L(1.0 / nu));
}

Count two_phase_applications(std::int64_t m, double nu) {
  require_positive(nu, "nu");
  return ceil_count(std::sqrt(static_cast<double>(m)) * L(1.0 / nu));
}

Count min_finding_rounds(double M, double delta) {
  require_positive(delta, "delta");
  return ceil_count(std::max(0.0, std::log2(2.0 * M / delta)));
}

std::int64_t shadow_iterations(int n, double eps) {
  require_positive(eps, "eps");
  return static_cast<std::int64_t>(std::ceil(16.0 * std::log(static_cast<double>(n)) / (eps * eps)));
}

Count shadow_samples(std::int64_t m, int n, double eps) {
  const Count iters = static_cast<Count>(shadow_iterations(n, eps));
  const Count copies = trace_mean_copies(12.0 / eps, 6.0);
  const Count search = two_phase_samples(2 * m, eps * eps / 144.0);
  return checked_mul(checked_mul(iters, copies), search);
}

}  // namespace cost
}  // namespace qsdp
