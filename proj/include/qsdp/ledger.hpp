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

// Query ledger: per-oracle counters plus per-formula tallies for composite
// operations. Full solves charge on the order of 1e26 queries, so counts are
// 128-bit.

#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <string>

namespace qsdp {

using Count = unsigned __int128;

std::string count_to_string(Count c);
// Parses a decimal string produced by count_to_string.
Count count_from_string(const std::string& s);
// Ceiling of a finite nonnegative real, with values within relative 1e-12 of
// an integer snapped to it; throws std::overflow_error if it does not fit.
Count ceil_count(double v);
Count checked_mul(Count a, Count b);
Count checked_add(Count a, Count b);

enum class Counter : int {
  SparseIndex = 0,
  SparseEntry,
  BVector,
  Mu,
  StatePrep,
  OperatorU,
  Hamiltonian,
  GibbsPrep,
  TraceEst,
  Reflection,
  StateSample,
  kCount
};
inline constexpr int kNumCounters = static_cast<int>(Counter::kCount);
const char* counter_name(Counter c);

enum class Formula : int {
  SparseToBlock = 0,
  StateToBlock,
  HamiltonianToOperator,
  HamiltonianSimulation,
  ControlledSimulation,
  NegativePower,
  PositivePower,
  GibbsOperatorModel,
  ProjectUniform,
  GibbsStateModel,
  GibbsSeeded,
  GibbsDecomposition,
  TraceEstimator,
  TraceMeanEstimate,
  TwoPhaseSamples,
  TwoPhaseApplications,
  MinFinding,
  SolverGibbs,
  SolverTrace,
  ShadowSamples,
  kCount
};
inline constexpr int kNumFormulas = static_cast<int>(Formula::kCount);
const char* formula_name(Formula f);
// Human-readable cost expression with every hidden constant fixed.
const char* formula_expression(Formula f);

// Per-counter query counts, e.g. the cost of one application of an encoding.
struct CostVector {
  std::array<Count, kNumCounters> c{};

  static CostVector of(Counter k, Count amount = 1) {
    CostVector v;
    v.c[static_cast<int>(k)] = amount;
    return v;
  }
  Count operator[](Counter k) const { return c[static_cast<int>(k)]; }
  Count total() const;
  CostVector scaled(Count factor) const;
  CostVector operator+(const CostVector& o) const;
};

struct FormulaTally {
  Count invocations = 0;
  Count total = 0;
};

struct LedgerSnapshot {
  std::array<Count, kNumCounters> counters{};
  std::array<FormulaTally, kNumFormulas> formulas{};

  Count counter(Counter c) const { return counters[static_cast<int>(c)]; }
  const FormulaTally& formula(Formula f) const { return formulas[static_cast<int>(f)]; }
  Count total() const;
  std::string to_json() const;
};

// Thread-safe; counters only ever grow.
class QueryLedger {
 public:
  QueryLedger() = default;
  QueryLedger(const QueryLedger&) = delete;
  QueryLedger& operator=(const QueryLedger&) = delete;

  // A single base-oracle query kind.
  void charge(Counter c, Count amount = 1);
  // A composite operation charging `amount` queries of kind c under formula f.
  void charge(Formula f, Counter c, Count amount);
  // A composite operation charging a mixed vector of queries under formula f.
  void charge(Formula f, const CostVector& v);
  void charge(const CostVector& v);
  void merge(const LedgerSnapshot& other);

  Count count(Counter c) const;
  FormulaTally tally(Formula f) const;
  Count total() const;
  LedgerSnapshot snapshot() const;

 private:
  mutable std::mutex mu_;
  LedgerSnapshot s_;
};

// Helper for optional ledgers.
inline void charge_if(QueryLedger* l, Counter c, Count amount = 1) {
  if (l) l->charge(c, amount);
}
inline void charge_if(QueryLedger* l, Formula f, Counter c, Count amount) {
  if (l) l->charge(f, c, amount);
}
inline void charge_if(QueryLedger* l, const CostVector& v) {
  if (l) l->charge(v);
}
inline void charge_if(QueryLedger* l, Formula f, const CostVector& v) {
  if (l) l->charge(f, v);
}

}  // namespace qsdp
