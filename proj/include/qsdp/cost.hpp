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

// Registered cost formulas. Hidden constants and polylog factors are fixed
// to the expressions below; formula_expression() returns the same text.
// L(x) denotes max(1, log2 x); ln is the natural logarithm.

#pragma once

#include <cstdint>

#include "qsdp/ledger.hpp"

namespace qsdp::cost {

double L(double x);

// 2 index queries + 2 entry queries per use.
inline constexpr Count kSparseIndexPerBlock = 2;
inline constexpr Count kSparseEntryPerBlock = 2;
// G+, G-, and their inverses, plus one coefficient query.
inline constexpr Count kStatePrepPerBlock = 4;
inline constexpr Count kMuPerBlock = 1;

// ceil(ln(1/eps) / (pi/2 - 1))
Count hamiltonian_to_operator(double eps);
// ceil(|alpha t|) + ceil(ln(1/eps) / max(1, ln ln(1/eps)))
Count hamiltonian_simulation(double alpha, double t, double eps);
// ceil(|alpha M tau|) + ceil(J ln(J/eps) / max(1, ln ln(J/eps))), J = log2 M
Count controlled_simulation(double alpha, std::int64_t M, double tau, double eps);
// ceil(kappa max(1,c) max(1, ln(kappa^c/eps)))
Count negative_power(double kappa, double c, double eps);
// ceil(kappa max(1, ln(1/eps)))
Count positive_power(double kappa, double eps);

// alpha max(K,1) sqrt(n) L(1/theta)
double gibbs_operator_value(double alpha, double K, int n, double theta);
Count gibbs_operator(double alpha, double K, int n, double theta);
// ceil(L(1/q) / q)
Count project_uniform(double q);
// q^-1.5 / eta
double gibbs_state_model_value(double q, double eta);
Count gibbs_state_model(double q, double eta);
// beta^3.5 / delta
double gibbs_seeded_value(double beta, double delta);
Count gibbs_seeded(double beta, double delta);
// seeded cost at beta = 2 K B, delta = 1/5
double gibbs_decomposition_value(double B, double K);
Count gibbs_decomposition(double B, double K);
// ceil(alpha L(1/theta))
Count trace_estimator(double alpha, double theta);
// ceil(6 (4 sigma gamma)^2)
Count trace_mean_copies(double gamma, double sigma);
// ceil(L(m)^4 L(1/nu))
Count two_phase_samples(std::int64_t m, double nu);
// ceil(sqrt(m) L(1/nu))
Count two_phase_applications(std::int64_t m, double nu);
// ceil(log2(2M/delta))
Count min_finding_rounds(double M, double delta);

// Sample budget for descriptive shadow tomography with m two-sided
// constraints on an n-dimensional state at accuracy eps:
//   ceil(16 ln n / eps^2) * ceil(3456 (12/eps)^2) * ceil(L(2m)^4 L(eps^2/144))
// i.e. iterations * copies-per-estimate * two-phase samples.
Count shadow_samples(std::int64_t m, int n, double eps);
std::int64_t shadow_iterations(int n, double eps);

}  // namespace qsdp::cost
