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

// Shared helpers for the unit suites.

#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qsdp/linalg.hpp"

namespace qsdp::testing {

// Random Hermitian matrix with operator norm `norm`.
inline Matrix random_hermitian(int n, std::mt19937_64& rng, double norm = 1.0, bool real = false) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), real ? 0.0 : g(rng));
  Matrix h = (m + m.adjoint()) / 2.0;
  return h * (norm / operator_norm(h));
}

inline Vector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline Matrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  Matrix p = m * m.adjoint();
  return p / p.trace().real();
}

// exp(-H)/Tr via the Pade-based matrix exponential, independent of any
// eigendecomposition.
inline Matrix expm_gibbs(const Matrix& h) {
  Matrix e = (-h).exp();
  return e / e.trace().real();
}

inline Matrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

}  // namespace qsdp::testing
