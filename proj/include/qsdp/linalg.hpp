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

// Dense Hermitian linear algebra. Everything downstream is checked against
// these routines, so they favor plain eigendecompositions over cleverness.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "qsdp/errors.hpp"

namespace qsdp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianReject = 1e-8;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kProjectorTol = 1e-10;
inline constexpr double kThresholdGap = 1e-12;

// Eigenpairs in ascending order of eigenvalue.
struct Eigh {
  RealVector values;
  Matrix vectors;
};

// Uses a direct path when all off-diagonal entries are exactly zero.
Eigh eigh(const Matrix& h);
bool is_exactly_diagonal(const Matrix& m);

// U f(Λ) U† for an eigendecomposition. Throws DomainError naming the
// eigenvalue if f is not finite there.
Matrix apply_function(const Eigh& e, const std::function<double(double)>& f);

class HermitianOperator {
 public:
  HermitianOperator() = default;
  // Symmetrizes to (M + M†)/2; rejects if the anti-Hermitian part exceeds 1e-8.
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator identity(int n);
  static HermitianOperator zero(int n);
  static HermitianOperator diagonal(const RealVector& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Eigh spectrum() const { return eigh(m_); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;

 private:
  Matrix m_;
};

class DensityOperator {
 public:
  DensityOperator() = default;
  // Checks psd within 1e-10 and trace <= 1 + 1e-10.
  explicit DensityOperator(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return trace_; }
  bool normalized() const { return std::abs(trace_ - 1.0) <= kTraceTol; }
  HermitianOperator as_hermitian() const { return HermitianOperator(m_); }

  static DensityOperator maximally_mixed(int n);
  static DensityOperator pure(const Vector& psi);

 private:
  Matrix m_;
  double trace_ = 0.0;
};

class Projector {
 public:
  Projector() = default;
  explicit Projector(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  int rank() const { return rank_; }
  const Matrix& matrix() const { return m_; }
  Projector complement() const;

 private:
  Matrix m_;
  int rank_ = 0;
};

HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f);

// exp(-H)/Tr exp(-H), shifted by the smallest eigenvalue for stability.
DensityOperator gibbs_state(const HermitianOperator& h);
Matrix gibbs_matrix(const Eigh& e);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const Matrix& a, const Matrix& b);

double min_eigenvalue(const HermitianOperator& h);
double max_eigenvalue(const HermitianOperator& h);

// Projector onto eigenvectors with eigenvalue > q.
Projector threshold_projector(const HermitianOperator& h, double q);

double operator_norm(const Matrix& m);
// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const Matrix& m);
double unitarity_residual(const Matrix& u);
double hermitian_residual(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix dagger(const Matrix& m);

// Real part of Tr(AB) for Hermitian A, B.
double trace_product(const Matrix& a, const Matrix& b);

// Square root of a psd matrix; eigenvalues in [-tol, 0) are clipped to 0.
Matrix psd_sqrt(const Matrix& m, double tol = 1e-9);

// Completes a unit vector v to a unitary whose first column is v.
Matrix unitary_with_first_column(const Vector& v);

}  // namespace qsdp
