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

#include "qsdp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qsdp {

bool is_exactly_diagonal(const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c && m(r, c) != cplx(0.0, 0.0)) return false;
  return true;
}

Eigh eigh(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionMismatch("eigh: matrix is not square");
  const Eigen::Index n = h.rows();
  Eigh out;
  if (is_exactly_diagonal(h)) {
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return h(a, a).real() < h(b, b).real();
    });
    out.values.resize(n);
    out.vectors = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.values(i) = h(order[i], order[i]).real();
      out.vectors(order[i], i) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw DomainError("eigh: eigensolver did not converge");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

Matrix apply_function(const Eigh& e, const std::function<double(double)>& f) {
  const Eigen::Index n = e.values.size();
  RealVector fv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = f(e.values(i));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "function undefined at eigenvalue " << e.values(i);
      throw DomainError(os.str());
    }
    fv(i) = v;
  }
  Matrix out = e.vectors * fv.asDiagonal() * e.vectors.adjoint();
  return (out + out.adjoint()) * 0.5;
}

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("HermitianOperator: matrix is not square");
  if (m.rows() < 1) throw ContractViolation("HermitianOperator: dimension must be >= 1");
  const double anti = hermitian_residual(m);
  if (anti > kHermitianReject) {
    std::ostringstream os;
    os << "HermitianOperator: anti-Hermitian part " << anti << " exceeds " << kHermitianReject;
    throw ContractViolation(os.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(int n) {
  return HermitianOperator(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(int n) {
  return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  return HermitianOperator(Matrix(d.cast<cplx>().asDiagonal()));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionMismatch("HermitianOperator: dimension mismatch");
  return HermitianOperator(Matrix(m_ + o.m_));
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionMismatch("HermitianOperator: dimension mismatch");
  return HermitianOperator(Matrix(m_ - o.m_));
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(Matrix(m_ * s));
}

DensityOperator::DensityOperator(const Matrix& m) {
  HermitianOperator h(m);
  const double lo = eigh(h.matrix()).values.minCoeff();
  if (lo < -kPsdTol) {
    std::ostringstream os;
    os << "DensityOperator: min eigenvalue " << lo << " below -" << kPsdTol;
    throw ContractViolation(os.str());
  }
  const double tr = h.matrix().trace().real();
  if (tr > 1.0 + kTraceTol) {
    std::ostringstream os;
    os.precision(15);
    os << "DensityOperator: trace " << tr << " exceeds 1";
    throw ContractViolation(os.str());
  }
  m_ = h.matrix();
  trace_ = tr;
}

DensityOperator DensityOperator::maximally_mixed(int n) {
  return DensityOperator(Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  return DensityOperator(Matrix(psi * psi.adjoint()));
}

Projector::Projector(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("Projector: matrix is not square");
  if (hermitian_residual(m) > kProjectorTol) throw ContractViolation("Projector: not Hermitian");
  const double idem = operator_norm(m * m - m);
  if (idem > kProjectorTol) {
    std::ostringstream os;
    os << "Projector: idempotence residual " << idem;
    throw ContractViolation(os.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
  rank_ = static_cast<int>(std::lround(m_.trace().real()));
}

Projector Projector::complement() const {
  return Projector(Matrix(Matrix::Identity(dim(), dim()) - m_));
}

HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f) {
  return HermitianOperator(apply_function(eigh(h.matrix()), f));
}

Matrix gibbs_matrix(const Eigh& e) {
  const double lo = e.values.minCoeff();
  RealVector w = (-(e.values.array() - lo)).exp().matrix();
  w /= w.sum();
  Matrix out = e.vectors * w.asDiagonal() * e.vectors.adjoint();
  return (out + out.adjoint()) * 0.5;
}

DensityOperator gibbs_state(const HermitianOperator& h) {
  return DensityOperator(gibbs_matrix(eigh(h.matrix())));
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("trace_distance: dimension mismatch");
  return 0.5 * trace_norm_hermitian(a - b);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

double min_eigenvalue(const HermitianOperator& h) { return eigh(h.matrix()).values.minCoeff(); }

double max_eigenvalue(const HermitianOperator& h) { return eigh(h.matrix()).values.maxCoeff(); }

Projector threshold_projector(const HermitianOperator& h, double q) {
  const Eigh e = eigh(h.matrix());
  const Eigen::Index n = e.values.size();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = e.values(i);
    if (std::abs(lam - q) <= kThresholdGap) {
      std::ostringstream os;
      os.precision(17);
      os << "threshold_projector: eigenvalue " << lam << " within " << kThresholdGap << " of q = " << q;
      throw IllConditionedThreshold(os.str());
    }
    if (lam > q) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
  }
  return Projector(p);
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && hermitian_residual(m) == 0.0)
    return eigh(m).values.cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double trace_norm_hermitian(const Matrix& m) {
  Matrix h = (m + m.adjoint()) * 0.5;
  return eigh(h).values.cwiseAbs().sum();
}

double unitarity_residual(const Matrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() *
         static_cast<double>(u.rows());
}

double hermitian_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() * 0.5;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix dagger(const Matrix& m) { return m.adjoint(); }

double trace_product(const Matrix& a, const Matrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.transpose().array() * b.array()).sum().real();
}

Matrix psd_sqrt(const Matrix& m, double tol) {
  const Eigh e = eigh((m + m.adjoint()) * 0.5);
  return apply_function(e, [tol](double x) {
    if (x < -tol) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(std::max(0.0, x));
  });
}

Matrix unitary_with_first_column(const Vector& v) {
  const Eigen::Index n = v.size();
  const double nv = v.norm();
  if (std::abs(nv - 1.0) > 1e-9) throw ContractViolation("unitary_with_first_column: vector is not unit norm");
  // Householder reflection mapping e_0 to v, times a phase.
  cplx phase = std::abs(v(0)) > 0 ? v(0) / std::abs(v(0)) : cplx(1.0, 0.0);
  Vector e0 = Vector::Zero(n);
  e0(0) = phase;
  Vector w = e0 - v;
  Matrix out;
  if (w.norm() < 1e-15) {
    out = Matrix::Identity(n, n);
  } else {
    w /= w.norm();
    out = Matrix::Identity(n, n) - 2.0 * w * w.adjoint();
  }
  // out * e0 = v, so out * (phase e_0) = v; absorb the phase into column 0.
  out.col(0) *= phase;
  return out;
}

}  // namespace qsdp
