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

#include "qsdp/vector_store.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

namespace qsdp {

SparseVectorTree::SparseVectorTree(int m, double theta_store) : m_(m), theta_(theta_store) {
  if (m < 0) throw ContractViolation("SparseVectorTree: m must be nonnegative");
  if (!(theta_store > 0)) throw ContractViolation("SparseVectorTree: grid step must be positive");
  leaves_ = 1;
  while (leaves_ < static_cast<std::size_t>(m) + 2) leaves_ <<= 1;
  tree_.assign(2 * leaves_, 0);
  exact_.assign(m + 1, 0.0);
}

std::vector<std::int64_t> SparseVectorTree::add_sparse_grid(const std::vector<std::pair<int, double>>& delta) {
  if (delta.size() > 3) throw ContractViolation("add_sparse: at most three entries per update");
  for (const auto& [j, w] : delta) {
    if (j < 0 || j > m_) {
      std::ostringstream os;
      os << "add_sparse: index " << j << " outside [0, " << m_ << "]";
      throw std::out_of_range(os.str());
    }
    if (!(w >= 0) || !std::isfinite(w)) throw ContractViolation("add_sparse: weights must be finite and >= 0");
  }
  std::vector<std::int64_t> applied;
  applied.reserve(delta.size());
  for (const auto& [j, w] : delta) {
    const std::int64_t k = std::llround(w / theta_);
    applied.push_back(k);
    exact_[j] += w;
    std::size_t i = leaves_ + static_cast<std::size_t>(j);
    if (tree_[i] == 0 && k > 0) ++nnz_;
    for (; i >= 1; i >>= 1) tree_[i] += k;
  }
  return applied;
}

void SparseVectorTree::add_sparse(const std::vector<std::pair<int, double>>& delta) { add_sparse_grid(delta); }

double SparseVectorTree::stored(int j) const { return static_cast<double>(grid_count(j)) * theta_; }

std::int64_t SparseVectorTree::grid_count(int j) const {
  if (j < 0 || j > m_) throw std::out_of_range("SparseVectorTree: index out of range");
  return tree_[leaves_ + static_cast<std::size_t>(j)];
}

double SparseVectorTree::exact(int j) const {
  if (j < 0 || j > m_) throw std::out_of_range("SparseVectorTree: index out of range");
  return exact_[j];
}

double SparseVectorTree::root() const { return static_cast<double>(tree_[1]) * theta_; }

RealVector SparseVectorTree::values() const {
  RealVector v(m_ + 1);
  for (int j = 0; j <= m_; ++j) v(j) = stored(j);
  return v;
}

RealVector SparseVectorTree::exact_values() const {
  return Eigen::Map<const RealVector>(exact_.data(), m_ + 1);
}

StatePrepPair SparseVectorTree::prep_pair(double beta) const {
  const double total = root();
  if (beta < total * (1 - 1e-12)) {
    std::ostringstream os;
    os << "prep_pair: beta = " << beta << " below root = " << total;
    throw ContractViolation(os.str());
  }
  // Leaf weights with the padding slot filled to beta; amplitudes come from
  // the conditional splits sqrt(child / parent) down each path.
  const double pad = std::max(0.0, beta - total);
  std::vector<double> w(2 * leaves_, 0.0);
  for (std::size_t i = 0; i < leaves_; ++i) w[leaves_ + i] = static_cast<double>(tree_[leaves_ + i]) * theta_;
  w[leaves_ + padding_slot()] = pad;
  for (std::size_t i = leaves_ - 1; i >= 1; --i) w[i] = w[2 * i] + w[2 * i + 1];
  std::vector<double> amp(2 * leaves_, 0.0);
  amp[1] = 1.0;
  for (std::size_t i = 1; i < leaves_; ++i) {
    if (w[i] <= 0.0) continue;
    amp[2 * i] = amp[i] * std::sqrt(w[2 * i] / w[i]);
    amp[2 * i + 1] = amp[i] * std::sqrt(w[2 * i + 1] / w[i]);
  }
  StatePrepPair pair;
  pair.c = Vector::Zero(static_cast<Eigen::Index>(leaves_));
  for (std::size_t i = 0; i < leaves_; ++i) pair.c(static_cast<Eigen::Index>(i)) = amp[leaves_ + i];
  if (w[1] <= 0.0) pair.c(padding_slot()) = 1.0;
  pair.d = pair.c;
  pair.beta = beta;
  pair.symmetric = true;
  pair.target = exact_values();
  double err = 0.0;
  for (int j = 0; j <= m_; ++j) err += std::abs(stored(j) - exact_[j]);
  pair.precision = err;
  // Amplitude rounding on top of the grid error.
  pair.precision = std::max(pair.precision, pair.reconstruction_error());
  return pair;
}

std::string SparseVectorTree::to_json() const {
  nlohmann::json j;
  j["m"] = m_;
  j["grid"] = theta_;
  std::vector<std::int64_t> leaves(tree_.begin() + static_cast<std::ptrdiff_t>(leaves_), tree_.end());
  j["leaves"] = leaves;
  j["exact"] = exact_;
  return j.dump();
}

SparseVectorTree SparseVectorTree::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SparseVectorTree t(j.at("m").get<int>(), j.at("grid").get<double>());
  const auto leaves = j.at("leaves").get<std::vector<std::int64_t>>();
  if (leaves.size() != t.leaves_) throw ContractViolation("SparseVectorTree: snapshot leaf count mismatch");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i] < 0) throw ContractViolation("SparseVectorTree: negative leaf in snapshot");
    t.tree_[t.leaves_ + i] = leaves[i];
    if (leaves[i] > 0) ++t.nnz_;
  }
  for (std::size_t i = t.leaves_ - 1; i >= 1; --i) t.tree_[i] = t.tree_[2 * i] + t.tree_[2 * i + 1];
  t.exact_ = j.at("exact").get<std::vector<double>>();
  if (t.exact_.size() != static_cast<std::size_t>(t.m_) + 1)
    throw ContractViolation("SparseVectorTree: snapshot length mismatch");
  return t;
}

bool SparseVectorTree::operator==(const SparseVectorTree& o) const {
  return m_ == o.m_ && theta_ == o.theta_ && tree_ == o.tree_ && nnz_ == o.nnz_;
}

}  // namespace qsdp
