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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsdp/block_encoding.hpp"

namespace qsdp {

// Nonnegative vector y over indices 0..m, stored as integer multiples of a
// grid step in a binary tree of partial sums. Leaf m+1 is the padding slot of
// the state-preparation pair. Single writer.
class SparseVectorTree {
 public:
  SparseVectorTree(int m, double theta_store);

  int m() const { return m_; }
  double grid() const { return theta_; }
  int leaves() const { return static_cast<int>(leaves_); }
  int padding_slot() const { return m_ + 1; }
  int nnz() const { return nnz_; }

  // Adds up to three (index, weight) pairs with weight >= 0. Each weight is
  // rounded to the grid independently, so batches commute.
  void add_sparse(const std::vector<std::pair<int, double>>& delta);
  // Same, returning the grid increments actually applied (one per pair).
  std::vector<std::int64_t> add_sparse_grid(const std::vector<std::pair<int, double>>& delta);

  double stored(int j) const;
  std::int64_t grid_count(int j) const;
  double exact(int j) const;
  double root() const;
  std::int64_t node(std::size_t i) const { return tree_[i]; }
  RealVector values() const;
  RealVector exact_values() const;

  // Symmetric pair with c_j = sqrt(y_j / beta) read off by walking the tree;
  // the padding slot carries sqrt(1 - root/beta).
  StatePrepPair prep_pair(double beta) const;

  std::string to_json() const;
  static SparseVectorTree from_json(const std::string& text);

  bool operator==(const SparseVectorTree& o) const;

 private:
  int m_;
  double theta_;
  std::size_t leaves_;
  std::vector<std::int64_t> tree_;
  std::vector<double> exact_;
  int nnz_ = 0;
};

}  // namespace qsdp
