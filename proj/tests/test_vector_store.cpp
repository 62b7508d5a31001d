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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qsdp/vector_store.hpp"

namespace qsdp {
namespace {

TEST(SparseVectorTree, SingleAdd) {
  SparseVectorTree t(8, 1e-6);
  t.add_sparse({{5, 0.25}});
  EXPECT_DOUBLE_EQ(t.root(), 0.25);
  EXPECT_EQ(t.nnz(), 1);
}

TEST(SparseVectorTree, RepeatedAddsAccumulate) {
  SparseVectorTree t(8, 1e-6);
  t.add_sparse({{5, 0.25}});
  t.add_sparse({{5, 0.25}});
  EXPECT_DOUBLE_EQ(t.stored(5), 0.5);
  EXPECT_EQ(t.nnz(), 1);
}

TEST(SparseVectorTree, RandomAddsMatchFlatArray) {
  const int m = 37;
  const double grid = 1.0 / 1024;
  SparseVectorTree t(m, grid);
  std::vector<std::int64_t> flat(m + 1, 0);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> idx(0, m);
  std::uniform_real_distribution<double> w(0.0, 0.1);
  std::vector<int> updates(m + 1, 0);
  for (int it = 0; it < 1000; ++it) {
    std::vector<std::pair<int, double>> batch;
    const int k = 1 + it % 3;
    for (int i = 0; i < k; ++i) batch.push_back({idx(rng), w(rng)});
    for (auto [j, x] : batch) {
      flat[j] += std::llround(x / grid);
      ++updates[j];
    }
    t.add_sparse(batch);
  }
  std::int64_t total = 0;
  int nnz = 0;
  for (int j = 0; j <= m; ++j) {
    EXPECT_EQ(t.grid_count(j), flat[j]);
    EXPECT_LE(std::abs(t.stored(j) - t.exact(j)), grid / 2 * updates[j] + 1e-12);
    total += flat[j];
    nnz += flat[j] > 0;
  }
  EXPECT_EQ(t.node(1), total);
  EXPECT_EQ(t.nnz(), nnz);
  // Internal nodes equal the sum of their children.
  for (int i = 1; i < t.leaves(); ++i) EXPECT_EQ(t.node(i), t.node(2 * i) + t.node(2 * i + 1));
}

TEST(SparseVectorTree, BatchOrderDoesNotMatter) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> idx(0, 20);
  std::uniform_real_distribution<double> w(0.0, 0.3);
  std::vector<std::vector<std::pair<int, double>>> batches;
  for (int i = 0; i < 200; ++i) batches.push_back({{idx(rng), w(rng)}, {idx(rng), w(rng)}, {idx(rng), w(rng)}});
  SparseVectorTree a(20, 1e-4), b(20, 1e-4);
  for (const auto& x : batches) a.add_sparse(x);
  std::shuffle(batches.begin(), batches.end(), rng);
  for (auto x : batches) {
    std::reverse(x.begin(), x.end());
    b.add_sparse(x);
  }
  EXPECT_TRUE(a == b);
}

TEST(SparseVectorTree, RejectsOutOfRangeAndNegative) {
  SparseVectorTree t(4, 1e-3);
  EXPECT_THROW(t.add_sparse({{5, 0.1}}), std::out_of_range);
  EXPECT_THROW(t.add_sparse({{-1, 0.1}}), std::out_of_range);
  EXPECT_THROW(t.add_sparse({{1, -0.1}}), ContractViolation);
  EXPECT_THROW(t.add_sparse({{1, 0.1}, {2, 0.1}, {3, 0.1}, {4, 0.1}}), ContractViolation);
}

TEST(PrepPair, SingleEntryHalfMass) {
  SparseVectorTree t(3, 1e-9);
  t.add_sparse({{1, 0.5}});
  auto p = t.prep_pair(1.0);
  EXPECT_NEAR(p.c(1).real(), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(p.c(t.padding_slot()).real(), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(p.c.norm(), 1.0, 1e-12);
  EXPECT_TRUE(p.symmetric);
  EXPECT_NO_THROW(p.validate());
}

TEST(PrepPair, EmptyTreePutsAllMassOnPadding) {
  SparseVectorTree t(3, 1e-9);
  auto p = t.prep_pair(1.0);
  EXPECT_NEAR(std::abs(p.c(t.padding_slot())), 1.0, 1e-15);
  EXPECT_NEAR(p.c.norm(), 1.0, 1e-15);
}

TEST(PrepPair, TightNormalization) {
  SparseVectorTree t(5, 1.0 / 64);
  t.add_sparse({{0, 0.25}, {3, 0.5}});
  auto p = t.prep_pair(t.root());
  EXPECT_NEAR(std::abs(p.c(t.padding_slot())), 0.0, 1e-15);
  double s = 0.0;
  for (int j = 0; j <= t.m(); ++j) s += t.root() * std::norm(p.c(j));
  EXPECT_NEAR(s, 0.75, 1e-12);
}

TEST(PrepPair, BetaBelowRootRejected) {
  SparseVectorTree t(3, 1e-6);
  t.add_sparse({{0, 1.0}});
  EXPECT_THROW(t.prep_pair(0.5), ContractViolation);
}

TEST(PrepPair, RandomizedReconstructionWithinPrecision) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> idx(0, 15);
  std::uniform_real_distribution<double> w(0.0, 0.01);
  const double grid = 1e-5;
  SparseVectorTree t(15, grid);
  for (int op = 0; op < 10000; ++op) {
    t.add_sparse({{idx(rng), w(rng)}});
    if (op % 500 != 0) continue;
    const double beta = t.root() * 1.3 + 0.01;
    auto p = t.prep_pair(beta);
    EXPECT_NO_THROW(p.validate());
    EXPECT_LE(p.reconstruction_error(), p.precision + 1e-12);
    EXPECT_LE(p.precision, t.nnz() * grid * (op + 1) + 1e-9);
  }
}

TEST(SparseVectorTree, JsonRoundTrip) {
  SparseVectorTree t(6, 0.01);
  t.add_sparse({{2, 0.3}, {6, 0.05}});
  auto u = SparseVectorTree::from_json(t.to_json());
  EXPECT_TRUE(t == u);
  EXPECT_EQ(u.exact(2), 0.3);
  EXPECT_THROW(SparseVectorTree::from_json(R"({"m":6,"grid":0.01,"leaves":[1,2],"exact":[]})"),
               ContractViolation);
}

}  // namespace
}  // namespace qsdp
