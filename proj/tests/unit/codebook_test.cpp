// Copyright 2026 The skillbpe Authors
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

#include "skillbpe/codebook.hpp"
#include "skillbpe/errors.hpp"
#include "skillbpe/random.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

using namespace skillbpe;

namespace
{

RowMatrix two_blobs()
{
  RowMatrix pts(100, 2);
  for (int i = 0; i < 50; ++i) {
    pts.row(i) << 0.0, 0.0;
    pts.row(50 + i) << 10.0, 10.0;
  }
  return pts;
}

RowMatrix gaussian_points(std::uint64_t seed, int n, int d, int centers)
{
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix pts(n, d);
  for (int i = 0; i < n; ++i) {
    const double c = 5.0 * static_cast<double>(i % centers);
    for (int j = 0; j < d; ++j) {
      pts(i, j) = c * (j % 2 == 0 ? 1.0 : -1.0) + normal(rng);
    }
  }
  return pts;
}

Dataset dataset_of(const RowMatrix & actions)
{
  Trajectory t;
  t.actions = actions;
  t.observations = RowMatrix::Zero(actions.rows(), 1);
  return Dataset({t});
}

}  // namespace

TEST(Codebook, SeparatedClustersRecoveredExactly)
{
  const auto cb = fit_kmeans(two_blobs(), {.k = 2, .seed = 1});
  ASSERT_EQ(cb.k, 2);
  EXPECT_DOUBLE_EQ(cb.inertia, 0.0);
  const bool first_is_origin = cb.centroids(0, 0) == 0.0;
  const int o = first_is_origin ? 0 : 1;
  EXPECT_EQ(cb.centroids.row(o), Eigen::RowVector2d(0, 0));
  EXPECT_EQ(cb.centroids.row(1 - o), Eigen::RowVector2d(10, 10));
}

TEST(Codebook, DefaultKIsTwicePerDegreeOfFreedom)
{
  static_assert(default_k(8) == 16);
  static_assert(default_k(9) == 18);
  static_assert(default_k(1) == 2);
  const auto cb = fit_codebook(dataset_of(gaussian_points(2, 400, 8, 16)), {.k = default_k(8), .seed = 0});
  EXPECT_EQ(cb.k, 16);
  EXPECT_EQ(cb.dim(), 8);
}

TEST(Codebook, IdenticalActionsInsufficient)
{
  RowMatrix pts = RowMatrix::Constant(20, 2, 3.0);
  try {
    fit_kmeans(pts, {.k = 2, .seed = 0});
    FAIL() << "expected DataError";
  } catch (const DataError & e) {
    EXPECT_NE(std::string(e.what()).find("insufficient distinct actions"), std::string::npos);
  }
}

TEST(Codebook, KBelowTwoRejected)
{
  EXPECT_THROW(fit_kmeans(two_blobs(), {.k = 1, .seed = 0}), UsageError);
}

TEST(Codebook, InertiaNonIncreasing)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pts = gaussian_points(seed, 300, 3, 5);
    const auto cb = fit_kmeans(pts, {.k = 6, .seed = seed});
    ASSERT_FALSE(cb.inertia_history.empty());
    for (std::size_t i = 1; i < cb.inertia_history.size(); ++i) {
      EXPECT_LE(cb.inertia_history[i], cb.inertia_history[i - 1] * (1.0 + 1e-12)) << "seed " << seed << " iter " << i;
    }
    EXPECT_DOUBLE_EQ(cb.inertia, cb.inertia_history.back());
  }
}

TEST(Codebook, AssignmentIdempotentOnCentroids)
{
  const auto cb = fit_kmeans(gaussian_points(4, 500, 2, 8), {.k = 8, .seed = 4});
  for (int i = 0; i < cb.k; ++i) {
    EXPECT_EQ(assign(cb, cb.centroid(TokenId{i})).value, i);
  }
}

TEST(Codebook, FitIsDeterministic)
{
  const auto pts = gaussian_points(9, 400, 4, 6);
  const auto a = fit_kmeans(pts, {.k = 6, .seed = 42});
  const auto b = fit_kmeans(pts, {.k = 6, .seed = 42});
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.inertia_history, b.inertia_history);
}

TEST(Codebook, AssignNearestWithLowestIndexTie)
{
  Codebook cb;
  cb.k = 5;
  cb.centroids.resize(5, 1);
  cb.centroids << -5.0, 0.0, 7.0, 3.0, 2.0;
  EXPECT_EQ(assign(cb, Eigen::VectorXd::Constant(1, 3.0)).value, 3);
  // 1.0 is equidistant from centroids 1 (0.0) and 4 (2.0)
  EXPECT_EQ(assign(cb, Eigen::VectorXd::Constant(1, 1.0)).value, 1);

  Codebook two;
  two.k = 2;
  two.centroids.resize(2, 1);
  two.centroids << 0.0, 10.0;
  EXPECT_EQ(assign(two, Eigen::VectorXd::Constant(1, 2.0)).value, 0);
  EXPECT_THROW(assign(two, Eigen::VectorXd::Zero(2)), DataError);
}

TEST(Codebook, TokenizeRecordsUnitSpans)
{
  RowMatrix acts(3, 2);
  acts << 0, 0, 10, 10, 0, 0;
  Trajectory t1{RowMatrix::Zero(3, 1), acts};
  Trajectory t2{RowMatrix::Zero(1, 1), acts.topRows(1)};
  const Dataset d({t1, t2});
  const auto cb = fit_codebook(d, {.k = 2, .seed = 0});
  const auto corpus = tokenize_dataset(d, cb);
  ASSERT_EQ(corpus.sequences.size(), 2u);
  ASSERT_EQ(corpus.sequences[0].size(), 3u);
  for (std::uint32_t j = 0; j < 3; ++j) {
    EXPECT_EQ(corpus.sequences[0][j].span, (Instance{0, j, 1}));
  }
  const auto origin = assign(cb, Eigen::Vector2d(0, 0));
  EXPECT_EQ(corpus.sequences[0][0].id.value, origin.value);
  EXPECT_EQ(corpus.sequences[0][2].id.value, origin.value);
  EXPECT_NE(corpus.sequences[0][1].id.value, origin.value);
  EXPECT_EQ(tokenize_dataset(d, cb), corpus);
}

TEST(Codebook, DimensionMismatchOnTokenize)
{
  const auto cb = fit_kmeans(two_blobs(), {.k = 2, .seed = 0});
  Trajectory t{RowMatrix::Zero(2, 1), RowMatrix::Zero(2, 3)};
  EXPECT_THROW(tokenize_dataset(Dataset({t}), cb), DataError);
}

TEST(Codebook, SaveLoadRoundTrip)
{
  const auto cb = fit_kmeans(gaussian_points(1, 200, 3, 4), {.k = 4, .seed = 3});
  const auto p = std::filesystem::temp_directory_path() / "skillbpe_codebook_test.json";
  save_codebook(cb, p);
  const auto back = load_codebook(p);
  EXPECT_EQ(back.k, cb.k);
  EXPECT_EQ(back.seed, cb.seed);
  EXPECT_EQ(back.centroids, cb.centroids);
  EXPECT_EQ(back.inertia, cb.inertia);
}
