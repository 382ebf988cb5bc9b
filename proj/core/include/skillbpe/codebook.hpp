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

#ifndef SKILLBPE_CODEBOOK_HPP_
#define SKILLBPE_CODEBOOK_HPP_

#include "skillbpe/corpus.hpp"
#include "skillbpe/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace skillbpe
{

/// k action-space centroids; centroid i is base token i.
struct Codebook
{
  RowMatrix centroids;
  int k = 0;
  std::uint64_t seed = 0;
  double inertia = 0.0;
  /// Sum of squared distances after each assignment step; non-increasing.
  std::vector<double> inertia_history;
  int iterations = 0;

  int dim() const { return static_cast<int>(centroids.cols()); }
  Eigen::VectorXd centroid(TokenId t) const { return centroids.row(t.value).transpose(); }
};

struct KMeansOptions
{
  int k = 0;
  std::uint64_t seed = 0;
  int max_iters = 300;
  /// Convergence threshold on the largest absolute centroid shift.
  double tol = 1e-6;
};

/// Two clusters per action degree of freedom.
constexpr int default_k(int d_act) { return 2 * d_act; }

/// Lloyd's algorithm with k-means++ seeding over the rows of `points`.
/// Throws UsageError if k < 2 and DataError if there are fewer than k
/// distinct points.
Codebook fit_kmeans(const RowMatrix & points, const KMeansOptions & options);

/// Fits over every action of every trajectory.
Codebook fit_codebook(const Dataset & dataset, const KMeansOptions & options);

/// Nearest centroid by euclidean distance, lowest index on ties.
TokenId assign(const Codebook & codebook, const Eigen::Ref<const Eigen::VectorXd> & action);

/// Every action replaced by its base token, each spanning one timestep.
TokenizedCorpus tokenize_dataset(const Dataset & dataset, const Codebook & codebook);

/// Per-trajectory base token ids, without span bookkeeping.
std::vector<std::vector<TokenId>> base_sequences(const Dataset & dataset, const Codebook & codebook);

void save_codebook(const Codebook & codebook, const std::filesystem::path & path);
Codebook load_codebook(const std::filesystem::path & path);

}  // namespace skillbpe

#endif  // SKILLBPE_CODEBOOK_HPP_
