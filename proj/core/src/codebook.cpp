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

#include "json_io.hpp"
#include "skillbpe/errors.hpp"
#include "skillbpe/random.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <string>

namespace skillbpe
{

namespace
{

std::size_t count_distinct_rows(const RowMatrix & points)
{
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    order[static_cast<std::size_t>(i)] = i;
  }
  const auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) {
        return points(a, c) < points(b, c);
      }
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  std::size_t distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (row_less(order[i - 1], order[i])) {
      ++distinct;
    }
  }
  return distinct;
}

// Returns the total squared distance.
double assign_all(
  const RowMatrix & points, const RowMatrix & centroids, std::vector<int> & labels, std::vector<double> & dist2)
{
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist2[static_cast<std::size_t>(i)] = best_d;
    total += best_d;
  }
  return total;
}

RowMatrix kmeanspp_init(const RowMatrix & points, int k, Rng & rng)
{
  const auto n = points.rows();
  RowMatrix centroids(k, points.cols());
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Eigen::Index chosen = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
  centroids.row(0) = points.row(chosen);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto & d = d2[static_cast<std::size_t>(i)];
      d = std::min(d, (points.row(i) - centroids.row(c - 1)).squaredNorm());
      total += d;
    }
    // total > 0 because at least k distinct points exist.
    double target = uniform01(rng) * total;
    chosen = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = d2[static_cast<std::size_t>(i)];
      if (d <= 0.0) {
        continue;
      }
      chosen = i;
      target -= d;
      if (target < 0.0) {
        break;
      }
    }
    centroids.row(c) = points.row(chosen);
  }
  return centroids;
}

}  // namespace

Codebook fit_kmeans(const RowMatrix & points, const KMeansOptions & options)
{
  if (options.k < 2) {
    throw UsageError("k must be at least 2");
  }
  if (options.max_iters < 1 || options.tol < 0.0) {
    throw UsageError("max_iters must be positive and tol non-negative");
  }
  if (points.rows() < options.k || count_distinct_rows(points) < static_cast<std::size_t>(options.k)) {
    throw DataError(
      "insufficient distinct actions for k=" + std::to_string(options.k));
  }

  Rng rng(options.seed);
  const int k = options.k;
  const auto n = static_cast<std::size_t>(points.rows());
  Codebook cb;
  cb.k = k;
  cb.seed = options.seed;
  cb.centroids = kmeanspp_init(points, k, rng);

  std::vector<int> labels(n);
  std::vector<double> dist2(n);
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k));

  for (int iter = 0; iter < options.max_iters; ++iter) {
    double inertia = assign_all(points, cb.centroids, labels, dist2);

    // Empty clusters take the point currently farthest from its centroid.
    for (;;) {
      std::fill(sizes.begin(), sizes.end(), 0);
      for (auto l : labels) {
        ++sizes[static_cast<std::size_t>(l)];
      }
      const auto empty = std::find(sizes.begin(), sizes.end(), 0);
      if (empty == sizes.end()) {
        break;
      }
      const auto far = static_cast<std::size_t>(
        std::max_element(dist2.begin(), dist2.end()) - dist2.begin());
      const auto c = static_cast<Eigen::Index>(empty - sizes.begin());
      cb.centroids.row(c) = points.row(static_cast<Eigen::Index>(far));
      inertia -= dist2[far];
      labels[far] = static_cast<int>(c);
      dist2[far] = 0.0;
    }
    cb.inertia_history.push_back(inertia);

    RowMatrix updated = RowMatrix::Zero(k, points.cols());
    for (std::size_t i = 0; i < n; ++i) {
      updated.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
    }
    for (int c = 0; c < k; ++c) {
      updated.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    }
    const double shift = (updated - cb.centroids).cwiseAbs().maxCoeff();
    cb.centroids = std::move(updated);
    cb.iterations = iter + 1;
    if (shift < options.tol) {
      break;
    }
  }

  cb.inertia = assign_all(points, cb.centroids, labels, dist2);
  cb.inertia_history.push_back(cb.inertia);

  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (cb.centroids.row(a) == cb.centroids.row(b)) {
        throw_invariant("k-means produced coincident centroids");
      }
    }
  }
  return cb;
}

Codebook fit_codebook(const Dataset & dataset, const KMeansOptions & options)
{
  RowMatrix all(static_cast<Eigen::Index>(dataset.total_steps()), dataset.d_act());
  Eigen::Index row = 0;
  for (const auto & t : dataset.trajectories()) {
    all.middleRows(row, t.actions.rows()) = t.actions;
    row += t.actions.rows();
  }
  return fit_kmeans(all, options);
}

TokenId assign(const Codebook & codebook, const Eigen::Ref<const Eigen::VectorXd> & action)
{
  if (action.size() != codebook.centroids.cols()) {
    throw DataError(
      "action dimension " + std::to_string(action.size()) + " does not match codebook dimension " +
      std::to_string(codebook.centroids.cols()));
  }
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < codebook.centroids.rows(); ++c) {
    const double d = (codebook.centroids.row(c).transpose() - action).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return TokenId{best};
}

std::vector<std::vector<TokenId>> base_sequences(const Dataset & dataset, const Codebook & codebook)
{
  if (dataset.d_act() != codebook.dim()) {
    throw DataError(
      "dataset action dimension " + std::to_string(dataset.d_act()) +
      " does not match codebook dimension " + std::to_string(codebook.dim()));
  }
  std::vector<std::vector<TokenId>> out(dataset.size());
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    const auto & actions = dataset[t].actions;
    out[t].reserve(static_cast<std::size_t>(actions.rows()));
    for (Eigen::Index j = 0; j < actions.rows(); ++j) {
      out[t].push_back(assign(codebook, actions.row(j).transpose()));
    }
  }
  return out;
}

TokenizedCorpus tokenize_dataset(const Dataset & dataset, const Codebook & codebook)
{
  return corpus_from_base(base_sequences(dataset, codebook));
}

void save_codebook(const Codebook & codebook, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write codebook file: " + path.string());
  }
  out << detail::codebook_to_json(codebook).dump(2) << '\n';
}

Codebook load_codebook(const std::filesystem::path & path)
{
  return detail::codebook_from_json(detail::read_json_file(path));
}

}  // namespace skillbpe
