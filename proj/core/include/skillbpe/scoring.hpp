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

#ifndef SKILLBPE_SCORING_HPP_
#define SKILLBPE_SCORING_HPP_

#include "skillbpe/corpus.hpp"
#include "skillbpe/dataset.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <span>
#include <vector>

namespace skillbpe
{

/// Mean displacement of the observations over a span from the span's first
/// observation, in observation units.
using Heading = Eigen::VectorXd;

/// Observation columns used for headings. Empty selects every column.
using ColumnSelection = std::vector<int>;

/// (1/L) * sum_{r<L} (o[start + r] - o[start]), restricted to `columns`.
/// Throws DataError if the span leaves the trajectory.
Heading heading_of_instance(
  const Trajectory & trajectory, const Instance & instance, const ColumnSelection & columns = {});

/// Arithmetic mean of heading_of_instance over `instances`.
Heading subword_heading(
  const Dataset & dataset, std::span<const Instance> instances, const ColumnSelection & columns = {});

/// Evaluates headings in O(d) per instance from per-trajectory prefix sums.
/// Agrees with heading_of_instance up to rounding.
class HeadingEvaluator
{
public:
  HeadingEvaluator(const Dataset & dataset, ColumnSelection columns = {});

  int dim() const { return dim_; }
  Heading heading(const Instance & instance) const;
  Heading mean_heading(std::span<const Instance> instances) const;

private:
  struct Track
  {
    RowMatrix observations;  // selected columns only
    RowMatrix prefix;        // prefix.row(j) = sum of the first j rows
  };
  std::vector<Track> tracks_;
  int dim_ = 0;
};

/// Mean and regularized covariance of the admitted headings, plus the
/// Cholesky factor shared by every score computed against them.
class ScoreState
{
public:
  /// Empty heading set: zero mean, identity covariance.
  ScoreState(int dim, double epsilon);

  int dim() const { return static_cast<int>(mean_.size()); }
  double epsilon() const { return epsilon_; }
  std::size_t sample_count() const { return count_; }
  const Eigen::VectorXd & mean() const { return mean_; }
  const Eigen::MatrixXd & covariance() const { return covariance_; }

  /// (q - mean)^T covariance^{-1} (q - mean) via the factorization.
  double score(const Eigen::Ref<const Eigen::VectorXd> & q) const;

private:
  friend ScoreState update_stats(std::span<const Heading> headings, int dim, double epsilon);
  ScoreState(Eigen::VectorXd mean, Eigen::MatrixXd covariance, double epsilon, std::size_t count);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  double epsilon_;
  std::size_t count_ = 0;
};

/// Population covariance (divide by |Q|) plus epsilon * I. With no headings
/// the state is (0, I). Throws UsageError if epsilon <= 0.
ScoreState update_stats(std::span<const Heading> headings, int dim, double epsilon);

/// Squared Mahalanobis distance of q from the state's distribution.
double mahalanobis_score(const Eigen::Ref<const Eigen::VectorXd> & q, const ScoreState & state);

/// Relative tolerance under which two scores count as tied. Scores that are
/// equal in exact arithmetic (for instance every member of a two-heading set)
/// can differ in the last bits depending on the order of operations.
inline constexpr double kScoreTieTolerance = 1e-9;

/// True when `s` is within tie tolerance of `extreme`.
bool ties_with(double s, double extreme);

/// Greedy non-overlapping occurrence count.
std::size_t frequency_score(const CandidatePair & pair);

}  // namespace skillbpe

#endif  // SKILLBPE_SCORING_HPP_
