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

#include "skillbpe/scoring.hpp"

#include "skillbpe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skillbpe
{

namespace
{

void check_columns(const ColumnSelection & columns, Eigen::Index d_obs)
{
  for (int c : columns) {
    if (c < 0 || c >= d_obs) {
      throw UsageError(
        "heading column " + std::to_string(c) + " outside observation dimension " + std::to_string(d_obs));
    }
  }
}

void check_span(const Trajectory & trajectory, const Instance & instance)
{
  if (instance.length == 0 || instance.end() > trajectory.length()) {
    throw DataError(
      "span [" + std::to_string(instance.start) + ", " + std::to_string(instance.end()) +
      ") out of range for trajectory of length " + std::to_string(trajectory.length()));
  }
}

}  // namespace

Heading heading_of_instance(
  const Trajectory & trajectory, const Instance & instance, const ColumnSelection & columns)
{
  check_span(trajectory, instance);
  check_columns(columns, trajectory.observations.cols());
  const auto & obs = trajectory.observations;
  const Eigen::Index dim = columns.empty() ? obs.cols() : static_cast<Eigen::Index>(columns.size());
  const auto pick = [&](Eigen::Index row, Eigen::Index i) {
    return columns.empty() ? obs(row, i) : obs(row, columns[static_cast<std::size_t>(i)]);
  };
  Heading q = Heading::Zero(dim);
  const Eigen::Index first = instance.start;
  for (Eigen::Index r = 0; r < instance.length; ++r) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      q(i) += pick(first + r, i) - pick(first, i);
    }
  }
  return q / static_cast<double>(instance.length);
}

Heading subword_heading(
  const Dataset & dataset, std::span<const Instance> instances, const ColumnSelection & columns)
{
  if (instances.empty()) {
    throw UsageError("subword heading requires at least one instance");
  }
  Heading sum;
  for (const auto & inst : instances) {
    if (inst.trajectory >= dataset.size()) {
      throw DataError("instance refers to missing trajectory " + std::to_string(inst.trajectory));
    }
    Heading q = heading_of_instance(dataset[inst.trajectory], inst, columns);
    if (sum.size() == 0) {
      sum = std::move(q);
    } else {
      sum += q;
    }
  }
  return sum / static_cast<double>(instances.size());
}

HeadingEvaluator::HeadingEvaluator(const Dataset & dataset, ColumnSelection columns)
{
  check_columns(columns, dataset.d_obs());
  dim_ = columns.empty() ? dataset.d_obs() : static_cast<int>(columns.size());
  tracks_.reserve(dataset.size());
  for (const auto & t : dataset.trajectories()) {
    Track track;
    if (columns.empty()) {
      track.observations = t.observations;
    } else {
      track.observations.resize(t.observations.rows(), dim_);
      for (int i = 0; i < dim_; ++i) {
        track.observations.col(i) = t.observations.col(columns[static_cast<std::size_t>(i)]);
      }
    }
    track.prefix = RowMatrix::Zero(track.observations.rows() + 1, dim_);
    for (Eigen::Index j = 0; j < track.observations.rows(); ++j) {
      track.prefix.row(j + 1) = track.prefix.row(j) + track.observations.row(j);
    }
    tracks_.push_back(std::move(track));
  }
}

Heading HeadingEvaluator::heading(const Instance & instance) const
{
  const auto & track = tracks_.at(instance.trajectory);
  if (instance.length == 0 || instance.end() > static_cast<std::uint32_t>(track.observations.rows())) {
    throw DataError("span out of range in heading evaluation");
  }
  const double inv = 1.0 / static_cast<double>(instance.length);
  return ((track.prefix.row(instance.end()) - track.prefix.row(instance.start)) * inv -
          track.observations.row(instance.start))
    .transpose();
}

Heading HeadingEvaluator::mean_heading(std::span<const Instance> instances) const
{
  if (instances.empty()) {
    throw UsageError("subword heading requires at least one instance");
  }
  Heading sum = Heading::Zero(dim_);
  for (const auto & inst : instances) {
    sum += heading(inst);
  }
  return sum / static_cast<double>(instances.size());
}

ScoreState::ScoreState(int dim, double epsilon)
  : ScoreState(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim), epsilon, 0)
{
  if (!(epsilon > 0.0)) {
    throw UsageError("epsilon must be positive");
  }
}

ScoreState::ScoreState(Eigen::VectorXd mean, Eigen::MatrixXd covariance, double epsilon, std::size_t count)
  : mean_(std::move(mean)), covariance_(std::move(covariance)), factor_(covariance_), epsilon_(epsilon), count_(count)
{
  if (factor_.info() != Eigen::Success) {
    throw_invariant("heading covariance is not positive definite");
  }
}

double ScoreState::score(const Eigen::Ref<const Eigen::VectorXd> & q) const
{
  if (q.size() != mean_.size()) {
    throw_invariant("heading dimension does not match score state");
  }
  const Eigen::VectorXd diff = q - mean_;
  const Eigen::VectorXd x = factor_.solve(diff);
  return std::max(0.0, diff.dot(x));
}

ScoreState update_stats(std::span<const Heading> headings, int dim, double epsilon)
{
  if (!(epsilon > 0.0)) {
    throw UsageError("epsilon must be positive");
  }
  if (headings.empty()) {
    return ScoreState(dim, epsilon);
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto & q : headings) {
    if (q.size() != dim) {
      throw_invariant("heading dimension does not match score state");
    }
    mean += q;
  }
  const auto n = static_cast<double>(headings.size());
  mean /= n;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto & q : headings) {
    const Eigen::VectorXd d = q - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= n;
  cov.diagonal().array() += epsilon;
  return ScoreState(std::move(mean), std::move(cov), epsilon, headings.size());
}

double mahalanobis_score(const Eigen::Ref<const Eigen::VectorXd> & q, const ScoreState & state)
{
  return state.score(q);
}

bool ties_with(double s, double extreme)
{
  return std::abs(s - extreme) <= kScoreTieTolerance * std::max({1.0, std::abs(s), std::abs(extreme)});
}

std::size_t frequency_score(const CandidatePair & pair) { return pair.count(); }

}  // namespace skillbpe
