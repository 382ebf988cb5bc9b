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

#ifndef SKILLBPE_DATASET_HPP_
#define SKILLBPE_DATASET_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace skillbpe
{

/// Row-major so that one row is one timestep.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One demonstration. Row j of `observations` is the observation seen
/// before taking the action in row j of `actions`.
struct Trajectory
{
  RowMatrix observations;
  RowMatrix actions;

  std::size_t length() const { return static_cast<std::size_t>(actions.rows()); }

  friend bool operator==(const Trajectory & a, const Trajectory & b);
};

/// Immutable, validated collection of trajectories sharing d_obs and d_act.
class Dataset
{
public:
  /// Validates every trajectory; throws DataError naming the first offender.
  explicit Dataset(std::vector<Trajectory> trajectories);

  const std::vector<Trajectory> & trajectories() const { return trajectories_; }
  const Trajectory & operator[](std::size_t i) const { return trajectories_[i]; }
  std::size_t size() const { return trajectories_.size(); }
  int d_obs() const { return d_obs_; }
  int d_act() const { return d_act_; }
  std::size_t total_steps() const;

  friend bool operator==(const Dataset & a, const Dataset & b)
  {
    return a.trajectories_ == b.trajectories_;
  }

private:
  std::vector<Trajectory> trajectories_;
  int d_obs_ = 0;
  int d_act_ = 0;
};

/// Reads the JSON Lines corpus format, one trajectory object per line.
Dataset load_dataset(const std::filesystem::path & path);

/// Writes one line per trajectory with round-trip exact decimals.
void save_dataset(const Dataset & dataset, const std::filesystem::path & path);

/// Keeps a seeded uniform random subset of ceil(fraction * N) trajectories,
/// preserving their original order. fraction must lie in (0, 1].
Dataset subsample(const Dataset & dataset, double fraction, std::uint64_t seed);

}  // namespace skillbpe

#endif  // SKILLBPE_DATASET_HPP_
