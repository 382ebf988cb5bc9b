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

#ifndef SKILLBPE_MAZE_ENV_HPP_
#define SKILLBPE_MAZE_ENV_HPP_

#include "skillbpe/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skillbpe
{

struct Cell
{
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell &, const Cell &) = default;
};

/// Layout and dynamics parameters of a 2-D point-mass maze. Row 0 of the
/// grid is the top of the map; world y grows upwards.
struct MazeSpec
{
  std::vector<std::vector<bool>> walls;
  double cell_size = 1.0;
  Cell start;
  Cell goal;
  double goal_radius = 0.5;
  /// Per-axis bound on the velocity command; one step moves by the command.
  double max_action = 0.25;
  int horizon = 600;
  std::uint64_t seed = 0;
  /// When positive, actions live in a redundant space of this dimension and
  /// are read out to 2-D through a fixed random lift.
  int lift_dim = 0;
  std::uint64_t lift_seed = 7;

  int rows() const { return static_cast<int>(walls.size()); }
  int cols() const { return walls.empty() ? 0 : static_cast<int>(walls.front().size()); }
  bool is_wall(Cell c) const;
  int action_dim() const { return lift_dim > 0 ? lift_dim : 2; }
};

/// Parses '#' wall, '.' free, 'S' start, 'G' goal, one row per line.
MazeSpec parse_maze(std::string_view ascii);

/// Built-in layouts: "U", "medium", "large".
MazeSpec builtin_maze(std::string_view name);
std::string builtin_maze_ascii(std::string_view name);

/// Loads a built-in name or an ASCII map file.
MazeSpec load_maze(const std::string & name_or_path);

struct EnvState
{
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  int steps_elapsed = 0;
  bool done = false;
};

struct StepResult
{
  Eigen::Vector2d observation = Eigen::Vector2d::Zero();
  double reward = 0.0;
  bool done = false;
  bool collided = false;
};

/// Immutable environment built from a validated spec.
class Maze
{
public:
  /// Throws UsageError on an invalid spec, including an unreachable goal.
  explicit Maze(MazeSpec spec);

  const MazeSpec & spec() const { return spec_; }
  int action_dim() const { return spec_.action_dim(); }
  std::size_t free_cell_count() const { return free_cells_.size(); }
  const std::vector<Cell> & free_cells() const { return free_cells_; }

  Eigen::Vector2d cell_center(Cell c) const;
  /// Cell containing a world position; may be out of the grid.
  Cell cell_of(const Eigen::Vector2d & position) const;
  bool in_bounds(Cell c) const;
  bool is_free(Cell c) const { return in_bounds(c) && !spec_.is_wall(c); }
  Eigen::Vector2d goal_position() const { return cell_center(spec_.goal); }

  /// Start-cell center plus seeded jitter of at most 0.1 * cell_size per axis.
  EnvState reset(std::uint64_t seed) const;

  /// Clamps, integrates one step with axis-separated wall sliding, and
  /// applies the sparse goal reward and the horizon. Throws UsageError when
  /// stepping a finished episode.
  std::pair<EnvState, StepResult> step(const EnvState & state, const Eigen::Ref<const Eigen::VectorXd> & action) const;

  /// Maps an action of action_dim() to the 2-D velocity command.
  Eigen::Vector2d readout(const Eigen::Ref<const Eigen::VectorXd> & action) const;
  /// Embeds a 2-D command into the action space.
  Eigen::VectorXd lift(const Eigen::Vector2d & command) const;

  /// Shortest 4-connected cell path, inclusive of both ends.
  std::vector<Cell> shortest_path(Cell from, Cell to) const;

private:
  double move_axis(double from, double delta, int axis, double other) const;

  MazeSpec spec_;
  std::vector<Cell> free_cells_;
  Eigen::MatrixXd lift_;      // lift_dim x 2
  Eigen::MatrixXd readout_;   // 2 x lift_dim
};

struct DemoOptions
{
  std::size_t trajectories = 100;
  std::uint64_t seed = 0;
  /// Standard deviation of additive action noise, in action units.
  double noise = 0.1;
};

/// Scripted waypoint follower between random free cells. With positive noise
/// it also wanders off course in short random bursts. Trajectories keep
/// every collision and dither; nothing is filtered.
Dataset generate_demos(const Maze & maze, const DemoOptions & options);

}  // namespace skillbpe

#endif  // SKILLBPE_MAZE_ENV_HPP_
