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

#include "skillbpe/maze_env.hpp"

#include "skillbpe/errors.hpp"
#include "skillbpe/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace skillbpe
{

bool MazeSpec::is_wall(Cell c) const
{
  return walls.at(static_cast<std::size_t>(c.row)).at(static_cast<std::size_t>(c.col));
}

MazeSpec parse_maze(std::string_view ascii)
{
  MazeSpec spec;
  bool have_start = false;
  bool have_goal = false;
  std::istringstream in{std::string(ascii)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const int r = static_cast<int>(spec.walls.size());
    std::vector<bool> row;
    for (std::size_t c = 0; c < line.size(); ++c) {
      switch (line[c]) {
        case '#':
          row.push_back(true);
          break;
        case '.':
          row.push_back(false);
          break;
        case 'S':
          if (have_start) {
            throw DataError("maze map has more than one 'S'");
          }
          have_start = true;
          spec.start = Cell{r, static_cast<int>(c)};
          row.push_back(false);
          break;
        case 'G':
          if (have_goal) {
            throw DataError("maze map has more than one 'G'");
          }
          have_goal = true;
          spec.goal = Cell{r, static_cast<int>(c)};
          row.push_back(false);
          break;
        default:
          throw DataError(
            "unexpected character '" + std::string(1, line[c]) + "' in maze map row " + std::to_string(r));
      }
    }
    if (!spec.walls.empty() && row.size() != spec.walls.front().size()) {
      throw DataError("maze map rows have different widths");
    }
    spec.walls.push_back(std::move(row));
  }
  if (spec.walls.empty()) {
    throw DataError("empty maze map");
  }
  if (!have_start || !have_goal) {
    throw DataError("maze map needs exactly one 'S' and one 'G'");
  }
  return spec;
}

std::string builtin_maze_ascii(std::string_view name)
{
  if (name == "U") {
    return "#####\n"
           "#G..#\n"
           "###.#\n"
           "#S..#\n"
           "#####\n";
  }
  if (name == "medium") {
    return "########\n"
           "#...#.G#\n"
           "#.#..#.#\n"
           "#..#...#\n"
           "##...###\n"
           "#..#...#\n"
           "#S.##..#\n"
           "########\n";
  }
  if (name == "large") {
    return "############\n"
           "#..#...#..G#\n"
           "##.#.#.#.###\n"
           "#..#.#.....#\n"
           "#.####.###.#\n"
           "#......#...#\n"
           "#.##.#.#.#.#\n"
           "#S...#.....#\n"
           "############\n";
  }
  throw UsageError("unknown built-in maze '" + std::string(name) + "' (expected U|medium|large)");
}

MazeSpec builtin_maze(std::string_view name) { return parse_maze(builtin_maze_ascii(name)); }

MazeSpec load_maze(const std::string & name_or_path)
{
  if (name_or_path == "U" || name_or_path == "medium" || name_or_path == "large") {
    return builtin_maze(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw UsageError("'" + name_or_path + "' is neither a built-in maze nor a readable map file");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_maze(buf.str());
}

namespace
{

constexpr int kDr[4] = {-1, 1, 0, 0};
constexpr int kDc[4] = {0, 0, -1, 1};

}  // namespace

Maze::Maze(MazeSpec spec) : spec_(std::move(spec))
{
  if (spec_.rows() == 0 || spec_.cols() == 0) {
    throw UsageError("maze grid is empty");
  }
  for (const auto & row : spec_.walls) {
    if (static_cast<int>(row.size()) != spec_.cols()) {
      throw UsageError("maze grid is not rectangular");
    }
  }
  if (!(spec_.cell_size > 0.0) || !(spec_.goal_radius > 0.0) || !(spec_.max_action > 0.0)) {
    throw UsageError("cell_size, goal_radius and max_action must be positive");
  }
  if (spec_.max_action >= spec_.cell_size) {
    throw UsageError("max_action must be smaller than cell_size");
  }
  if (spec_.horizon < 1) {
    throw UsageError("horizon must be positive");
  }
  if (spec_.lift_dim != 0 && spec_.lift_dim < 2) {
    throw UsageError("lift_dim must be 0 or at least 2");
  }
  if (!is_free(spec_.start) || !is_free(spec_.goal)) {
    throw UsageError("start and goal must be free cells");
  }
  for (int r = 0; r < spec_.rows(); ++r) {
    for (int c = 0; c < spec_.cols(); ++c) {
      if (!spec_.walls[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
        free_cells_.push_back(Cell{r, c});
      }
    }
  }
  if (shortest_path(spec_.start, spec_.goal).empty()) {
    throw UsageError("no free path from start to goal");
  }
  if (spec_.lift_dim > 0) {
    Rng rng(spec_.lift_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    lift_.resize(spec_.lift_dim, 2);
    for (int i = 0; i < spec_.lift_dim; ++i) {
      lift_(i, 0) = normal(rng);
      lift_(i, 1) = normal(rng);
    }
    readout_ = (lift_.transpose() * lift_).ldlt().solve(lift_.transpose());
  }
}

bool Maze::in_bounds(Cell c) const
{
  return c.row >= 0 && c.row < spec_.rows() && c.col >= 0 && c.col < spec_.cols();
}

Eigen::Vector2d Maze::cell_center(Cell c) const
{
  const double cs = spec_.cell_size;
  return Eigen::Vector2d((c.col + 0.5) * cs, (spec_.rows() - 1 - c.row + 0.5) * cs);
}

Cell Maze::cell_of(const Eigen::Vector2d & p) const
{
  const double cs = spec_.cell_size;
  const int col = static_cast<int>(std::floor(p.x() / cs));
  const int yi = static_cast<int>(std::floor(p.y() / cs));
  return Cell{spec_.rows() - 1 - yi, col};
}

EnvState Maze::reset(std::uint64_t seed) const
{
  Rng rng(seed);
  const double j = 0.1 * spec_.cell_size;
  EnvState s;
  s.position = cell_center(spec_.start);
  s.position.x() += uniform_in(rng, -j, j);
  s.position.y() += uniform_in(rng, -j, j);
  return s;
}

Eigen::Vector2d Maze::readout(const Eigen::Ref<const Eigen::VectorXd> & action) const
{
  if (action.size() != action_dim()) {
    throw UsageError(
      "action dimension " + std::to_string(action.size()) + " does not match environment action dimension " +
      std::to_string(action_dim()));
  }
  if (spec_.lift_dim > 0) {
    return readout_ * action;
  }
  return Eigen::Vector2d(action(0), action(1));
}

Eigen::VectorXd Maze::lift(const Eigen::Vector2d & command) const
{
  if (spec_.lift_dim > 0) {
    return lift_ * command;
  }
  return command;
}

double Maze::move_axis(double from, double delta, int axis, double other) const
{
  const double cs = spec_.cell_size;
  const double to = from + delta;
  const Eigen::Vector2d target = axis == 0 ? Eigen::Vector2d(to, other) : Eigen::Vector2d(other, to);
  if (is_free(cell_of(target))) {
    return to;
  }
  // Stop just inside the current cell's face; |delta| < cell_size so at most
  // one face is crossed.
  const double margin = 1e-7 * cs;
  const double base = std::floor(from / cs) * cs;
  return delta > 0.0 ? base + cs - margin : base + margin;
}

std::pair<EnvState, StepResult> Maze::step(const EnvState & state, const Eigen::Ref<const Eigen::VectorXd> & action) const
{
  if (state.done) {
    throw UsageError("step called on a finished episode");
  }
  const Eigen::Vector2d cmd = readout(action).cwiseMax(-spec_.max_action).cwiseMin(spec_.max_action);
  EnvState next = state;
  StepResult result;
  const double x = move_axis(state.position.x(), cmd.x(), 0, state.position.y());
  const double y = move_axis(state.position.y(), cmd.y(), 1, x);
  result.collided = x != state.position.x() + cmd.x() || y != state.position.y() + cmd.y();
  next.position = Eigen::Vector2d(x, y);
  ++next.steps_elapsed;
  if ((next.position - goal_position()).norm() <= spec_.goal_radius) {
    result.reward = 1.0;
    next.done = true;
  }
  if (next.steps_elapsed >= spec_.horizon) {
    next.done = true;
  }
  result.observation = next.position;
  result.done = next.done;
  return {next, result};
}

std::vector<Cell> Maze::shortest_path(Cell from, Cell to) const
{
  if (!is_free(from) || !is_free(to)) {
    return {};
  }
  const int rows = spec_.rows();
  const int cols = spec_.cols();
  std::vector<int> parent(static_cast<std::size_t>(rows * cols), -2);
  const auto index = [cols](Cell c) { return static_cast<std::size_t>(c.row * cols + c.col); };
  std::deque<Cell> queue{from};
  parent[index(from)] = -1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == to) {
      break;
    }
    for (int d = 0; d < 4; ++d) {
      const Cell n{c.row + kDr[d], c.col + kDc[d]};
      if (is_free(n) && parent[index(n)] == -2) {
        parent[index(n)] = static_cast<int>(index(c));
        queue.push_back(n);
      }
    }
  }
  if (parent[index(to)] == -2) {
    return {};
  }
  std::vector<Cell> path;
  for (int i = static_cast<int>(index(to)); i != -1; i = parent[static_cast<std::size_t>(i)]) {
    path.push_back(Cell{i / cols, i % cols});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Dataset generate_demos(const Maze & maze, const DemoOptions & options)
{
  if (options.trajectories == 0) {
    throw UsageError("at least one demonstration is required");
  }
  if (!(options.noise >= 0.0)) {
    throw UsageError("noise must be non-negative");
  }
  if (maze.free_cell_count() < 2) {
    throw UsageError("maze needs at least two free cells for demonstrations");
  }
  const auto & spec = maze.spec();
  const double cs = spec.cell_size;
  const double vmax = spec.max_action;
  const auto & cells = maze.free_cells();

  std::vector<Trajectory> out;
  out.reserve(options.trajectories);
  for (std::size_t i = 0; i < options.trajectories; ++i) {
    Rng rng(derive_seed(options.seed, i));
    std::normal_distribution<double> noise(0.0, 1.0);

    const Cell from = cells[uniform_index(rng, cells.size())];
    Cell to = from;
    while (to == from) {
      to = cells[uniform_index(rng, cells.size())];
    }
    const auto path = maze.shortest_path(from, to);
    // Interior waypoints are perturbed so the follower cuts corners and
    // scrapes walls.
    std::vector<Eigen::Vector2d> waypoints;
    for (std::size_t w = 1; w < path.size(); ++w) {
      Eigen::Vector2d p = maze.cell_center(path[w]);
      if (w + 1 < path.size()) {
        p.x() += uniform_in(rng, -0.3 * cs, 0.3 * cs);
        p.y() += uniform_in(rng, -0.3 * cs, 0.3 * cs);
      }
      waypoints.push_back(p);
    }

    Eigen::Vector2d pos = maze.cell_center(from);
    pos.x() += uniform_in(rng, -0.1 * cs, 0.1 * cs);
    pos.y() += uniform_in(rng, -0.1 * cs, 0.1 * cs);

    std::vector<Eigen::Vector2d> observations;
    std::vector<Eigen::VectorXd> actions;
    std::size_t w = 0;
    int wander = 0;
    Eigen::Vector2d wander_cmd = Eigen::Vector2d::Zero();
    for (int t = 0; t < spec.horizon && w < waypoints.size(); ++t) {
      Eigen::Vector2d cmd;
      if (options.noise > 0.0 && wander == 0 && uniform01(rng) < 0.02) {
        wander = 1 + static_cast<int>(uniform_index(rng, 6));
        wander_cmd = Eigen::Vector2d(uniform_in(rng, -vmax, vmax), uniform_in(rng, -vmax, vmax));
      }
      if (wander > 0) {
        cmd = wander_cmd;
        --wander;
      } else {
        cmd = (waypoints[w] - pos).cwiseMax(-vmax).cwiseMin(vmax);
      }
      cmd.x() += options.noise * noise(rng);
      cmd.y() += options.noise * noise(rng);
      cmd = cmd.cwiseMax(-vmax).cwiseMin(vmax);

      observations.push_back(pos);
      actions.push_back(maze.lift(cmd));

      EnvState s;
      s.position = pos;
      pos = maze.step(s, maze.lift(cmd)).first.position;

      const double reach = (w + 1 == waypoints.size()) ? 0.5 * vmax : 0.35 * cs;
      if ((waypoints[w] - pos).cwiseAbs().maxCoeff() < reach) {
        ++w;
      }
    }

    Trajectory traj;
    traj.observations.resize(static_cast<Eigen::Index>(observations.size()), 2);
    traj.actions.resize(static_cast<Eigen::Index>(actions.size()), maze.action_dim());
    for (std::size_t j = 0; j < observations.size(); ++j) {
      traj.observations.row(static_cast<Eigen::Index>(j)) = observations[j].transpose();
      traj.actions.row(static_cast<Eigen::Index>(j)) = actions[j].transpose();
    }
    out.push_back(std::move(traj));
  }
  return Dataset(std::move(out));
}

}  // namespace skillbpe
