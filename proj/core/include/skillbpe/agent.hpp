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

#ifndef SKILLBPE_AGENT_HPP_
#define SKILLBPE_AGENT_HPP_

#include "skillbpe/maze_env.hpp"
#include "skillbpe/tokenizer.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

namespace skillbpe
{

struct AgentConfig
{
  double gamma = 0.99;
  double learning_rate = 0.1;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Fraction of the step budget over which epsilon is annealed linearly.
  double anneal_fraction = 0.5;
};

/// Exploration rate after `steps_done` of `budget` primitive steps.
double epsilon_at(const AgentConfig & config, std::size_t steps_done, std::size_t budget);

/// Tabular action values over (maze cell, skill).
struct MacroPolicy
{
  int rows = 0;
  int cols = 0;
  Eigen::MatrixXd q_values;  // (rows * cols) x skills
  AgentConfig config;
  std::uint64_t rng_seed = 0;

  int skill_count() const { return static_cast<int>(q_values.cols()); }
  Eigen::Index state_index(Cell c) const { return static_cast<Eigen::Index>(c.row) * cols + c.col; }
  /// Highest-valued skill in `c`, lowest index on ties.
  int greedy(Cell c) const;
};

/// Primitive positions visited, one entry per environment step.
struct RolloutLog
{
  std::vector<std::vector<Eigen::Vector2d>> positions;
  std::vector<std::vector<double>> rewards;
  std::vector<double> returns;
  std::size_t steps = 0;

  std::size_t episodes() const { return positions.size(); }
};

struct SkillExecution
{
  EnvState state;
  double reward = 0.0;
  std::size_t steps = 0;
  std::vector<Eigen::Vector2d> positions;
  std::vector<double> rewards;

  /// sum_i gamma^i r_i over the executed steps.
  double discounted_reward(double gamma) const;
};

/// Plays the skill's actions open loop. Stops early when the episode ends
/// or after `max_steps` steps.
SkillExecution execute_skill(
  const Maze & maze, const EnvState & state, const Skill & skill,
  std::size_t max_steps = std::numeric_limits<std::size_t>::max());

/// Semi-Markov TD target: r + gamma^length * next_max, without the
/// bootstrap term on goal termination.
double macro_target(double discounted_reward, double gamma, std::size_t length, double next_max, bool terminal);

struct TrainResult
{
  MacroPolicy policy;
  RolloutLog log;
};

/// Epsilon-greedy Q-learning over the library's skills until exactly
/// `budget` primitive steps have been taken. Throws UsageError if the
/// budget is below one horizon or the library's action dimension does not
/// match the maze.
TrainResult train(
  const Maze & maze, const SkillLibrary & library, std::size_t budget, const AgentConfig & config,
  std::uint64_t seed);

/// Fraction of greedy episodes that reach the goal.
double evaluate(
  const MacroPolicy & policy, const SkillLibrary & library, const Maze & maze, std::size_t episodes,
  std::uint64_t seed);

/// CSV with columns episode,t,x,y,reward.
void save_rollout_csv(const RolloutLog & log, const std::filesystem::path & path);

void save_policy(const MacroPolicy & policy, const std::filesystem::path & path);
MacroPolicy load_policy(const std::filesystem::path & path);

}  // namespace skillbpe

#endif  // SKILLBPE_AGENT_HPP_
