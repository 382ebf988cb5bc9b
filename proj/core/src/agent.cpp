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

#include "skillbpe/agent.hpp"

#include "json_io.hpp"
#include "skillbpe/errors.hpp"
#include "skillbpe/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace skillbpe
{

double epsilon_at(const AgentConfig & config, std::size_t steps_done, std::size_t budget)
{
  const double horizon = config.anneal_fraction * static_cast<double>(budget);
  if (horizon <= 0.0) {
    return config.epsilon_end;
  }
  const double frac = static_cast<double>(steps_done) / horizon;
  if (frac >= 1.0) {
    return config.epsilon_end;
  }
  return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * frac;
}

int MacroPolicy::greedy(Cell c) const
{
  const auto row = q_values.row(state_index(c));
  int best = 0;
  for (Eigen::Index a = 1; a < row.size(); ++a) {
    if (row(a) > row(best)) {
      best = static_cast<int>(a);
    }
  }
  return best;
}

double SkillExecution::discounted_reward(double gamma) const
{
  double total = 0.0;
  double factor = 1.0;
  for (double r : rewards) {
    total += factor * r;
    factor *= gamma;
  }
  return total;
}

SkillExecution execute_skill(const Maze & maze, const EnvState & state, const Skill & skill, std::size_t max_steps)
{
  SkillExecution out;
  out.state = state;
  for (Eigen::Index i = 0; i < skill.actions.rows(); ++i) {
    if (out.state.done || out.steps >= max_steps) {
      break;
    }
    auto [next, result] = maze.step(out.state, skill.actions.row(i).transpose());
    out.state = next;
    out.reward += result.reward;
    out.rewards.push_back(result.reward);
    out.positions.push_back(next.position);
    ++out.steps;
  }
  return out;
}

double macro_target(double discounted_reward, double gamma, std::size_t length, double next_max, bool terminal)
{
  if (terminal) {
    return discounted_reward;
  }
  return discounted_reward + std::pow(gamma, static_cast<double>(length)) * next_max;
}

namespace
{

void check_compatible(const Maze & maze, const SkillLibrary & library)
{
  if (library.skills.empty()) {
    throw UsageError("skill library is empty");
  }
  if (library.action_dim() != maze.action_dim()) {
    throw UsageError(
      "skill library action dimension " + std::to_string(library.action_dim()) +
      " does not match the maze action dimension " + std::to_string(maze.action_dim()));
  }
  for (const auto & s : library.skills) {
    if (s.actions.rows() < 1 || s.actions.cols() != maze.action_dim()) {
      throw UsageError("skill " + std::to_string(s.id) + " is not executable in this maze");
    }
  }
}

}  // namespace

TrainResult train(
  const Maze & maze, const SkillLibrary & library, std::size_t budget, const AgentConfig & config,
  std::uint64_t seed)
{
  check_compatible(maze, library);
  if (budget < static_cast<std::size_t>(maze.spec().horizon)) {
    throw UsageError("training budget must cover at least one episode horizon");
  }
  if (!(config.gamma > 0.0 && config.gamma <= 1.0) || !(config.learning_rate > 0.0 && config.learning_rate <= 1.0)) {
    throw UsageError("gamma and learning_rate must lie in (0, 1]");
  }

  const auto & spec = maze.spec();
  const auto n_skills = static_cast<Eigen::Index>(library.skills.size());
  TrainResult result;
  auto & policy = result.policy;
  policy.rows = spec.rows();
  policy.cols = spec.cols();
  policy.q_values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.rows()) * spec.cols(), n_skills);
  policy.config = config;
  policy.rng_seed = seed;

  Rng rng(derive_seed(seed, 0xa11ce));
  auto & log = result.log;
  std::vector<int> ties;

  for (std::uint64_t episode = 0; log.steps < budget; ++episode) {
    EnvState state = maze.reset(derive_seed(seed, episode));
    log.positions.emplace_back();
    log.rewards.emplace_back();
    double episode_return = 0.0;

    while (!state.done && log.steps < budget) {
      const Cell cell = maze.cell_of(state.position);
      const auto s = policy.state_index(cell);
      int action = 0;
      if (uniform01(rng) < epsilon_at(config, log.steps, budget)) {
        action = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n_skills)));
      } else {
        const double best = policy.q_values.row(s).maxCoeff();
        ties.clear();
        for (Eigen::Index a = 0; a < n_skills; ++a) {
          if (policy.q_values(s, a) == best) {
            ties.push_back(static_cast<int>(a));
          }
        }
        action = ties[uniform_index(rng, ties.size())];
      }

      const auto exec = execute_skill(
        maze, state, library.skills[static_cast<std::size_t>(action)], budget - log.steps);
      const bool reached = exec.reward > 0.0;
      const double next_max = policy.q_values.row(policy.state_index(maze.cell_of(exec.state.position))).maxCoeff();
      const double target =
        macro_target(exec.discounted_reward(config.gamma), config.gamma, exec.steps, next_max, reached);
      auto & q = policy.q_values(s, action);
      q += config.learning_rate * (target - q);

      auto & positions = log.positions.back();
      positions.insert(positions.end(), exec.positions.begin(), exec.positions.end());
      auto & rewards = log.rewards.back();
      rewards.insert(rewards.end(), exec.rewards.begin(), exec.rewards.end());
      log.steps += exec.steps;
      episode_return += exec.reward;
      state = exec.state;
    }
    log.returns.push_back(episode_return);
  }
  return result;
}

double evaluate(
  const MacroPolicy & policy, const SkillLibrary & library, const Maze & maze, std::size_t episodes,
  std::uint64_t seed)
{
  check_compatible(maze, library);
  if (policy.skill_count() != static_cast<int>(library.skills.size()) || policy.rows != maze.spec().rows() ||
      policy.cols != maze.spec().cols()) {
    throw UsageError("policy does not match the skill library or maze");
  }
  if (episodes == 0) {
    return 0.0;
  }
  std::size_t successes = 0;
  for (std::size_t e = 0; e < episodes; ++e) {
    EnvState state = maze.reset(derive_seed(seed, e));
    bool reached = false;
    while (!state.done) {
      const int action = policy.greedy(maze.cell_of(state.position));
      const auto exec = execute_skill(maze, state, library.skills[static_cast<std::size_t>(action)]);
      reached = reached || exec.reward > 0.0;
      state = exec.state;
    }
    if (reached) {
      ++successes;
    }
  }
  return static_cast<double>(successes) / static_cast<double>(episodes);
}

void save_rollout_csv(const RolloutLog & log, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write rollout log: " + path.string());
  }
  out << "episode,t,x,y,reward\n" << std::setprecision(17);
  for (std::size_t e = 0; e < log.positions.size(); ++e) {
    for (std::size_t t = 0; t < log.positions[e].size(); ++t) {
      const auto & p = log.positions[e][t];
      out << e << ',' << t << ',' << p.x() << ',' << p.y() << ',' << log.rewards[e][t] << '\n';
    }
  }
}

void save_policy(const MacroPolicy & policy, const std::filesystem::path & path)
{
  nlohmann::json q = nlohmann::json::array();
  for (Eigen::Index s = 0; s < policy.q_values.rows(); ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index a = 0; a < policy.q_values.cols(); ++a) {
      row.push_back(policy.q_values(s, a));
    }
    q.push_back(std::move(row));
  }
  const nlohmann::json j{
    {"rows", policy.rows},
    {"cols", policy.cols},
    {"rng_seed", policy.rng_seed},
    {"gamma", policy.config.gamma},
    {"learning_rate", policy.config.learning_rate},
    {"epsilon_start", policy.config.epsilon_start},
    {"epsilon_end", policy.config.epsilon_end},
    {"anneal_fraction", policy.config.anneal_fraction},
    {"q_values", std::move(q)},
  };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write policy: " + path.string());
  }
  out << j.dump() << '\n';
}

MacroPolicy load_policy(const std::filesystem::path & path)
{
  const auto j = detail::read_json_file(path);
  try {
    MacroPolicy p;
    p.rows = j.at("rows").get<int>();
    p.cols = j.at("cols").get<int>();
    p.rng_seed = j.value("rng_seed", std::uint64_t{0});
    p.config.gamma = j.value("gamma", p.config.gamma);
    p.config.learning_rate = j.value("learning_rate", p.config.learning_rate);
    p.config.epsilon_start = j.value("epsilon_start", p.config.epsilon_start);
    p.config.epsilon_end = j.value("epsilon_end", p.config.epsilon_end);
    p.config.anneal_fraction = j.value("anneal_fraction", p.config.anneal_fraction);
    const auto m = detail::matrix_from_json(j.at("q_values"), "q_values");
    if (m.rows() != static_cast<Eigen::Index>(p.rows) * p.cols) {
      throw DataError("policy table does not match its grid");
    }
    p.q_values = m;
    return p;
  } catch (const nlohmann::json::exception & e) {
    throw DataError("malformed policy " + path.string() + ": " + e.what());
  }
}

}  // namespace skillbpe
