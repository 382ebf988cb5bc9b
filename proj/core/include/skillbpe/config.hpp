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

#ifndef SKILLBPE_CONFIG_HPP_
#define SKILLBPE_CONFIG_HPP_

#include "skillbpe/agent.hpp"
#include "skillbpe/maze_env.hpp"
#include "skillbpe/tokenizer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace skillbpe
{

/// Everything a pipeline command needs. Written back as a resolved snapshot
/// so any output directory can be reproduced.
struct PipelineConfig
{
  // environment
  std::string maze = "medium";
  double cell_size = 6.0;
  double max_action = 0.5;
  double goal_radius = 1.0;
  int horizon = 600;
  int lift_dim = 0;
  std::uint64_t lift_seed = 7;

  // demonstrations
  std::string dataset;  // empty: generate from the maze
  std::size_t demos = 100;
  std::uint64_t demo_seed = 0;
  double demo_noise = 0.1;
  double subsample = 1.0;
  std::uint64_t subsample_seed = 0;

  // extraction
  TokenizerConfig tokenizer;

  // agent
  AgentConfig agent;
  std::size_t budget = 200000;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t eval_episodes = 100;
  double heatmap_gamma = 0.5;
  int heatmap_scale = 16;

  std::string out_dir = "out";
};

/// Sets one key from its textual value. Throws UsageError for unknown keys
/// or unparsable values.
void apply_setting(PipelineConfig & config, const std::string & key, const std::string & value);

/// Reads `key = value` lines; '#' starts a comment, strings may be quoted,
/// lists use [a, b, c]. Section headers are accepted and ignored.
PipelineConfig load_config(const std::filesystem::path & path);

/// Resolved config in the same format load_config reads.
std::string to_config_text(const PipelineConfig & config);

void save_config(const PipelineConfig & config, const std::filesystem::path & path);

/// Throws UsageError when the combination of settings is invalid.
void validate(const PipelineConfig & config);

MazeSpec make_maze_spec(const PipelineConfig & config);

}  // namespace skillbpe

#endif  // SKILLBPE_CONFIG_HPP_
