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

#include "skillbpe/pipeline.hpp"

#include "skillbpe/random.hpp"

#include <future>

namespace skillbpe
{

Dataset prepare_dataset(const PipelineConfig & config)
{
  Dataset dataset = [&] {
    if (!config.dataset.empty()) {
      return load_dataset(config.dataset);
    }
    const Maze maze(make_maze_spec(config));
    DemoOptions demo;
    demo.trajectories = config.demos;
    demo.seed = config.demo_seed;
    demo.noise = config.demo_noise;
    return generate_demos(maze, demo);
  }();
  if (config.subsample < 1.0) {
    return subsample(dataset, config.subsample, config.subsample_seed);
  }
  return dataset;
}

namespace
{

struct SeedRun
{
  MacroPolicy policy;
  RolloutLog log;
  double success = 0.0;
  double coverage = 0.0;
};

SeedRun run_seed(const Maze & maze, const SkillLibrary & library, const PipelineConfig & config, std::uint64_t seed)
{
  auto trained = train(maze, library, config.budget, config.agent, seed);
  SeedRun out;
  out.success = evaluate(trained.policy, library, maze, config.eval_episodes, derive_seed(seed, 0xe7a1));
  const RolloutLog * one = &trained.log;
  out.coverage = coverage(visitation_histogram({one, 1}, maze), maze);
  out.policy = std::move(trained.policy);
  out.log = std::move(trained.log);
  return out;
}

}  // namespace

ArmResult run_arm(const Maze & maze, const SkillLibrary & library, const PipelineConfig & config)
{
  std::vector<std::future<SeedRun>> futures;
  futures.reserve(config.seeds.size());
  for (const auto seed : config.seeds) {
    futures.push_back(std::async(std::launch::async, [&maze, &library, &config, seed] {
      return run_seed(maze, library, config, seed);
    }));
  }
  ArmResult arm;
  for (auto & f : futures) {
    auto r = f.get();
    arm.steps.push_back(r.log.steps);
    arm.success.push_back(r.success);
    arm.coverage.push_back(r.coverage);
    arm.policies.push_back(std::move(r.policy));
    arm.logs.push_back(std::move(r.log));
  }
  return arm;
}

}  // namespace skillbpe
