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

#ifndef SKILLBPE_PIPELINE_HPP_
#define SKILLBPE_PIPELINE_HPP_

#include "skillbpe/agent.hpp"
#include "skillbpe/config.hpp"
#include "skillbpe/dataset.hpp"
#include "skillbpe/metrics.hpp"
#include "skillbpe/tokenizer.hpp"

#include <vector>

namespace skillbpe
{

/// Loads config.dataset, or generates demonstrations in the configured
/// maze, then applies the configured subsampling.
Dataset prepare_dataset(const PipelineConfig & config);

/// One agent trained and evaluated per configured seed.
struct ArmResult
{
  std::vector<MacroPolicy> policies;
  std::vector<RolloutLog> logs;
  std::vector<double> success;
  std::vector<double> coverage;
  std::vector<std::size_t> steps;

  MeanStd success_stats() const { return mean_std(success); }
  MeanStd coverage_stats() const { return mean_std(coverage); }
};

/// Seeds run concurrently; results are ordered as config.seeds.
ArmResult run_arm(const Maze & maze, const SkillLibrary & library, const PipelineConfig & config);

}  // namespace skillbpe

#endif  // SKILLBPE_PIPELINE_HPP_
