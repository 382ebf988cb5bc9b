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

#include "skillbpe/codebook.hpp"
#include "skillbpe/config.hpp"
#include "skillbpe/corpus.hpp"
#include "skillbpe/maze_env.hpp"
#include "skillbpe/random.hpp"
#include "skillbpe/scoring.hpp"
#include "skillbpe/tokenizer.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace
{

using namespace skillbpe;

Dataset maze_demos(std::size_t trajectories)
{
  const PipelineConfig pc;
  const Maze maze(make_maze_spec(pc));
  return generate_demos(maze, DemoOptions{.trajectories = trajectories, .seed = 1, .noise = pc.demo_noise});
}

void BM_FitCodebook(benchmark::State & state)
{
  const auto data = maze_demos(static_cast<std::size_t>(state.range(0)));
  KMeansOptions km;
  km.k = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_codebook(data, km));
  }
  state.counters["steps"] = static_cast<double>(data.total_steps());
}
BENCHMARK(BM_FitCodebook)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_MergeLoop(benchmark::State & state)
{
  const auto data = maze_demos(200);
  KMeansOptions km;
  km.k = 4;
  const auto codebook = fit_codebook(data, km);
  const auto base = base_sequences(data, codebook);
  const HeadingEvaluator headings(data);
  for (auto _ : state) {
    auto corpus = corpus_from_base(base);
    Vocabulary vocab(4, data.d_obs(), 1e-6);
    benchmark::DoNotOptimize(merge_loop(corpus, vocab, headings, {.n_max = static_cast<int>(state.range(0))}));
  }
}
BENCHMARK(BM_MergeLoop)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MahalanobisScore(benchmark::State & state)
{
  const int d = static_cast<int>(state.range(0));
  Rng rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Heading> q(static_cast<std::size_t>(2 * d));
  for (auto & h : q) {
    h = Heading::NullaryExpr(d, [&] { return normal(rng); });
  }
  const auto st = update_stats(q, d, 1e-6);
  const Heading x = Heading::NullaryExpr(d, [&] { return normal(rng); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(mahalanobis_score(x, st));
  }
}
BENCHMARK(BM_MahalanobisScore)->Arg(2)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
