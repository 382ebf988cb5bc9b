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

#include "skillbpe/config.hpp"
#include "skillbpe/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using namespace skillbpe;

TEST(Config, DefaultsAreValid)
{
  const PipelineConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.eval_episodes, 100u);
  EXPECT_EQ(c.tokenizer.n_min, 16);
  EXPECT_EQ(c.tokenizer.n_max, 128);
  EXPECT_EQ(c.tokenizer.k, 0);
}

TEST(Config, SettingsParse)
{
  PipelineConfig c;
  apply_setting(c, "k", "6");
  apply_setting(c, "strategy", "\"frequency\"");
  apply_setting(c, "seeds", "[3, 4]");
  apply_setting(c, "keep_base_tokens", "true");
  apply_setting(c, "heading_columns", "0,1");
  EXPECT_EQ(c.tokenizer.k, 6);
  EXPECT_EQ(c.tokenizer.strategy, MergeStrategy::frequency);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_TRUE(c.tokenizer.keep_base_tokens);
  EXPECT_EQ(c.tokenizer.heading_columns, (std::vector<int>{0, 1}));
  apply_setting(c, "k", "auto");
  EXPECT_EQ(c.tokenizer.k, 0);
  EXPECT_THROW(apply_setting(c, "colour", "red"), UsageError);
  EXPECT_THROW(apply_setting(c, "n_max", "many"), UsageError);
  EXPECT_THROW(apply_setting(c, "budget", "-5"), UsageError);
}

TEST(Config, SnapshotRoundTrips)
{
  PipelineConfig c;
  c.maze = "large";
  c.cell_size = 3.25;
  c.tokenizer.n_max = 64;
  c.tokenizer.epsilon = 1e-9;
  c.tokenizer.strategy = MergeStrategy::frequency;
  c.seeds = {7, 8, 9};
  c.out_dir = "runs/a b";
  const auto p = fs::temp_directory_path() / "skillbpe_config_test.toml";
  save_config(c, p);
  const auto back = load_config(p);
  EXPECT_EQ(to_config_text(back), to_config_text(c));
  EXPECT_EQ(back.cell_size, 3.25);
  EXPECT_EQ(back.tokenizer.epsilon, 1e-9);
  EXPECT_EQ(back.out_dir, "runs/a b");
}

TEST(Config, FileSyntax)
{
  const auto p = fs::temp_directory_path() / "skillbpe_config_syntax.toml";
  std::ofstream(p) << "# comment\n[extraction]\nn_max = 32   # trailing\nmaze = \"U\"\n\nbudget=1000\n";
  const auto c = load_config(p);
  EXPECT_EQ(c.tokenizer.n_max, 32);
  EXPECT_EQ(c.maze, "U");
  EXPECT_EQ(c.budget, 1000u);
  std::ofstream(p) << "n_max 32\n";
  EXPECT_THROW(load_config(p), UsageError);
}

TEST(Config, ValidationMirrorsContract)
{
  PipelineConfig c;
  c.tokenizer.k = 1;
  EXPECT_THROW(validate(c), UsageError);
  c = {};
  c.tokenizer.k = 8;
  c.tokenizer.n_min = 4;
  EXPECT_NO_THROW(validate(c));
  c.tokenizer.keep_base_tokens = true;
  EXPECT_THROW(validate(c), UsageError);
  c = {};
  c.tokenizer.n_min = 200;
  EXPECT_THROW(validate(c), UsageError);
  c = {};
  c.seeds.clear();
  EXPECT_THROW(validate(c), UsageError);
  c = {};
  c.subsample = 0.0;
  EXPECT_THROW(validate(c), UsageError);
}

TEST(Config, MazeSpecFromConfig)
{
  PipelineConfig c;
  c.maze = "U";
  c.cell_size = 2.0;
  c.max_action = 0.5;
  c.lift_dim = 8;
  const auto spec = make_maze_spec(c);
  EXPECT_EQ(spec.rows(), 5);
  EXPECT_EQ(spec.cell_size, 2.0);
  EXPECT_EQ(spec.action_dim(), 8);
  c.maze = "nowhere";
  EXPECT_THROW(make_maze_spec(c), UsageError);
}
