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

// skillbpe: extract skills from demonstrations and test them in a maze.

#include "skillbpe/agent.hpp"
#include "skillbpe/config.hpp"
#include "skillbpe/errors.hpp"
#include "skillbpe/maze_env.hpp"
#include "skillbpe/metrics.hpp"
#include "skillbpe/pipeline.hpp"
#include "skillbpe/tokenizer.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using namespace skillbpe;

namespace
{

enum ExitCode
{
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kInternal = 3,
};

/// Flags shared by every subcommand; each maps onto a config key.
struct Overrides
{
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;

  void attach(CLI::App * app, const std::vector<std::pair<std::string, std::string>> & names)
  {
    app->add_option("--config", config_file, "Config file (key = value lines)")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "Override any config key: --set key=value")->take_all();
    for (const auto & [flag, key] : names) {
      app->add_option_function<std::string>(
        flag, [this, key = key](const std::string & v) { flags[key] = v; }, "Sets config key '" + key + "'");
    }
  }

  PipelineConfig resolve() const
  {
    PipelineConfig c = config_file.empty() ? PipelineConfig{} : load_config(config_file);
    for (const auto & s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--set expects key=value, got '" + s + "'");
      }
      apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto & [key, value] : flags) {
      apply_setting(c, key, value);
    }
    validate(c);
    return c;
  }
};

const std::vector<std::pair<std::string, std::string>> kEnvFlags = {
  {"--maze", "maze"},           {"--cell-size", "cell_size"}, {"--max-action", "max_action"},
  {"--goal-radius", "goal_radius"}, {"--horizon", "horizon"}, {"--lift-dim", "lift_dim"},
  {"--out-dir", "out_dir"},
};
const std::vector<std::pair<std::string, std::string>> kDataFlags = {
  {"--dataset", "dataset"},     {"--demos", "demos"},         {"--demo-seed", "demo_seed"},
  {"--noise", "demo_noise"},    {"--subsample", "subsample"}, {"--subsample-seed", "subsample_seed"},
};
const std::vector<std::pair<std::string, std::string>> kExtractFlags = {
  {"--k", "k"},
  {"--n-max", "n_max"},
  {"--n-min", "n_min"},
  {"--epsilon", "epsilon"},
  {"--strategy", "strategy"},
  {"--min-count", "min_count"},
  {"--seed", "seed"},
  {"--heading-columns", "heading_columns"},
};
const std::vector<std::pair<std::string, std::string>> kAgentFlags = {
  {"--budget", "budget"},       {"--seeds", "seeds"},         {"--episodes", "eval_episodes"},
  {"--gamma", "gamma"},         {"--learning-rate", "learning_rate"},
  {"--heatmap-gamma", "heatmap_gamma"},
};

std::vector<std::pair<std::string, std::string>> join(
  std::initializer_list<const std::vector<std::pair<std::string, std::string>> *> parts)
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto * p : parts) {
    out.insert(out.end(), p->begin(), p->end());
  }
  return out;
}

fs::path prepare_out_dir(const PipelineConfig & config)
{
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  save_config(config, dir / "resolved_config.toml");
  return dir;
}

std::string fmt_mean_std(const MeanStd & m, int precision = 2)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << m.mean << " ± " << m.stddev;
  return os.str();
}

void print_library_summary(const SkillLibrary & lib)
{
  const auto stats = skill_length_stats(lib);
  std::cout << "skills: " << lib.size() << "  (k=" << lib.codebook.k << ", merges=" << lib.merge_log.size()
            << ", pruned=" << lib.prune_log.size() << ")\n"
            << "subword length: " << fmt_mean_std(MeanStd{stats.mean, stats.stddev}, 1) << '\n'
            << "skill generation: " << std::fixed << std::setprecision(3) << lib.generation_seconds << " s\n";
  if (lib.early_stopped) {
    std::cerr << "warning: " << lib.note << '\n';
  }
}

SkillLibrary library_for(const std::string & spec, const PipelineConfig & config)
{
  if (spec == "primitives") {
    const Dataset data = prepare_dataset(config);
    KMeansOptions km;
    km.k = config.tokenizer.k > 0 ? config.tokenizer.k : default_k(data.d_act());
    km.seed = config.tokenizer.seed;
    km.max_iters = config.tokenizer.kmeans_max_iters;
    km.tol = config.tokenizer.kmeans_tol;
    return primitive_library(fit_codebook(data, km));
  }
  return load_skill_library(spec);
}

void write_arm(const fs::path & dir, const std::string & tag, const ArmResult & arm, const PipelineConfig & config,
               const Maze & maze, bool save_rollouts)
{
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    const auto seed = config.seeds[i];
    const auto hist = visitation_histogram({&arm.logs[i], 1}, maze);
    export_heatmap(hist, dir / (tag + "heatmap_seed" + std::to_string(seed) + ".pgm"), config.heatmap_gamma,
                   config.heatmap_scale);
    save_policy(arm.policies[i], dir / (tag + "policy_seed" + std::to_string(seed) + ".json"));
    if (save_rollouts) {
      save_rollout_csv(arm.logs[i], dir / (tag + "rollouts_seed" + std::to_string(seed) + ".csv"));
    }
  }
  const auto all = visitation_histogram(arm.logs, maze);
  export_heatmap(all, dir / (tag + "heatmap_all.pgm"), config.heatmap_gamma, config.heatmap_scale);
}

int cmd_gen_demos(const Overrides & o)
{
  const auto config = o.resolve();
  const auto dir = prepare_out_dir(config);
  const Dataset data = prepare_dataset(config);
  save_dataset(data, dir / "demos.jsonl");
  std::cout << "wrote " << data.size() << " trajectories (" << data.total_steps() << " steps, d_obs=" << data.d_obs()
            << ", d_act=" << data.d_act() << ") to " << (dir / "demos.jsonl").string() << '\n';
  return kOk;
}

int cmd_extract(const Overrides & o, bool keep_base)
{
  auto config = o.resolve();
  if (keep_base) {
    config.tokenizer.keep_base_tokens = true;
  }
  validate(config);
  const auto dir = prepare_out_dir(config);
  const Dataset data = prepare_dataset(config);
  const auto lib = build_skill_library(data, config.tokenizer);
  save_skill_library(lib, dir / "library.json");
  print_library_summary(lib);
  std::cout << "wrote " << (dir / "library.json").string() << '\n';
  return kOk;
}

int cmd_train(const Overrides & o, const std::string & library_spec, bool save_rollouts)
{
  const auto config = o.resolve();
  const auto dir = prepare_out_dir(config);
  const Maze maze(make_maze_spec(config));
  const auto lib = library_for(library_spec, config);
  const auto arm = run_arm(maze, lib, config);
  write_arm(dir, "", arm, config, maze, save_rollouts);

  std::ofstream report(dir / "report.csv");
  report << "seed,primitive_steps,success_rate,coverage\n";
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    report << config.seeds[i] << ',' << arm.steps[i] << ',' << arm.success[i] << ',' << arm.coverage[i] << '\n';
  }
  std::cout << "library: " << library_spec << " (" << lib.size() << " skills)\n"
            << "success rate: " << fmt_mean_std(arm.success_stats()) << " over " << config.seeds.size()
            << " seeds\n"
            << "coverage: " << fmt_mean_std(arm.coverage_stats()) << '\n';
  return kOk;
}

int cmd_evaluate(const Overrides & o, const std::string & policy_path, const std::string & library_spec)
{
  const auto config = o.resolve();
  const Maze maze(make_maze_spec(config));
  const auto lib = library_for(library_spec, config);
  const auto policy = load_policy(policy_path);
  const double rate = evaluate(policy, lib, maze, config.eval_episodes, config.seeds.front());
  std::cout << "success rate: " << rate << " over " << config.eval_episodes << " episodes\n";
  return kOk;
}

int cmd_stats(const std::string & library_path)
{
  const auto lib = load_skill_library(library_path);
  print_library_summary(lib);
  for (const auto & s : lib.skills) {
    std::cout << "  skill " << s.id << ": length " << s.length() << ", tokens";
    for (auto t : s.base_tokens) {
      std::cout << ' ' << t.value;
    }
    std::cout << '\n';
  }
  return kOk;
}

/// "key=v1,v2,..." entries combined as a cross product.
std::vector<std::vector<std::pair<std::string, std::string>>> expand_sweep(const std::vector<std::string> & specs)
{
  std::vector<std::vector<std::pair<std::string, std::string>>> cells{{}};
  for (const auto & spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--sweep expects key=v1,v2,..., got '" + spec + "'");
    }
    const auto key = spec.substr(0, eq);
    if (key != "k" && key != "n_max" && key != "n_min" && key != "strategy" && key != "subsample") {
      throw UsageError("sweepable keys are k, n_max, n_min, strategy, subsample");
    }
    std::vector<std::string> values;
    std::stringstream ss(spec.substr(eq + 1));
    for (std::string v; std::getline(ss, v, ',');) {
      if (!v.empty()) {
        values.push_back(v);
      }
    }
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto & cell : cells) {
      for (const auto & v : values) {
        auto c = cell;
        c.emplace_back(key, v);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

int cmd_ablate(const Overrides & o, const std::vector<std::string> & sweeps)
{
  const auto base = o.resolve();
  const auto dir = prepare_out_dir(base);
  const auto cells = expand_sweep(sweeps);
  std::ofstream report(dir / "report.csv");
  report << "k,n_max,n_min,strategy,subsample,skills,mean_length,success_mean,success_std,coverage_mean,coverage_std\n";
  for (const auto & cell : cells) {
    auto config = base;
    for (const auto & [key, value] : cell) {
      apply_setting(config, key, value);
    }
    validate(config);
    const Dataset data = prepare_dataset(config);
    const auto lib = build_skill_library(data, config.tokenizer);
    const Maze maze(make_maze_spec(config));
    const auto arm = run_arm(maze, lib, config);
    const auto s = arm.success_stats();
    const auto c = arm.coverage_stats();
    const auto len = skill_length_stats(lib);
    report << lib.codebook.k << ',' << config.tokenizer.n_max << ',' << config.tokenizer.n_min << ','
           << to_string(config.tokenizer.strategy) << ',' << config.subsample << ',' << lib.size() << ','
           << len.mean << ',' << s.mean << ',' << s.stddev << ',' << c.mean << ',' << c.stddev << '\n';
    report.flush();
    std::cout << "k=" << lib.codebook.k << " n_max=" << config.tokenizer.n_max << " n_min=" << config.tokenizer.n_min
              << " strategy=" << to_string(config.tokenizer.strategy) << " subsample=" << config.subsample
              << "  success " << fmt_mean_std(s) << "  coverage " << fmt_mean_std(c) << '\n';
  }
  std::cout << "wrote " << (dir / "report.csv").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Skill extraction by action discretization and subword merging"};
  app.require_subcommand(1);

  Overrides gen_o;
  auto * gen = app.add_subcommand("gen-demos", "Generate scripted maze demonstrations (demos.jsonl)");
  gen_o.attach(gen, join({&kEnvFlags, &kDataFlags}));

  Overrides ext_o;
  bool keep_base = false;
  auto * ext = app.add_subcommand("extract", "Extract a skill library (library.json)");
  ext_o.attach(ext, join({&kEnvFlags, &kDataFlags, &kExtractFlags}));
  ext->add_flag("--keep-base-tokens", keep_base, "Never prune base tokens");

  Overrides train_o;
  std::string train_lib;
  bool save_rollouts = false;
  auto * tr = app.add_subcommand("train", "Train and evaluate agents over a skill library, one per seed");
  train_o.attach(tr, join({&kEnvFlags, &kDataFlags, &kAgentFlags, &kExtractFlags}));
  tr->add_option("--library", train_lib, "library.json path, or 'primitives' for the k-means-only arm")->required();
  tr->add_flag("--save-rollouts", save_rollouts, "Also write per-seed rollout CSVs");

  Overrides eval_o;
  std::string eval_policy;
  std::string eval_lib;
  auto * ev = app.add_subcommand("evaluate", "Greedy success rate of a saved policy");
  eval_o.attach(ev, join({&kEnvFlags, &kDataFlags, &kAgentFlags, &kExtractFlags}));
  ev->add_option("--policy", eval_policy, "policy_seedN.json from train")->required()->check(CLI::ExistingFile);
  ev->add_option("--library", eval_lib, "library.json path, or 'primitives'")->required();

  Overrides abl_o;
  std::vector<std::string> sweeps;
  auto * ab = app.add_subcommand("ablate", "Cross-product sweep over extraction settings (report.csv)");
  abl_o.attach(ab, join({&kEnvFlags, &kDataFlags, &kAgentFlags, &kExtractFlags}));
  ab->add_option("--sweep", sweeps, "key=v1,v2,... over k, n_max, n_min, strategy, subsample")->required();

  std::string stats_lib;
  auto * st = app.add_subcommand("stats", "Summarize a skill library");
  st->add_option("--library", stats_lib, "library.json path")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_demos(gen_o);
    }
    if (ext->parsed()) {
      return cmd_extract(ext_o, keep_base);
    }
    if (tr->parsed()) {
      return cmd_train(train_o, train_lib, save_rollouts);
    }
    if (ev->parsed()) {
      return cmd_evaluate(eval_o, eval_policy, eval_lib);
    }
    if (ab->parsed()) {
      return cmd_ablate(abl_o, sweeps);
    }
    if (st->parsed()) {
      return cmd_stats(stats_lib);
    }
  } catch (const UsageError & e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError & e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InvariantError & e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
