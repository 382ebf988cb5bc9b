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

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace skillbpe
{

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string & raw)
{
  const auto v = trim(raw);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

template <typename T>
T parse_number(const std::string & key, const std::string & raw)
{
  const auto v = unquote(raw);
  T out{};
  const auto * first = v.data();
  const auto * last = v.data() + v.size();
  const auto r = std::from_chars(first, last, out);
  if (r.ec != std::errc() || r.ptr != last) {
    throw UsageError("invalid value '" + v + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string & key, const std::string & raw)
{
  const auto v = unquote(raw);
  if (v == "true" || v == "1") {
    return true;
  }
  if (v == "false" || v == "0") {
    return false;
  }
  throw UsageError("invalid boolean '" + v + "' for " + key);
}

template <typename T>
std::vector<T> parse_list(const std::string & key, const std::string & raw)
{
  auto v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') {
      throw UsageError("unterminated list for " + key);
    }
    v = v.substr(1, v.size() - 2);
  }
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) {
      out.push_back(parse_number<T>(key, item));
    }
  }
  return out;
}

using Setter = std::function<void(PipelineConfig &, const std::string &, const std::string &)>;

const std::map<std::string, Setter> & setters()
{
  static const std::map<std::string, Setter> table = {
    {"maze", [](auto & c, auto &, auto & v) { c.maze = unquote(v); }},
    {"cell_size", [](auto & c, auto & k, auto & v) { c.cell_size = parse_number<double>(k, v); }},
    {"max_action", [](auto & c, auto & k, auto & v) { c.max_action = parse_number<double>(k, v); }},
    {"goal_radius", [](auto & c, auto & k, auto & v) { c.goal_radius = parse_number<double>(k, v); }},
    {"horizon", [](auto & c, auto & k, auto & v) { c.horizon = parse_number<int>(k, v); }},
    {"lift_dim", [](auto & c, auto & k, auto & v) { c.lift_dim = parse_number<int>(k, v); }},
    {"lift_seed", [](auto & c, auto & k, auto & v) { c.lift_seed = parse_number<std::uint64_t>(k, v); }},
    {"dataset", [](auto & c, auto &, auto & v) { c.dataset = unquote(v); }},
    {"demos", [](auto & c, auto & k, auto & v) { c.demos = parse_number<std::size_t>(k, v); }},
    {"demo_seed", [](auto & c, auto & k, auto & v) { c.demo_seed = parse_number<std::uint64_t>(k, v); }},
    {"demo_noise", [](auto & c, auto & k, auto & v) { c.demo_noise = parse_number<double>(k, v); }},
    {"subsample", [](auto & c, auto & k, auto & v) { c.subsample = parse_number<double>(k, v); }},
    {"subsample_seed", [](auto & c, auto & k, auto & v) { c.subsample_seed = parse_number<std::uint64_t>(k, v); }},
    {"k",
     [](auto & c, auto & k, auto & v) {
       const auto s = unquote(v);
       c.tokenizer.k = (s == "auto") ? 0 : parse_number<int>(k, s);
     }},
    {"n_max", [](auto & c, auto & k, auto & v) { c.tokenizer.n_max = parse_number<int>(k, v); }},
    {"n_min", [](auto & c, auto & k, auto & v) { c.tokenizer.n_min = parse_number<int>(k, v); }},
    {"epsilon", [](auto & c, auto & k, auto & v) { c.tokenizer.epsilon = parse_number<double>(k, v); }},
    {"strategy", [](auto & c, auto &, auto & v) { c.tokenizer.strategy = parse_strategy(unquote(v)); }},
    {"min_count", [](auto & c, auto & k, auto & v) { c.tokenizer.min_count = parse_number<int>(k, v); }},
    {"keep_base_tokens", [](auto & c, auto & k, auto & v) { c.tokenizer.keep_base_tokens = parse_bool(k, v); }},
    {"heading_columns", [](auto & c, auto & k, auto & v) { c.tokenizer.heading_columns = parse_list<int>(k, v); }},
    {"seed", [](auto & c, auto & k, auto & v) { c.tokenizer.seed = parse_number<std::uint64_t>(k, v); }},
    {"kmeans_max_iters", [](auto & c, auto & k, auto & v) { c.tokenizer.kmeans_max_iters = parse_number<int>(k, v); }},
    {"kmeans_tol", [](auto & c, auto & k, auto & v) { c.tokenizer.kmeans_tol = parse_number<double>(k, v); }},
    {"gamma", [](auto & c, auto & k, auto & v) { c.agent.gamma = parse_number<double>(k, v); }},
    {"learning_rate", [](auto & c, auto & k, auto & v) { c.agent.learning_rate = parse_number<double>(k, v); }},
    {"epsilon_start", [](auto & c, auto & k, auto & v) { c.agent.epsilon_start = parse_number<double>(k, v); }},
    {"epsilon_end", [](auto & c, auto & k, auto & v) { c.agent.epsilon_end = parse_number<double>(k, v); }},
    {"anneal_fraction", [](auto & c, auto & k, auto & v) { c.agent.anneal_fraction = parse_number<double>(k, v); }},
    {"budget", [](auto & c, auto & k, auto & v) { c.budget = parse_number<std::size_t>(k, v); }},
    {"seeds", [](auto & c, auto & k, auto & v) { c.seeds = parse_list<std::uint64_t>(k, v); }},
    {"eval_episodes", [](auto & c, auto & k, auto & v) { c.eval_episodes = parse_number<std::size_t>(k, v); }},
    {"heatmap_gamma", [](auto & c, auto & k, auto & v) { c.heatmap_gamma = parse_number<double>(k, v); }},
    {"heatmap_scale", [](auto & c, auto & k, auto & v) { c.heatmap_scale = parse_number<int>(k, v); }},
    {"out_dir", [](auto & c, auto &, auto & v) { c.out_dir = unquote(v); }},
  };
  return table;
}

std::string quoted(const std::string & s) { return "\"" + s + "\""; }

// Shortest text that reads back to the same double.
std::string num(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string list(const std::vector<T> & xs)
{
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += (i ? ", " : "") + std::to_string(xs[i]);
  }
  return out + "]";
}

}  // namespace

void apply_setting(PipelineConfig & config, const std::string & key, const std::string & value)
{
  const auto it = setters().find(key);
  if (it == setters().end()) {
    throw UsageError("unknown config key '" + key + "'");
  }
  it->second(config, key, value);
}

PipelineConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file: " + path.string());
  }
  PipelineConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // A '#' inside a quoted string is not a comment.
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') {
        in_string = !in_string;
      } else if (line[i] == '#' && !in_string) {
        line.resize(i);
        break;
      }
    }
    const auto t = trim(line);
    if (t.empty() || t.front() == '[') {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return config;
}

std::string to_config_text(const PipelineConfig & c)
{
  std::ostringstream os;
  const auto & t = c.tokenizer;
  os << "# resolved configuration\n"
     << "maze = " << quoted(c.maze) << '\n'
     << "cell_size = " << num(c.cell_size) << '\n'
     << "max_action = " << num(c.max_action) << '\n'
     << "goal_radius = " << num(c.goal_radius) << '\n'
     << "horizon = " << c.horizon << '\n'
     << "lift_dim = " << c.lift_dim << '\n'
     << "lift_seed = " << c.lift_seed << '\n'
     << "dataset = " << quoted(c.dataset) << '\n'
     << "demos = " << c.demos << '\n'
     << "demo_seed = " << c.demo_seed << '\n'
     << "demo_noise = " << num(c.demo_noise) << '\n'
     << "subsample = " << num(c.subsample) << '\n'
     << "subsample_seed = " << c.subsample_seed << '\n'
     << "k = " << (t.k > 0 ? std::to_string(t.k) : quoted("auto")) << '\n'
     << "n_max = " << t.n_max << '\n'
     << "n_min = " << t.n_min << '\n'
     << "epsilon = " << num(t.epsilon) << '\n'
     << "strategy = " << quoted(std::string(to_string(t.strategy))) << '\n'
     << "min_count = " << t.min_count << '\n'
     << "keep_base_tokens = " << (t.keep_base_tokens ? "true" : "false") << '\n'
     << "heading_columns = " << list(t.heading_columns) << '\n'
     << "seed = " << t.seed << '\n'
     << "kmeans_max_iters = " << t.kmeans_max_iters << '\n'
     << "kmeans_tol = " << num(t.kmeans_tol) << '\n'
     << "gamma = " << num(c.agent.gamma) << '\n'
     << "learning_rate = " << num(c.agent.learning_rate) << '\n'
     << "epsilon_start = " << num(c.agent.epsilon_start) << '\n'
     << "epsilon_end = " << num(c.agent.epsilon_end) << '\n'
     << "anneal_fraction = " << num(c.agent.anneal_fraction) << '\n'
     << "budget = " << c.budget << '\n'
     << "seeds = " << list(c.seeds) << '\n'
     << "eval_episodes = " << c.eval_episodes << '\n'
     << "heatmap_gamma = " << num(c.heatmap_gamma) << '\n'
     << "heatmap_scale = " << c.heatmap_scale << '\n'
     << "out_dir = " << quoted(c.out_dir) << '\n';
  return os.str();
}

void save_config(const PipelineConfig & config, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write config snapshot: " + path.string());
  }
  out << to_config_text(config);
}

void validate(const PipelineConfig & c)
{
  if (c.tokenizer.k != 0) {
    validate(c.tokenizer, c.tokenizer.k);
  } else if (c.tokenizer.n_min > c.tokenizer.n_max || c.tokenizer.n_min < 1) {
    throw UsageError("require 1 <= n_min <= n_max");
  }
  if (!(c.subsample > 0.0 && c.subsample <= 1.0)) {
    throw UsageError("subsample must lie in (0, 1]");
  }
  if (c.seeds.empty()) {
    throw UsageError("at least one seed is required");
  }
  if (!(c.heatmap_gamma > 0.0)) {
    throw UsageError("heatmap_gamma must be positive");
  }
  if (c.agent.epsilon_start < 0.0 || c.agent.epsilon_start > 1.0 || c.agent.epsilon_end < 0.0 ||
      c.agent.epsilon_end > 1.0) {
    throw UsageError("exploration rates must lie in [0, 1]");
  }
}

MazeSpec make_maze_spec(const PipelineConfig & config)
{
  MazeSpec spec = load_maze(config.maze);
  spec.cell_size = config.cell_size;
  spec.max_action = config.max_action;
  spec.goal_radius = config.goal_radius;
  spec.horizon = config.horizon;
  spec.lift_dim = config.lift_dim;
  spec.lift_seed = config.lift_seed;
  return spec;
}

}  // namespace skillbpe
