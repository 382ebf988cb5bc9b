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

#include "skillbpe/tokenizer.hpp"

#include "json_io.hpp"
#include "skillbpe/errors.hpp"

#include <fstream>
#include <string>

namespace skillbpe
{

namespace detail
{

using nlohmann::json;

json matrix_to_json(const RowMatrix & m)
{
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RowMatrix matrix_from_json(const json & j, const char * field)
{
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw DataError(std::string("field '") + field + "' must be a non-empty array of vectors");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  RowMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto & row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError(std::string("ragged rows in '") + field + "'");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  if (!m.allFinite()) {
    throw DataError(std::string("non-finite value in '") + field + "'");
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd & v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json & j, const char * field)
{
  if (!j.is_array()) {
    throw DataError(std::string("field '") + field + "' must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json codebook_to_json(const Codebook & codebook)
{
  return json{
    {"k", codebook.k},
    {"seed", codebook.seed},
    {"centroids", matrix_to_json(codebook.centroids)},
    {"inertia", codebook.inertia},
  };
}

Codebook codebook_from_json(const json & j)
{
  try {
    Codebook cb;
    cb.k = j.at("k").get<int>();
    cb.seed = j.at("seed").get<std::uint64_t>();
    cb.centroids = matrix_from_json(j.at("centroids"), "centroids");
    cb.inertia = j.at("inertia").get<double>();
    if (cb.k < 2 || cb.centroids.rows() != cb.k) {
      throw DataError("codebook k does not match its centroid count");
    }
    return cb;
  } catch (const json::exception & e) {
    throw DataError(std::string("malformed codebook: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open file: " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error & e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace detail

namespace
{

using nlohmann::json;

json config_to_json(const TokenizerConfig & c)
{
  return json{
    {"k", c.k},
    {"n_max", c.n_max},
    {"n_min", c.n_min},
    {"epsilon", c.epsilon},
    {"strategy", std::string(to_string(c.strategy))},
    {"min_count", c.min_count},
    {"keep_base_tokens", c.keep_base_tokens},
    {"heading_columns", c.heading_columns},
    {"seed", c.seed},
    {"kmeans_max_iters", c.kmeans_max_iters},
    {"kmeans_tol", c.kmeans_tol},
  };
}

TokenizerConfig config_from_json(const json & j)
{
  TokenizerConfig c;
  c.k = j.value("k", c.k);
  c.n_max = j.value("n_max", c.n_max);
  c.n_min = j.value("n_min", c.n_min);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.strategy = parse_strategy(j.value("strategy", std::string("mahalanobis")));
  c.min_count = j.value("min_count", c.min_count);
  c.keep_base_tokens = j.value("keep_base_tokens", c.keep_base_tokens);
  c.heading_columns = j.value("heading_columns", c.heading_columns);
  c.seed = j.value("seed", c.seed);
  c.kmeans_max_iters = j.value("kmeans_max_iters", c.kmeans_max_iters);
  c.kmeans_tol = j.value("kmeans_tol", c.kmeans_tol);
  return c;
}

json library_to_json(const SkillLibrary & library, bool include_timing)
{
  json skills = json::array();
  for (const auto & s : library.skills) {
    json tokens = json::array();
    for (auto t : s.base_tokens) {
      tokens.push_back(t.value);
    }
    skills.push_back(json{
      {"id", s.id},
      {"subword", s.subword.value},
      {"base_tokens", std::move(tokens)},
      {"actions", detail::matrix_to_json(s.actions)},
      {"length", s.length()},
      {"heading", detail::vector_to_json(s.heading)},
      {"instances", s.instance_count},
    });
  }
  json merges = json::array();
  for (const auto & m : library.merge_log) {
    merges.push_back(json{
      {"left", m.left.value}, {"right", m.right.value}, {"merged", m.merged.value}, {"score", m.score},
      {"count", m.count}});
  }
  json prunes = json::array();
  for (const auto & p : library.prune_log) {
    prunes.push_back(json{{"removed", p.removed.value}, {"score", p.score}});
  }
  json out{
    {"codebook", detail::codebook_to_json(library.codebook)},
    {"skills", std::move(skills)},
    {"config", config_to_json(library.config)},
    {"merge_log", std::move(merges)},
    {"prune_log", std::move(prunes)},
    {"early_stopped", library.early_stopped},
    {"note", library.note},
  };
  if (include_timing) {
    out["generation_seconds"] = library.generation_seconds;
  }
  return out;
}

}  // namespace

std::string skill_library_json(const SkillLibrary & library, bool include_timing)
{
  return library_to_json(library, include_timing).dump(2);
}

void save_skill_library(const SkillLibrary & library, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write skill library: " + path.string());
  }
  out << skill_library_json(library, true) << '\n';
  if (!out) {
    throw DataError("write failed: " + path.string());
  }
}

SkillLibrary load_skill_library(const std::filesystem::path & path)
{
  const json j = detail::read_json_file(path);
  try {
    SkillLibrary lib;
    lib.codebook = detail::codebook_from_json(j.at("codebook"));
    lib.config = config_from_json(j.value("config", json::object()));
    for (const auto & s : j.at("skills")) {
      Skill skill;
      skill.id = s.at("id").get<int>();
      skill.subword = SubwordId{s.value("subword", skill.id)};
      for (const auto & t : s.at("base_tokens")) {
        const int v = t.get<int>();
        if (v < 0 || v >= lib.codebook.k) {
          throw DataError("skill " + std::to_string(skill.id) + " references unknown base token");
        }
        skill.base_tokens.push_back(TokenId{v});
      }
      skill.actions = detail::matrix_from_json(s.at("actions"), "actions");
      if (static_cast<std::size_t>(skill.actions.rows()) != skill.base_tokens.size() ||
          skill.actions.cols() != lib.codebook.dim()) {
        throw DataError("skill " + std::to_string(skill.id) + " actions do not match its base tokens");
      }
      skill.heading = detail::vector_from_json(s.value("heading", json::array()), "heading");
      skill.instance_count = s.value("instances", std::size_t{0});
      lib.skills.push_back(std::move(skill));
    }
    for (const auto & m : j.value("merge_log", json::array())) {
      lib.merge_log.push_back(MergeRecord{
        SubwordId{m.at("left").get<int>()}, SubwordId{m.at("right").get<int>()},
        SubwordId{m.at("merged").get<int>()}, m.at("score").get<double>(), m.at("count").get<std::size_t>()});
    }
    for (const auto & p : j.value("prune_log", json::array())) {
      lib.prune_log.push_back(PruneRecord{SubwordId{p.at("removed").get<int>()}, p.at("score").get<double>()});
    }
    lib.generation_seconds = j.value("generation_seconds", 0.0);
    lib.early_stopped = j.value("early_stopped", false);
    lib.note = j.value("note", std::string());
    if (lib.skills.empty()) {
      throw DataError("skill library has no skills");
    }
    return lib;
  } catch (const nlohmann::json::exception & e) {
    throw DataError("malformed skill library " + path.string() + ": " + e.what());
  }
}

}  // namespace skillbpe
