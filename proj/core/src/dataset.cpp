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

#include "skillbpe/dataset.hpp"

#include "skillbpe/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace skillbpe
{

bool operator==(const Trajectory & a, const Trajectory & b)
{
  return a.observations.rows() == b.observations.rows() &&
         a.observations.cols() == b.observations.cols() &&
         a.actions.rows() == b.actions.rows() && a.actions.cols() == b.actions.cols() &&
         a.observations == b.observations && a.actions == b.actions;
}

namespace
{

std::string where(std::size_t index) { return "trajectory " + std::to_string(index); }

void validate_trajectory(const Trajectory & t, std::size_t index, Eigen::Index d_obs, Eigen::Index d_act)
{
  if (t.actions.rows() < 1) {
    throw DataError(where(index) + ": trajectory has no steps");
  }
  if (t.observations.rows() != t.actions.rows()) {
    throw DataError(
      where(index) + ": " + std::to_string(t.observations.rows()) + " observations but " +
      std::to_string(t.actions.rows()) + " actions");
  }
  if (t.observations.cols() != d_obs) {
    throw DataError(
      where(index) + ": dimension mismatch, observation dimension " +
      std::to_string(t.observations.cols()) + " (expected " + std::to_string(d_obs) + ")");
  }
  if (t.actions.cols() != d_act) {
    throw DataError(
      where(index) + ": dimension mismatch, action dimension " + std::to_string(t.actions.cols()) +
      " (expected " + std::to_string(d_act) + ")");
  }
  if (!t.observations.allFinite() || !t.actions.allFinite()) {
    throw DataError(where(index) + ": non-finite value");
  }
}

}  // namespace

Dataset::Dataset(std::vector<Trajectory> trajectories) : trajectories_(std::move(trajectories))
{
  if (trajectories_.empty()) {
    throw DataError("empty dataset");
  }
  const auto & first = trajectories_.front();
  if (first.observations.cols() < 1 || first.actions.cols() < 1) {
    throw DataError(where(0) + ": observation and action dimensions must be positive");
  }
  d_obs_ = static_cast<int>(first.observations.cols());
  d_act_ = static_cast<int>(first.actions.cols());
  for (std::size_t i = 0; i < trajectories_.size(); ++i) {
    validate_trajectory(trajectories_[i], i, d_obs_, d_act_);
  }
}

std::size_t Dataset::total_steps() const
{
  return std::accumulate(
    trajectories_.begin(), trajectories_.end(), std::size_t{0},
    [](std::size_t acc, const Trajectory & t) { return acc + t.length(); });
}

namespace
{

using nlohmann::json;

RowMatrix parse_rows(const json & rows, const std::string & field, const std::string & ctx)
{
  if (!rows.is_array()) {
    throw DataError(ctx + ": field '" + field + "' must be an array of vectors");
  }
  if (rows.empty()) {
    return RowMatrix(0, 0);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::Index dim = -1;
  RowMatrix out;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto & row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.empty()) {
      throw DataError(ctx + ": '" + field + "' row " + std::to_string(r) + " is not a non-empty array");
    }
    if (dim < 0) {
      dim = static_cast<Eigen::Index>(row.size());
      out.resize(n, dim);
    } else if (static_cast<Eigen::Index>(row.size()) != dim) {
      throw DataError(
        ctx + ": dimension mismatch in '" + field + "' row " + std::to_string(r) + " (" +
        std::to_string(row.size()) + " vs " + std::to_string(dim) + ")");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto & v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw DataError(ctx + ": non-numeric entry in '" + field + "'");
      }
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        throw DataError(ctx + ": non-finite value in '" + field + "'");
      }
      out(r, c) = x;
    }
  }
  return out;
}

json rows_to_json(const RowMatrix & m)
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

}  // namespace

Dataset load_dataset(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open dataset file: " + path.string());
  }
  std::vector<Trajectory> trajectories;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    const std::string ctx = where(trajectories.size()) + " (line " + std::to_string(line_no) + ")";
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error & e) {
      throw DataError(ctx + ": malformed record: " + e.what());
    }
    if (!record.is_object() || !record.contains("observations") || !record.contains("actions")) {
      throw DataError(ctx + ": malformed record: expected object with 'observations' and 'actions'");
    }
    Trajectory t;
    t.observations = parse_rows(record["observations"], "observations", ctx);
    t.actions = parse_rows(record["actions"], "actions", ctx);
    // A trailing post-episode observation is dropped to keep one observation per action.
    if (t.observations.rows() == t.actions.rows() + 1 && t.actions.rows() > 0) {
      t.observations.conservativeResize(t.actions.rows(), Eigen::NoChange);
    }
    if (!trajectories.empty()) {
      const auto & first = trajectories.front();
      if (t.observations.cols() != first.observations.cols() || t.actions.cols() != first.actions.cols()) {
        throw DataError(
          ctx + ": dimension mismatch (d_obs=" + std::to_string(t.observations.cols()) +
          ", d_act=" + std::to_string(t.actions.cols()) + "; expected d_obs=" +
          std::to_string(first.observations.cols()) + ", d_act=" + std::to_string(first.actions.cols()) +
          ")");
      }
    }
    try {
      validate_trajectory(
        t, trajectories.size(), t.observations.cols(), t.actions.cols());
    } catch (const DataError & e) {
      throw DataError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
    trajectories.push_back(std::move(t));
  }
  if (trajectories.empty()) {
    throw DataError("empty dataset: " + path.string());
  }
  return Dataset(std::move(trajectories));
}

void save_dataset(const Dataset & dataset, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write dataset file: " + path.string());
  }
  for (const auto & t : dataset.trajectories()) {
    json record;
    record["observations"] = rows_to_json(t.observations);
    record["actions"] = rows_to_json(t.actions);
    out << record.dump() << '\n';
  }
  if (!out) {
    throw DataError("write failed: " + path.string());
  }
}

Dataset subsample(const Dataset & dataset, double fraction, std::uint64_t seed)
{
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw UsageError("subsample fraction must lie in (0, 1]");
  }
  const std::size_t n = dataset.size();
  const auto keep = std::max<std::size_t>(
    1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own draw so the result does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  std::vector<Trajectory> kept;
  kept.reserve(keep);
  for (auto i : order) {
    kept.push_back(dataset[i]);
  }
  return Dataset(std::move(kept));
}

}  // namespace skillbpe
