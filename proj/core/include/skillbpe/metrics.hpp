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

#ifndef SKILLBPE_METRICS_HPP_
#define SKILLBPE_METRICS_HPP_

#include "skillbpe/agent.hpp"
#include "skillbpe/maze_env.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace skillbpe
{

/// Visit counts per maze grid cell, row-major with row 0 at the top.
struct VisitationHistogram
{
  int rows = 0;
  int cols = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t at(int row, int col) const { return counts[static_cast<std::size_t>(row * cols + col)]; }
};

/// Bins every logged position of every log. Throws UsageError for an empty
/// log list and InvariantError for a position outside the grid.
VisitationHistogram visitation_histogram(std::span<const RolloutLog> logs, const Maze & maze);

/// Fraction of free cells visited at least once.
double coverage(const VisitationHistogram & histogram, const Maze & maze);

/// Writes raw counts to `pgm_path` with a .csv extension and a binary PGM
/// with value 255 * (count / max)^gamma, `scale` pixels per cell.
void export_heatmap(
  const VisitationHistogram & histogram, const std::filesystem::path & pgm_path, double gamma, int scale = 1);

/// Pixel value for one cell; exposed for testing the normalization.
std::uint8_t heatmap_value(std::uint64_t count, std::uint64_t max_count, double gamma);

struct MeanStd
{
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and population standard deviation. Empty input gives zeros.
MeanStd mean_std(std::span<const double> values);

}  // namespace skillbpe

#endif  // SKILLBPE_METRICS_HPP_
