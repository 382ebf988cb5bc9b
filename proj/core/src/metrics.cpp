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

#include "skillbpe/metrics.hpp"

#include "skillbpe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace skillbpe
{

VisitationHistogram visitation_histogram(std::span<const RolloutLog> logs, const Maze & maze)
{
  if (logs.empty()) {
    throw UsageError("visitation histogram needs at least one rollout log");
  }
  VisitationHistogram h;
  h.rows = maze.spec().rows();
  h.cols = maze.spec().cols();
  h.counts.assign(static_cast<std::size_t>(h.rows * h.cols), 0);
  for (const auto & log : logs) {
    for (const auto & episode : log.positions) {
      for (const auto & p : episode) {
        const Cell c = maze.cell_of(p);
        if (!maze.in_bounds(c)) {
          throw_invariant("logged position lies outside the maze grid");
        }
        ++h.counts[static_cast<std::size_t>(c.row * h.cols + c.col)];
        ++h.total;
      }
    }
  }
  return h;
}

double coverage(const VisitationHistogram & histogram, const Maze & maze)
{
  if (histogram.rows != maze.spec().rows() || histogram.cols != maze.spec().cols()) {
    throw UsageError("histogram grid does not match the maze");
  }
  std::size_t visited = 0;
  for (const auto & c : maze.free_cells()) {
    if (histogram.at(c.row, c.col) > 0) {
      ++visited;
    }
  }
  return static_cast<double>(visited) / static_cast<double>(maze.free_cell_count());
}

std::uint8_t heatmap_value(std::uint64_t count, std::uint64_t max_count, double gamma)
{
  if (count == 0 || max_count == 0) {
    return 0;
  }
  const double v = std::pow(static_cast<double>(count) / static_cast<double>(max_count), gamma);
  return static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * v), 0L, 255L));
}

void export_heatmap(
  const VisitationHistogram & histogram, const std::filesystem::path & pgm_path, double gamma, int scale)
{
  if (!(gamma > 0.0)) {
    throw UsageError("heatmap gamma must be positive");
  }
  if (scale < 1) {
    throw UsageError("heatmap scale must be positive");
  }
  auto csv_path = pgm_path;
  csv_path.replace_extension(".csv");
  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv) {
    throw DataError("cannot write heatmap counts: " + csv_path.string());
  }
  for (int r = 0; r < histogram.rows; ++r) {
    for (int c = 0; c < histogram.cols; ++c) {
      csv << (c ? "," : "") << histogram.at(r, c);
    }
    csv << '\n';
  }

  const auto max_count = histogram.counts.empty()
                           ? std::uint64_t{0}
                           : *std::max_element(histogram.counts.begin(), histogram.counts.end());
  std::ofstream pgm(pgm_path, std::ios::binary | std::ios::trunc);
  if (!pgm) {
    throw DataError("cannot write heatmap image: " + pgm_path.string());
  }
  const int width = histogram.cols * scale;
  const int height = histogram.rows * scale;
  pgm << "P5\n" << width << ' ' << height << "\n255\n";
  std::vector<char> line(static_cast<std::size_t>(width));
  for (int r = 0; r < histogram.rows; ++r) {
    for (int c = 0; c < histogram.cols; ++c) {
      const auto v = static_cast<char>(heatmap_value(histogram.at(r, c), max_count, gamma));
      std::fill_n(line.begin() + static_cast<std::ptrdiff_t>(c * scale), scale, v);
    }
    for (int s = 0; s < scale; ++s) {
      pgm.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
  }
  if (!pgm) {
    throw DataError("write failed: " + pgm_path.string());
  }
}

MeanStd mean_std(std::span<const double> values)
{
  if (values.empty()) {
    return {};
  }
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= n;
  double var = 0.0;
  for (double v : values) {
    var += (v - mean) * (v - mean);
  }
  return MeanStd{mean, std::sqrt(var / n)};
}

}  // namespace skillbpe
