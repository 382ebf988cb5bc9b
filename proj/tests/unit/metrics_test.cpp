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

#include "skillbpe/errors.hpp"
#include "skillbpe/metrics.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

namespace fs = std::filesystem;
using namespace skillbpe;

namespace
{

Maze u_maze()
{
  auto spec = builtin_maze("U");
  spec.max_action = 0.25;
  return Maze(spec);
}

RolloutLog log_of(std::vector<std::vector<Eigen::Vector2d>> episodes)
{
  RolloutLog log;
  for (auto & e : episodes) {
    log.steps += e.size();
    log.rewards.emplace_back(e.size(), 0.0);
    log.returns.push_back(0.0);
    log.positions.push_back(std::move(e));
  }
  return log;
}

}  // namespace

TEST(Histogram, StandingStillPutsAllMassInOneCell)
{
  const auto m = u_maze();
  const auto p = m.cell_center(m.spec().start);
  const std::vector<RolloutLog> logs{log_of({std::vector<Eigen::Vector2d>(7, p)})};
  const auto h = visitation_histogram(logs, m);
  EXPECT_EQ(h.total, 7u);
  EXPECT_EQ(h.at(m.spec().start.row, m.spec().start.col), 7u);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}), 7u);
  EXPECT_DOUBLE_EQ(coverage(h, m), 1.0 / static_cast<double>(m.free_cell_count()));
}

TEST(Histogram, AggregationIsAdditive)
{
  const auto m = u_maze();
  const auto a = log_of({{m.cell_center({3, 1}), m.cell_center({3, 2})}});
  const auto b = log_of({{m.cell_center({3, 2})}, {m.cell_center({1, 1}), m.cell_center({3, 3})}});
  const std::vector<RolloutLog> both{a, b};
  const auto ha = visitation_histogram({&a, 1}, m);
  const auto hb = visitation_histogram({&b, 1}, m);
  const auto hab = visitation_histogram(both, m);
  for (std::size_t i = 0; i < hab.counts.size(); ++i) {
    EXPECT_EQ(hab.counts[i], ha.counts[i] + hb.counts[i]);
  }
  EXPECT_EQ(hab.total, 5u);
  EXPECT_GE(coverage(hab, m), std::max(coverage(ha, m), coverage(hb, m)));
}

TEST(Histogram, Errors)
{
  const auto m = u_maze();
  EXPECT_THROW(visitation_histogram(std::vector<RolloutLog>{}, m), UsageError);
  const std::vector<RolloutLog> outside{log_of({{Eigen::Vector2d(-3.0, 1.0)}})};
  EXPECT_THROW(visitation_histogram(outside, m), InvariantError);
}

TEST(Coverage, AllFreeCellsAndWallIndependence)
{
  const auto m = u_maze();
  std::vector<Eigen::Vector2d> ps;
  for (const auto c : m.free_cells()) {
    ps.push_back(m.cell_center(c));
  }
  const std::vector<RolloutLog> logs{log_of({ps})};
  EXPECT_DOUBLE_EQ(coverage(visitation_histogram(logs, m), m), 1.0);

  // Same free region framed by an extra ring of walls.
  auto big = parse_maze("#######\n#######\n##G..##\n####.##\n##S..##\n#######\n#######\n");
  big.max_action = 0.25;
  const Maze mb(big);
  const auto shifted = log_of({{mb.cell_center(mb.spec().start), mb.cell_center({2, 4})}});
  const auto small = log_of({{m.cell_center(m.spec().start), m.cell_center({1, 3})}});
  EXPECT_DOUBLE_EQ(coverage(visitation_histogram({&shifted, 1}, mb), mb),
                   coverage(visitation_histogram({&small, 1}, m), m));
}

TEST(Heatmap, PowerLawNormalization)
{
  EXPECT_EQ(heatmap_value(10, 10, 1.0), 255);
  EXPECT_EQ(heatmap_value(0, 10, 0.5), 0);
  EXPECT_EQ(heatmap_value(0, 0, 0.5), 0);
  for (std::uint64_t c = 0; c <= 100; ++c) {
    EXPECT_GE(heatmap_value(c, 100, 0.5), heatmap_value(c, 100, 1.0));
  }
  EXPECT_EQ(heatmap_value(25, 100, 0.5), 128);
}

TEST(Heatmap, WritesPgmAndCsv)
{
  const auto m = u_maze();
  const auto log = log_of({{m.cell_center({3, 1}), m.cell_center({3, 1}), m.cell_center({3, 2})}});
  const auto h = visitation_histogram({&log, 1}, m);
  const auto dir = fs::temp_directory_path() / "skillbpe_heatmap_test";
  fs::create_directories(dir);
  export_heatmap(h, dir / "heatmap_seed0.pgm", 1.0, 2);

  std::ifstream pgm(dir / "heatmap_seed0.pgm", std::ios::binary);
  std::string magic;
  int w = 0;
  int hgt = 0;
  int maxv = 0;
  pgm >> magic >> w >> hgt >> maxv;
  pgm.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 10);
  EXPECT_EQ(hgt, 10);
  EXPECT_EQ(maxv, 255);
  const std::string pixels((std::istreambuf_iterator<char>(pgm)), std::istreambuf_iterator<char>());
  ASSERT_EQ(pixels.size(), 100u);
  // Cell (3, 1) is pixel block rows 6-7, columns 2-3.
  EXPECT_EQ(static_cast<unsigned char>(pixels[6 * 10 + 2]), 255);
  EXPECT_EQ(static_cast<unsigned char>(pixels[7 * 10 + 5]), 128);
  EXPECT_EQ(static_cast<unsigned char>(pixels[0]), 0);

  std::ifstream csv(dir / "heatmap_seed0.csv");
  std::string line;
  int rows = 0;
  std::string row3;
  while (std::getline(csv, line)) {
    if (rows == 3) {
      row3 = line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(row3, "0,2,1,0,0");
  EXPECT_THROW(export_heatmap(h, dir / "x.pgm", 0.0), UsageError);
}

TEST(MeanStd, PopulationStatistics)
{
  const std::vector<double> v{8.0, 12.0};
  const auto s = mean_std(v);
  EXPECT_DOUBLE_EQ(s.mean, 10.0);
  EXPECT_DOUBLE_EQ(s.stddev, 2.0);
  EXPECT_DOUBLE_EQ(mean_std(std::vector<double>{}).mean, 0.0);
}
