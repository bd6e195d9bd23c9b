#include <gtest/gtest.h>

#include <set>

#include "fieldnav/exploration/frontiers.hpp"
#include "helpers.hpp"

namespace fieldnav {
namespace {

// Definitional scan: Free cells with at least one Unknown 4-neighbour.
std::set<std::size_t> brute_frontier_cells(const OccupancyGrid& grid) {
  const GridGeometry& g = grid.geometry();
  const auto cls = grid.classify();
  std::set<std::size_t> out;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (cls[g.index({x, y})] != CellClass::kFree) {
        continue;
      }
      const Cell n[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
      for (const Cell& c : n) {
        if (g.contains(c) && cls[g.index(c)] == CellClass::kUnknown) {
          out.insert(g.index({x, y}));
          break;
        }
      }
    }
  }
  return out;
}

TEST(Frontiers, FullyClassifiedMapHasNone) {
  Rng rng(1);
  const OccupancyGrid g = test::random_grid(15, 15, 0.3, 0.0, rng);
  EXPECT_TRUE(find_frontiers(g, 1).empty());
}

TEST(Frontiers, LoneFreeCellAmongUnknown) {
  OccupancyGrid g({3, 3, 1.0, {0, 0}});
  g.set_logodds({1, 1}, -2.0);
  const auto clusters = find_frontiers(g, 1);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].cells, std::vector<Cell>{Cell({1, 1})});
  EXPECT_EQ(clusters[0].size, 1);
  EXPECT_EQ(clusters[0].centroid, (Point2{1.5, 1.5}));
}

TEST(Frontiers, MatchBruteForceOnRandomGrids) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const OccupancyGrid g = test::random_grid(20, 20, 0.15, 0.35, rng);
    std::set<std::size_t> found;
    for (const auto& c : find_frontiers(g, 1)) {
      for (const Cell& cell : c.cells) {
        EXPECT_TRUE(found.insert(g.geometry().index(cell)).second) << "cell in two clusters";
      }
    }
    EXPECT_EQ(found, brute_frontier_cells(g)) << "trial " << trial;
  }
}

TEST(Frontiers, ClustersAreConnectedSortedAndLargeEnough) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const OccupancyGrid g = test::random_grid(30, 30, 0.1, 0.3, rng);
    const auto clusters = find_frontiers(g, 3);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      const auto& c = clusters[k];
      EXPECT_GE(c.size, 3);
      EXPECT_EQ(static_cast<std::size_t>(c.size), c.cells.size());
      EXPECT_TRUE(std::is_sorted(c.cells.begin(), c.cells.end(), [&](const Cell& a, const Cell& b) {
        return g.geometry().index(a) < g.geometry().index(b);
      }));
      // 8-connected: flood from the first cell reaches all members.
      std::set<std::pair<int, int>> members;
      for (const Cell& cell : c.cells) {
        members.insert({cell.x, cell.y});
      }
      std::set<std::pair<int, int>> seen{{c.cells[0].x, c.cells[0].y}};
      std::vector<std::pair<int, int>> stack{{c.cells[0].x, c.cells[0].y}};
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const std::pair<int, int> n{x + dx, y + dy};
            if (members.contains(n) && seen.insert(n).second) {
              stack.push_back(n);
            }
          }
        }
      }
      EXPECT_EQ(seen.size(), members.size());
      if (k > 0) {
        EXPECT_GE(clusters[k - 1].size, c.size);
      }
    }
  }
}

TEST(Frontiers, MinimumClusterSizeDropsSmallOnes) {
  OccupancyGrid g({3, 3, 1.0, {0, 0}});
  g.set_logodds({1, 1}, -2.0);
  EXPECT_TRUE(find_frontiers(g, 2).empty());
}

// Known strip x < 10 of an otherwise unknown 30 x 10 grid.
OccupancyGrid known_strip() {
  OccupancyGrid g({30, 10, 0.25, {0, 0}});
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      g.set_logodds({x, y}, -3.0);
    }
  }
  return g;
}

TEST(SelectGoal, SingleReachableCluster) {
  const OccupancyGrid g = known_strip();
  const auto costmap = inflate(g, {0.1, 0.5, false});
  auto clusters = find_frontiers(g, 3);
  ASSERT_EQ(clusters.size(), 1u);
  const auto sel = select_goal(clusters, {0.5, 1.25, 0.0, 0.0}, costmap, SelectionWeights::for_resolution(0.25),
                               FrontierBlacklist{});
  ASSERT_TRUE(sel.has_value());
  EXPECT_EQ(sel->cell.x, 9);
  EXPECT_GT(sel->path_cost, 0.0);
  // The goal is the cluster cell nearest the centroid and faces it.
  const Point2 c = clusters[0].centroid;
  EXPECT_LE(distance(g.geometry().center(sel->cell), c), 0.5 * 0.25 + 1e-12);
  EXPECT_DOUBLE_EQ(sel->goal.yaw, std::atan2(c.y - sel->goal.y, c.x - sel->goal.x));
}

TEST(SelectGoal, NearerClusterWinsAndUnreachableIsSkipped) {
  // Free corridor along x with unknown pockets at both ends.
  OccupancyGrid g({40, 5, 0.25, {0, 0}});
  for (int y = 0; y < 5; ++y) {
    for (int x = 3; x < 37; ++x) {
      g.set_logodds({x, y}, -3.0);
    }
  }
  const Pose pose{g.geometry().center({10, 2}).x, g.geometry().center({10, 2}).y, 0.0, 0.0};
  const SelectionWeights weights = SelectionWeights::for_resolution(0.25);
  {
    auto clusters = find_frontiers(g, 3);
    ASSERT_EQ(clusters.size(), 2u);
    const auto sel = select_goal(clusters, pose, inflate(g, {0.1, 0.5, false}), weights, FrontierBlacklist{});
    ASSERT_TRUE(sel.has_value());
    EXPECT_EQ(sel->cell.x, 3);  // the west pocket is nearer
  }
  for (int y = 0; y < 5; ++y) {
    g.set_logodds({8, y}, 4.0);  // seal the west pocket off
  }
  auto clusters = find_frontiers(g, 3);
  ASSERT_EQ(clusters.size(), 2u);
  const auto sel = select_goal(clusters, pose, inflate(g, {0.1, 0.5, false}), weights, FrontierBlacklist{});
  ASSERT_TRUE(sel.has_value());
  EXPECT_EQ(sel->cell.x, 36);
}

TEST(SelectGoal, BlacklistedClustersAreSkipped) {
  const OccupancyGrid g = known_strip();
  auto clusters = find_frontiers(g, 3);
  ASSERT_EQ(clusters.size(), 1u);
  FrontierBlacklist blacklist(0.5, 2);
  EXPECT_FALSE(blacklist.record_failure(clusters[0].centroid));
  EXPECT_TRUE(blacklist.record_failure({clusters[0].centroid.x + 0.1, clusters[0].centroid.y}));
  EXPECT_TRUE(blacklist.contains(clusters[0].centroid));
  EXPECT_FALSE(select_goal(clusters, {0.5, 1.25, 0, 0}, inflate(g, {0.1, 0.5, false}),
                           SelectionWeights::for_resolution(0.25), blacklist)
                   .has_value());
  EXPECT_TRUE(without_blacklisted(clusters, blacklist).empty());
  EXPECT_TRUE(exploration_done(g, 3, blacklist));
}

TEST(ExplorationDone, Definitions) {
  const OccupancyGrid unknown({10, 10, 0.25, {0, 0}});
  EXPECT_TRUE(exploration_done(unknown, 3, FrontierBlacklist{}));
  const OccupancyGrid partial = known_strip();
  EXPECT_FALSE(exploration_done(partial, 3, FrontierBlacklist{}));
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const OccupancyGrid g = test::random_grid(15, 15, 0.2, trial % 2 == 0 ? 0.0 : 0.2, rng);
    EXPECT_EQ(exploration_done(g, 3, FrontierBlacklist{}), find_frontiers(g, 3).empty());
  }
}

TEST(Frontiers, CsvRows) {
  OccupancyGrid g({3, 3, 1.0, {0, 0}});
  g.set_logodds({1, 1}, -2.0);
  EXPECT_EQ(frontiers_csv(find_frontiers(g, 1)), "cluster_id,cell_x,cell_y\n0,1,1\n");
}

}  // namespace
}  // namespace fieldnav
