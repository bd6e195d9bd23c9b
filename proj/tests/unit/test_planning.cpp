#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fieldnav/planning/astar.hpp"
#include "fieldnav/planning/costmap.hpp"
#include "helpers.hpp"

namespace fieldnav {
namespace {

// Inflation law written out independently: 255 on sources, 254 up to the robot radius, then an
// exponential decay that is cut to 0 one decay radius past the robot radius.
int expected_cost(double d, double robot, double decay) {
  if (d == 0.0) {
    return 255;
  }
  if (d <= robot) {
    return 254;
  }
  if (d - robot >= decay) {
    return 0;
  }
  return static_cast<int>(std::lround(253.0 * std::exp(-(3.0 / decay) * (d - robot))));
}

TEST(Inflation, EmptyGridIsFree) {
  const OccupancyGrid g({12, 9, 0.25, {0, 0}});
  InflationConfig cfg;
  cfg.unknown_is_lethal = false;
  const Costmap cm = inflate(g, cfg);
  for (const auto c : cm.costs()) {
    EXPECT_EQ(c, 0);
  }
}

TEST(Inflation, CutoffAtDecayRadius) {
  EXPECT_EQ(inflation_cost(0.3 + 1.0, 0.3, 1.0), 0);
  EXPECT_EQ(inflation_cost(0.3, 0.3, 1.0), kInscribedCost);
  EXPECT_EQ(inflation_cost(0.0, 0.3, 1.0), kLethalCost);
  EXPECT_EQ(inflation_cost(0.31, 0.3, 1.0), 246);
}

TEST(Inflation, SingleSourceInscribedRing) {
  const GridGeometry g{9, 9, 0.25, {0, 0}};
  std::vector<std::uint8_t> lethal(81, 0);
  lethal[g.index({4, 4})] = 1;
  const Costmap cm = inflate_mask(g, lethal, 2 * 0.25, 1.0);
  EXPECT_EQ(cm.cost({4, 4}), 255);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx != 0 || dy != 0) {
        EXPECT_EQ(cm.cost({4 + dx, 4 + dy}), 254);
      }
    }
  }
  EXPECT_EQ(cm.cost({6, 4}), 254);  // exactly two cells away
  EXPECT_LT(cm.cost({6, 5}), 254);  // sqrt(5) cells away
}

TEST(Inflation, MatchesBruteForceDistanceOracle) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 2 + static_cast<int>(u(rng) * 62);
    const int h = 2 + static_cast<int>(u(rng) * 62);
    const double res = trial % 2 == 0 ? 0.25 : 0.1;
    const double robot = 0.1 + u(rng) * 0.5;
    const double decay = 0.2 + u(rng) * 1.5;
    const GridGeometry g{w, h, res, {0, 0}};
    std::vector<std::uint8_t> lethal(g.size(), 0);
    std::vector<Cell> sources;
    for (std::size_t i = 0; i < lethal.size(); ++i) {
      if (u(rng) < 0.04) {
        lethal[i] = 1;
        sources.push_back(g.cell_at(i));
      }
    }
    const Costmap cm = inflate_mask(g, lethal, robot, decay);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Cell c = g.cell_at(i);
      double best2 = std::numeric_limits<double>::infinity();
      for (const Cell& s : sources) {
        best2 = std::min(best2, static_cast<double>((s.x - c.x) * (s.x - c.x) + (s.y - c.y) * (s.y - c.y)));
      }
      const int want = std::isfinite(best2) ? expected_cost(std::sqrt(best2) * res, robot, decay) : 0;
      ASSERT_EQ(cm.cost(i), want) << "trial " << trial << " cell " << c.x << "," << c.y;
    }
  }
}

TEST(Inflation, CostNonincreasingWithDistance) {
  const GridGeometry g{64, 64, 0.25, {0, 0}};
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::uint8_t> lethal(g.size(), 0);
  for (auto& l : lethal) {
    l = u(rng) < 0.02 ? 1 : 0;
  }
  const Costmap cm = inflate_mask(g, lethal, 0.3, 1.0);
  std::vector<std::pair<double, int>> by_distance;
  const auto d2 = [&](const Cell& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lethal.size(); ++i) {
      if (lethal[i] != 0) {
        const Cell s = g.cell_at(i);
        best = std::min(best, static_cast<double>((s.x - c.x) * (s.x - c.x) + (s.y - c.y) * (s.y - c.y)));
      }
    }
    return best;
  };
  for (std::size_t i = 0; i < g.size(); i += 7) {
    by_distance.emplace_back(d2(g.cell_at(i)), cm.cost(i));
  }
  std::sort(by_distance.begin(), by_distance.end());
  for (std::size_t i = 1; i < by_distance.size(); ++i) {
    EXPECT_LE(by_distance[i].second, by_distance[i - 1].second);
  }
}

TEST(Inflation, UnknownLethalityFollowsFlag) {
  OccupancyGrid g({10, 10, 0.25, {0, 0}});
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 5; ++x) {
      g.set_logodds({x, y}, -3.0);
    }
  }
  InflationConfig nav;
  EXPECT_EQ(inflate(g, nav).cost({8, 5}), kLethalCost);
  InflationConfig explore;
  explore.unknown_is_lethal = false;
  EXPECT_EQ(inflate(g, explore).cost({8, 5}), 0);
}

TEST(Inflation, NearestTraversable) {
  const GridGeometry g{10, 10, 0.25, {0, 0}};
  std::vector<std::uint8_t> cost(g.size(), 0);
  cost[g.index({5, 5})] = 255;
  cost[g.index({4, 5})] = 254;
  const Costmap cm(g, cost);
  EXPECT_EQ(nearest_traversable(cm, {3, 3}, 0.5), Cell({3, 3}));
  const auto n = nearest_traversable(cm, {5, 5}, 0.5);
  ASSERT_TRUE(n.has_value());
  EXPECT_EQ(std::abs(n->x - 5) + std::abs(n->y - 5), 1);
  EXPECT_EQ(*n, Cell({5, 4}));  // lowest index among the distance-1 ties
  std::vector<std::uint8_t> blocked(g.size(), 255);
  EXPECT_FALSE(nearest_traversable(Costmap(g, blocked), {5, 5}, 0.5).has_value());
}

// --- exact path-cost oracle -------------------------------------------------------------------

struct ExactCost {
  std::int64_t a{0};  // rational part, in 1/128 units
  std::int64_t b{0};  // coefficient of sqrt(2), in 1/128 units
};

// Sign of (a + b sqrt 2).
__extension__ using Wide = __int128;  // exact squares of 64-bit cost parts

int sign(std::int64_t a, std::int64_t b) {
  if (b == 0) {
    return (a > 0) - (a < 0);
  }
  if (a == 0) {
    return (b > 0) - (b < 0);
  }
  if ((a > 0) == (b > 0)) {
    return a > 0 ? 1 : -1;
  }
  const Wide aa = static_cast<Wide>(a) * a;
  const Wide bb = 2 * static_cast<Wide>(b) * b;
  if (aa == bb) {
    return 0;
  }
  return (aa > bb) == (a > 0) ? 1 : -1;
}

bool less(const ExactCost& x, const ExactCost& y) { return sign(x.a - y.a, x.b - y.b) < 0; }

// Plain Dijkstra with a set-based frontier, from scratch.
std::vector<std::optional<ExactCost>> dijkstra(const Costmap& cm, const Cell& start) {
  const GridGeometry& g = cm.geometry();
  std::vector<std::optional<ExactCost>> dist(g.size());
  const auto cmp = [](const std::pair<ExactCost, std::size_t>& l, const std::pair<ExactCost, std::size_t>& r) {
    if (less(l.first, r.first)) {
      return true;
    }
    if (less(r.first, l.first)) {
      return false;
    }
    return l.second < r.second;
  };
  std::set<std::pair<ExactCost, std::size_t>, decltype(cmp)> frontier(cmp);
  dist[g.index(start)] = ExactCost{};
  frontier.insert({ExactCost{}, g.index(start)});
  while (!frontier.empty()) {
    const auto [d, i] = *frontier.begin();
    frontier.erase(frontier.begin());
    const Cell c = g.cell_at(i);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell n{c.x + dx, c.y + dy};
        if ((dx == 0 && dy == 0) || !g.contains(n) || cm.cost(n) >= 254) {
          continue;
        }
        const std::int64_t w = 128 + cm.cost(n);
        const ExactCost nd = (dx != 0 && dy != 0) ? ExactCost{d.a, d.b + w} : ExactCost{d.a + w, d.b};
        auto& slot = dist[g.index(n)];
        if (!slot || less(nd, *slot)) {
          if (slot) {
            frontier.erase({*slot, g.index(n)});
          }
          slot = nd;
          frontier.insert({nd, g.index(n)});
        }
      }
    }
  }
  return dist;
}

Costmap random_costmap(int size, double lethal_fraction, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridGeometry g{size, size, 0.25, {0, 0}};
  std::vector<std::uint8_t> lethal(g.size());
  for (auto& l : lethal) {
    l = u(rng) < lethal_fraction ? 1 : 0;
  }
  return inflate_mask(g, lethal, 0.1 + u(rng) * 0.2, 0.25 + u(rng) * 1.5);
}

void expect_valid_path(const Costmap& cm, const Path& p, const Cell& start, const Cell& goal) {
  ASSERT_FALSE(p.empty());
  EXPECT_EQ(p.cells.front(), start);
  EXPECT_EQ(p.cells.back(), goal);
  ASSERT_EQ(p.points.size(), p.cells.size());
  PathCost sum{};
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    EXPECT_LT(cm.cost(p.cells[i]), 254);
    EXPECT_EQ(p.points[i], cm.geometry().center(p.cells[i]));
    if (i > 0) {
      const int dx = std::abs(p.cells[i].x - p.cells[i - 1].x);
      const int dy = std::abs(p.cells[i].y - p.cells[i - 1].y);
      EXPECT_EQ(std::max(dx, dy), 1);
      sum = sum + step_cost(dx == 1 && dy == 1, cm.cost(p.cells[i]));
    }
  }
  EXPECT_EQ(sum, p.cost);
}

TEST(AStar, StartEqualsGoal) {
  const Costmap cm({10, 10, 1.0, {0, 0}}, std::vector<std::uint8_t>(100, 0));
  const PlanResult r = plan_astar(cm, {3, 3}, {3, 3});
  ASSERT_EQ(r.status, PlanStatus::kOk);
  EXPECT_EQ(r.path.cells.size(), 1u);
  EXPECT_EQ(r.path.total_cost(), 0.0);
}

TEST(AStar, PureDiagonal) {
  const Costmap cm({10, 10, 1.0, {0, 0}}, std::vector<std::uint8_t>(100, 0));
  const PlanResult r = plan_astar(cm, {0, 0}, {9, 9});
  ASSERT_EQ(r.status, PlanStatus::kOk);
  EXPECT_EQ(r.path.cost, (PathCost{0, 9 * 128}));
  EXPECT_NEAR(r.path.total_cost(), 9 * std::sqrt(2.0), 1e-12);
}

TEST(AStar, EndpointErrors) {
  std::vector<std::uint8_t> cost(100, 0);
  cost[55] = 254;
  for (int y = 0; y < 10; ++y) {
    cost[static_cast<std::size_t>(y * 10 + 2)] = 255;
  }
  const Costmap cm({10, 10, 1.0, {0, 0}}, cost);
  EXPECT_EQ(plan_astar(cm, {0, 0}, {5, 5}).status, PlanStatus::kInvalidEndpoint);
  EXPECT_EQ(plan_astar(cm, {0, 0}, {9, 9}).status, PlanStatus::kNoPath);
}

TEST(AStar, CostComparisonIsExact) {
  // 99 straight steps vs 70 diagonal steps: 99 < 70 sqrt 2 = 98.99... is false.
  EXPECT_LT((PathCost{0, 70 * 128}), (PathCost{99 * 128, 0}));
  EXPECT_EQ((PathCost{128, 128} + PathCost{0, 0}), (PathCost{128, 128}));
  EXPECT_EQ(octile_distance({0, 0}, {5, 2}), (PathCost{3 * 128, 2 * 128}));
}

TEST(AStar, MatchesDijkstraOracleOnRandomCostmaps) {
  Rng rng(42);
  std::uniform_int_distribution<int> coord(0, 49);
  int solvable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Costmap cm = random_costmap(50, 0.2, rng);
    Cell start{coord(rng), coord(rng)};
    Cell goal{coord(rng), coord(rng)};
    if (!cm.traversable(start) || !cm.traversable(goal)) {
      continue;
    }
    const auto oracle = dijkstra(cm, start);
    const PlanResult r = plan_astar(cm, start, goal);
    const auto& want = oracle[cm.geometry().index(goal)];
    if (!want) {
      EXPECT_EQ(r.status, PlanStatus::kNoPath);
      continue;
    }
    ++solvable;
    ASSERT_EQ(r.status, PlanStatus::kOk);
    EXPECT_EQ(r.path.cost.straight, want->a);
    EXPECT_EQ(r.path.cost.diagonal, want->b);
    expect_valid_path(cm, r.path, start, goal);
  }
  EXPECT_GT(solvable, 10);
}

TEST(AStar, CostToReachMatchesOracle) {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const Costmap cm = random_costmap(30, 0.15, rng);
    const Cell start{15, 15};
    if (!cm.traversable(start)) {
      continue;
    }
    const auto oracle = dijkstra(cm, start);
    const auto got = cost_to_reach(cm, start);
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].has_value(), oracle[i].has_value());
      if (got[i]) {
        EXPECT_EQ(got[i]->straight, oracle[i]->a);
        EXPECT_EQ(got[i]->diagonal, oracle[i]->b);
      }
    }
  }
}

TEST(AStar, DeterministicTieBreaking) {
  const Costmap cm({20, 20, 1.0, {0, 0}}, std::vector<std::uint8_t>(400, 0));
  const PlanResult a = plan_astar(cm, {0, 0}, {15, 7});
  const PlanResult b = plan_astar(cm, {0, 0}, {15, 7});
  EXPECT_EQ(a.path.cells, b.path.cells);
}

TEST(AStar, PathCsv) {
  const Costmap cm({3, 1, 1.0, {0, 0}}, std::vector<std::uint8_t>(3, 0));
  EXPECT_EQ(path_csv(plan_astar(cm, {0, 0}, {2, 0}).path), "x,y\n0.5,0.5\n1.5,0.5\n2.5,0.5\n");
}

}  // namespace
}  // namespace fieldnav
