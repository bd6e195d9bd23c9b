#include <gtest/gtest.h>

#include <cmath>

#include "fieldnav/planning/dwa.hpp"
#include "fieldnav/simworld/kinematics.hpp"
#include "fieldnav/simworld/lidar.hpp"
#include "helpers.hpp"

namespace fieldnav {
namespace {

Path straight_path(const Point2& from, const Point2& to) {
  Path p;
  const int n = 20;
  for (int i = 0; i <= n; ++i) {
    p.points.push_back({from.x + (to.x - from.x) * i / n, from.y + (to.y - from.y) * i / n});
  }
  return p;
}

TEST(Dwa, OpenSpaceAcceleratesStraightAtTheCarrot) {
  const DwaConfig cfg;
  const auto cmd = dwa_command({}, Twist{}, straight_path({0, 0}, {5, 0}), {}, cfg);
  ASSERT_TRUE(cmd.has_value());
  EXPECT_NEAR(cmd->vx, cfg.accel_v * cfg.control_period, 1e-12);
  EXPECT_EQ(cmd->omega, 0.0);
  EXPECT_EQ(cmd->vy, 0.0);
}

// Brute force over the same sampled grid: the best admissible score must be what was chosen.
TEST(Dwa, ChoiceIsTheBestAdmissibleCandidate) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const DwaConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> obstacles;
    for (int i = 0; i < 30; ++i) {
      obstacles.push_back({3.0 * u(rng), 3.0 * u(rng)});
    }
    const Twist vel{0.4 * (u(rng) + 1.0), 0.0, u(rng), 0.0};
    const DwaWindow w = evaluate_window({}, vel, {4.0 * u(rng), 4.0 * u(rng)}, obstacles, cfg);
    double best = -1.0;
    for (const auto& c : w.candidates) {
      if (c.admissible) {
        best = std::max(best, c.score);
      }
    }
    if (w.chosen) {
      EXPECT_NEAR(w.candidates[*w.chosen].score, best, 1e-8);
    } else {
      EXPECT_LT(best, 0.0);
    }
  }
}

TEST(Dwa, WallAheadBoundsAdmissibleSpeed) {
  DwaConfig cfg;
  cfg.accel_v = 1.0;
  cfg.v_max = 2.0;
  std::vector<Point2> wall;
  for (double y = -2.0; y <= 2.0; y += 0.02) {
    wall.push_back({0.5 + cfg.robot_radius + cfg.clearance_margin, y});
  }
  // Free distance straight ahead is 0.5 m, so no admissible pair may exceed sqrt(2 * 1 * 0.5) = 1 m/s.
  const DwaWindow w = evaluate_window({}, {1.0, 0.0, 0.0, 0.0}, {5, 0}, wall, cfg);
  for (const auto& c : w.candidates) {
    if (c.admissible) {
      EXPECT_LE(c.v, std::sqrt(2.0 * cfg.accel_v * c.free_distance) + 1e-12);
      EXPECT_LE(c.v, 1.0 + 1e-12);
    }
  }
}

TEST(Dwa, HopelessWindowStops) {
  // Moving fast with an obstacle just beyond the margin: zero speed is outside the window and every
  // reachable speed would close in.
  const DwaConfig cfg;
  const std::vector<Point2> obstacles{{cfg.robot_radius + cfg.clearance_margin + 0.02, 0.0}};
  const auto cmd = dwa_command({}, {0.8, 0.0, 0.0, 0.0}, straight_path({0, 0}, {5, 0}), obstacles, cfg);
  EXPECT_FALSE(cmd.has_value());
}

TEST(Dwa, TurningOnTheSpotIsAlwaysAdmissible) {
  const DwaConfig cfg;
  const std::vector<Point2> boxed{{0.2, 0}, {-0.2, 0}, {0, 0.2}, {0, -0.2}};
  const DwaWindow w = evaluate_window({}, Twist{}, {5, 0}, boxed, cfg);
  ASSERT_TRUE(w.chosen.has_value());
  EXPECT_EQ(w.candidates[*w.chosen].v, 0.0);
}

TEST(Dwa, ScalingWeightsKeepsTheChoice) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    DwaConfig cfg;
    cfg.w_heading = 0.1 + (u(rng) + 1.0);
    cfg.w_clearance = 0.1 + (u(rng) + 1.0);
    cfg.w_velocity = 0.1 + (u(rng) + 1.0);
    std::vector<Point2> obstacles;
    for (int i = 0; i < 20; ++i) {
      obstacles.push_back({3.0 * u(rng), 3.0 * u(rng)});
    }
    const Pose pose{0, 0, u(rng) * kPi, 0};
    const Twist vel{0.4 * (u(rng) + 1.0), 0.0, u(rng), 0.0};
    const Path path = straight_path({0, 0}, {4.0 * u(rng), 4.0 * u(rng)});
    const auto base = dwa_command(pose, vel, path, obstacles, cfg);
    for (const double k : {0.5, 3.0, 1000.0}) {
      DwaConfig scaled = cfg;
      scaled.w_heading *= k;
      scaled.w_clearance *= k;
      scaled.w_velocity *= k;
      const auto cmd = dwa_command(pose, vel, path, obstacles, scaled);
      ASSERT_EQ(cmd.has_value(), base.has_value());
      if (cmd) {
        EXPECT_EQ(cmd->vx, base->vx);
        EXPECT_EQ(cmd->omega, base->omega);
      }
    }
  }
}

TEST(Dwa, CommandsStayInsideLimitsAndWindow) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const DwaConfig cfg;
  for (int trial = 0; trial < 300; ++trial) {
    const Twist vel{0.4 * (u(rng) + 1.0), 0.0, 1.5 * u(rng), 0.0};
    const auto cmd = dwa_command({}, vel, straight_path({0, 0}, {4.0 * u(rng), 4.0 * u(rng)}), {}, cfg);
    ASSERT_TRUE(cmd.has_value());
    EXPECT_LE(cmd->vx, cfg.v_max + 1e-12);
    EXPECT_GE(cmd->vx, 0.0);
    EXPECT_LE(std::abs(cmd->omega), cfg.omega_max + 1e-12);
    EXPECT_LE(std::abs(cmd->vx - vel.vx), cfg.accel_v * cfg.control_period + 1e-12);
    EXPECT_LE(std::abs(cmd->omega - vel.omega), cfg.accel_omega * cfg.control_period + 1e-12);
  }
}

// Drives (v, omega) for `first` seconds, then decelerates at accel_v along the same curvature to a
// stop, checking the ground-truth disc every centimetre.
bool brake_is_safe(const World& world, const Pose& start, double v, double omega, double first, const DwaConfig& cfg) {
  Pose p = start;
  const double curvature = v > 0.0 ? omega / v : 0.0;
  const double h = v > 0.0 ? std::min(0.01 / v, 0.01) : 0.01;
  for (double t = 0.0; t < first - 1e-12; t += h) {
    p = step_kinematics(p, {v, 0.0, omega, 0.0}, std::min(h, first - t));
    if (collision_check(world, p, cfg.robot_radius)) {
      return false;
    }
  }
  double speed = v;
  while (speed > 0.0) {
    const double dt = std::min(h, speed / cfg.accel_v);
    const double mean = speed - 0.5 * cfg.accel_v * dt;
    p = step_kinematics(p, {mean, 0.0, mean * curvature, 0.0}, dt);
    speed -= cfg.accel_v * dt;
    if (collision_check(world, p, cfg.robot_radius)) {
      return false;
    }
    if (dt < h) {
      break;
    }
  }
  return true;
}

TEST(Dwa, RandomScenariosNeverCollideAfterCommandThenBrake) {
  Rng rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DwaConfig cfg;
  LidarConfig lidar;
  lidar.range_sigma = 0.0;
  int scenarios = 0;
  int moving = 0;
  while (scenarios < 1000) {
    World world = test::boxed_world(40, 40, 0.25);
    const int blobs = 5 + static_cast<int>(u(rng) * 25);
    for (int b = 0; b < blobs; ++b) {
      const int x = 1 + static_cast<int>(u(rng) * 37);
      const int y = 1 + static_cast<int>(u(rng) * 37);
      world = test::with_obstacle(world, {x, y});
      if (u(rng) < 0.5) {
        world = test::with_obstacle(world, {x + 1, y});
      }
    }
    const Pose pose{1.0 + u(rng) * 8.0, 1.0 + u(rng) * 8.0, (2.0 * u(rng) - 1.0) * kPi, 2.0};
    const Twist vel{u(rng) * cfg.v_max, 0.0, (2.0 * u(rng) - 1.0) * cfg.omega_max, 0.0};
    // Only states from which an immediate stop is already safe are meaningful starting points.
    if (collision_check(world, pose, cfg.robot_radius + 0.02) ||
        !brake_is_safe(world, pose, vel.vx, vel.omega, 0.0, cfg)) {
      continue;
    }
    ++scenarios;
    const LaserScan scan = simulate_scan(world, pose, lidar, rng);
    std::vector<Point2> obstacles;
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
      if (scan.is_return(i)) {
        const double a = pose.yaw + scan.beam_angle(i);
        obstacles.push_back({pose.x + scan.ranges[i] * std::cos(a), pose.y + scan.ranges[i] * std::sin(a)});
      }
    }
    const Path path = straight_path(pose.position(), {1.0 + u(rng) * 8.0, 1.0 + u(rng) * 8.0});
    const DwaWindow w = evaluate_window(pose, vel, carrot_point(path, pose, cfg.lookahead), obstacles, cfg);
    for (const auto& c : w.candidates) {
      if (c.admissible && c.v > 0.0) {
        ASSERT_TRUE(brake_is_safe(world, pose, c.v, c.omega, cfg.control_period, cfg))
            << "scenario " << scenarios << " admissible (" << c.v << ", " << c.omega << ") collides";
      }
    }
    const auto cmd = dwa_command(pose, vel, path, obstacles, cfg);
    if (cmd) {
      moving += cmd->vx > 0.0 ? 1 : 0;
      EXPECT_TRUE(brake_is_safe(world, pose, cmd->vx, cmd->omega, cfg.control_period, cfg));
    } else {
      EXPECT_TRUE(brake_is_safe(world, pose, vel.vx, vel.omega, 0.0, cfg));
    }
  }
  EXPECT_GT(moving, 500);
}

TEST(Dwa, CarrotPoint) {
  const Path p = straight_path({0, 0}, {4, 0});
  const Point2 c = carrot_point(p, {0.1, 0.0, 0.0, 0.0}, 1.0);
  EXPECT_NEAR(c.x, 1.2, 1e-12);
  EXPECT_EQ(carrot_point(p, {3.9, 0, 0, 0}, 1.0), p.points.back());
  EXPECT_THROW(carrot_point(Path{}, {}, 1.0), std::invalid_argument);
}

TEST(Dwa, GoalReached) {
  const Pose g{1, 1, 0.5, 0};
  EXPECT_TRUE(goal_reached(g, g, 0.25, 0.3));
  EXPECT_TRUE(goal_reached({1.25, 1, 0.5, 0}, g, 0.25, 0.3));
  EXPECT_FALSE(goal_reached({1, 1, 0.5 + kPi, 0}, g, 0.25, kPi / 8));
}

TEST(Dwa, PoseAlongArc) {
  const Pose p = pose_along_arc({}, 1.0, kPi / 2, 1.0);
  EXPECT_NEAR(p.x, 2.0 / kPi, 1e-12);
  EXPECT_EQ(pose_along_arc({1, 2, 3, 0}, 0.0, 1.0, 1.0), (Pose{1, 2, 3, 0}));
}

TEST(Dwa, ValidateRejectsBadConfig) {
  DwaConfig c;
  c.v_max = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(DwaConfig{}.validate());
}

}  // namespace
}  // namespace fieldnav
