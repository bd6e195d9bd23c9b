#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fieldnav/cropsense/detector.hpp"
#include "fieldnav/exploration/frontiers.hpp"
#include "fieldnav/localization/amcl.hpp"
#include "fieldnav/mapping/rbpf.hpp"
#include "fieldnav/mission/pid.hpp"
#include "fieldnav/planning/dwa.hpp"
#include "fieldnav/simworld/lidar.hpp"

namespace fieldnav {

/// Everything a mission run can be configured with. Every field has a default; the config file
/// overrides them by key (see README for the key list) and unknown keys are rejected.
struct MissionConfig {
  // simulation
  double tick_seconds{0.05};
  int lidar_every{2};
  std::uint64_t max_ticks{60000};
  Pose start{2.0, 2.0, 0.0, 0.0};
  double altitude{2.0};
  double altitude_lag{0.2};
  double takeoff_tolerance{0.05};
  LidarConfig lidar{};
  OdometryNoise odometry_noise{};
  double robot_radius{0.3};

  // SLAM
  RbpfConfig slam{};
  double slam_update_distance{0.1};
  double slam_update_angle{0.05};
  int degeneracy_limit{25};

  // localization after the map is complete
  AmclConfig amcl{};
  double amcl_init_sigma_xy{0.1};
  double amcl_init_sigma_yaw{0.05};

  // planning
  double inscribed_radius{0.6};
  double decay_radius{1.0};
  DwaConfig dwa{};
  double goal_tolerance{0.25};
  double yaw_tolerance{0.3};
  int replan_ticks{10};
  int stop_timeout_ticks{100};
  int goal_timeout_ticks{3000};
  double goal_search_radius{1.0};
  double start_search_radius{0.5};

  // exploration
  int min_cluster_size{3};
  double w_dist{1.0};
  std::optional<double> w_size;  ///< per frontier cell; half the map resolution when unset
  double blacklist_radius{0.5};
  int blacklist_failures{2};
  int candidates_per_cluster{3};

  // survey
  bool survey_enabled{true};
  double survey_spacing{1.6};
  double survey_coverage_target{0.95};
  int survey_max_cost{100};  ///< lanes keep to cells at most this costly (about 0.9 m from obstacles)

  // crop sensing
  DetectorProfile detector{measured_detector_profile()};
  int min_observations{3};

  // altitude hold
  PidGains pid{};

  // point-to-point demonstration on the finished map
  bool demo_enabled{true};
  Pose demo_a{6.0, 24.0, kPi / 2.0, 0.0};
  Pose demo_b{34.0, 6.0, 0.0, 0.0};

  // outputs
  bool dump_particles{false};

  /// Copies settings configured once (odometry noise, likelihood model, robot radius, tick length)
  /// into every component that uses them.
  void sync_shared();
  void validate() const;
};

/// Parses flat `key = value` text over the defaults. Throws ConfigError on unknown keys or bad values.
MissionConfig parse_mission_config(const std::string& text);
MissionConfig load_mission_config_file(const std::string& path);

/// Canonical `key = value` listing of every setting (sorted by key), parseable by parse_mission_config.
std::string serialize_mission_config(const MissionConfig& config);

/// FNV-1a 64 of the canonical listing, as 16 hex digits.
std::string config_hash(const MissionConfig& config);

}  // namespace fieldnav
