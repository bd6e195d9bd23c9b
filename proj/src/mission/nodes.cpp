#include "fieldnav/mission/nodes.hpp"

#include <algorithm>
#include <cmath>

#include "fieldnav/simworld/kinematics.hpp"
#include "fieldnav/simworld/lidar.hpp"

namespace fieldnav {

void advertise_topics(Bus& bus) {
  bus.advertise<LaserScan>(topic::kScan);
  bus.advertise<TfMsg>(topic::kTf);
  bus.advertise<MapMsg>(topic::kMap);
  bus.advertise<GoalMsg>(topic::kGoal);
  bus.advertise<GoalStatusMsg>(topic::kGoalStatus);
  bus.advertise<CmdVelMsg>(topic::kCmdVel);
  bus.advertise<FrontiersMsg>(topic::kFrontiers);
  bus.advertise<DetectionsMsg>(topic::kDetections);
}

Pose inverse(const Pose& p) { return relative(p, Pose{0.0, 0.0, 0.0, p.z}); }

// ---------------------------------------------------------------------------------------------

void PoseTracker::consume(const std::vector<Message<TfMsg>>& messages) {
  for (const auto& m : messages) {
    if (m->parent == kMapFrame && m->child == kOdomFrame) {
      map_to_odom_ = m->transform;
    } else if (m->parent == kOdomFrame && m->child == kBaseFrame) {
      odom_to_base_ = m->transform;
      have_odom_ = true;
      odom_history_[m.tick] = m->transform;
    }
  }
  // A few ticks of history cover the lidar cadence.
  while (odom_history_.size() > 16) {
    odom_history_.erase(odom_history_.begin());
  }
}

std::optional<Pose> PoseTracker::odom_at(std::uint64_t tick) const {
  const auto it = odom_history_.find(tick);
  if (it == odom_history_.end()) {
    return std::nullopt;
  }
  return it->second;
}

// ---------------------------------------------------------------------------------------------

SimNode::SimNode(const World& world, const MissionConfig& config, Rng rng)
    : world_(world), config_(config), rng_(std::move(rng)), truth_(config.start), odom_(config.start) {
  plant_.time_constant = config.altitude_lag;
  plant_.z = config.start.z;
  truth_.z = odom_.z = plant_.z;
}

void SimNode::tick(Bus& bus, std::uint64_t tick) {
  for (const auto& m : bus.poll<CmdVelMsg>(topic::kCmdVel, "sim")) {
    if (m->vertical) {
      vz_ = m->twist.vz;
    } else {
      planar_ = m->twist;
      planar_.vz = 0.0;
    }
  }

  if (tick > 0) {
    const Pose before = truth_;
    truth_ = step_kinematics(truth_, planar_, config_.tick_seconds);
    plant_.step(vz_, config_.tick_seconds);
    truth_.z = plant_.z;

    const OdometryDelta moved = odometry_delta(before, truth_);
    odom_ = apply_odometry(odom_, sample_odometry(moved, config_.odometry_noise, rng_));
    odom_.z = truth_.z;

    if (collision_check(world_, truth_, config_.robot_radius)) {
      ++collisions_;
    }
  }

  bus.publish(topic::kTf, TfMsg{kOdomFrame, kBaseFrame, odom_});

  const Cell here = world_.geometry().cell_of(truth_.position());
  if (tick % static_cast<std::uint64_t>(config_.lidar_every) == 0 && !world_.is_obstacle(here)) {
    bus.publish(topic::kScan, simulate_scan(world_, truth_, config_.lidar, rng_, scan_seq_++));
  }
}

// ---------------------------------------------------------------------------------------------

SlamNode::SlamNode(const GridGeometry& map_geometry, const MissionConfig& config, Rng rng)
    : config_(config), rng_(std::move(rng)), particles_(make_slam_particles(map_geometry, config.start, config.slam.particles)) {}

void SlamNode::publish(Bus& bus, const Pose& odom) {
  const Pose best = best_pose();
  Pose correction = compose(best, inverse(odom));
  correction.z = 0.0;
  bus.publish(topic::kTf, TfMsg{kMapFrame, kOdomFrame, correction});
  bus.publish(topic::kMap, MapMsg{best_map()});
}

void SlamNode::tick(Bus& bus, std::uint64_t) {
  tf_.consume(bus.poll<TfMsg>(topic::kTf, "slam"));
  for (const auto& scan : bus.poll<LaserScan>(topic::kScan, "slam")) {
    const auto odom = tf_.odom_at(scan.tick);
    if (!odom) {
      continue;
    }
    if (!initialized_) {
      for (auto& p : particles_) {
        integrate_scan(p.map, p.pose, *scan, config_.slam.sensor);
      }
      initialized_ = true;
      last_update_odom_ = *odom;
      publish(bus, *odom);
      continue;
    }
    const OdometryDelta delta = odometry_delta(last_update_odom_, *odom);
    const double turned = std::abs(normalize_angle(odom->yaw - last_update_odom_.yaw));
    if (delta.trans < config_.slam_update_distance && turned < config_.slam_update_angle) {
      continue;
    }
    const RbpfStep step = rbpf_update(particles_, delta, *scan, config_.slam, rng_);
    ++updates_;
    resamples_ += step.resampled ? 1 : 0;
    degeneracies_ += step.degenerate ? 1 : 0;
    last_update_odom_ = *odom;
    publish(bus, *odom);
  }
}

// ---------------------------------------------------------------------------------------------

LocalizerNode::LocalizerNode(const OccupancyGrid& map, const Pose& initial_map_pose, const Pose& initial_odom,
                             const MissionConfig& config, Rng rng)
    : config_(config), rng_(std::move(rng)), amcl_(map, config.amcl) {
  amcl_.initialize(sample_gaussian_cloud(initial_map_pose, config.amcl_init_sigma_xy, config.amcl_init_sigma_yaw,
                                         config.amcl.kld.n_min, rng_),
                   initial_odom);
}

void LocalizerNode::tick(Bus& bus, std::uint64_t tick) {
  tf_.consume(bus.poll<TfMsg>(topic::kTf, "amcl"));
  for (const auto& scan : bus.poll<LaserScan>(topic::kScan, "amcl")) {
    const auto odom = tf_.odom_at(scan.tick);
    if (!odom) {
      continue;
    }
    if (!amcl_.update(*odom, *scan, rng_)) {
      continue;
    }
    Pose correction = compose(amcl_.estimate().mean, inverse(*odom));
    correction.z = 0.0;
    bus.publish(topic::kTf, TfMsg{kMapFrame, kOdomFrame, correction});
    if (config_.dump_particles) {
      dumps_.emplace_back(tick, particles_csv(tick, amcl_.particles()));
    }
  }
}

// ---------------------------------------------------------------------------------------------

ExploreNode::ExploreNode(const MissionConfig& config)
    : config_(config), blacklist_(config.blacklist_radius, config.blacklist_failures) {}

void ExploreNode::tick(Bus& bus, std::uint64_t) {
  tf_.consume(bus.poll<TfMsg>(topic::kTf, "explore"));
  bool map_changed = false;
  if (auto latest = bus.poll_latest<MapMsg>(topic::kMap, "explore")) {
    map_ = latest->grid;
    map_changed = true;
  }
  for (const auto& status : bus.poll<GoalStatusMsg>(topic::kGoalStatus, "explore")) {
    if (!active_ || status->id != active_->id) {
      continue;
    }
    if (status->reached) {
      ++stats_.goals_reached;
    } else {
      ++stats_.goals_failed;
      blacklist_.record_failure(active_->centroid);
    }
    active_.reset();
  }
  if (!map_ || !tf_.ready()) {
    return;
  }
  const auto& thresholds = config_.slam.thresholds;
  const GridGeometry& g = map_->geometry();

  if (active_ && map_changed) {
    const auto classes = map_->classify(thresholds);
    if (!is_frontier(g, classes, active_->cell)) {
      ++stats_.goals_retired;
      active_.reset();
    }
  }
  if (active_) {
    return;
  }

  auto clusters = without_blacklisted(find_frontiers(*map_, config_.min_cluster_size, thresholds), blacklist_);
  done_ = clusters.empty();
  if (done_) {
    return;
  }
  const Costmap costmap = inflate(*map_, {config_.inscribed_radius, config_.decay_radius, false}, thresholds);
  const SelectionWeights weights{config_.w_dist, config_.w_size.value_or(0.5 * g.resolution)};
  const auto selection = select_goal(clusters, tf_.map_pose(), costmap, weights, blacklist_,
                                     config_.candidates_per_cluster, config_.start_search_radius);
  if (!selection) {
    // Nothing reachable right now: every remaining cluster takes a failure.
    ++stats_.selection_failures;
    for (const auto& c : clusters) {
      blacklist_.record_failure(c.centroid);
    }
    return;
  }
  active_ = Active{next_id_++, selection->cell, clusters[selection->cluster].centroid};
  ++stats_.goals_sent;
  bus.publish(topic::kGoal, GoalMsg{active_->id, selection->goal, false, GoalSource::kExplore});
  bus.publish(topic::kFrontiers, FrontiersMsg{std::move(clusters)});
}

// ---------------------------------------------------------------------------------------------

MoveBaseNode::MoveBaseNode(const MissionConfig& config) : config_(config) {}

Twist MoveBaseNode::brake() const {
  // Decelerate along the current arc (constant curvature), as the planner's stopping model assumes.
  Twist t;
  const double dv = config_.dwa.accel_v * config_.tick_seconds;
  t.vx = std::max(0.0, last_cmd_.vx - dv);
  if (last_cmd_.vx > 0.0) {
    t.omega = last_cmd_.omega * t.vx / last_cmd_.vx;
  } else {
    const double dw = config_.dwa.accel_omega * config_.tick_seconds;
    t.omega = std::clamp(0.0, last_cmd_.omega - dw, last_cmd_.omega + dw);
  }
  return t;
}

void MoveBaseNode::finish(Bus& bus, bool reached, const std::string& reason) {
  bus.publish(topic::kGoalStatus, GoalStatusMsg{goal_->id, reached, reason});
  goal_.reset();
  path_ = {};
}

bool MoveBaseNode::replan(const Pose& pose) {
  last_plan_tick_ = tick_;
  map_changed_ = false;
  ++plans_;
  const GridGeometry& g = costmap_->geometry();
  const auto start = nearest_traversable(*costmap_, g.cell_of(pose.position()), config_.start_search_radius);
  const auto goal = nearest_traversable(*costmap_, g.cell_of(goal_->goal.position()), config_.goal_search_radius);
  if (!start || !goal) {
    path_ = {};
    return false;
  }
  PlanResult plan = plan_astar(*costmap_, *start, *goal);
  if (plan.status != PlanStatus::kOk) {
    path_ = {};
    return false;
  }
  path_ = std::move(plan.path);
  // Finish on the requested point itself rather than on the nearest cell centre.
  if (*goal == g.cell_of(goal_->goal.position())) {
    path_.points.back() = goal_->goal.position();
  }
  return true;
}

void MoveBaseNode::tick(Bus& bus, std::uint64_t tick) {
  tick_ = tick;
  tf_.consume(bus.poll<TfMsg>(topic::kTf, "move_base"));
  if (auto latest = bus.poll_latest<MapMsg>(topic::kMap, "move_base")) {
    costmap_ = inflate(latest->grid, {config_.inscribed_radius, config_.decay_radius, true}, config_.slam.thresholds);
    map_changed_ = true;
  }
  if (auto goal = bus.poll_latest<GoalMsg>(topic::kGoal, "move_base")) {
    goal_ = *goal;
    goal_tick_ = tick;
    path_ = {};
    xy_latched_ = false;
    stop_ticks_ = 0;
  }
  const Pose pose = tf_.map_pose();
  // Obstacles come from the latest scan, placed with the odometry of the tick it was taken and
  // re-anchored with the current map->odom correction, so their position relative to the robot is
  // as good as odometry over the last few ticks.
  if (const auto scans = bus.poll<LaserScan>(topic::kScan, "move_base"); !scans.empty()) {
    const auto& scan = scans.back();
    const Pose at = tf_.odom_at(scan.tick).value_or(tf_.odom_pose());
    scan_points_odom_.clear();
    for (std::size_t i = 0; i < scan->ranges.size(); ++i) {
      if (scan->is_return(i)) {
        const double a = scan->beam_angle(i);
        scan_points_odom_.push_back(transform_point(at, {scan->ranges[i] * std::cos(a), scan->ranges[i] * std::sin(a)}));
      }
    }
  }
  obstacles_.clear();
  for (const Point2& p : scan_points_odom_) {
    obstacles_.push_back(transform_point(tf_.map_to_odom(), p));
  }

  Twist cmd = brake();
  if (goal_ && costmap_ && tf_.ready()) {
    const double yaw_error = normalize_angle(goal_->goal.yaw - pose.yaw);
    if (planar_distance(pose, goal_->goal) <= config_.goal_tolerance) {
      xy_latched_ = true;
    }
    if (tick - goal_tick_ > static_cast<std::uint64_t>(config_.goal_timeout_ticks)) {
      finish(bus, false, "timeout");
    } else if (xy_latched_) {
      if (!goal_->check_yaw || std::abs(yaw_error) <= config_.yaw_tolerance) {
        finish(bus, true, "reached");
      } else {
        const double dw = config_.dwa.accel_omega * config_.tick_seconds;
        const double wanted = std::clamp(2.0 * yaw_error, -config_.dwa.omega_max, config_.dwa.omega_max);
        cmd.vx = std::max(0.0, last_cmd_.vx - config_.dwa.accel_v * config_.tick_seconds);
        cmd.omega = std::clamp(wanted, last_cmd_.omega - dw, last_cmd_.omega + dw);
      }
    } else {
      const bool blocked = std::any_of(path_.cells.begin(), path_.cells.end(),
                                       [&](const Cell& c) { return !costmap_->traversable(c); });
      const bool stale = map_changed_ && tick - last_plan_tick_ >= static_cast<std::uint64_t>(config_.replan_ticks);
      if ((path_.empty() || blocked || stale) && !replan(pose)) {
        finish(bus, false, "no path");
      } else {
        DwaConfig dwa = config_.dwa;
        // Approach the final goal slowly enough to stop on it.
        const double to_goal = planar_distance(pose, goal_->goal);
        dwa.v_max = std::min(dwa.v_max, std::max(0.1, std::sqrt(2.0 * dwa.accel_v * to_goal)));
        // Inside the clearance margin the path is no use (it leads past the obstacle); steer away
        // from the nearest obstacle point until the margin is restored, then resume.
        Point2 carrot = carrot_point(path_, pose, dwa.lookahead);
        const Point2 here = pose.position();
        const auto nearest = std::min_element(obstacles_.begin(), obstacles_.end(), [&](const Point2& a, const Point2& b) {
          return distance(a, here) < distance(b, here);
        });
        if (nearest != obstacles_.end()) {
          const double d = distance(*nearest, here);
          if (d < dwa.robot_radius + dwa.clearance_margin && d > 1e-9) {
            carrot = {here.x + (here.x - nearest->x) / d, here.y + (here.y - nearest->y) / d};
          }
        }
        const DwaWindow window = evaluate_window(pose, last_cmd_, carrot, obstacles_, dwa);
        if (window.chosen) {
          const DwaCandidate& best = window.candidates[*window.chosen];
          cmd = Twist{best.v, 0.0, best.omega, 0.0};
        }
        // Turning on the spot for too long counts as being stuck, like having no admissible command.
        if (cmd.vx > 0.0) {
          stop_ticks_ = 0;
        } else {
          ++stops_total_;
          if (++stop_ticks_ > config_.stop_timeout_ticks) {
            finish(bus, false, "blocked");
          }
        }
      }
    }
  }
  last_cmd_ = cmd;
  bus.publish(topic::kCmdVel, CmdVelMsg{cmd, false});
}

// ---------------------------------------------------------------------------------------------

AltitudeNode::AltitudeNode(const MissionConfig& config) : config_(config) {
  pid_.gains = config.pid;
  pid_.setpoint = config.altitude;
}

void AltitudeNode::tick(Bus& bus, std::uint64_t) {
  tf_.consume(bus.poll<TfMsg>(topic::kTf, "altitude"));
  if (!tf_.ready()) {
    return;
  }
  z_ = tf_.odom_pose().z;
  Twist t;
  t.vz = pid_step(pid_, z_, config_.tick_seconds);
  bus.publish(topic::kCmdVel, CmdVelMsg{t, true});
}

// ---------------------------------------------------------------------------------------------

CropSenseNode::CropSenseNode(const World& world, const SimNode& sim, const MissionConfig& config, Rng rng)
    : world_(world), sim_(sim), config_(config), rng_(std::move(rng)) {}

void CropSenseNode::tick(Bus& bus, std::uint64_t tick) {
  const int frames = detection_frames(tick, config_.tick_seconds, config_.detector.rate_hz);
  if (frames == 0 || sim_.truth().z <= 0.5 * config_.altitude) {
    return;
  }
  DetectionsMsg msg;
  for (int f = 0; f < frames; ++f) {
    auto seen = observe(world_, sim_.truth(), config_.detector, tick, rng_);
    msg.observations.insert(msg.observations.end(), seen.begin(), seen.end());
  }
  frames_ += static_cast<std::uint64_t>(frames);
  observations_ += msg.observations.size();
  bus.publish(topic::kDetections, std::move(msg));
}

FusionNode::FusionNode(const World& world, const MissionConfig& config) : map_(world, config.min_observations) {}

void FusionNode::tick(Bus& bus, std::uint64_t) {
  for (const auto& m : bus.poll<DetectionsMsg>(topic::kDetections, "fusion")) {
    map_.fuse(m->observations);
  }
}

// ---------------------------------------------------------------------------------------------

std::vector<Point2> survey_waypoints(const OccupancyGrid& map, const Costmap& costmap, double spacing,
                                     double min_lane_length, std::uint8_t max_cost,
                                     const OccupancyThresholds& thresholds) {
  const GridGeometry& g = map.geometry();
  const auto classes = map.classify(thresholds);
  const auto usable = [&](int x, int y) {
    const Cell c{x, y};
    return classes[g.index(c)] == CellClass::kFree && costmap.cost(c) <= max_cost;
  };
  std::vector<Point2> waypoints;
  bool forward = true;
  const double height = g.height * g.resolution;
  for (double offset = 0.5 * spacing; offset < height; offset += spacing) {
    const int y = static_cast<int>(std::floor(offset / g.resolution));
    std::vector<std::pair<int, int>> runs;
    for (int x = 0; x < g.width;) {
      if (!usable(x, y)) {
        ++x;
        continue;
      }
      const int begin = x;
      while (x < g.width && usable(x, y)) {
        ++x;
      }
      if ((x - begin) * g.resolution >= min_lane_length) {
        runs.emplace_back(begin, x - 1);
      }
    }
    if (runs.empty()) {
      continue;
    }
    if (!forward) {
      std::reverse(runs.begin(), runs.end());
    }
    for (const auto& [a, b] : runs) {
      const Point2 first = g.center({forward ? a : b, y});
      const Point2 last = g.center({forward ? b : a, y});
      waypoints.push_back(first);
      waypoints.push_back(last);
    }
    forward = !forward;
  }
  return waypoints;
}

SurveyNode::SurveyNode(const OccupancyGrid& map, const MissionConfig& config, std::uint64_t first_goal_id)
    : config_(config), next_id_(first_goal_id) {
  const Costmap costmap = inflate(map, {config.inscribed_radius, config.decay_radius, true}, config.slam.thresholds);
  waypoints_ = survey_waypoints(map, costmap, config.survey_spacing, 2.0 * config.detector.fov_radius,
                                static_cast<std::uint8_t>(config.survey_max_cost), config.slam.thresholds);
}

void SurveyNode::tick(Bus& bus, std::uint64_t) {
  for (const auto& status : bus.poll<GoalStatusMsg>(topic::kGoalStatus, "survey")) {
    if (active_ && status->id == *active_) {
      (status->reached ? reached_ : failed_) += 1;
      active_.reset();
    }
  }
  if (active_ || next_ >= waypoints_.size()) {
    return;
  }
  const Point2 target = waypoints_[next_++];
  active_ = next_id_++;
  bus.publish(topic::kGoal, GoalMsg{*active_, {target.x, target.y, 0.0, 0.0}, false, GoalSource::kSurvey});
}

}  // namespace fieldnav
