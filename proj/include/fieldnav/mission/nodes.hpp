#pragma once

// The node graph of a survey mission. Nodes talk only through the bus, except where a node stands
// for a physical device (the simulator and the downward camera see the true vehicle state).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldnav/cropsense/disease_map.hpp"
#include "fieldnav/exploration/frontiers.hpp"
#include "fieldnav/localization/amcl.hpp"
#include "fieldnav/mapping/rbpf.hpp"
#include "fieldnav/mission/bus.hpp"
#include "fieldnav/mission/config.hpp"
#include "fieldnav/mission/pid.hpp"
#include "fieldnav/planning/dwa.hpp"

namespace fieldnav {

namespace topic {
inline const std::string kScan = "scan";
inline const std::string kTf = "tf";
inline const std::string kMap = "map";
inline const std::string kGoal = "goal";
inline const std::string kGoalStatus = "goal_status";
inline const std::string kCmdVel = "cmd_vel";
inline const std::string kFrontiers = "frontiers";
inline const std::string kDetections = "detections";
}  // namespace topic

inline const std::string kMapFrame = "map";
inline const std::string kOdomFrame = "odom";
inline const std::string kBaseFrame = "base_link";

struct TfMsg {
  std::string parent;
  std::string child;
  Pose transform{};
};

struct MapMsg {
  OccupancyGrid grid;
};

enum class GoalSource : std::uint8_t { kExplore, kSurvey, kDemo };

struct GoalMsg {
  std::uint64_t id{0};
  Pose goal{};
  bool check_yaw{false};
  GoalSource source{GoalSource::kExplore};
};

struct GoalStatusMsg {
  std::uint64_t id{0};
  bool reached{false};
  std::string reason;
};

struct CmdVelMsg {
  Twist twist{};
  bool vertical{false};  ///< altitude hold publishes vz only; the planner publishes the planar part
};

struct FrontiersMsg {
  std::vector<FrontierCluster> clusters;
};

struct DetectionsMsg {
  std::vector<DiseaseObservation> observations;
};

/// Registers every topic with its payload type.
void advertise_topics(Bus& bus);

Pose inverse(const Pose& p);

/// Tracks map->odom and odom->base_link from "tf" to give the vehicle pose in the map frame.
class PoseTracker {
 public:
  void consume(const std::vector<Message<TfMsg>>& messages);
  [[nodiscard]] bool ready() const { return have_odom_; }
  [[nodiscard]] Pose map_pose() const { return compose(map_to_odom_, odom_to_base_); }
  [[nodiscard]] const Pose& odom_pose() const { return odom_to_base_; }
  [[nodiscard]] const Pose& map_to_odom() const { return map_to_odom_; }
  /// odom->base_link as published during `tick`, if still buffered.
  [[nodiscard]] std::optional<Pose> odom_at(std::uint64_t tick) const;

 private:
  Pose map_to_odom_{};
  Pose odom_to_base_{};
  bool have_odom_{false};
  std::map<std::uint64_t, Pose> odom_history_;
};

/// Ground truth: integrates commands, produces noisy odometry and lidar scans, audits collisions.
class SimNode {
 public:
  SimNode(const World& world, const MissionConfig& config, Rng rng);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] const Pose& truth() const { return truth_; }
  [[nodiscard]] std::uint64_t collisions() const { return collisions_; }
  [[nodiscard]] double altitude_rate() const { return plant_.rate; }
  [[nodiscard]] const Twist& applied() const { return planar_; }

 private:
  const World& world_;
  const MissionConfig& config_;
  Rng rng_;
  Pose truth_;
  Pose odom_;
  AltitudePlant plant_;
  Twist planar_{};
  double vz_{0.0};
  std::uint64_t collisions_{0};
  std::uint64_t scan_seq_{0};
};

/// Grid SLAM: first scan initializes the maps, later scans update the filter once the odometry has
/// moved far enough. Publishes the best map and the map->odom correction.
class SlamNode {
 public:
  SlamNode(const GridGeometry& map_geometry, const MissionConfig& config, Rng rng);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] bool initialized() const { return initialized_; }
  [[nodiscard]] const std::vector<SlamParticle>& particles() const { return particles_; }
  [[nodiscard]] const OccupancyGrid& best_map() const { return fieldnav::best_map(particles_); }
  [[nodiscard]] Pose best_pose() const { return particles_[best_particle(particles_)].pose; }
  /// Odometry reading at which the filter last updated (pairs with best_pose()).
  [[nodiscard]] const Pose& last_update_odom() const { return last_update_odom_; }
  [[nodiscard]] std::uint64_t updates() const { return updates_; }
  [[nodiscard]] std::uint64_t resamples() const { return resamples_; }
  [[nodiscard]] std::uint64_t degeneracies() const { return degeneracies_; }

 private:
  void publish(Bus& bus, const Pose& odom);

  const MissionConfig& config_;
  Rng rng_;
  std::vector<SlamParticle> particles_;
  PoseTracker tf_;
  bool initialized_{false};
  Pose last_update_odom_{};
  std::uint64_t updates_{0};
  std::uint64_t resamples_{0};
  std::uint64_t degeneracies_{0};
};

/// Monte-Carlo localization on the finished map.
class LocalizerNode {
 public:
  LocalizerNode(const OccupancyGrid& map, const Pose& initial_map_pose, const Pose& initial_odom,
                const MissionConfig& config, Rng rng);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] const Amcl& filter() const { return amcl_; }
  [[nodiscard]] PoseEstimate estimate() const { return amcl_.estimate(); }
  /// Particle dumps ("step,x,y,yaw,weight" rows) recorded when enabled.
  [[nodiscard]] const std::vector<std::pair<std::uint64_t, std::string>>& dumps() const { return dumps_; }

 private:
  const MissionConfig& config_;
  Rng rng_;
  Amcl amcl_;
  PoseTracker tf_;
  std::vector<std::pair<std::uint64_t, std::string>> dumps_;
};

struct ExploreStats {
  std::uint64_t goals_sent{0};
  std::uint64_t goals_reached{0};
  std::uint64_t goals_failed{0};
  std::uint64_t goals_retired{0};  ///< goal cell stopped being a frontier on the way
  std::uint64_t selection_failures{0};
};

/// Frontier exploration: picks a frontier goal whenever there is none in flight.
class ExploreNode {
 public:
  explicit ExploreNode(const MissionConfig& config);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] bool done() const { return done_; }
  [[nodiscard]] const ExploreStats& stats() const { return stats_; }
  [[nodiscard]] const FrontierBlacklist& blacklist() const { return blacklist_; }
  [[nodiscard]] const std::optional<OccupancyGrid>& map() const { return map_; }

 private:
  struct Active {
    std::uint64_t id;
    Cell cell;
    Point2 centroid;
  };

  const MissionConfig& config_;
  PoseTracker tf_;
  std::optional<OccupancyGrid> map_;
  std::optional<Active> active_;
  FrontierBlacklist blacklist_;
  ExploreStats stats_;
  std::uint64_t next_id_{1};
  bool done_{false};
};

/// Global A* plus dynamic-window local control toward the latest goal.
class MoveBaseNode {
 public:
  explicit MoveBaseNode(const MissionConfig& config);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] bool busy() const { return goal_.has_value(); }
  [[nodiscard]] const Path& path() const { return path_; }
  [[nodiscard]] std::uint64_t plans() const { return plans_; }
  [[nodiscard]] std::uint64_t dwa_stops() const { return stops_total_; }

 private:
  void finish(Bus& bus, bool reached, const std::string& reason);
  bool replan(const Pose& pose);
  Twist brake() const;

  const MissionConfig& config_;
  PoseTracker tf_;
  std::optional<Costmap> costmap_;
  std::optional<GoalMsg> goal_;
  Path path_;
  std::vector<Point2> scan_points_odom_;  ///< last scan's endpoints, placed by odometry at scan time
  std::vector<Point2> obstacles_;
  Twist last_cmd_{};
  std::uint64_t goal_tick_{0};
  std::uint64_t last_plan_tick_{0};
  bool map_changed_{false};
  bool xy_latched_{false};
  int stop_ticks_{0};
  std::uint64_t plans_{0};
  std::uint64_t stops_total_{0};
  std::uint64_t tick_{0};
};

/// PID altitude hold; publishes the vertical part of cmd_vel every tick.
class AltitudeNode {
 public:
  explicit AltitudeNode(const MissionConfig& config);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] const PidState& state() const { return pid_; }
  [[nodiscard]] double altitude() const { return z_; }

 private:
  const MissionConfig& config_;
  PidState pid_;
  PoseTracker tf_;
  double z_{0.0};
};

/// Downward camera + detector: runs at the detector frame rate once the vehicle is near survey altitude.
class CropSenseNode {
 public:
  CropSenseNode(const World& world, const SimNode& sim, const MissionConfig& config, Rng rng);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] std::uint64_t frames() const { return frames_; }
  [[nodiscard]] std::uint64_t observations() const { return observations_; }

 private:
  const World& world_;
  const SimNode& sim_;
  const MissionConfig& config_;
  Rng rng_;
  std::uint64_t frames_{0};
  std::uint64_t observations_{0};
};

class FusionNode {
 public:
  FusionNode(const World& world, const MissionConfig& config);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] const DiseaseMap& disease_map() const { return map_; }

 private:
  DiseaseMap map_;
};

/// Boustrophedon lanes over traversable known space, issued as consecutive goals.
class SurveyNode {
 public:
  SurveyNode(const OccupancyGrid& map, const MissionConfig& config, std::uint64_t first_goal_id);

  void tick(Bus& bus, std::uint64_t tick);

  [[nodiscard]] bool done() const { return next_ >= waypoints_.size() && !active_; }
  [[nodiscard]] std::size_t waypoints() const { return waypoints_.size(); }
  [[nodiscard]] std::size_t reached() const { return reached_; }
  [[nodiscard]] std::size_t failed() const { return failed_; }
  [[nodiscard]] std::uint64_t next_goal_id() const { return next_id_; }

 private:
  const MissionConfig& config_;
  std::vector<Point2> waypoints_;
  std::size_t next_{0};
  std::optional<std::uint64_t> active_;
  std::uint64_t next_id_;
  std::size_t reached_{0};
  std::size_t failed_{0};
};

/// Survey waypoints: lanes `spacing` apart along x over cells that are Free with cost at most
/// `max_cost`, alternating direction; each run at least `min_lane_length` long contributes its two
/// end points.
std::vector<Point2> survey_waypoints(const OccupancyGrid& map, const Costmap& costmap, double spacing,
                                     double min_lane_length, std::uint8_t max_cost,
                                     const OccupancyThresholds& thresholds = {});

}  // namespace fieldnav
