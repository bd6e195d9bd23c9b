#include "fieldnav/mission/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fieldnav/core/config_file.hpp"
#include "fieldnav/planning/costmap.hpp"

namespace fieldnav {
namespace {

// Reads every known key from a file, or writes every key into a listing, through one key table.
class Reader {
 public:
  explicit Reader(KeyValueFile& file) : file_(file) {}

  void real(const std::string& key, double& v) { v = file_.get_double(key, v); }
  void integer(const std::string& key, int& v) { v = static_cast<int>(file_.get_int(key, v)); }
  void count(const std::string& key, std::uint64_t& v) { v = file_.get_uint(key, v); }
  void flag(const std::string& key, bool& v) { v = file_.get_bool(key, v); }
  void pose(const std::string& key, Pose& p) {
    const auto values = file_.get_doubles(key, {p.x, p.y, p.yaw});
    if (values.size() != 3) {
      throw ConfigError(key + ": expected 'x y yaw'");
    }
    p = {values[0], values[1], normalize_angle(values[2]), p.z};
  }
  void row(const std::string& key, std::array<double, kCropClassCount>& r) {
    const auto values = file_.get_doubles(key, {r.begin(), r.end()});
    if (values.size() != r.size()) {
      throw ConfigError(key + ": expected 3 probabilities");
    }
    std::copy(values.begin(), values.end(), r.begin());
  }
  void optional_real(const std::string& key, std::optional<double>& v) {
    const std::string text = file_.get_string(key, "auto");
    if (text == "auto") {
      v.reset();
      return;
    }
    KeyValueFile single;
    single.set(key, text);
    v = single.get_double(key, 0.0);
  }

 private:
  KeyValueFile& file_;
};

class Writer {
 public:
  void real(const std::string& key, const double& v) { out[key] = format_double(v); }
  void integer(const std::string& key, const int& v) { out[key] = std::to_string(v); }
  void count(const std::string& key, const std::uint64_t& v) { out[key] = std::to_string(v); }
  void flag(const std::string& key, const bool& v) { out[key] = v ? "true" : "false"; }
  void pose(const std::string& key, const Pose& p) {
    out[key] = format_double(p.x) + " " + format_double(p.y) + " " + format_double(p.yaw);
  }
  void row(const std::string& key, const std::array<double, kCropClassCount>& r) {
    out[key] = format_double(r[0]) + " " + format_double(r[1]) + " " + format_double(r[2]);
  }
  void optional_real(const std::string& key, const std::optional<double>& v) {
    out[key] = v ? format_double(*v) : "auto";
  }

  std::map<std::string, std::string> out;
};

template <class Visitor, class Config>
void visit(Visitor& v, Config& c) {
  v.real("sim.tick_seconds", c.tick_seconds);
  v.integer("sim.lidar_every", c.lidar_every);
  v.count("sim.max_ticks", c.max_ticks);
  v.pose("sim.start", c.start);
  v.real("sim.altitude", c.altitude);
  v.real("sim.altitude_lag", c.altitude_lag);
  v.real("sim.takeoff_tolerance", c.takeoff_tolerance);
  v.real("sim.robot_radius", c.robot_radius);

  v.integer("lidar.beams", c.lidar.beams);
  v.real("lidar.angle_increment", c.lidar.angle_increment);
  v.real("lidar.range_max", c.lidar.range_max);
  v.real("lidar.range_sigma", c.lidar.range_sigma);

  v.real("odometry.alpha1", c.odometry_noise.alpha1);
  v.real("odometry.alpha2", c.odometry_noise.alpha2);
  v.real("odometry.alpha3", c.odometry_noise.alpha3);
  v.real("odometry.alpha4", c.odometry_noise.alpha4);

  v.integer("slam.particles", c.slam.particles);
  v.real("slam.resample_threshold", c.slam.resample_threshold);
  v.real("slam.update_distance", c.slam_update_distance);
  v.real("slam.update_angle", c.slam_update_angle);
  v.real("slam.l_occ", c.slam.sensor.l_occ);
  v.real("slam.l_free", c.slam.sensor.l_free);
  v.real("slam.l_clamp", c.slam.sensor.l_clamp);
  v.real("slam.hit_extension", c.slam.sensor.hit_extension);
  v.real("slam.occupied_thresh", c.slam.thresholds.occupied);
  v.real("slam.free_thresh", c.slam.thresholds.free);
  v.real("slam.sigma_hit", c.slam.likelihood.sigma_hit);
  v.real("slam.likelihood_floor", c.slam.likelihood.floor);
  v.integer("slam.beam_decimation", c.slam.likelihood.decimation);
  v.real("slam.match_step_xy", c.slam.matcher.step_xy);
  v.real("slam.match_step_yaw", c.slam.matcher.step_yaw);
  v.integer("slam.match_halvings", c.slam.matcher.halvings);
  v.real("slam.match_window_xy", c.slam.matcher.max_offset_xy);
  v.real("slam.match_window_yaw", c.slam.matcher.max_offset_yaw);
  v.real("slam.match_prior_xy", c.slam.matcher.prior_sigma_xy);
  v.real("slam.match_prior_yaw", c.slam.matcher.prior_sigma_yaw);
  v.flag("slam.scan_matching", c.slam.scan_matching);
  v.integer("slam.degeneracy_limit", c.degeneracy_limit);

  v.real("amcl.epsilon", c.amcl.kld.epsilon);
  v.real("amcl.delta", c.amcl.kld.delta);
  v.real("amcl.bin_xy", c.amcl.kld.bin_xy);
  v.real("amcl.bin_yaw", c.amcl.kld.bin_yaw);
  v.integer("amcl.n_min", c.amcl.kld.n_min);
  v.integer("amcl.n_max", c.amcl.kld.n_max);
  v.real("amcl.update_distance", c.amcl.update_min_distance);
  v.real("amcl.update_angle", c.amcl.update_min_angle);
  v.real("amcl.init_sigma_xy", c.amcl_init_sigma_xy);
  v.real("amcl.init_sigma_yaw", c.amcl_init_sigma_yaw);

  v.real("costmap.inscribed_radius", c.inscribed_radius);
  v.real("costmap.decay_radius", c.decay_radius);

  v.real("dwa.v_max", c.dwa.v_max);
  v.real("dwa.omega_max", c.dwa.omega_max);
  v.real("dwa.accel_v", c.dwa.accel_v);
  v.real("dwa.accel_omega", c.dwa.accel_omega);
  v.real("dwa.horizon", c.dwa.horizon);
  v.real("dwa.dt_traj", c.dwa.dt_traj);
  v.integer("dwa.n_v", c.dwa.n_v);
  v.integer("dwa.n_omega", c.dwa.n_omega);
  v.real("dwa.w_heading", c.dwa.w_heading);
  v.real("dwa.w_clearance", c.dwa.w_clearance);
  v.real("dwa.w_velocity", c.dwa.w_velocity);
  v.real("dwa.clearance_margin", c.dwa.clearance_margin);
  v.real("dwa.clearance_cap", c.dwa.clearance_cap);
  v.real("dwa.lookahead", c.dwa.lookahead);

  v.real("nav.goal_tolerance", c.goal_tolerance);
  v.real("nav.yaw_tolerance", c.yaw_tolerance);
  v.integer("nav.replan_ticks", c.replan_ticks);
  v.integer("nav.stop_timeout_ticks", c.stop_timeout_ticks);
  v.integer("nav.goal_timeout_ticks", c.goal_timeout_ticks);
  v.real("nav.goal_search_radius", c.goal_search_radius);
  v.real("nav.start_search_radius", c.start_search_radius);

  v.integer("explore.min_cluster_size", c.min_cluster_size);
  v.real("explore.w_dist", c.w_dist);
  v.optional_real("explore.w_size", c.w_size);
  v.real("explore.blacklist_radius", c.blacklist_radius);
  v.integer("explore.blacklist_failures", c.blacklist_failures);
  v.integer("explore.candidates_per_cluster", c.candidates_per_cluster);

  v.flag("survey.enabled", c.survey_enabled);
  v.real("survey.spacing", c.survey_spacing);
  v.real("survey.coverage_target", c.survey_coverage_target);
  v.integer("survey.max_cost", c.survey_max_cost);

  v.real("detector.rate_hz", c.detector.rate_hz);
  v.real("detector.leaf_recall", c.detector.leaf_recall);
  v.real("detector.fov_radius", c.detector.fov_radius);
  v.row("detector.confusion_brown", c.detector.confusion[0]);
  v.row("detector.confusion_yellow", c.detector.confusion[1]);
  v.row("detector.confusion_healthy", c.detector.confusion[2]);
  v.integer("detector.min_observations", c.min_observations);

  v.real("pid.kp", c.pid.kp);
  v.real("pid.ki", c.pid.ki);
  v.real("pid.kd", c.pid.kd);
  v.real("pid.i_max", c.pid.i_max);
  v.real("pid.vz_max", c.pid.vz_max);

  v.flag("demo.enabled", c.demo_enabled);
  v.pose("demo.a", c.demo_a);
  v.pose("demo.b", c.demo_b);

  v.flag("output.particles", c.dump_particles);
}

}  // namespace

void MissionConfig::sync_shared() {
  slam.motion = odometry_noise;
  amcl.motion = odometry_noise;
  amcl.likelihood = slam.likelihood;
  amcl.thresholds = slam.thresholds;
  dwa.robot_radius = robot_radius;
  dwa.control_period = tick_seconds;
}

void MissionConfig::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ConfigError(std::string("invalid configuration: ") + what);
    }
  };
  require(tick_seconds > 0.0, "sim.tick_seconds must be positive");
  require(lidar_every >= 1, "sim.lidar_every must be at least 1");
  require(max_ticks >= 1, "sim.max_ticks must be at least 1");
  require(altitude > 0.0, "sim.altitude must be positive");
  require(altitude_lag >= 0.0, "sim.altitude_lag must be nonnegative");
  require(robot_radius > 0.0, "sim.robot_radius must be positive");
  require(lidar.beams >= 1 && lidar.angle_increment > 0.0 && lidar.range_max > 0.0 && lidar.range_sigma >= 0.0,
          "lidar settings");
  require(slam.particles >= 1, "slam.particles must be at least 1");
  require(slam.thresholds.free < 0.5 && slam.thresholds.occupied > 0.5, "slam thresholds must straddle 0.5");
  require(slam.likelihood.sigma_hit > 0.0 && slam.likelihood.floor > 0.0 && slam.likelihood.decimation >= 1,
          "slam likelihood settings");
  require(inscribed_radius >= robot_radius, "costmap.inscribed_radius must cover sim.robot_radius");
  require(decay_radius > 0.0, "costmap.decay_radius must be positive");
  require(goal_tolerance > 0.0 && yaw_tolerance > 0.0, "nav tolerances must be positive");
  require(min_cluster_size >= 1, "explore.min_cluster_size must be at least 1");
  require(survey_spacing > 0.0, "survey.spacing must be positive");
  require(survey_max_cost >= 0 && survey_max_cost < kInscribedCost, "survey.max_cost must be in [0, 253]");
  require(min_observations >= 1, "detector.min_observations must be at least 1");
  require(pid.i_max >= 0.0 && pid.vz_max > 0.0, "pid limits");
  try {
    dwa.validate();
    amcl.kld.validate();
    detector.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

MissionConfig parse_mission_config(const std::string& text) {
  auto file = KeyValueFile::parse(text);
  MissionConfig config;
  Reader reader(file);
  visit(reader, config);
  file.reject_unconsumed();
  config.sync_shared();
  config.validate();
  return config;
}

MissionConfig load_mission_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_mission_config(text.str());
}

std::string serialize_mission_config(const MissionConfig& config) {
  Writer writer;
  visit(writer, config);
  std::string out;
  for (const auto& [key, value] : writer.out) {
    out += key + " = " + value + "\n";
  }
  return out;
}

std::string config_hash(const MissionConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize_mission_config(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace fieldnav
