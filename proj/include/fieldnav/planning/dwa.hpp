#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fieldnav/core/geometry.hpp"
#include "fieldnav/planning/astar.hpp"

namespace fieldnav {

struct DwaConfig {
  double v_max{0.8};
  bool allow_vy{false};  ///< reserved: path following samples (v, omega) arcs only
  double omega_max{1.5};
  double accel_v{1.0};
  double accel_omega{3.0};
  double horizon{1.5};
  double dt_traj{0.1};
  double control_period{0.05};
  int n_v{11};
  int n_omega{21};
  double w_heading{0.8};
  double w_clearance{0.1};
  double w_velocity{0.1};
  double robot_radius{0.3};
  /// Extra stand-off kept between the robot disc and obstacle points. It absorbs the distance covered
  /// during one control period before braking starts.
  double clearance_margin{0.1};
  /// Clearances beyond this are treated as equal when scoring.
  double clearance_cap{0.6};
  double lookahead{1.0};

  void validate() const;
};

struct DwaCandidate {
  double v{0.0};
  double omega{0.0};
  /// Arc length the robot can travel before its disc (radius + margin) would touch an obstacle point;
  /// the full simulated arc length when it never does.
  double free_distance{0.0};
  double clearance{0.0};  ///< smallest obstacle distance along the arc, capped
  double heading{0.0};    ///< 1 - |bearing error to the carrot at the arc end| / pi
  bool admissible{false};
  double score{0.0};  ///< weighted sum of normalized terms (admissible candidates only)
};

struct DwaWindow {
  std::vector<DwaCandidate> candidates;
  std::optional<std::size_t> chosen;
};

/// Scores every sampled (v, omega) in the dynamic window around the current velocity.
///
/// A pair is admissible when the robot can brake to a stop on its arc before the disc, grown by the
/// margin, reaches an obstacle point: v <= sqrt(2 a_v free_distance), and one control period at v
/// must not eat the whole margin. Turning on the spot (v = 0) is always admissible. When the robot
/// already sits inside the margin, a moving pair is admissible only if its whole arc keeps at least
/// the current clearance.
DwaWindow evaluate_window(const Pose& pose, const Twist& velocity, const Point2& carrot,
                          std::span<const Point2> obstacles, const DwaConfig& config);

/// First waypoint at least `lookahead` from the pose, searching forward from the waypoint nearest to
/// the pose; the last waypoint when none is that far.
Point2 carrot_point(const Path& path, const Pose& pose, double lookahead);

/// Best admissible (v, omega) as a body-frame twist, or nullopt (stop) when nothing is admissible.
std::optional<Twist> dwa_command(const Pose& pose, const Twist& velocity, const Path& path,
                                 std::span<const Point2> obstacles, const DwaConfig& config);

bool goal_reached(const Pose& pose, const Pose& goal, double tol_xy, double tol_yaw);

/// Pose after travelling `arc_length` along the constant-curvature arc of (v, omega) from `pose`.
Pose pose_along_arc(const Pose& pose, double v, double omega, double arc_length);

}  // namespace fieldnav
