#include "fieldnav/planning/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fieldnav/simworld/kinematics.hpp"

namespace fieldnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double ex = b.x - a.x;
  const double ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / len2, 0.0, 1.0);
  }
  return std::hypot(p.x - (a.x + t * ex), p.y - (a.y + t * ey));
}

double min_distance_to_segment(std::span<const Point2> obstacles, const Point2& a, const Point2& b) {
  double best = kInf;
  for (const Point2& o : obstacles) {
    best = std::min(best, point_segment_distance(o, a, b));
  }
  return best;
}

std::vector<double> samples(double lo, double hi, int count) {
  if (count <= 1 || hi <= lo) {
    return {count <= 1 ? 0.5 * (lo + hi) : lo};
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1);
  }
  return out;
}

void normalize_term(std::vector<DwaCandidate>& candidates, double DwaCandidate::*term, std::vector<double>& out) {
  double lo = kInf;
  double hi = -kInf;
  for (const auto& c : candidates) {
    if (c.admissible) {
      lo = std::min(lo, c.*term);
      hi = std::max(hi, c.*term);
    }
  }
  out.assign(candidates.size(), 0.0);
  if (!(hi > lo)) {
    return;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = (candidates[i].*term - lo) / (hi - lo);
  }
}

}  // namespace

void DwaConfig::validate() const {
  const bool ok = v_max > 0.0 && omega_max > 0.0 && accel_v > 0.0 && accel_omega > 0.0 && horizon > 0.0 &&
                  dt_traj > 0.0 && control_period > 0.0 && n_v >= 1 && n_omega >= 1 && w_heading >= 0.0 &&
                  w_clearance >= 0.0 && w_velocity >= 0.0 && robot_radius > 0.0 && clearance_margin >= 0.0 &&
                  clearance_cap > 0.0 && lookahead > 0.0;
  if (!ok) {
    throw std::invalid_argument("invalid dynamic-window configuration");
  }
}

Pose pose_along_arc(const Pose& pose, double v, double omega, double arc_length) {
  if (v <= 0.0 || arc_length <= 0.0) {
    return pose;
  }
  return step_kinematics(pose, Twist{v, 0.0, omega, 0.0}, arc_length / v);
}

DwaWindow evaluate_window(const Pose& pose, const Twist& velocity, const Point2& carrot,
                          std::span<const Point2> obstacles, const DwaConfig& config) {
  const double dt = config.control_period;
  const double v_lo = std::max(0.0, velocity.vx - config.accel_v * dt);
  const double v_hi = std::min(config.v_max, velocity.vx + config.accel_v * dt);
  const double w_lo = std::max(-config.omega_max, velocity.omega - config.accel_omega * dt);
  const double w_hi = std::min(config.omega_max, velocity.omega + config.accel_omega * dt);
  const int steps = std::max(1, static_cast<int>(std::lround(config.horizon / config.dt_traj)));
  const double r = config.robot_radius;
  const double guard = r + config.clearance_margin;

  // Only obstacles the disc could reach within the horizon matter.
  const Point2 here = pose.position();
  const double reach = std::max(v_hi, 0.0) * config.horizon + guard + config.clearance_cap;
  std::vector<Point2> near;
  for (const Point2& o : obstacles) {
    if (distance(o, here) <= reach) {
      near.push_back(o);
    }
  }
  double start_clearance = kInf;
  for (const Point2& o : near) {
    start_clearance = std::min(start_clearance, distance(o, here));
  }
  // Inside the margin already (sensor noise, a neighbour stepping closer): only arcs that never get
  // closer than now may move, and turning on the spot is always allowed.
  const bool inside = start_clearance < guard;
  const double contact = inside ? start_clearance : guard;
  const double v_limit_overshoot = (guard - r) / dt;

  DwaWindow window;
  std::vector<Point2> arc(static_cast<std::size_t>(steps) + 1);
  const auto v_samples = samples(v_lo, std::max(v_lo, v_hi), config.n_v);
  const auto w_samples = samples(w_lo, std::max(w_lo, w_hi), config.n_omega);
  for (const double v : v_samples) {
    for (const double w : w_samples) {
      DwaCandidate c;
      c.v = v;
      c.omega = w;

      Pose end = pose;
      double clearance = start_clearance;
      if (v > 0.0) {
        const Twist twist{v, 0.0, w, 0.0};
        arc[0] = here;
        for (int k = 1; k <= steps; ++k) {
          end = step_kinematics(pose, twist, k * config.dt_traj);
          arc[static_cast<std::size_t>(k)] = end.position();
        }
        // The true arc bulges away from each chord by at most its sagitta.
        double sagitta = 0.0;
        if (std::abs(w) > 1e-9) {
          sagitta = v / std::abs(w) * (1.0 - std::cos(0.5 * std::abs(w) * config.dt_traj));
        }
        c.free_distance = v * steps * config.dt_traj;
        bool touched = false;
        for (int k = 1; k <= steps; ++k) {
          const double d = min_distance_to_segment(near, arc[static_cast<std::size_t>(k - 1)],
                                                   arc[static_cast<std::size_t>(k)]) -
                           sagitta;
          clearance = std::min(clearance, d);
          if (!touched && d < contact) {
            c.free_distance = v * (k - 1) * config.dt_traj;
            touched = true;
          }
        }
      } else {
        end = step_kinematics(pose, Twist{0.0, 0.0, w, 0.0}, config.horizon);
        c.free_distance = 0.0;
      }
      c.clearance = std::min(clearance, config.clearance_cap);

      const Point2 tip = end.position();
      double bearing = 0.0;
      if (distance(tip, carrot) > 1e-9) {
        bearing = normalize_angle(std::atan2(carrot.y - tip.y, carrot.x - tip.x) - end.yaw);
      }
      c.heading = 1.0 - std::abs(bearing) / kPi;

      const bool approaches = c.free_distance < v * steps * config.dt_traj;
      if (v == 0.0) {
        c.admissible = true;
      } else if (inside) {
        c.admissible = !approaches;
      } else {
        c.admissible = v <= std::sqrt(2.0 * config.accel_v * c.free_distance) && v <= v_limit_overshoot;
      }
      window.candidates.push_back(c);
    }
  }

  std::vector<double> heading;
  std::vector<double> clearance;
  std::vector<double> speed;
  normalize_term(window.candidates, &DwaCandidate::heading, heading);
  normalize_term(window.candidates, &DwaCandidate::clearance, clearance);
  normalize_term(window.candidates, &DwaCandidate::v, speed);

  const double tie = 1e-9 * (std::abs(config.w_heading) + std::abs(config.w_clearance) + std::abs(config.w_velocity));
  for (std::size_t i = 0; i < window.candidates.size(); ++i) {
    DwaCandidate& c = window.candidates[i];
    if (!c.admissible) {
      continue;
    }
    c.score = config.w_heading * heading[i] + config.w_clearance * clearance[i] + config.w_velocity * speed[i];
    if (!window.chosen) {
      window.chosen = i;
      continue;
    }
    const DwaCandidate& b = window.candidates[*window.chosen];
    const bool better = c.score > b.score + tie;
    const bool tied = std::abs(c.score - b.score) <= tie;
    const bool preferred = std::abs(c.omega) < std::abs(b.omega) ||
                           (std::abs(c.omega) == std::abs(b.omega) && c.v < b.v);
    if (better || (tied && preferred)) {
      window.chosen = i;
    }
  }
  return window;
}

Point2 carrot_point(const Path& path, const Pose& pose, double lookahead) {
  if (path.points.empty()) {
    throw std::invalid_argument("carrot_point: empty path");
  }
  const Point2 here = pose.position();
  std::size_t nearest = 0;
  double nearest_d = kInf;
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const double d = distance(path.points[i], here);
    if (d < nearest_d) {
      nearest_d = d;
      nearest = i;
    }
  }
  for (std::size_t i = nearest; i < path.points.size(); ++i) {
    if (distance(path.points[i], here) >= lookahead) {
      return path.points[i];
    }
  }
  return path.points.back();
}

std::optional<Twist> dwa_command(const Pose& pose, const Twist& velocity, const Path& path,
                                 std::span<const Point2> obstacles, const DwaConfig& config) {
  const DwaWindow window = evaluate_window(pose, velocity, carrot_point(path, pose, config.lookahead), obstacles, config);
  if (!window.chosen) {
    return std::nullopt;
  }
  const DwaCandidate& c = window.candidates[*window.chosen];
  return Twist{c.v, 0.0, c.omega, 0.0};
}

bool goal_reached(const Pose& pose, const Pose& goal, double tol_xy, double tol_yaw) {
  return planar_distance(pose, goal) <= tol_xy && std::abs(normalize_angle(pose.yaw - goal.yaw)) <= tol_yaw;
}

}  // namespace fieldnav
