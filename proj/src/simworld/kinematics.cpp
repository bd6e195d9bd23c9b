#include "fieldnav/simworld/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace fieldnav {

Pose step_kinematics(const Pose& pose, const Twist& cmd, double dt) {
  Pose next = pose;
  const double s0 = std::sin(pose.yaw);
  const double c0 = std::cos(pose.yaw);
  if (std::abs(cmd.omega) < 1e-9) {
    next.x += (cmd.vx * c0 - cmd.vy * s0) * dt;
    next.y += (cmd.vx * s0 + cmd.vy * c0) * dt;
    next.yaw = normalize_angle(pose.yaw + cmd.omega * dt);
  } else {
    const double yaw1 = pose.yaw + cmd.omega * dt;
    const double s1 = std::sin(yaw1);
    const double c1 = std::cos(yaw1);
    next.x += (cmd.vx * (s1 - s0) + cmd.vy * (c1 - c0)) / cmd.omega;
    next.y += (cmd.vx * (c0 - c1) + cmd.vy * (s1 - s0)) / cmd.omega;
    next.yaw = normalize_angle(yaw1);
  }
  next.z = std::max(0.0, pose.z + cmd.vz * dt);
  return next;
}

}  // namespace fieldnav
