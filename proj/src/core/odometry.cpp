#include "fieldnav/core/odometry.hpp"

#include <algorithm>
#include <cmath>

namespace fieldnav {
namespace {

// Rotation magnitude used for noise scaling. Backward motion shows up as rot1 near +-pi; treat it
// like forward motion so reversing does not explode the rotational noise.
double noise_angle(double a) { return std::min(std::abs(a), std::abs(kPi - std::abs(a))); }

}  // namespace

OdometryDelta odometry_delta(const Pose& from, const Pose& to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  OdometryDelta delta;
  delta.trans = std::hypot(dx, dy);
  delta.rot1 = delta.trans > 1e-9 ? normalize_angle(std::atan2(dy, dx) - from.yaw) : 0.0;
  delta.rot2 = normalize_angle(to.yaw - from.yaw - delta.rot1);
  return delta;
}

Pose apply_odometry(const Pose& pose, const OdometryDelta& delta) {
  const double heading = pose.yaw + delta.rot1;
  return {pose.x + delta.trans * std::cos(heading), pose.y + delta.trans * std::sin(heading),
          normalize_angle(pose.yaw + delta.rot1 + delta.rot2), pose.z};
}

OdometryStddev odometry_stddev(const OdometryDelta& delta, const OdometryNoise& noise) {
  const double r1 = noise_angle(delta.rot1);
  const double r2 = noise_angle(delta.rot2);
  const double t = delta.trans;
  return {std::sqrt(noise.alpha1 * r1 * r1 + noise.alpha2 * t * t),
          std::sqrt(noise.alpha3 * t * t + noise.alpha4 * (r1 * r1 + r2 * r2)),
          std::sqrt(noise.alpha1 * r2 * r2 + noise.alpha2 * t * t)};
}

OdometryDelta sample_odometry(const OdometryDelta& delta, const OdometryNoise& noise, Rng& rng) {
  const OdometryStddev sigma = odometry_stddev(delta, noise);
  std::normal_distribution<double> unit{0.0, 1.0};
  OdometryDelta noisy = delta;
  noisy.rot1 -= sigma.rot1 * unit(rng);
  noisy.trans -= sigma.trans * unit(rng);
  noisy.rot2 -= sigma.rot2 * unit(rng);
  return noisy;
}

}  // namespace fieldnav
