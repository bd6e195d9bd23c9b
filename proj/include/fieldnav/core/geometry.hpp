#pragma once

#include <cmath>
#include <numbers>

namespace fieldnav {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) {
    wrapped += 2.0 * kPi;
  }
  return wrapped;
}

struct Point2 {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Planar pose plus altitude. Yaw lives in (-pi, pi].
struct Pose {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
  double z{0.0};

  [[nodiscard]] Point2 position() const { return {x, y}; }

  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Body-frame velocity command.
struct Twist {
  double vx{0.0};
  double vy{0.0};
  double omega{0.0};
  double vz{0.0};

  friend bool operator==(const Twist&, const Twist&) = default;
};

inline double planar_distance(const Pose& a, const Pose& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Planar composition a (+) b: b expressed in a's frame, mapped to a's parent frame. Altitude is taken from b.
inline Pose compose(const Pose& a, const Pose& b) {
  const double c = std::cos(a.yaw);
  const double s = std::sin(a.yaw);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, normalize_angle(a.yaw + b.yaw), b.z};
}

/// Planar inverse composition: the pose of `to` expressed in the frame of `from`.
inline Pose relative(const Pose& from, const Pose& to) {
  const double c = std::cos(from.yaw);
  const double s = std::sin(from.yaw);
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  return {c * dx + s * dy, -s * dx + c * dy, normalize_angle(to.yaw - from.yaw), to.z};
}

inline Point2 transform_point(const Pose& frame, const Point2& p) {
  const double c = std::cos(frame.yaw);
  const double s = std::sin(frame.yaw);
  return {frame.x + c * p.x - s * p.y, frame.y + s * p.x + c * p.y};
}

}  // namespace fieldnav
