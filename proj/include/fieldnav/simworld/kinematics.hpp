#pragma once

#include "fieldnav/core/geometry.hpp"

namespace fieldnav {

/// Exact integration of a constant body-frame twist over dt (holonomic planar motion plus a
/// decoupled vertical axis). Altitude is clamped at the ground.
Pose step_kinematics(const Pose& pose, const Twist& cmd, double dt);

}  // namespace fieldnav
