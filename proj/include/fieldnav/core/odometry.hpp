#pragma once

#include "fieldnav/core/geometry.hpp"
#include "fieldnav/core/random.hpp"

namespace fieldnav {

/// Relative motion in rotate-translate-rotate form.
struct OdometryDelta {
  double rot1{0.0};
  double trans{0.0};
  double rot2{0.0};
};

/// Noise coefficients of the odometry motion model: alpha1 rot<-rot, alpha2 rot<-trans,
/// alpha3 trans<-trans, alpha4 trans<-rot. Standard deviations are
///   sigma_rot1  = sqrt(alpha1 * rot1^2 + alpha2 * trans^2)
///   sigma_trans = sqrt(alpha3 * trans^2 + alpha4 * (rot1^2 + rot2^2))
///   sigma_rot2  = sqrt(alpha1 * rot2^2 + alpha2 * trans^2)
struct OdometryNoise {
  double alpha1{0.05};
  double alpha2{0.05};
  double alpha3{0.05};
  double alpha4{0.05};
};

struct OdometryStddev {
  double rot1{0.0};
  double trans{0.0};
  double rot2{0.0};
};

OdometryDelta odometry_delta(const Pose& from, const Pose& to);

/// Noiseless application of a delta; altitude is preserved.
Pose apply_odometry(const Pose& pose, const OdometryDelta& delta);

OdometryStddev odometry_stddev(const OdometryDelta& delta, const OdometryNoise& noise);

/// Draws a perturbed delta from the motion model.
OdometryDelta sample_odometry(const OdometryDelta& delta, const OdometryNoise& noise, Rng& rng);

}  // namespace fieldnav
