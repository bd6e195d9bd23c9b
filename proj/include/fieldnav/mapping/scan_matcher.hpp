#pragma once

#include "fieldnav/mapping/likelihood_field.hpp"

namespace fieldnav {

struct ScanMatchConfig {
  double step_xy{0.05};
  double step_yaw{0.02};
  int halvings{6};
  int max_iterations_per_level{100};
  /// Search window around the seed. Without it the ascent can slide metres along a corridor whose
  /// walls constrain only one axis.
  double max_offset_xy{0.3};
  double max_offset_yaw{0.15};
  /// Optional Gaussian prior around the seed (0 disables): the ascent maximizes score minus
  /// 0.5 * (offset / sigma)^2 per axis, so directions the scan does not constrain stay with odometry.
  double prior_sigma_xy{0.0};
  double prior_sigma_yaw{0.0};
};

struct MatchResult {
  Pose pose;
  double score{0.0};  ///< likelihood-field score at `pose`, without the prior
};

/// Greedy coordinate ascent on the likelihood field over (x, y, yaw).
///
/// At each step size every single-axis move (+-x, +-y, +-yaw) is tried and the best strict
/// improvement taken; when none improves the step is halved. The returned score is never below the
/// seed's, and it never leaves the search window. A map without Occupied cells returns the seed untouched.
MatchResult scan_match(const LikelihoodField& field, const ScanPoints& points, const Pose& seed,
                       const ScanMatchConfig& config = {});

}  // namespace fieldnav
