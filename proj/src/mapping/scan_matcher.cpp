#include "fieldnav/mapping/scan_matcher.hpp"

#include <array>
#include <cmath>

namespace fieldnav {

MatchResult scan_match(const LikelihoodField& field, const ScanPoints& points, const Pose& seed,
                       const ScanMatchConfig& config) {
  MatchResult best{seed, field.score(seed, points)};
  if (!field.has_obstacles() || points.size() == 0) {
    return best;
  }
  const double wxy = config.prior_sigma_xy > 0.0 ? 0.5 / (config.prior_sigma_xy * config.prior_sigma_xy) : 0.0;
  const double wyaw = config.prior_sigma_yaw > 0.0 ? 0.5 / (config.prior_sigma_yaw * config.prior_sigma_yaw) : 0.0;
  const auto penalty = [&](const Pose& p) {
    const double dx = p.x - seed.x;
    const double dy = p.y - seed.y;
    const double dyaw = normalize_angle(p.yaw - seed.yaw);
    return wxy * (dx * dx + dy * dy) + wyaw * dyaw * dyaw;
  };
  double best_objective = best.score;

  double step_xy = config.step_xy;
  double step_yaw = config.step_yaw;
  for (int level = 0; level <= config.halvings; ++level) {
    for (int iteration = 0; iteration < config.max_iterations_per_level; ++iteration) {
      const std::array<Pose, 6> moves{{
          {best.pose.x + step_xy, best.pose.y, best.pose.yaw, best.pose.z},
          {best.pose.x - step_xy, best.pose.y, best.pose.yaw, best.pose.z},
          {best.pose.x, best.pose.y + step_xy, best.pose.yaw, best.pose.z},
          {best.pose.x, best.pose.y - step_xy, best.pose.yaw, best.pose.z},
          {best.pose.x, best.pose.y, normalize_angle(best.pose.yaw + step_yaw), best.pose.z},
          {best.pose.x, best.pose.y, normalize_angle(best.pose.yaw - step_yaw), best.pose.z},
      }};
      MatchResult candidate = best;
      double candidate_objective = best_objective;
      for (const Pose& move : moves) {
        if (std::abs(move.x - seed.x) > config.max_offset_xy || std::abs(move.y - seed.y) > config.max_offset_xy ||
            std::abs(normalize_angle(move.yaw - seed.yaw)) > config.max_offset_yaw) {
          continue;
        }
        const double s = field.score(move, points);
        const double objective = s - penalty(move);
        if (objective > candidate_objective) {
          candidate = {move, s};
          candidate_objective = objective;
        }
      }
      if (!(candidate_objective > best_objective)) {
        break;
      }
      best = candidate;
      best_objective = candidate_objective;
    }
    step_xy *= 0.5;
    step_yaw *= 0.5;
  }
  return best;
}

}  // namespace fieldnav
