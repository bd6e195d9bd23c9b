#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fieldnav/core/odometry.hpp"
#include "fieldnav/mapping/likelihood_field.hpp"
#include "fieldnav/mapping/occupancy_grid.hpp"
#include "fieldnav/mapping/scan_matcher.hpp"

namespace fieldnav {

struct RbpfConfig {
  int particles{30};
  double resample_threshold{0.5};  ///< resample when N_eff < threshold * N
  OdometryNoise motion{};
  InverseSensorModel sensor{};
  OccupancyThresholds thresholds{};
  LikelihoodModel likelihood{};
  ScanMatchConfig matcher{};
  bool scan_matching{true};
  bool record_trajectory{false};
};

/// One trajectory hypothesis with the map conditioned on it.
struct SlamParticle {
  Pose pose{};
  double weight{1.0};
  OccupancyGrid map;
  std::vector<Pose> trajectory;

  /// Likelihood field of `map`, rebuilt when the map revision moves on. Shared between copies
  /// after resampling; it is immutable, so sharing does not break value semantics.
  std::shared_ptr<const LikelihoodField> field;

  const LikelihoodField& likelihood_field(const LikelihoodModel& model, const OccupancyThresholds& thresholds);
};

struct RbpfStep {
  double n_eff{0.0};
  bool resampled{false};
  bool degenerate{false};  ///< weights collapsed and were reset to uniform
};

std::vector<SlamParticle> make_slam_particles(const GridGeometry& geometry, const Pose& start, int count);

/// Propagate by sampled odometry, refine by scan matching, reweight, integrate, resample if needed.
RbpfStep rbpf_update(std::vector<SlamParticle>& particles, const OdometryDelta& odometry, const LaserScan& scan,
                     const RbpfConfig& config, Rng& rng);

/// 1 / sum(w^2) of normalized weights.
double effective_sample_size(std::span<const double> weights);

/// Systematic resampling with one random offset; returns the selected source indices.
std::vector<std::size_t> low_variance_resample(std::span<const double> weights, std::size_t count, Rng& rng);

/// Highest weight wins; ties go to the lowest index.
std::size_t best_particle(std::span<const SlamParticle> particles);
const OccupancyGrid& best_map(std::span<const SlamParticle> particles);

}  // namespace fieldnav
