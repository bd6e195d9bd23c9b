#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldnav/core/odometry.hpp"
#include "fieldnav/mapping/likelihood_field.hpp"

namespace fieldnav {

struct McParticle {
  Pose pose{};
  double weight{1.0};
};

/// KLD-sampling bound parameters and the histogram used to count occupied bins.
struct KldConfig {
  double epsilon{0.05};  ///< bound on K-L divergence between sample and true posterior
  double delta{0.01};    ///< the bound holds with probability 1 - delta
  double bin_xy{0.5};
  double bin_yaw{kPi / 18.0};
  int n_min{100};
  int n_max{5000};

  /// Upper standard-normal quantile z_{1-delta}.
  [[nodiscard]] double z_quantile() const;
  void validate() const;
};

/// Particles needed so that, with probability 1 - delta, the K-L divergence between the sample-based
/// estimate and the true posterior over k occupied bins stays below epsilon (Wilson-Hilferty
/// approximation of the chi-square quantile), clamped to [n_min, n_max].
int kld_sample_size(std::size_t occupied_bins, const KldConfig& config);

/// Propagates every particle through an independently sampled odometry delta.
void motion_update(std::vector<McParticle>& particles, const OdometryDelta& delta, const OdometryNoise& noise,
                   Rng& rng);

/// Multiplies weights by exp(log-likelihood) and renormalizes. Weights stay finite and strictly
/// positive: per-update likelihood ratios are floored at exp(-700). Returns true when the weights
/// were unusable and had to be reset to uniform.
bool measurement_update(std::vector<McParticle>& particles, const LikelihoodField& field, const ScanPoints& points);

/// Draws with replacement, proportional to weight, until the sample holds kld_sample_size(k) particles
/// for the k histogram bins hit so far. Output weights are uniform.
std::vector<McParticle> kld_resample(std::span<const McParticle> particles, const KldConfig& config, Rng& rng);

struct PoseEstimate {
  Pose mean{};
  /// Covariance of (x, y, yaw); yaw residuals are wrapped around the circular mean.
  std::array<std::array<double, 3>, 3> covariance{};

  [[nodiscard]] double position_trace() const { return covariance[0][0] + covariance[1][1]; }
};

PoseEstimate estimate(std::span<const McParticle> particles);

std::vector<McParticle> sample_gaussian_cloud(const Pose& center, double sigma_xy, double sigma_yaw, int count,
                                              Rng& rng);

/// Uniform over the Free cells of a map, uniform yaw.
std::vector<McParticle> sample_uniform_free(const OccupancyGrid& map, int count, Rng& rng,
                                            const OccupancyThresholds& thresholds = {});

/// CSV rows "step,x,y,yaw,weight" (no header) for condensation plots.
std::string particles_csv(std::uint64_t step, std::span<const McParticle> particles);

struct AmclConfig {
  OdometryNoise motion{};
  KldConfig kld{};
  LikelihoodModel likelihood{};
  OccupancyThresholds thresholds{};
  double update_min_distance{0.1};
  double update_min_angle{0.05};
};

/// Stateful localizer against a fixed map: odometry in, pose estimate out.
class Amcl {
 public:
  Amcl(const OccupancyGrid& map, AmclConfig config);

  void initialize(std::vector<McParticle> particles, const Pose& odometry);

  /// Returns true when a filter update ran (enough motion since the last one).
  bool update(const Pose& odometry, const LaserScan& scan, Rng& rng);

  [[nodiscard]] PoseEstimate estimate() const { return fieldnav::estimate(particles_); }
  [[nodiscard]] const std::vector<McParticle>& particles() const { return particles_; }
  [[nodiscard]] std::uint64_t degeneracies() const { return degeneracies_; }
  [[nodiscard]] std::uint64_t updates() const { return updates_; }

 private:
  AmclConfig config_;
  LikelihoodField field_;
  std::vector<McParticle> particles_;
  std::optional<Pose> last_odometry_;
  std::uint64_t degeneracies_{0};
  std::uint64_t updates_{0};
};

}  // namespace fieldnav
