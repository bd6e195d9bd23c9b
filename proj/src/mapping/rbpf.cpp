#include "fieldnav/mapping/rbpf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fieldnav/kernels/kernels.hpp"

namespace fieldnav {

const LikelihoodField& SlamParticle::likelihood_field(const LikelihoodModel& model,
                                                      const OccupancyThresholds& thresholds) {
  if (!field) {
    field = std::make_shared<const LikelihoodField>(map, model, thresholds);
  } else if (field->source_revision() != map.revision()) {
    field = field->refreshed(map);
  }
  return *field;
}

std::vector<SlamParticle> make_slam_particles(const GridGeometry& geometry, const Pose& start, int count) {
  if (count < 1) {
    throw std::invalid_argument("particle filter needs at least one particle");
  }
  std::vector<SlamParticle> particles(static_cast<std::size_t>(count));
  for (auto& p : particles) {
    p.pose = start;
    p.weight = 1.0 / count;
    p.map = OccupancyGrid(geometry);
  }
  return particles;
}

double effective_sample_size(std::span<const double> weights) {
  const auto m = kernels::active().moments(weights);
  return m.sum_squares > 0.0 ? 1.0 / m.sum_squares : 0.0;
}

std::vector<std::size_t> low_variance_resample(std::span<const double> weights, std::size_t count, Rng& rng) {
  std::vector<std::size_t> picks;
  if (weights.empty() || count == 0) {
    return picks;
  }
  picks.reserve(count);
  const double spacing = 1.0 / static_cast<double>(count);
  std::uniform_real_distribution<double> offset{0.0, spacing};
  const double r = offset(rng);
  double cumulative = weights[0];
  std::size_t i = 0;
  for (std::size_t m = 0; m < count; ++m) {
    const double u = r + static_cast<double>(m) * spacing;
    while (u > cumulative && i + 1 < weights.size()) {
      ++i;
      cumulative += weights[i];
    }
    picks.push_back(i);
  }
  return picks;
}

RbpfStep rbpf_update(std::vector<SlamParticle>& particles, const OdometryDelta& odometry, const LaserScan& scan,
                     const RbpfConfig& config, Rng& rng) {
  if (particles.empty()) {
    throw std::invalid_argument("rbpf_update: empty particle set");
  }
  const std::size_t n = particles.size();
  const ScanPoints points = scan_points(scan, config.likelihood.decimation, config.likelihood.endpoint_shift);

  std::vector<double> log_weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    SlamParticle& p = particles[i];
    const double z = p.pose.z;
    p.pose = apply_odometry(p.pose, sample_odometry(odometry, config.motion, rng));
    p.pose.z = z;

    const LikelihoodField& field = p.likelihood_field(config.likelihood, config.thresholds);
    double score = 0.0;
    if (config.scan_matching) {
      const MatchResult match = scan_match(field, points, p.pose, config.matcher);
      p.pose = match.pose;
      score = match.score;
    } else {
      score = field.score(p.pose, points);
    }
    log_weights[i] = (p.weight > 0.0 ? std::log(p.weight) : -std::numeric_limits<double>::infinity()) + score;

    integrate_scan(p.map, p.pose, scan, config.sensor);
    if (config.record_trajectory) {
      p.trajectory.push_back(p.pose);
    }
  }

  RbpfStep step;
  const double peak = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::isfinite(peak) ? std::exp(log_weights[i] - peak) : 0.0;
  }
  const double total = kernels::active().moments(weights).sum;
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(n));
    step.degenerate = true;
  } else {
    kernels::active().scale(weights, 1.0 / total);
  }

  step.n_eff = effective_sample_size(weights);
  if (step.n_eff < config.resample_threshold * static_cast<double>(n)) {
    const auto picks = low_variance_resample(weights, n, rng);
    std::vector<SlamParticle> next;
    next.reserve(n);
    for (const std::size_t k : picks) {
      next.push_back(particles[k]);
      next.back().weight = 1.0 / static_cast<double>(n);
    }
    particles = std::move(next);
    step.resampled = true;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      particles[i].weight = weights[i];
    }
  }
  return step;
}

std::size_t best_particle(std::span<const SlamParticle> particles) {
  if (particles.empty()) {
    throw std::invalid_argument("best_particle: empty particle set");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < particles.size(); ++i) {
    if (particles[i].weight > particles[best].weight) {
      best = i;
    }
  }
  return best;
}

const OccupancyGrid& best_map(std::span<const SlamParticle> particles) {
  return particles[best_particle(particles)].map;
}

}  // namespace fieldnav
