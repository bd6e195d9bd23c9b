#include "fieldnav/localization/amcl.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fieldnav/core/config_file.hpp"
#include "fieldnav/kernels/kernels.hpp"

namespace fieldnav {

double KldConfig::z_quantile() const {
  return boost::math::quantile(boost::math::normal_distribution<double>{0.0, 1.0}, 1.0 - delta);
}

void KldConfig::validate() const {
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0) || n_min < 1 || n_min > n_max || !(bin_xy > 0.0) ||
      !(bin_yaw > 0.0)) {
    throw std::invalid_argument("invalid KLD sampling configuration");
  }
}

int kld_sample_size(std::size_t occupied_bins, const KldConfig& config) {
  if (occupied_bins <= 1) {
    return config.n_min;
  }
  const double k = static_cast<double>(occupied_bins - 1);
  const double a = 2.0 / (9.0 * k);
  const double c = 1.0 - a + std::sqrt(a) * config.z_quantile();
  const double n = std::ceil(k / (2.0 * config.epsilon) * c * c * c);
  return static_cast<int>(std::clamp(n, static_cast<double>(config.n_min), static_cast<double>(config.n_max)));
}

void motion_update(std::vector<McParticle>& particles, const OdometryDelta& delta, const OdometryNoise& noise,
                   Rng& rng) {
  for (auto& p : particles) {
    p.pose = apply_odometry(p.pose, sample_odometry(delta, noise, rng));
  }
}

bool measurement_update(std::vector<McParticle>& particles, const LikelihoodField& field, const ScanPoints& points) {
  constexpr double kMinLogRatio = -700.0;
  if (particles.empty()) {
    return false;
  }
  std::vector<double> scores(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    scores[i] = field.score(particles[i].pose, points);
  }
  const double peak = *std::max_element(scores.begin(), scores.end());

  std::vector<double> weights(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    weights[i] = particles[i].weight * std::exp(std::max(scores[i] - peak, kMinLogRatio));
  }
  const double total = kernels::active().moments(weights).sum;
  bool degenerate = false;
  if (!(total > 0.0) || !std::isfinite(total) ||
      std::any_of(weights.begin(), weights.end(), [](double w) { return !(w > 0.0) || !std::isfinite(w); })) {
    std::fill(weights.begin(), weights.end(), 1.0);
    degenerate = true;
    kernels::active().scale(weights, 1.0 / static_cast<double>(weights.size()));
  } else {
    kernels::active().scale(weights, 1.0 / total);
  }
  for (std::size_t i = 0; i < particles.size(); ++i) {
    particles[i].weight = weights[i];
  }
  return degenerate;
}

std::vector<McParticle> kld_resample(std::span<const McParticle> particles, const KldConfig& config, Rng& rng) {
  std::vector<McParticle> out;
  if (particles.empty()) {
    return out;
  }
  std::vector<double> cumulative(particles.size());
  double running = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    running += particles[i].weight;
    cumulative[i] = running;
  }
  std::uniform_real_distribution<double> uniform{0.0, running};

  std::set<std::array<long, 3>> bins;
  std::size_t needed = static_cast<std::size_t>(config.n_min);
  while (true) {
    const double u = uniform(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto index = std::min(static_cast<std::size_t>(it - cumulative.begin()), particles.size() - 1);
    const Pose& pose = particles[index].pose;
    out.push_back({pose, 1.0});

    const std::array<long, 3> bin{static_cast<long>(std::floor(pose.x / config.bin_xy)),
                                  static_cast<long>(std::floor(pose.y / config.bin_xy)),
                                  static_cast<long>(std::floor(pose.yaw / config.bin_yaw))};
    if (bins.insert(bin).second) {
      needed = static_cast<std::size_t>(kld_sample_size(bins.size(), config));
    }
    if (out.size() >= static_cast<std::size_t>(config.n_max) || out.size() >= needed) {
      break;
    }
  }
  const double w = 1.0 / static_cast<double>(out.size());
  for (auto& p : out) {
    p.weight = w;
  }
  return out;
}

PoseEstimate estimate(std::span<const McParticle> particles) {
  PoseEstimate e;
  if (particles.empty()) {
    throw std::invalid_argument("estimate: empty particle set");
  }
  double total = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  double sc = 0.0;
  double ss = 0.0;
  for (const auto& p : particles) {
    total += p.weight;
    sx += p.weight * p.pose.x;
    sy += p.weight * p.pose.y;
    sc += p.weight * std::cos(p.pose.yaw);
    ss += p.weight * std::sin(p.pose.yaw);
  }
  e.mean = {sx / total, sy / total, normalize_angle(std::atan2(ss, sc)), particles.front().pose.z};

  for (const auto& p : particles) {
    const double w = p.weight / total;
    const std::array<double, 3> d{p.pose.x - e.mean.x, p.pose.y - e.mean.y, normalize_angle(p.pose.yaw - e.mean.yaw)};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        e.covariance[r][c] += w * d[r] * d[c];
      }
    }
  }
  return e;
}

std::vector<McParticle> sample_gaussian_cloud(const Pose& center, double sigma_xy, double sigma_yaw, int count,
                                              Rng& rng) {
  std::normal_distribution<double> unit{0.0, 1.0};
  std::vector<McParticle> particles(static_cast<std::size_t>(count));
  for (auto& p : particles) {
    p.pose.x = center.x + sigma_xy * unit(rng);
    p.pose.y = center.y + sigma_xy * unit(rng);
    p.pose.yaw = normalize_angle(center.yaw + sigma_yaw * unit(rng));
    p.pose.z = center.z;
    p.weight = 1.0 / count;
  }
  return particles;
}

std::vector<McParticle> sample_uniform_free(const OccupancyGrid& map, int count, Rng& rng,
                                            const OccupancyThresholds& thresholds) {
  const auto classes = map.classify(thresholds);
  std::vector<std::size_t> free_cells;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == CellClass::kFree) {
      free_cells.push_back(i);
    }
  }
  if (free_cells.empty()) {
    throw std::invalid_argument("map has no free cells to initialize particles in");
  }
  const GridGeometry& g = map.geometry();
  std::uniform_int_distribution<std::size_t> pick{0, free_cells.size() - 1};
  std::uniform_real_distribution<double> offset{0.0, g.resolution};
  std::uniform_real_distribution<double> heading{-kPi, kPi};
  std::vector<McParticle> particles(static_cast<std::size_t>(count));
  for (auto& p : particles) {
    const Cell c = g.cell_at(free_cells[pick(rng)]);
    p.pose = {g.origin.x + c.x * g.resolution + offset(rng), g.origin.y + c.y * g.resolution + offset(rng),
              normalize_angle(heading(rng)), 0.0};
    p.weight = 1.0 / count;
  }
  return particles;
}

std::string particles_csv(std::uint64_t step, std::span<const McParticle> particles) {
  std::string out;
  for (const auto& p : particles) {
    out += std::to_string(step) + "," + format_double(p.pose.x) + "," + format_double(p.pose.y) + "," +
           format_double(p.pose.yaw) + "," + format_double(p.weight) + "\n";
  }
  return out;
}

Amcl::Amcl(const OccupancyGrid& map, AmclConfig config)
    : config_(config), field_(map, config.likelihood, config.thresholds) {
  config_.kld.validate();
}

void Amcl::initialize(std::vector<McParticle> particles, const Pose& odometry) {
  particles_ = std::move(particles);
  last_odometry_ = odometry;
}

bool Amcl::update(const Pose& odometry, const LaserScan& scan, Rng& rng) {
  if (!last_odometry_) {
    last_odometry_ = odometry;
    return false;
  }
  const OdometryDelta delta = odometry_delta(*last_odometry_, odometry);
  const double turned = std::abs(normalize_angle(odometry.yaw - last_odometry_->yaw));
  if (delta.trans < config_.update_min_distance && turned < config_.update_min_angle) {
    return false;
  }
  motion_update(particles_, delta, config_.motion, rng);
  if (measurement_update(particles_, field_, scan_points(scan, config_.likelihood.decimation, config_.likelihood.endpoint_shift))) {
    ++degeneracies_;
  }
  particles_ = kld_resample(particles_, config_.kld, rng);
  for (auto& p : particles_) {
    p.pose.z = odometry.z;
  }
  last_odometry_ = odometry;
  ++updates_;
  return true;
}

}  // namespace fieldnav
