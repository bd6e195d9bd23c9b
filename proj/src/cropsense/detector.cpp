#include "fieldnav/cropsense/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fieldnav/core/config_file.hpp"

namespace fieldnav {
namespace {

constexpr std::array<const char*, kCropClassCount> kRowKeys{"confusion_brown", "confusion_yellow",
                                                            "confusion_healthy"};

}  // namespace

void DetectorProfile::validate() const {
  if (!(rate_hz > 0.0) || !(leaf_recall >= 0.0 && leaf_recall <= 1.0) || !(fov_radius >= 0.0)) {
    throw std::invalid_argument("detector profile: rate must be positive, leaf_recall in [0, 1]");
  }
  for (const auto& row : confusion) {
    double sum = 0.0;
    for (const double p : row) {
      if (!(p >= 0.0)) {
        throw std::invalid_argument("detector profile: negative confusion entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("detector profile: confusion row does not sum to 1");
    }
  }
}

DetectorProfile measured_detector_profile() {
  DetectorProfile p;
  p.rate_hz = 42.3;
  p.leaf_recall = 0.19;
  p.confusion = {{{111.0 / 112.0, 1.0 / 112.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  p.fov_radius = 1.0;
  return p;
}

std::string serialize_profile(const DetectorProfile& profile) {
  std::string out;
  out += "rate_hz = " + format_double(profile.rate_hz) + "\n";
  out += "leaf_recall = " + format_double(profile.leaf_recall) + "\n";
  out += "fov_radius = " + format_double(profile.fov_radius) + "\n";
  for (int r = 0; r < kCropClassCount; ++r) {
    out += std::string(kRowKeys[static_cast<std::size_t>(r)]) + " =";
    for (const double p : profile.confusion[static_cast<std::size_t>(r)]) {
      out += " " + format_double(p);
    }
    out += "\n";
  }
  return out;
}

DetectorProfile parse_profile(const std::string& text) {
  auto file = KeyValueFile::parse(text);
  DetectorProfile p;
  p.rate_hz = file.get_double("rate_hz", p.rate_hz);
  p.leaf_recall = file.get_double("leaf_recall", p.leaf_recall);
  p.fov_radius = file.get_double("fov_radius", p.fov_radius);
  for (std::size_t r = 0; r < kRowKeys.size(); ++r) {
    const std::vector<double> fallback(p.confusion[r].begin(), p.confusion[r].end());
    const auto row = file.get_doubles(kRowKeys[r], fallback);
    if (row.size() != kCropClassCount) {
      throw ConfigError(std::string(kRowKeys[r]) + ": expected 3 probabilities");
    }
    std::copy(row.begin(), row.end(), p.confusion[r].begin());
  }
  file.reject_unconsumed();
  p.validate();
  return p;
}

int detection_frames(std::uint64_t tick, double tick_seconds, double rate_hz) {
  const double t0 = static_cast<double>(tick) * tick_seconds;
  const double t1 = static_cast<double>(tick + 1) * tick_seconds;
  return static_cast<int>(std::floor(t1 * rate_hz) - std::floor(t0 * rate_hz));
}

CropClass sample_prediction(const DetectorProfile& profile, CropClass truth, Rng& rng) {
  const auto& row = profile.confusion[static_cast<std::size_t>(truth)];
  const double u = std::uniform_real_distribution<double>{0.0, 1.0}(rng);
  double cumulative = 0.0;
  for (int k = 0; k < kCropClassCount - 1; ++k) {
    cumulative += row[static_cast<std::size_t>(k)];
    if (u < cumulative) {
      return static_cast<CropClass>(k);
    }
  }
  // Round-off in the cumulative sum must not hand mass to a zero-probability last class.
  for (int k = kCropClassCount - 1; k >= 0; --k) {
    if (row[static_cast<std::size_t>(k)] > 0.0) {
      return static_cast<CropClass>(k);
    }
  }
  return truth;
}

std::vector<DiseaseObservation> observe(const World& world, const Pose& pose, const DetectorProfile& profile,
                                        std::uint64_t tick, Rng& rng) {
  std::vector<DiseaseObservation> out;
  const GridGeometry& g = world.geometry();
  const Cell lo = g.cell_of({pose.x - profile.fov_radius, pose.y - profile.fov_radius});
  const Cell hi = g.cell_of({pose.x + profile.fov_radius, pose.y + profile.fov_radius});
  std::bernoulli_distribution detected{profile.leaf_recall};
  for (int y = std::max(lo.y, 0); y <= std::min(hi.y, g.height - 1); ++y) {
    for (int x = std::max(lo.x, 0); x <= std::min(hi.x, g.width - 1); ++x) {
      const Cell c{x, y};
      const auto truth = crop_class(world.kind(c));
      if (!truth || distance(g.center(c), pose.position()) > profile.fov_radius) {
        continue;
      }
      if (detected(rng)) {
        out.push_back({c, sample_prediction(profile, *truth, rng), tick, pose});
      }
    }
  }
  return out;
}

}  // namespace fieldnav
