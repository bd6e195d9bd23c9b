#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fieldnav/core/geometry.hpp"
#include "fieldnav/core/random.hpp"
#include "fieldnav/simworld/world.hpp"

namespace fieldnav {

using ConfusionMatrix = std::array<std::array<double, kCropClassCount>, kCropClassCount>;

/// Statistics of the leaf detector + disease classifier, replayed as a sensor model.
struct DetectorProfile {
  double rate_hz{42.3};
  double leaf_recall{0.19};  ///< chance a crop cell in view yields a detection on a given frame
  /// Row = true class, column = predicted class (Brown, Yellow, Healthy).
  ConfusionMatrix confusion{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  double fov_radius{1.0};  ///< ground footprint radius at survey altitude

  /// Throws std::invalid_argument unless rows are stochastic (within 1e-9) and the scalars are in range.
  void validate() const;
};

/// Profile measured on the held-out leaf test set (112 brown, 116 yellow, 140 healthy images).
///
/// The classifier made exactly one mistake on that set, and the per-class scores (brown recall 0.99,
/// yellow precision 0.99, everything else 1.00) pin it down as one brown leaf called yellow.
DetectorProfile measured_detector_profile();

std::string serialize_profile(const DetectorProfile& profile);
DetectorProfile parse_profile(const std::string& text);

struct DiseaseObservation {
  Cell cell{};
  CropClass predicted{CropClass::kHealthy};
  std::uint64_t tick{0};
  Pose observer{};
};

/// Detector frames completed during tick `tick` of length `tick_seconds`:
/// floor(t1 * rate) - floor(t0 * rate) with t0 = tick * tick_seconds, t1 = t0 + tick_seconds.
int detection_frames(std::uint64_t tick, double tick_seconds, double rate_hz);

/// One detector frame: every crop cell whose centre lies within the footprint is detected with
/// probability leaf_recall, and detected cells get a class drawn from their confusion row.
std::vector<DiseaseObservation> observe(const World& world, const Pose& pose, const DetectorProfile& profile,
                                        std::uint64_t tick, Rng& rng);

/// Draws a predicted class from the confusion row of `truth`.
CropClass sample_prediction(const DetectorProfile& profile, CropClass truth, Rng& rng);

}  // namespace fieldnav
