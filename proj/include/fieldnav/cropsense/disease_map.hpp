#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldnav/cropsense/detector.hpp"

namespace fieldnav {

enum class FusedLabel : std::uint8_t { kBrown = 0, kYellow = 1, kHealthy = 2, kUnresolved = 3 };

std::string_view to_string(FusedLabel label);

/// Majority-vote fusion of detector observations per crop cell.
class DiseaseMap {
 public:
  explicit DiseaseMap(const World& world, int min_observations = 3);

  /// Adds the observations; ones that do not land on a crop cell are counted and dropped.
  void fuse(std::span<const DiseaseObservation> observations);

  [[nodiscard]] const std::array<std::uint32_t, kCropClassCount>& counts(const Cell& c) const {
    return counts_[geometry_.index(c)];
  }
  [[nodiscard]] std::uint32_t total(const Cell& c) const;

  /// Argmax of the counts once at least min_observations arrived; ties are Unresolved.
  [[nodiscard]] std::optional<FusedLabel> label(const Cell& c) const;

  [[nodiscard]] bool is_crop(const Cell& c) const { return crop_[geometry_.index(c)] != 0; }
  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] int min_observations() const { return min_observations_; }
  [[nodiscard]] std::uint64_t rejected() const { return rejected_; }
  [[nodiscard]] std::uint64_t accepted() const { return accepted_; }
  [[nodiscard]] std::size_t crop_cells() const { return crop_cell_count_; }
  [[nodiscard]] std::size_t fused_cells() const;

 private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> crop_;
  std::vector<std::array<std::uint32_t, kCropClassCount>> counts_;
  int min_observations_;
  std::size_t crop_cell_count_{0};
  std::uint64_t rejected_{0};
  std::uint64_t accepted_{0};
};

struct ClassScores {
  std::optional<double> precision;  ///< nullopt when the class was never predicted
  std::optional<double> recall;     ///< nullopt when the class never occurs among fused cells
  std::optional<double> f1;
  std::size_t support{0};
};

struct DiseaseEvaluation {
  std::array<ClassScores, kCropClassCount> classes;
  std::size_t crop_cells{0};
  std::size_t fused_cells{0};
  std::size_t unresolved_cells{0};
  double coverage{0.0};  ///< fused / crop cells; 0 for a field without crops
};

/// One-vs-rest scores per class over fused cells. Unresolved cells count as misses for their true class.
DiseaseEvaluation evaluate(const DiseaseMap& map, const World& world);

/// Scores a list of (true, predicted) pairs the same way; used for raw-observation statistics.
std::array<ClassScores, kCropClassCount> score_predictions(std::span<const std::pair<CropClass, CropClass>> pairs);

/// One row per crop cell: cell_x,cell_y,world_x,world_y,true_class,fused_class,n_obs,n_brown,n_yellow,n_healthy.
std::string disease_csv(const DiseaseMap& map, const World& world);

}  // namespace fieldnav
