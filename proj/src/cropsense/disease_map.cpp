#include "fieldnav/cropsense/disease_map.hpp"

#include <algorithm>

#include "fieldnav/core/config_file.hpp"

namespace fieldnav {
namespace {

struct Tally {
  std::array<std::size_t, kCropClassCount> tp{};
  std::array<std::size_t, kCropClassCount> fp{};
  std::array<std::size_t, kCropClassCount> fn{};

  void add(CropClass truth, std::optional<CropClass> predicted) {
    const auto t = static_cast<std::size_t>(truth);
    if (predicted && *predicted == truth) {
      ++tp[t];
      return;
    }
    ++fn[t];
    if (predicted) {
      ++fp[static_cast<std::size_t>(*predicted)];
    }
  }

  [[nodiscard]] std::array<ClassScores, kCropClassCount> scores() const {
    std::array<ClassScores, kCropClassCount> out;
    for (std::size_t k = 0; k < out.size(); ++k) {
      ClassScores& s = out[k];
      s.support = tp[k] + fn[k];
      if (tp[k] + fp[k] > 0) {
        s.precision = static_cast<double>(tp[k]) / static_cast<double>(tp[k] + fp[k]);
      }
      if (s.support > 0) {
        s.recall = static_cast<double>(tp[k]) / static_cast<double>(s.support);
      }
      if (s.precision && s.recall) {
        const double sum = *s.precision + *s.recall;
        s.f1 = sum > 0.0 ? 2.0 * *s.precision * *s.recall / sum : 0.0;
      }
    }
    return out;
  }
};

}  // namespace

std::string_view to_string(FusedLabel label) {
  switch (label) {
    case FusedLabel::kBrown:
      return "brown";
    case FusedLabel::kYellow:
      return "yellow";
    case FusedLabel::kHealthy:
      return "healthy";
    case FusedLabel::kUnresolved:
      return "unresolved";
  }
  return "unresolved";
}

DiseaseMap::DiseaseMap(const World& world, int min_observations)
    : geometry_(world.geometry()),
      crop_(world.geometry().size(), 0),
      counts_(world.geometry().size()),
      min_observations_(std::max(min_observations, 1)) {
  for (std::size_t i = 0; i < crop_.size(); ++i) {
    if (crop_class(world.cells()[i])) {
      crop_[i] = 1;
      ++crop_cell_count_;
    }
  }
}

void DiseaseMap::fuse(std::span<const DiseaseObservation> observations) {
  for (const auto& o : observations) {
    if (!geometry_.contains(o.cell) || !is_crop(o.cell)) {
      ++rejected_;
      continue;
    }
    ++counts_[geometry_.index(o.cell)][static_cast<std::size_t>(o.predicted)];
    ++accepted_;
  }
}

std::uint32_t DiseaseMap::total(const Cell& c) const {
  const auto& n = counts(c);
  return n[0] + n[1] + n[2];
}

std::optional<FusedLabel> DiseaseMap::label(const Cell& c) const {
  if (static_cast<int>(total(c)) < min_observations_) {
    return std::nullopt;
  }
  const auto& n = counts(c);
  const auto top = std::max_element(n.begin(), n.end());
  if (std::count(n.begin(), n.end(), *top) > 1) {
    return FusedLabel::kUnresolved;
  }
  return static_cast<FusedLabel>(top - n.begin());
}

std::size_t DiseaseMap::fused_cells() const {
  std::size_t fused = 0;
  for (std::size_t i = 0; i < crop_.size(); ++i) {
    if (crop_[i] != 0 && label(geometry_.cell_at(i))) {
      ++fused;
    }
  }
  return fused;
}

DiseaseEvaluation evaluate(const DiseaseMap& map, const World& world) {
  DiseaseEvaluation e;
  Tally tally;
  const GridGeometry& g = world.geometry();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto truth = crop_class(world.cells()[i]);
    if (!truth) {
      continue;
    }
    ++e.crop_cells;
    const auto label = map.label(g.cell_at(i));
    if (!label) {
      continue;
    }
    ++e.fused_cells;
    std::optional<CropClass> predicted;
    if (*label == FusedLabel::kUnresolved) {
      ++e.unresolved_cells;
    } else {
      predicted = static_cast<CropClass>(*label);
    }
    tally.add(*truth, predicted);
  }
  e.classes = tally.scores();
  e.coverage = e.crop_cells > 0 ? static_cast<double>(e.fused_cells) / static_cast<double>(e.crop_cells) : 0.0;
  return e;
}

std::array<ClassScores, kCropClassCount> score_predictions(std::span<const std::pair<CropClass, CropClass>> pairs) {
  Tally tally;
  for (const auto& [truth, predicted] : pairs) {
    tally.add(truth, predicted);
  }
  return tally.scores();
}

std::string disease_csv(const DiseaseMap& map, const World& world) {
  std::string out = "cell_x,cell_y,world_x,world_y,true_class,fused_class,n_obs,n_brown,n_yellow,n_healthy\n";
  const GridGeometry& g = world.geometry();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto truth = crop_class(world.cells()[i]);
    if (!truth) {
      continue;
    }
    const Cell c = g.cell_at(i);
    const Point2 p = g.center(c);
    const auto label = map.label(c);
    const auto& n = map.counts(c);
    out += std::to_string(c.x) + "," + std::to_string(c.y) + "," + format_double(p.x) + "," + format_double(p.y) +
           "," + std::string(to_string(*truth)) + "," + (label ? std::string(to_string(*label)) : "none") + "," +
           std::to_string(map.total(c)) + "," + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," +
           std::to_string(n[2]) + "\n";
  }
  return out;
}

}  // namespace fieldnav
