#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fieldnav/mission/config.hpp"
#include "fieldnav/simworld/world.hpp"

namespace fieldnav {

enum class MissionPhase : std::uint8_t { kTakeoff, kExplore, kSurvey, kDemo, kDone };

std::string_view to_string(MissionPhase phase);

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitBudgetExhausted = 2;
inline constexpr int kExitSlamDegeneracy = 3;
inline constexpr int kExitInputError = 4;

struct TrajectorySample {
  std::uint64_t tick{0};
  MissionPhase phase{MissionPhase::kTakeoff};
  Pose truth{};
  Pose estimate{};
};

struct MapFidelity {
  std::size_t observed_cells{0};  ///< ground-truth cells hit or crossed by at least `min_beams` beams
  std::size_t correct_cells{0};   ///< of those, Occupied where the world has an obstacle, Free elsewhere
  [[nodiscard]] double fraction() const {
    return observed_cells > 0 ? static_cast<double>(correct_cells) / static_cast<double>(observed_cells) : 0.0;
  }
};

MapFidelity map_fidelity(const OccupancyGrid& map, const World& world, int min_beams = 3,
                         const OccupancyThresholds& thresholds = {});

/// Non-obstacle cells 4-connected to the start cell.
std::vector<std::uint8_t> reachable_free_cells(const World& world, const Point2& start);

/// Share of reachable free cells that the map classifies as Free.
double reachable_free_classified(const OccupancyGrid& map, const World& world, const Point2& start,
                                 const OccupancyThresholds& thresholds = {});

struct MissionResult {
  int exit_code{kExitSuccess};
  MissionPhase final_phase{MissionPhase::kTakeoff};
  std::uint64_t ticks{0};

  bool exploration_done{false};
  double exploration_coverage{0.0};  ///< reachable free cells classified Free when exploration ended
  MapFidelity fidelity{};
  std::uint64_t collisions{0};
  bool demo_reached{false};
  std::uint64_t demo_collisions{0};
  std::size_t unknown_increases{0};  ///< ticks on which the published map gained Unknown cells

  OccupancyGrid final_map;
  std::vector<TrajectorySample> trajectory;

  /// Output files by name: report.json, timing.json, map.pgm, map.meta, trajectory.ppm,
  /// trajectory.csv, disease.csv, frontiers_<n>.csv, demo_path.csv, particles_<tick>.csv.
  std::map<std::string, std::string> artifacts;

  [[nodiscard]] const std::string& report_json() const { return artifacts.at("report.json"); }
};

/// Runs the full mission: takeoff, exploration with SLAM, survey sweep, point-to-point demo.
MissionResult run_mission(const MissionConfig& config, const World& world, std::uint64_t seed);

void write_artifacts(const MissionResult& result, const std::filesystem::path& directory);

/// Redraws trajectory.ppm from map.pgm/map.meta, trajectory.csv and disease.csv in `directory`.
std::string render_from_outputs(const std::filesystem::path& directory);

}  // namespace fieldnav
