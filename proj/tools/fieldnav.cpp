// fieldnav: run a simulated mission, plan on a saved map, or re-render a mission's images.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "fieldnav/core/config_file.hpp"
#include "fieldnav/mapping/map_io.hpp"
#include "fieldnav/mission/config.hpp"
#include "fieldnav/mission/mission.hpp"
#include "fieldnav/planning/astar.hpp"
#include "fieldnav/planning/costmap.hpp"
#include "fieldnav/simworld/world.hpp"

namespace fs = std::filesystem;
using namespace fieldnav;

namespace {

Point2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("expected x,y but got '" + text + "'");
  }
  std::size_t used_x = 0;
  std::size_t used_y = 0;
  const std::string xs = text.substr(0, comma);
  const std::string ys = text.substr(comma + 1);
  const double x = std::stod(xs, &used_x);
  const double y = std::stod(ys, &used_y);
  if (used_x != xs.size() || used_y != ys.size()) {
    throw std::invalid_argument("expected x,y but got '" + text + "'");
  }
  return {x, y};
}

int run(const std::string& world_path, const std::string& config_path, std::uint64_t seed, const fs::path& out) {
  World world = [&] {
    try {
      return load_world_file(world_path);
    } catch (const WorldParseError& e) {
      throw std::invalid_argument(world_path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                  ": " + e.what());
    }
  }();
  const MissionConfig config = config_path.empty() ? MissionConfig{} : load_mission_config_file(config_path);
  const MissionResult result = run_mission(config, world, seed);
  write_artifacts(result, out);
  std::cerr << "fieldnav: phase " << to_string(result.final_phase) << " after " << result.ticks << " ticks, exit "
            << result.exit_code << "\n";
  return result.exit_code;
}

int plan(const std::string& map_path, const std::string& start_text, const std::string& goal_text, double radius,
         double decay) {
  const OccupancyGrid map = load_map(map_path);
  InflationConfig inflation;
  inflation.robot_radius = radius;
  inflation.decay_radius = decay;
  const Costmap costmap = inflate(map, inflation);
  const GridGeometry& g = map.geometry();
  const Point2 start = parse_point(start_text);
  const Point2 goal = parse_point(goal_text);
  const PlanResult result = plan_astar(costmap, g.cell_of(start), g.cell_of(goal));
  switch (result.status) {
    case PlanStatus::kOk:
      std::cout << path_csv(result.path);
      std::cerr << "fieldnav: " << result.path.cells.size() << " cells, cost " << format_double(result.path.total_cost())
                << "\n";
      return 0;
    case PlanStatus::kNoPath:
      std::cerr << "fieldnav: no path\n";
      return 1;
    case PlanStatus::kInvalidEndpoint:
      break;
  }
  throw std::invalid_argument("start or goal is outside the map or not traversable");
}

int replay(const fs::path& report_path, const std::string& out) {
  std::ifstream in(report_path);
  if (!in) {
    throw std::invalid_argument("cannot read " + report_path.string());
  }
  const auto report = nlohmann::json::parse(in);
  const fs::path dir = report_path.parent_path().empty() ? fs::path(".") : report_path.parent_path();
  const std::string image = render_from_outputs(dir);
  const fs::path target = out.empty() ? dir / "trajectory_replay.ppm" : fs::path(out);
  std::ofstream(target, std::ios::binary) << image;

  std::ifstream original(dir / "trajectory.ppm", std::ios::binary);
  std::ostringstream bytes;
  bytes << original.rdbuf();
  std::cout << "seed " << report.value("seed", std::uint64_t{0}) << ", status " << report.value("status", "?")
            << ": wrote " << target.string()
            << (original && bytes.str() == image ? " (matches trajectory.ppm)" : " (differs from trajectory.ppm)")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated UAV field mapping, navigation and crop-disease survey"};
  app.require_subcommand(1);

  std::string world_path;
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  auto* run_cmd = app.add_subcommand("run", "Run a full mission and write its outputs");
  run_cmd->add_option("--world", world_path, "World file")->required();
  run_cmd->add_option("--config", config_path, "Key-value config file (defaults if omitted)");
  run_cmd->add_option("--seed", seed, "Random seed");
  run_cmd->add_option("--out", out_dir, "Output directory");

  std::string map_path;
  std::string start_text;
  std::string goal_text;
  double radius = MissionConfig{}.inscribed_radius;
  double decay = MissionConfig{}.decay_radius;
  auto* plan_cmd = app.add_subcommand("plan", "Plan an A* path on a saved map; prints x,y rows");
  plan_cmd->add_option("--map", map_path, "Map PGM (metadata next to it)")->required();
  plan_cmd->add_option("--start", start_text, "Start x,y in meters")->required();
  plan_cmd->add_option("--goal", goal_text, "Goal x,y in meters")->required();
  plan_cmd->add_option("--inscribed-radius", radius, "Inflation inscribed radius");
  plan_cmd->add_option("--decay-radius", decay, "Inflation decay radius");

  std::string report_path;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "Re-render the overview image from a mission's outputs");
  replay_cmd->add_option("--report", report_path, "report.json of a finished run")->required();
  replay_cmd->add_option("--out", replay_out, "Image path (default: trajectory_replay.ppm next to the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*run_cmd) {
      return run(world_path, config_path, seed, out_dir);
    }
    if (*plan_cmd) {
      return plan(map_path, start_text, goal_text, radius, decay);
    }
    return replay(report_path, replay_out);
  } catch (const std::exception& e) {
    std::cerr << "fieldnav: " << e.what() << "\n";
    return kExitInputError;
  }
}
