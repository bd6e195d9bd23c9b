#include "fieldnav/mission/mission.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fieldnav/core/config_file.hpp"
#include "fieldnav/mapping/map_io.hpp"
#include "fieldnav/mission/nodes.hpp"
#include "fieldnav/mission/render.hpp"

namespace fieldnav {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSurveyGoalBase = 1'000'000;
constexpr std::uint64_t kDemoGoalBase = 2'000'000;

/// Independent, reproducible random stream per component.
Rng stream(std::uint64_t seed, std::uint32_t component) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), component};
  return Rng(seq);
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json scores_json(const ClassScores& s) {
  return Json{{"precision", optional_number(s.precision)},
              {"recall", optional_number(s.recall)},
              {"f1", optional_number(s.f1)},
              {"support", s.support}};
}

std::size_t count_unknown(const OccupancyGrid& map, const OccupancyThresholds& thresholds) {
  const auto classes = map.classify(thresholds);
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), CellClass::kUnknown));
}

std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
  std::string out = "tick,phase,x,y,yaw,z,est_x,est_y,est_yaw\n";
  for (const auto& s : samples) {
    out += std::to_string(s.tick) + "," + std::string(to_string(s.phase)) + "," + format_double(s.truth.x) + "," +
           format_double(s.truth.y) + "," + format_double(s.truth.yaw) + "," + format_double(s.truth.z) + "," +
           format_double(s.estimate.x) + "," + format_double(s.estimate.y) + "," + format_double(s.estimate.yaw) +
           "\n";
  }
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream fs(line);
    std::string field;
    while (std::getline(fs, field, ',')) {
      fields.push_back(field);
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::optional<FusedLabel> parse_label(const std::string& text) {
  for (const FusedLabel l : {FusedLabel::kBrown, FusedLabel::kYellow, FusedLabel::kHealthy, FusedLabel::kUnresolved}) {
    if (text == to_string(l)) {
      return l;
    }
  }
  return std::nullopt;
}

/// The overview image, drawn only from the written outputs so that replay reproduces it exactly.
std::string render_overview(const std::map<std::string, std::string>& files) {
  const auto find = [&](const std::string& name) -> const std::string* {
    const auto it = files.find(name);
    return it == files.end() ? nullptr : &it->second;
  };
  const std::string* pgm = find("map.pgm");
  const std::string* meta = find("map.meta");
  if (pgm == nullptr || meta == nullptr) {
    throw std::runtime_error("map.pgm and map.meta are required to render the overview");
  }
  const OccupancyGrid map = decode_map(*pgm, *meta);
  MapImage image(map, 4);

  if (const std::string* disease = find("disease.csv")) {
    for (const auto& row : csv_rows(*disease)) {
      if (row.size() >= 6) {
        if (const auto label = parse_label(row[5])) {
          image.fill_cell({std::stoi(row[0]), std::stoi(row[1])}, label_color(*label));
        }
      }
    }
  }
  if (const std::string* trajectory = find("trajectory.csv")) {
    std::vector<std::pair<std::string, std::vector<Point2>>> ordered;
    for (const auto& row : csv_rows(*trajectory)) {
      if (row.size() < 4) {
        continue;
      }
      if (ordered.empty() || ordered.back().first != row[1]) {
        ordered.emplace_back(row[1], std::vector<Point2>{});
      }
      ordered.back().second.push_back({std::stod(row[2]), std::stod(row[3])});
    }
    for (const auto& [phase, points] : ordered) {
      const Rgb color = phase == "explore" ? Rgb{30, 90, 220} : phase == "survey" ? Rgb{240, 140, 0} : Rgb{220, 30, 30};
      image.draw_polyline(points, color);
    }
  }
  if (const std::string* path = find("demo_path.csv")) {
    std::vector<Point2> points;
    for (const auto& row : csv_rows(*path)) {
      if (row.size() >= 2) {
        points.push_back({std::stod(row[0]), std::stod(row[1])});
      }
    }
    image.draw_polyline(points, {0, 200, 60});
    if (!points.empty()) {
      image.draw_marker(points.front(), 4, {0, 200, 60});
      image.draw_marker(points.back(), 4, {220, 30, 30});
    }
  }
  return image.encode_ppm();
}

}  // namespace

std::string_view to_string(MissionPhase phase) {
  switch (phase) {
    case MissionPhase::kTakeoff:
      return "takeoff";
    case MissionPhase::kExplore:
      return "explore";
    case MissionPhase::kSurvey:
      return "survey";
    case MissionPhase::kDemo:
      return "demo";
    case MissionPhase::kDone:
      return "done";
  }
  return "done";
}

MapFidelity map_fidelity(const OccupancyGrid& map, const World& world, int min_beams,
                         const OccupancyThresholds& thresholds) {
  if (!(map.geometry() == world.geometry())) {
    throw std::invalid_argument("map_fidelity: map and world grids differ");
  }
  MapFidelity f;
  const GridGeometry& g = world.geometry();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell c = g.cell_at(i);
    if (map.observations(c) < min_beams) {
      continue;
    }
    ++f.observed_cells;
    const CellClass k = map.classify(c, thresholds);
    const bool obstacle = world.cells()[i] == CellKind::kObstacle;
    if ((obstacle && k == CellClass::kOccupied) || (!obstacle && k == CellClass::kFree)) {
      ++f.correct_cells;
    }
  }
  return f;
}

std::vector<std::uint8_t> reachable_free_cells(const World& world, const Point2& start) {
  const GridGeometry& g = world.geometry();
  std::vector<std::uint8_t> reached(g.size(), 0);
  const Cell s = g.cell_of(start);
  if (!g.contains(s) || world.is_obstacle(s)) {
    return reached;
  }
  std::vector<Cell> stack{s};
  reached[g.index(s)] = 1;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (const Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
      if (g.contains(n) && !world.is_obstacle(n) && reached[g.index(n)] == 0) {
        reached[g.index(n)] = 1;
        stack.push_back(n);
      }
    }
  }
  return reached;
}

double reachable_free_classified(const OccupancyGrid& map, const World& world, const Point2& start,
                                 const OccupancyThresholds& thresholds) {
  const auto reachable = reachable_free_cells(world, start);
  const auto classes = map.classify(thresholds);
  std::size_t total = 0;
  std::size_t known = 0;
  for (std::size_t i = 0; i < reachable.size(); ++i) {
    if (reachable[i] != 0) {
      ++total;
      known += classes[i] == CellClass::kFree ? 1 : 0;
    }
  }
  return total > 0 ? static_cast<double>(known) / static_cast<double>(total) : 0.0;
}

MissionResult run_mission(const MissionConfig& config_in, const World& world, std::uint64_t seed) {
  MissionConfig config = config_in;
  config.sync_shared();
  config.validate();
  const GridGeometry& geometry = world.geometry();
  // Score endpoints where mapping puts the occupied cell (see LikelihoodModel::endpoint_shift).
  config.slam.likelihood.endpoint_shift = config.slam.sensor.hit_extension * geometry.resolution;
  config.amcl.likelihood.endpoint_shift = config.slam.likelihood.endpoint_shift;
  if (!geometry.contains(config.start.position()) || collision_check(world, config.start, config.robot_radius)) {
    throw std::invalid_argument("start pose is outside the world or overlaps an obstacle");
  }
  const auto& thresholds = config.slam.thresholds;

  Bus bus;
  advertise_topics(bus);
  bus.subscribe(topic::kCmdVel, "sim");
  for (const auto& t : {topic::kTf, topic::kScan}) {
    bus.subscribe(t, "slam");
  }
  for (const auto& t : {topic::kTf, topic::kMap, topic::kGoalStatus}) {
    bus.subscribe(t, "explore");
  }
  for (const auto& t : {topic::kTf, topic::kMap, topic::kGoal, topic::kScan}) {
    bus.subscribe(t, "move_base");
  }
  bus.subscribe(topic::kTf, "altitude");
  bus.subscribe(topic::kDetections, "fusion");
  for (const auto& t : {topic::kTf, topic::kFrontiers, topic::kMap}) {
    bus.subscribe(t, "recorder");
  }

  SimNode sim(world, config, stream(seed, 1));
  SlamNode slam(geometry, config, stream(seed, 2));
  ExploreNode explore(config);
  MoveBaseNode move_base(config);
  AltitudeNode altitude(config);
  CropSenseNode crops(world, sim, config, stream(seed, 4));
  FusionNode fusion(world, config);
  std::optional<LocalizerNode> localizer;
  std::optional<SurveyNode> survey;
  PoseTracker recorder_tf;

  MissionResult result;
  std::map<MissionPhase, std::uint64_t> phase_ticks;
  std::map<MissionPhase, double> phase_seconds;
  MissionPhase phase = MissionPhase::kTakeoff;
  int exit_code = kExitBudgetExhausted;
  std::optional<std::size_t> last_unknown;
  std::size_t frontier_snapshots = 0;
  double survey_coverage = 0.0;
  std::vector<std::string> warnings;

  struct Demo {
    int leg{0};
    std::optional<std::uint64_t> active;
    bool reached_a{false};
    bool reached_b{false};
    std::string outcome_a;
    std::string outcome_b;
    std::uint64_t collisions_before{0};
    double truth_error_b{0.0};
    bool path_captured{false};
  } demo;

  const auto start_demo = [&](std::uint64_t) {
    bus.subscribe(topic::kGoalStatus, "demo");
    demo.collisions_before = sim.collisions();
    demo.active = kDemoGoalBase;
    bus.publish(topic::kGoal, GoalMsg{kDemoGoalBase, config.demo_a, true, GoalSource::kDemo});
  };

  const auto finish_exploration = [&]() {
    result.final_map = slam.best_map();
    result.exploration_done = explore.done();
    result.exploration_coverage = reachable_free_classified(result.final_map, world, config.start.position(), thresholds);
    result.fidelity = map_fidelity(result.final_map, world, 3, thresholds);
    if (!find_frontiers(result.final_map, config.min_cluster_size, thresholds).empty()) {
      warnings.emplace_back("exploration ended with only blacklisted frontiers left");
    }
  };

  auto phase_started = Clock::now();
  std::uint64_t tick = 0;
  for (; tick < config.max_ticks; ++tick) {
    bus.set_tick(tick);
    sim.tick(bus, tick);
    if (localizer) {
      localizer->tick(bus, tick);
    } else {
      slam.tick(bus, tick);
    }
    if (phase == MissionPhase::kExplore) {
      explore.tick(bus, tick);
    }
    if (phase == MissionPhase::kSurvey) {
      survey->tick(bus, tick);
    }
    if (phase == MissionPhase::kDemo) {
      for (const auto& status : bus.poll<GoalStatusMsg>(topic::kGoalStatus, "demo")) {
        if (!demo.active || status->id != *demo.active) {
          continue;
        }
        if (demo.leg == 0) {
          demo.reached_a = status->reached;
          demo.outcome_a = status->reason;
          demo.leg = 1;
          demo.collisions_before = sim.collisions();
          demo.active = kDemoGoalBase + 1;
          bus.publish(topic::kGoal, GoalMsg{kDemoGoalBase + 1, config.demo_b, true, GoalSource::kDemo});
        } else {
          demo.reached_b = status->reached;
          demo.outcome_b = status->reason;
          demo.truth_error_b = planar_distance(sim.truth(), config.demo_b);
          demo.active.reset();
          demo.leg = 2;
        }
      }
    }
    move_base.tick(bus, tick);
    if (phase == MissionPhase::kDemo && demo.leg == 1 && !demo.path_captured && !move_base.path().empty()) {
      result.artifacts["demo_path.csv"] = path_csv(move_base.path());
      demo.path_captured = true;
    }
    altitude.tick(bus, tick);
    crops.tick(bus, tick);
    fusion.tick(bus, tick);

    recorder_tf.consume(bus.poll<TfMsg>(topic::kTf, "recorder"));
    for (const auto& m : bus.poll<FrontiersMsg>(topic::kFrontiers, "recorder")) {
      result.artifacts["frontiers_" + std::to_string(frontier_snapshots++) + ".csv"] = frontiers_csv(m->clusters);
    }
    if (auto map = bus.poll_latest<MapMsg>(topic::kMap, "recorder"); map && !localizer) {
      const std::size_t unknown = count_unknown(map->grid, thresholds);
      if (last_unknown && unknown > *last_unknown) {
        ++result.unknown_increases;
      }
      last_unknown = unknown;
    }
    result.trajectory.push_back({tick, phase, sim.truth(), recorder_tf.map_pose()});
    ++phase_ticks[phase];

    if (slam.degeneracies() > static_cast<std::uint64_t>(config.degeneracy_limit)) {
      exit_code = kExitSlamDegeneracy;
      ++tick;
      break;
    }

    // Phase transitions take effect from the next tick.
    const MissionPhase before = phase;
    if (phase == MissionPhase::kTakeoff) {
      if (std::abs(sim.truth().z - config.altitude) <= config.takeoff_tolerance && slam.initialized()) {
        phase = MissionPhase::kExplore;
      }
    } else if (phase == MissionPhase::kExplore && explore.done()) {
      finish_exploration();
      localizer.emplace(result.final_map, slam.best_pose(), slam.last_update_odom(), config, stream(seed, 3));
      for (const auto& t : {topic::kTf, topic::kScan}) {
        bus.unsubscribe(t, "slam");
        bus.subscribe(t, "amcl");
      }
      for (const auto& t : {topic::kTf, topic::kMap, topic::kGoalStatus}) {
        bus.unsubscribe(t, "explore");
      }
      bus.publish(topic::kMap, MapMsg{result.final_map});
      if (config.survey_enabled) {
        phase = MissionPhase::kSurvey;
        survey.emplace(result.final_map, config, kSurveyGoalBase);
        bus.subscribe(topic::kGoalStatus, "survey");
      } else if (config.demo_enabled) {
        phase = MissionPhase::kDemo;
        start_demo(tick);
      } else {
        phase = MissionPhase::kDone;
      }
    } else if (phase == MissionPhase::kSurvey) {
      if (tick % 20 == 0 || survey->done()) {
        const auto& dm = fusion.disease_map();
        survey_coverage =
            dm.crop_cells() > 0 ? static_cast<double>(dm.fused_cells()) / static_cast<double>(dm.crop_cells()) : 1.0;
      }
      if (survey->done() || survey_coverage >= config.survey_coverage_target) {
        bus.unsubscribe(topic::kGoalStatus, "survey");
        if (config.demo_enabled) {
          phase = MissionPhase::kDemo;
          start_demo(tick);
        } else {
          phase = MissionPhase::kDone;
        }
      }
    } else if (phase == MissionPhase::kDemo && demo.leg == 2) {
      phase = MissionPhase::kDone;
    }
    if (phase != before) {
      const auto now = Clock::now();
      phase_seconds[before] += std::chrono::duration<double>(now - phase_started).count();
      phase_started = now;
    }
    if (phase == MissionPhase::kDone) {
      exit_code = kExitSuccess;
      ++tick;
      break;
    }
  }
  phase_seconds[phase] += std::chrono::duration<double>(Clock::now() - phase_started).count();

  if (!localizer) {
    // Budget ran out (or SLAM diverged) before exploration finished: report on the map so far.
    finish_exploration();
  }
  result.exit_code = exit_code;
  result.final_phase = phase;
  result.ticks = tick;
  result.collisions = sim.collisions();
  result.demo_reached = demo.reached_b;
  result.demo_collisions = demo.leg > 0 ? sim.collisions() - demo.collisions_before : 0;

  // ---- artifacts ----------------------------------------------------------------------------
  const DiseaseEvaluation evaluation = evaluate(fusion.disease_map(), world);
  result.artifacts["map.pgm"] = encode_pgm(result.final_map, thresholds);
  result.artifacts["map.meta"] = encode_map_metadata(result.final_map, "map.pgm", thresholds);
  result.artifacts["disease.csv"] = disease_csv(fusion.disease_map(), world);
  result.artifacts["trajectory.csv"] = trajectory_csv(result.trajectory);
  for (const auto& [step, rows] : localizer ? localizer->dumps() : std::vector<std::pair<std::uint64_t, std::string>>{}) {
    result.artifacts["particles_" + std::to_string(step) + ".csv"] = "step,x,y,yaw,weight\n" + rows;
  }
  result.artifacts["trajectory.ppm"] = render_overview(result.artifacts);

  const auto status = exit_code == kExitSuccess          ? "success"
                      : exit_code == kExitSlamDegeneracy ? "slam_degeneracy"
                                                         : "budget_exhausted";
  Json phases = Json::object();
  for (const MissionPhase p : {MissionPhase::kTakeoff, MissionPhase::kExplore, MissionPhase::kSurvey, MissionPhase::kDemo}) {
    phases[std::string(to_string(p))] = Json{{"ticks", phase_ticks[p]}};
  }
  Json classes = Json::object();
  for (int k = 0; k < kCropClassCount; ++k) {
    classes[std::string(to_string(static_cast<CropClass>(k)))] = scores_json(evaluation.classes[static_cast<std::size_t>(k)]);
  }
  Json blacklisted = Json::array();
  for (const Point2& p : explore.blacklist().entries()) {
    blacklisted.push_back(Json::array({p.x, p.y}));
  }
  const Pose final_estimate = result.trajectory.empty() ? config.start : result.trajectory.back().estimate;

  Json report;
  report["seed"] = seed;
  report["config_hash"] = config_hash(config);
  report["status"] = status;
  report["exit_code"] = exit_code;
  report["ticks"] = tick;
  report["final_phase"] = std::string(to_string(phase));
  report["phases"] = phases;
  report["world"] = {{"width", geometry.width},
                     {"height", geometry.height},
                     {"resolution", geometry.resolution},
                     {"crop_cells", fusion.disease_map().crop_cells()}};
  report["exploration"] = {{"done", result.exploration_done},
                           {"reachable_free_classified", result.exploration_coverage},
                           {"goals_sent", explore.stats().goals_sent},
                           {"goals_reached", explore.stats().goals_reached},
                           {"goals_failed", explore.stats().goals_failed},
                           {"goals_retired", explore.stats().goals_retired},
                           {"selection_failures", explore.stats().selection_failures},
                           {"blacklisted", blacklisted},
                           {"frontier_snapshots", frontier_snapshots},
                           {"unknown_increase_ticks", result.unknown_increases}};
  report["map_fidelity"] = {{"observed_cells", result.fidelity.observed_cells},
                            {"correct_cells", result.fidelity.correct_cells},
                            {"fraction", result.fidelity.fraction()}};
  report["slam"] = {{"particles", config.slam.particles},
                    {"updates", slam.updates()},
                    {"resamples", slam.resamples()},
                    {"degeneracies", slam.degeneracies()}};
  report["localization"] = {{"active", localizer.has_value()},
                            {"updates", localizer ? localizer->filter().updates() : 0},
                            {"degeneracies", localizer ? localizer->filter().degeneracies() : 0},
                            {"particles", localizer ? localizer->filter().particles().size() : 0},
                            {"final_position_error", planar_distance(final_estimate, sim.truth())}};
  report["navigation"] = {{"plans", move_base.plans()}, {"dwa_stop_ticks", move_base.dwa_stops()}};
  report["safety"] = {{"collisions", sim.collisions()}, {"robot_radius", config.robot_radius}};
  report["survey"] = {{"enabled", config.survey_enabled},
                      {"waypoints", survey ? survey->waypoints() : 0},
                      {"reached", survey ? survey->reached() : 0},
                      {"failed", survey ? survey->failed() : 0},
                      {"crop_coverage", evaluation.coverage}};
  report["demo"] = {{"enabled", config.demo_enabled},
                    {"reached_a", demo.reached_a},
                    {"reached_b", demo.reached_b},
                    {"outcome_a", demo.outcome_a},
                    {"outcome_b", demo.outcome_b},
                    {"truth_error_b", demo.truth_error_b},
                    {"collisions", result.demo_collisions}};
  report["disease"] = {{"classes", classes},
                       {"crop_cells", evaluation.crop_cells},
                       {"fused_cells", evaluation.fused_cells},
                       {"unresolved_cells", evaluation.unresolved_cells},
                       {"coverage", evaluation.coverage},
                       {"detector_frames", crops.frames()},
                       {"observations", crops.observations()},
                       {"rejected_observations", fusion.disease_map().rejected()}};
  report["warnings"] = warnings;
  result.artifacts["report.json"] = report.dump(2) + "\n";

  Json timing;
  double total = 0.0;
  for (const auto& [p, seconds] : phase_seconds) {
    timing["phases"][std::string(to_string(p))] = seconds;
    total += seconds;
  }
  timing["wall_seconds"] = total;
  result.artifacts["timing.json"] = timing.dump(2) + "\n";
  return result;
}

void write_artifacts(const MissionResult& result, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  for (const auto& [name, bytes] : result.artifacts) {
    std::ofstream out(directory / name, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw std::runtime_error("cannot write " + (directory / name).string());
    }
  }
}

std::string render_from_outputs(const std::filesystem::path& directory) {
  std::map<std::string, std::string> files;
  for (const char* name : {"map.pgm", "map.meta", "trajectory.csv", "disease.csv", "demo_path.csv"}) {
    std::ifstream in(directory / name, std::ios::binary);
    if (in) {
      std::ostringstream text;
      text << in.rdbuf();
      files[name] = text.str();
    }
  }
  return render_overview(files);
}

}  // namespace fieldnav
