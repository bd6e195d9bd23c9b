#include <gtest/gtest.h>

#include <cmath>

#include "fieldnav/cropsense/detector.hpp"
#include "fieldnav/cropsense/disease_map.hpp"
#include "helpers.hpp"

namespace fieldnav {
namespace {

// Per-class targets from the measured evaluation table: (precision, recall) for Brown, Yellow, Healthy.
constexpr double kTablePrecision[3] = {1.00, 0.99, 1.00};
constexpr double kTableRecall[3] = {0.99, 1.00, 1.00};

DetectorProfile identity_profile() {
  DetectorProfile p;
  p.leaf_recall = 1.0;
  return p;
}

// Three equal stripes of Brown, Yellow and Healthy cells.
World striped_field(int width, int height) {
  std::vector<CellKind> cells(static_cast<std::size_t>(width * height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int stripe = 3 * x / width;
      cells[static_cast<std::size_t>(y * width + x)] =
          stripe == 0 ? CellKind::kCropBrown : (stripe == 1 ? CellKind::kCropYellow : CellKind::kCropHealthy);
    }
  }
  return World({width, height, 0.25, {0, 0}}, cells);
}

TEST(Profile, MeasuredValues) {
  const DetectorProfile p = measured_detector_profile();
  EXPECT_DOUBLE_EQ(p.rate_hz, 42.3);
  EXPECT_DOUBLE_EQ(p.leaf_recall, 0.19);
  EXPECT_DOUBLE_EQ(p.confusion[0][0], 111.0 / 112.0);
  EXPECT_DOUBLE_EQ(p.confusion[0][1], 1.0 / 112.0);
  EXPECT_EQ(p.confusion[1], (std::array<double, 3>{0, 1, 0}));
  EXPECT_EQ(p.confusion[2], (std::array<double, 3>{0, 0, 1}));
  EXPECT_EQ(std::round(p.confusion[0][0] * 100) / 100, 0.99);
  for (const auto& row : p.confusion) {
    EXPECT_NEAR(row[0] + row[1] + row[2], 1.0, 1e-12);
  }
  EXPECT_NO_THROW(p.validate());
}

TEST(Profile, ReconstructionReproducesTheTestSetScores) {
  // Held-out set: 112 brown, 116 yellow, 140 healthy, a single brown leaf called yellow.
  std::vector<std::pair<CropClass, CropClass>> pairs;
  for (int i = 0; i < 112; ++i) {
    pairs.push_back({CropClass::kBrown, i == 0 ? CropClass::kYellow : CropClass::kBrown});
  }
  for (int i = 0; i < 116; ++i) {
    pairs.push_back({CropClass::kYellow, CropClass::kYellow});
  }
  for (int i = 0; i < 140; ++i) {
    pairs.push_back({CropClass::kHealthy, CropClass::kHealthy});
  }
  const auto scores = score_predictions(pairs);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(std::round(*scores[k].precision * 100) / 100, kTablePrecision[k]);
    EXPECT_EQ(std::round(*scores[k].recall * 100) / 100, kTableRecall[k]);
  }
}

TEST(Profile, SerializeRoundTripKeepsRowsStochastic) {
  DetectorProfile p = measured_detector_profile();
  p.confusion[2] = {0.1, 0.2, 0.7};
  const DetectorProfile back = parse_profile(serialize_profile(p));
  for (int r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(back.confusion[r][c], p.confusion[r][c]);
      sum += back.confusion[r][c];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
  EXPECT_EQ(back.rate_hz, p.rate_hz);
}

TEST(Profile, ValidateRejectsBadRows) {
  DetectorProfile p;
  p.confusion[0] = {0.5, 0.4, 0.0};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = DetectorProfile{};
  p.leaf_recall = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = DetectorProfile{};
  p.rate_hz = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Cadence, FramesPerTickFollowTheRate) {
  const double tick = 0.05;
  std::uint64_t frames = 0;
  const std::uint64_t ticks = 20000;  // 1000 s of simulated time
  for (std::uint64_t t = 0; t < ticks; ++t) {
    const int n = detection_frames(t, tick, 42.3);
    EXPECT_GE(n, 2);
    EXPECT_LE(n, 3);
    frames += static_cast<std::uint64_t>(n);
  }
  EXPECT_NEAR(static_cast<double>(frames) / (ticks * tick), 42.3, 0.1);
}

TEST(Observe, NothingInViewGivesNothing) {
  const World empty = test::boxed_world(20, 20, 0.25);
  Rng rng(1);
  EXPECT_TRUE(observe(empty, {2.5, 2.5, 0, 2}, identity_profile(), 0, rng).empty());
}

TEST(Observe, IdentityProfileSeesEveryCellInTheFootprint) {
  const World w = striped_field(30, 30);
  Rng rng(2);
  const Pose pose{3.7, 3.6, 0, 2};
  const auto obs = observe(w, pose, identity_profile(), 5, rng);
  std::size_t in_view = 0;
  for (std::size_t i = 0; i < w.cells().size(); ++i) {
    in_view += distance(w.geometry().center(w.geometry().cell_at(i)), pose.position()) <= 1.0 ? 1 : 0;
  }
  EXPECT_EQ(obs.size(), in_view);
  for (const auto& o : obs) {
    EXPECT_EQ(o.predicted, *crop_class(w.kind(o.cell)));
    EXPECT_EQ(o.tick, 5u);
    EXPECT_LE(distance(w.geometry().center(o.cell), pose.position()), 1.0);
  }
}

TEST(Observe, EmpiricalConfusionConvergesToProfile) {
  const DetectorProfile p = measured_detector_profile();
  Rng rng(3);
  const int n = 100000;
  for (int truth = 0; truth < 3; ++truth) {
    std::array<int, 3> counts{};
    for (int i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>(sample_prediction(p, static_cast<CropClass>(truth), rng))];
    }
    for (int k = 0; k < 3; ++k) {
      EXPECT_LT(std::abs(counts[k] / static_cast<double>(n) - p.confusion[truth][k]), 0.01);
    }
    if (truth == 0) {
      const double q = 1.0 / 112.0;
      EXPECT_NEAR(counts[1] / static_cast<double>(n), q, 3.0 * std::sqrt(q * (1 - q) / n));
    }
  }
}

TEST(Observe, DetectionRateMatchesLeafRecall) {
  const World w = striped_field(30, 30);
  const DetectorProfile p = measured_detector_profile();
  Rng rng(4);
  std::size_t seen = 0;
  std::size_t possible = 0;
  for (int i = 0; i < 2000; ++i) {
    seen += observe(w, {3.75, 3.75, 0, 2}, p, 0, rng).size();
    possible += observe(w, {3.75, 3.75, 0, 2}, identity_profile(), 0, rng).size();
  }
  EXPECT_NEAR(static_cast<double>(seen) / static_cast<double>(possible), 0.19, 0.005);
}

TEST(Fusion, MajorityAndThresholdRules) {
  const World w = striped_field(9, 3);
  DiseaseMap map(w, 3);
  const Cell c{0, 0};
  std::vector<DiseaseObservation> obs(2, {c, CropClass::kBrown, 0, {}});
  map.fuse(obs);
  EXPECT_FALSE(map.label(c).has_value());
  map.fuse(std::vector<DiseaseObservation>{{c, CropClass::kBrown, 0, {}}});
  EXPECT_EQ(map.label(c), FusedLabel::kBrown);

  const Cell d{1, 1};
  std::vector<DiseaseObservation> tie{
      {d, CropClass::kBrown, 0, {}}, {d, CropClass::kBrown, 0, {}}, {d, CropClass::kYellow, 0, {}},
      {d, CropClass::kYellow, 0, {}}};
  map.fuse(tie);
  EXPECT_EQ(map.label(d), FusedLabel::kUnresolved);
  EXPECT_EQ(map.total(d), 4u);
}

TEST(Fusion, ObservationsOffCropCellsAreRejected) {
  std::vector<CellKind> cells(9, CellKind::kFree);
  cells[4] = CellKind::kCropHealthy;
  const World w({3, 3, 1.0, {0, 0}}, cells);
  DiseaseMap map(w, 1);
  map.fuse(std::vector<DiseaseObservation>{{{0, 0}, CropClass::kBrown, 0, {}}, {{1, 1}, CropClass::kHealthy, 0, {}},
                                           {{7, 7}, CropClass::kHealthy, 0, {}}});
  EXPECT_EQ(map.rejected(), 2u);
  EXPECT_EQ(map.accepted(), 1u);
  EXPECT_EQ(map.crop_cells(), 1u);
}

TEST(Evaluate, IdentityFullCoverageIsPerfect) {
  const World w = striped_field(30, 6);
  DiseaseMap map(w, 1);
  Rng rng(5);
  for (double x = 0.5; x < 7.5; x += 0.5) {
    for (double y = 0.5; y < 1.5; y += 0.5) {
      map.fuse(observe(w, {x, y, 0, 2}, identity_profile(), 0, rng));
    }
  }
  const DiseaseEvaluation e = evaluate(map, w);
  EXPECT_EQ(e.coverage, 1.0);
  for (const auto& c : e.classes) {
    EXPECT_EQ(c.precision, 1.0);
    EXPECT_EQ(c.recall, 1.0);
    EXPECT_EQ(c.f1, 1.0);
  }
}

TEST(Evaluate, EmptyFieldReportsZeroCoverage) {
  const World w = test::boxed_world(5, 5, 1.0);
  const DiseaseEvaluation e = evaluate(DiseaseMap(w, 3), w);
  EXPECT_EQ(e.coverage, 0.0);
  EXPECT_EQ(e.crop_cells, 0u);
  for (const auto& c : e.classes) {
    EXPECT_FALSE(c.precision.has_value());
    EXPECT_FALSE(c.recall.has_value());
  }
}

TEST(Evaluate, MeasuredProfileMatchesTableOverManyFusedCells) {
  // 10^5 cells per class, one observation each, fused with min_observations = 1.
  const World w = striped_field(600, 500);
  const DetectorProfile p = measured_detector_profile();
  DiseaseMap map(w, 1);
  Rng rng(6);
  std::vector<DiseaseObservation> obs;
  obs.reserve(w.cells().size());
  for (std::size_t i = 0; i < w.cells().size(); ++i) {
    const Cell c = w.geometry().cell_at(i);
    obs.push_back({c, sample_prediction(p, *crop_class(w.kind(c)), rng), 0, {}});
  }
  map.fuse(obs);
  const DiseaseEvaluation e = evaluate(map, w);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(e.classes[k].support, 100000u);
    EXPECT_NEAR(*e.classes[k].precision, kTablePrecision[k], 0.01) << k;
    EXPECT_NEAR(*e.classes[k].recall, kTableRecall[k], 0.01) << k;
  }
}

TEST(Evaluate, MajorityVoteAccuracyGrowsWithObservations) {
  DetectorProfile noisy;
  noisy.confusion = {{{0.6, 0.25, 0.15}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}}};
  const World w = striped_field(90, 100);
  Rng rng(7);
  std::array<double, 3> previous{};
  for (const int per_cell : {1, 3, 5, 9, 15}) {
    DiseaseMap map(w, 1);
    std::vector<DiseaseObservation> obs;
    for (std::size_t i = 0; i < w.cells().size(); ++i) {
      const Cell c = w.geometry().cell_at(i);
      for (int k = 0; k < per_cell; ++k) {
        obs.push_back({c, sample_prediction(noisy, *crop_class(w.kind(c)), rng), 0, {}});
      }
    }
    map.fuse(obs);
    const DiseaseEvaluation e = evaluate(map, w);
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(*e.classes[k].recall, previous[k]) << per_cell << " observations, class " << k;
      previous[k] = *e.classes[k].recall;
    }
  }
}

TEST(Evaluate, DiseaseCsv) {
  const World w = striped_field(3, 1);
  DiseaseMap map(w, 1);
  map.fuse(std::vector<DiseaseObservation>{{{0, 0}, CropClass::kBrown, 0, {}}});
  const std::string csv = disease_csv(map, w);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "cell_x,cell_y,world_x,world_y,true_class,fused_class,n_obs,n_brown,n_yellow,n_healthy");
  EXPECT_NE(csv.find("0,0,0.125,0.125,brown,brown,1,1,0,0"), std::string::npos) << csv;
}

}  // namespace
}  // namespace fieldnav
