// Acceptance suite: end-to-end checks of the calibration pipeline at fixed
// tolerances. Prints one PASS/FAIL line per criterion; the exit code is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scenecal/alignment.hpp"
#include "scenecal/calibration.hpp"
#include "scenecal/evaluation.hpp"
#include "scenecal/io.hpp"
#include "scenecal/mathfn.hpp"
#include "scenecal/proximity.hpp"
#include "scenecal/ransac.hpp"
#include "scenecal/rng.hpp"
#include "scenecal/simulate.hpp"

using namespace scenecal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

SceneSpec exact_scene_spec() {
  SceneSpec spec;
  spec.camera.focal_px = 1500.0;
  spec.camera.tilt_deg = 70.0;
  spec.camera.roll_deg = 1.0;
  spec.camera.height_m = 8.0;
  spec.persons.count = 20;
  spec.persons.height_mean_m = 1.7018;
  spec.persons.height_std_m = 0.0;
  spec.persons.region = Region{-12.0, 12.0, 15.0, 45.0};
  spec.rng_seed = 1;
  return spec;
}

// 1. Noiseless exact-height scene: the vertical solve recovers the camera
//    height and every footprint to 1e-6, in under a second.
Outcome criterion_exact_recovery() {
  const auto start = std::chrono::steady_clock::now();
  const SceneSpec spec = exact_scene_spec();
  const SyntheticScene scene = generate(spec);
  if (scene.detections.size() != 20)
    return {false, "expected all 20 persons visible"};

  CameraPose pose;
  pose.tilt_deg = spec.camera.tilt_deg;
  pose.roll_deg = spec.camera.roll_deg;
  const CalibrationSolution sol =
      calibrate(scene.detections, spec.camera.intrinsics(), pose,
                HeightModel{1.7018, 0.0}, Formulation::VerticalConstrained);

  const double height_err = std::fabs(sol.camera_height_m - 8.0) / 8.0;
  double worst_xy = 0.0;
  for (std::size_t i = 0; i < scene.detections.size(); ++i) {
    const TruePerson& person = scene.persons[scene.detection_person[i]];
    worst_xy = std::max(worst_xy,
                        std::fabs(sol.person_positions[i].foot.x - person.foot.x));
    worst_xy = std::max(worst_xy,
                        std::fabs(sol.person_positions[i].foot.y - person.foot.y));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "height rel err " << height_err << ", worst foot err " << worst_xy
         << " m, " << elapsed << " s";
  return {height_err < 1e-6 && worst_xy < 1e-6 && elapsed < 1.0, detail.str()};
}

// 2. The paper-literal system has numerical rank exactly 4N (of 4N+1
//    columns) on 100 random noiseless scenes.
Outcome criterion_literal_rank() {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(5000 + seed);
    SceneSpec spec;
    spec.camera.focal_px = rng.uniform(700.0, 2500.0);
    spec.camera.tilt_deg = rng.uniform(55.0, 82.0);
    spec.camera.roll_deg = rng.uniform(-5.0, 5.0);
    spec.camera.height_m = rng.uniform(4.0, 15.0);
    spec.persons.count = 3 + static_cast<int>(rng.uniform_index(10));
    spec.persons.height_mean_m = 1.7018;
    spec.rng_seed = 6000 + seed;

    // Place persons on ground seen through the lower-middle image band.
    const ProjectionMatrix true_p = compose_projection(
        spec.camera.intrinsics(),
        build_rotation(spec.camera.tilt_deg, spec.camera.roll_deg),
        spec.camera.height_m);
    const double w = spec.camera.image_width, h = spec.camera.image_height;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const PixelPoint px : {PixelPoint{0.30 * w, 0.62 * h},
                                PixelPoint{0.70 * w, 0.62 * h},
                                PixelPoint{0.30 * w, 0.88 * h},
                                PixelPoint{0.70 * w, 0.88 * h}}) {
      const WorldPoint g = backproject_to_plane(true_p, px, 0.0);
      x_min = std::min(x_min, g.x);
      x_max = std::max(x_max, g.x);
      y_min = std::min(y_min, g.y);
      y_max = std::max(y_max, g.y);
    }
    const double cx = (x_min + x_max) / 2, cy = (y_min + y_max) / 2;
    spec.persons.region = Region{cx - 0.4 * (x_max - x_min),
                                 cx + 0.4 * (x_max - x_min),
                                 cy - 0.4 * (y_max - y_min),
                                 cy + 0.4 * (y_max - y_min)};

    const SyntheticScene scene = generate(spec);
    const int n = static_cast<int>(scene.detections.size());
    if (n < 1) return {false, "scene " + std::to_string(seed) + " is empty"};

    const ProjectionCoefficients coeffs =
        compose_projection(spec.camera.intrinsics(),
                           build_rotation(spec.camera.tilt_deg,
                                          spec.camera.roll_deg),
                           1.0)
            .coefficients();
    const LinearSystem sys = build_system_literal(scene.detections, coeffs,
                                                  HeightModel{1.7018, 0.0});
    const LeastSquaresSolution ls = solve_system(sys.a, sys.b);
    if (sys.a.cols() != 4 * n + 1 || ls.rank != 4 * n) {
      std::ostringstream detail;
      detail << "scene " << seed << ": rank " << ls.rank << " of "
             << sys.a.cols() << " columns (N=" << n << ")";
      return {false, detail.str()};
    }
    ++checked;
  }
  return {true, "rank = 4N on " + std::to_string(checked) + " scenes"};
}

// 3. Paper-like noise: heights sigma 7 cm, 1 px pixel noise, 20% gross
//    outliers, threshold 5 px, 500 iterations. Over 20 seeds, at least 18
//    must recover the height within 5% with >= 90% of the clean detections
//    as inliers; the whole sweep stays under 10 s.
Outcome criterion_ransac_robustness() {
  const auto start = std::chrono::steady_clock::now();
  int passes = 0;
  std::ostringstream log;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SceneSpec spec;
    spec.camera.focal_px = 800.0;
    spec.camera.tilt_deg = 70.0;
    spec.camera.roll_deg = 1.0;
    spec.camera.height_m = 8.0;
    spec.persons.count = 30;
    spec.persons.height_mean_m = 1.7018;
    spec.persons.height_std_m = 0.07;
    spec.persons.region = Region{-15.0, 15.0, 40.0, 70.0};
    spec.noise.pixel_std = 1.0;
    spec.noise.outlier_fraction = 0.2;
    spec.rng_seed = 3000 + s;
    const SyntheticScene scene = generate(spec);

    RansacConfig cfg;
    cfg.inlier_threshold_px = 5.0;
    cfg.iterations = 500;
    cfg.rng_seed = 4000 + s;
    CameraPose pose;
    pose.tilt_deg = spec.camera.tilt_deg;
    pose.roll_deg = spec.camera.roll_deg;

    bool seed_pass = false;
    try {
      const RansacResult result =
          ransac_calibrate(scene.detections, spec.camera.intrinsics(), pose,
                           HeightModel{1.7018, 0.0}, cfg);
      int clean = 0, clean_inliers = 0;
      for (std::size_t i = 0; i < scene.detections.size(); ++i) {
        if (scene.detection_is_outlier(i)) continue;
        ++clean;
        if (result.inlier_mask[i]) ++clean_inliers;
      }
      const double height_err =
          std::fabs(result.solution.camera_height_m - 8.0) / 8.0;
      const double clean_fraction =
          clean > 0 ? static_cast<double>(clean_inliers) / clean : 0.0;
      seed_pass = height_err < 0.05 && clean_fraction >= 0.9;
      if (!seed_pass)
        log << " [seed " << s << ": err " << height_err << ", clean frac "
            << clean_fraction << "]";
    } catch (const Error&) {
      log << " [seed " << s << ": exception]";
    }
    if (seed_pass) ++passes;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << passes << "/20 seeds passed in " << elapsed << " s" << log.str();
  return {passes >= 18 && elapsed < 10.0, detail.str()};
}

// 4. Composition identities d = -c, h = -g, l = -k for 1000 random cameras.
Outcome criterion_coefficient_identities() {
  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CameraIntrinsics k(rng.uniform(400.0, 4000.0),
                             rng.uniform(0.0, 3000.0),
                             rng.uniform(0.0, 2000.0));
    const RotationMatrix r = build_rotation(rng.uniform(5.0, 175.0),
                                            rng.uniform(-180.0, 180.0));
    const ProjectionMatrix p =
        compose_projection(k, r, rng.uniform(0.1, 50.0));
    const ProjectionCoefficients c = p.coefficients();
    worst = std::max({worst, std::fabs(c.d + c.c), std::fabs(c.h + c.g),
                      std::fabs(c.l + c.k)});
  }
  std::ostringstream detail;
  detail << "worst identity residual " << worst;
  return {worst < 1e-9, detail.str()};
}

// 5. Rigid-fit recovery to 1e-9 on random motions of 50 points, and a
//    proper rotation (det +1) on reflection-baiting planar sets.
Outcome criterion_rigid_fit() {
  Rng rng(88);
  double worst_r = 0.0, worst_t = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<WorldPoint> source;
    for (int i = 0; i < 50; ++i)
      source.push_back(WorldPoint{rng.uniform(-20, 20), rng.uniform(-20, 20),
                                  rng.uniform(-20, 20)});
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q(i) = rng.normal(0.0, 1.0);
    q.normalize();
    Eigen::Matrix3d r;
    const double qw = q(0), qx = q(1), qy = q(2), qz = q(3);
    r << 1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qw * qz),
        2 * (qx * qz + qw * qy), 2 * (qx * qy + qw * qz),
        1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qw * qx),
        2 * (qx * qz - qw * qy), 2 * (qy * qz + qw * qx),
        1 - 2 * (qx * qx + qy * qy);
    const Eigen::Vector3d t(rng.uniform(-30, 30), rng.uniform(-30, 30),
                            rng.uniform(-30, 30));
    std::vector<WorldPoint> target;
    for (const auto& p : source) {
      const Eigen::Vector3d moved = r * Eigen::Vector3d(p.x, p.y, p.z) + t;
      target.push_back(WorldPoint{moved(0), moved(1), moved(2)});
    }
    const RigidTransform fit = fit_rigid(source, target);
    worst_r = std::max(worst_r,
                       (fit.rotation.matrix() - r).cwiseAbs().maxCoeff());
    worst_t = std::max(worst_t, (fit.translation - t).norm());
  }

  double worst_det = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<WorldPoint> source, target;
    for (int i = 0; i < 25; ++i) {
      const WorldPoint p{rng.uniform(-10, 10), rng.uniform(-10, 10), 0.0};
      source.push_back(p);
      target.push_back(WorldPoint{p.x + rng.normal(0, 0.02),
                                  -p.y + rng.normal(0, 0.02), 0.0});
    }
    const RigidTransform fit = fit_rigid(source, target);
    worst_det =
        std::min(worst_det, fit.rotation.matrix().determinant());
  }
  std::ostringstream detail;
  detail << "worst dR " << worst_r << ", worst dt " << worst_t
         << ", min det " << worst_det;
  return {worst_r < 1e-9 && worst_t < 1e-9 && worst_det > 1.0 - 1e-9,
          detail.str()};
}

// 6. P(near) is exactly one half at the threshold, strictly decreasing, and
//    the erf evaluation stays within 1.5e-7 of the high-precision oracle.
Outcome criterion_predicate() {
  Rng rng(99);
  double worst_half = 0.0;
  for (int i = 0; i < 100; ++i) {
    const NearPredicate pred{rng.uniform(0.5, 20.0), rng.uniform(0.05, 5.0)};
    worst_half =
        std::max(worst_half, std::fabs(p_near(pred, pred.threshold_m) - 0.5));
  }

  const NearPredicate pred{4.0, 1.0};
  bool monotone = true;
  double last = p_near(pred, 0.0);
  for (int i = 1; i < 10000; ++i) {
    const double p = p_near(pred, 20.0 * i / 9999.0);
    if (!(p < last)) monotone = false;
    last = p;
  }

  double worst_erf = 0.0;
  for (int i = 0; i <= 12000; ++i) {
    const double x = -6.0 + i * 0.001;
    worst_erf = std::max(
        worst_erf,
        std::fabs(erf_portable(x) -
                  static_cast<double>(oracle::erf_reference(x))));
  }
  std::ostringstream detail;
  detail << "|p(tau)-0.5| max " << worst_half << ", monotone "
         << (monotone ? "yes" : "no") << ", erf err " << worst_erf;
  return {worst_half < 1e-12 && monotone && worst_erf < 1.5e-7, detail.str()};
}

// 7. Sweep AUC equals the brute-force Mann-Whitney statistic to 1e-12 on
//    200 random labeled sets of up to 2000 pairs.
Outcome criterion_auc_equivalence() {
  Rng rng(111);
  double worst = 0.0;
  int checked = 0;
  while (checked < 200) {
    const int n = 20 + static_cast<int>(rng.uniform_index(1981));
    std::vector<LabeledScore> labeled;
    std::vector<double> scores;
    std::vector<bool> positive;
    const bool quantize = checked % 2 == 0;
    for (int i = 0; i < n; ++i) {
      double score = rng.uniform(0.0, 10.0);
      if (quantize) score = std::floor(score * 8.0) / 8.0;
      const bool pos = rng.bernoulli(0.35);
      labeled.push_back(LabeledScore{pos, score});
      scores.push_back(score);
      positive.push_back(pos);
    }
    bool has_pos = false, has_neg = false;
    for (bool p : positive) (p ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) continue;
    const double sweep = roc_auc(labeled).auc;
    const double brute = oracle::auc_pairwise(scores, positive);
    worst = std::max(worst, std::fabs(sweep - brute));
    ++checked;
  }
  std::ostringstream detail;
  detail << "max |sweep - pairwise| " << worst << " over 200 sets";
  return {worst < 1e-12, detail.str()};
}

// 8. End-to-end proximity quality with deliberately wrong average heights
//    (+-0.127 m around 1.7018): AUC >= 0.95 for each height.
Outcome criterion_end_to_end_auc() {
  SceneSpec spec;
  spec.camera.focal_px = 1500.0;
  spec.camera.tilt_deg = 70.0;
  spec.camera.roll_deg = 1.0;
  spec.camera.height_m = 8.0;
  spec.persons.count = 25;
  spec.persons.height_mean_m = 1.7018;
  spec.persons.height_std_m = 0.05;
  spec.persons.region = Region{-12.0, 12.0, 15.0, 45.0};
  spec.vehicles.positions = {WorldPoint{3.0, 22.0, 0.0},
                             WorldPoint{-6.0, 30.0, 0.0},
                             WorldPoint{9.0, 38.0, 0.0},
                             WorldPoint{-2.0, 18.0, 0.0},
                             WorldPoint{0.0, 42.0, 0.0},
                             WorldPoint{12.0, 25.0, 0.0}};
  spec.noise.pixel_std = 1.0;
  spec.rng_seed = 8001;
  const SyntheticScene scene = generate(spec);

  CameraPose pose;
  pose.tilt_deg = spec.camera.tilt_deg;
  pose.roll_deg = spec.camera.roll_deg;

  std::ostringstream detail;
  bool all_pass = true;
  for (const double avg_height : {1.5748, 1.7018, 1.8288}) {
    RansacConfig cfg;
    cfg.rng_seed = 8100;
    const RansacResult result =
        ransac_calibrate(scene.detections, spec.camera.intrinsics(), pose,
                         HeightModel{avg_height, 0.0}, cfg);
    const ProjectionMatrix& fitted = result.solution.projection;

    std::vector<WorldPoint> est, truth;
    for (std::size_t i = 0; i < scene.detections.size(); ++i) {
      est.push_back(backproject_to_plane(
          fitted, scene.detections[i].foot_pixel(), 0.0));
      truth.push_back(scene.persons[scene.detection_person[i]].foot);
    }
    const std::size_t person_count = est.size();
    for (const auto& vehicle : scene.vehicles) {
      est.push_back(backproject_to_plane(fitted, vehicle.pixel, 0.0));
      truth.push_back(vehicle.position);
    }

    const RigidTransform transform = fit_rigid(est, truth);
    std::vector<WorldPoint> aligned;
    for (const auto& p : est) aligned.push_back(transform.apply(p));

    std::vector<LabeledPair> pairs;
    for (std::size_t p = 0; p < person_count; ++p)
      for (std::size_t v = person_count; v < truth.size(); ++v)
        pairs.push_back(LabeledPair{ground_distance(truth[p], truth[v]),
                                    ground_distance(aligned[p], aligned[v])});
    const RocCurve curve = roc_auc(label_pairs(pairs, 4.0));
    detail << "h=" << avg_height << ": AUC " << curve.auc << "  ";
    if (!(curve.auc >= 0.95)) all_pass = false;
  }
  return {all_pass, detail.str()};
}

// 9. Byte-identical pipeline outputs across repeated CLI runs.
Outcome criterion_pipeline_determinism() {
  const fs::path base = fs::temp_directory_path() / "scenecal_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string scene = R"({
    "camera": {"focal_px": 1500, "tilt_deg": 75, "roll_deg": 0.5,
               "height_m": 8, "image_width": 1920, "image_height": 1080},
    "persons": {"count": 24, "height_mean_m": 1.7018, "height_std_m": 0.05,
                "region": {"x_min": -7, "x_max": 7, "y_min": 13, "y_max": 28}},
    "vehicles": {"positions": [[2, 14], [-5, 20], [7, 24]]},
    "noise": {"pixel_std": 0.5, "outlier_fraction": 0.1},
    "rng_seed": 9001
  })";
  const std::string config = R"({
    "camera": {"focal_px": 1500, "tilt_deg": 75, "roll_deg": 0.5,
               "image_width": 1920, "image_height": 1080},
    "heights": {"avg_m": 1.7018, "foot_plane_m": 0.0},
    "ransac": {"threshold_px": 5, "iterations": 500, "seed": 9},
    "proximity": {"tau_m": 4.0, "sharpness_m": 1.0},
    "eval": {"gt_threshold_m": 4.0}
  })";
  {
    std::ofstream(base / "scene.json") << scene;
    std::ofstream(base / "config.json") << config;
  }

  auto shell = [&](const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status) == 0;
  };

  for (const char* run : {"a", "b"}) {
    const std::string dir = (base / run).string();
    fs::create_directories(dir);
    const std::string cli = SCENECAL_CLI_PATH;
    const std::string cfg = (base / "config.json").string();
    if (!shell(cli + " simulate " + (base / "scene.json").string() +
               " --output " + dir + "/det.jsonl --quiet"))
      return {false, "simulate failed"};
    if (!shell(cli + " calibrate " + dir + "/det.jsonl --config " + cfg +
               " --output " + dir + "/calib.json --quiet"))
      return {false, "calibrate failed"};
    if (!shell(cli + " locate " + dir + "/det.jsonl --calibration " + dir +
               "/calib.json --output " + dir + "/est.jsonl --quiet"))
      return {false, "locate failed"};
    if (!shell(cli + " align " + dir + "/est.jsonl " + dir +
               "/det.jsonl.truth.json --output " + dir +
               "/align.json --aligned-out " + dir + "/aligned.jsonl --quiet"))
      return {false, "align failed"};
    if (!shell(cli + " roc --gt " + dir + "/det.jsonl.truth.json --est " +
               dir + "/aligned.jsonl --config " + cfg + " --output " + dir +
               "/roc.csv --quiet"))
      return {false, "roc failed"};
  }

  for (const char* name :
       {"det.jsonl", "det.jsonl.truth.json", "calib.json", "est.jsonl",
        "align.json", "aligned.jsonl", "roc.csv"}) {
    if (read_file((base / "a" / name).string()) !=
        read_file((base / "b" / name).string()))
      return {false, std::string("output differs: ") + name};
  }
  return {true, "7 pipeline outputs byte-identical across runs"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"exact recovery (noiseless 20-person scene, <1e-6, <1s)",
       criterion_exact_recovery},
      {"literal system rank = 4N over 100 random scenes",
       criterion_literal_rank},
      {"RANSAC robustness at paper-like noise (18/20 seeds, <10s)",
       criterion_ransac_robustness},
      {"coefficient identities d=-c, h=-g, l=-k (1000 cameras)",
       criterion_coefficient_identities},
      {"rigid-fit recovery to 1e-9 and reflection guard",
       criterion_rigid_fit},
      {"near-predicate exactness, monotonicity, erf accuracy",
       criterion_predicate},
      {"AUC sweep equals Mann-Whitney pairwise (200 sets)",
       criterion_auc_equivalence},
      {"end-to-end AUC >= 0.95 under +-0.127 m height offsets",
       criterion_end_to_end_auc},
      {"pipeline determinism: byte-identical repeated runs",
       criterion_pipeline_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s  criterion %zu: %s  [%s]\n",
                outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                outcome.detail.c_str());
  }
  return failures;
}
