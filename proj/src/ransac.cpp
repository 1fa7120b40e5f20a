#include "scenecal/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenecal/rng.hpp"

namespace scenecal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRefitRounds = 10;

std::vector<int> sample_distinct(Rng& rng, int population, int count) {
  std::vector<int> picked;
  picked.reserve(count);
  while (static_cast<int>(picked.size()) < count) {
    const int idx = static_cast<int>(rng.uniform_index(population));
    if (std::find(picked.begin(), picked.end(), idx) == picked.end())
      picked.push_back(idx);
  }
  return picked;
}

struct Scored {
  std::vector<double> errors;
  std::vector<bool> mask;
  int inliers = 0;
  double inlier_rms = kInf;
};

Scored score_model(const ProjectionMatrix& projection,
                   std::span<const PersonDetection> detections,
                   const std::vector<bool>& eligible,
                   const HeightModel& heights, double threshold) {
  Scored s;
  s.errors.resize(detections.size(), kInf);
  s.mask.resize(detections.size(), false);
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    s.errors[i] = reprojection_error(projection, detections[i], heights);
    if (eligible[i] && s.errors[i] <= threshold) {
      s.mask[i] = true;
      ++s.inliers;
      sq_sum += s.errors[i] * s.errors[i];
    }
  }
  if (s.inliers > 0) s.inlier_rms = std::sqrt(sq_sum / s.inliers);
  return s;
}

bool better(const Scored& a, const Scored& b) {
  if (a.inliers != b.inliers) return a.inliers > b.inliers;
  return a.inlier_rms < b.inlier_rms;
}

std::vector<PersonDetection> select(
    std::span<const PersonDetection> detections,
    const std::vector<bool>& mask) {
  std::vector<PersonDetection> out;
  for (std::size_t i = 0; i < detections.size(); ++i)
    if (mask[i]) out.push_back(detections[i]);
  return out;
}

}  // namespace

void RansacConfig::validate() const {
  if (!(inlier_threshold_px > 0.0))
    throw InputError("inlier threshold must be positive");
  if (iterations < 1) throw InputError("iteration count must be positive");
  if (sample_size < 1) throw InputError("sample size must be positive");
  if (min_inliers < sample_size)
    throw InputError("min_inliers must be at least the sample size");
}

int RansacResult::inlier_count() const {
  return static_cast<int>(std::count(inlier_mask.begin(), inlier_mask.end(),
                                     true));
}

ConsensusError::ConsensusError(const std::string& message,
                               std::shared_ptr<const RansacResult> best)
    : Error(message), best_(std::move(best)) {}

double reprojection_error(const ProjectionMatrix& projection,
                          const PersonDetection& detection,
                          const HeightModel& heights) {
  WorldPoint ground;
  try {
    ground = backproject_to_plane(projection, detection.foot_pixel(),
                                  heights.foot_plane_m);
  } catch (const GeometryError&) {
    return kInf;
  }
  if (!in_front_of_camera(projection, ground)) return kInf;
  const WorldPoint head{ground.x, ground.y, heights.avg_height_m};
  PixelPoint predicted;
  try {
    predicted = project(projection, head);
  } catch (const GeometryError&) {
    return kInf;
  }
  return std::hypot(predicted.u - detection.head_pixel().u,
                    predicted.v - detection.head_pixel().v);
}

RansacResult ransac_calibrate(std::span<const PersonDetection> detections,
                              const CameraIntrinsics& intrinsics,
                              const CameraPose& pose,
                              const HeightModel& heights,
                              const RansacConfig& config) {
  config.validate();
  pose.validate();
  heights.validate();

  // Eligibility: only detections above the box floor take part in sampling
  // and in the consensus count.
  std::vector<bool> eligible(detections.size(), false);
  std::vector<int> pool;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].box().height() >= config.min_box_height_px) {
      eligible[i] = true;
      pool.push_back(static_cast<int>(i));
    }
  }
  if (static_cast<int>(pool.size()) < config.sample_size)
    throw InputError("fewer usable detections than the RANSAC sample size");

  Scored best;
  bool have_model = false;
  CalibrationSolution best_solution;

  int needed = config.iterations;
  for (int iter = 0; iter < config.iterations && iter < needed; ++iter) {
    Rng rng(Rng::derive_stream(config.rng_seed, iter));
    const std::vector<int> picks =
        sample_distinct(rng, static_cast<int>(pool.size()), config.sample_size);
    std::vector<PersonDetection> sample;
    sample.reserve(picks.size());
    for (int p : picks) sample.push_back(detections[pool[p]]);

    CalibrationSolution candidate;
    try {
      candidate = calibrate(sample, intrinsics, pose, heights,
                            Formulation::VerticalConstrained,
                            config.min_box_height_px);
    } catch (const GeometryError&) {
      continue;  // degenerate or implausible sample
    }

    const Scored scored = score_model(candidate.projection, detections,
                                      eligible, heights,
                                      config.inlier_threshold_px);
    if (!have_model || better(scored, best)) {
      best = scored;
      best_solution = candidate;
      have_model = true;
      if (config.adaptive_stop && best.inliers > 0) {
        const double w =
            static_cast<double>(best.inliers) / static_cast<double>(pool.size());
        const double p_all = std::pow(w, config.sample_size);
        if (p_all >= 1.0 - 1e-12) {
          needed = iter + 1;
        } else {
          const double est = std::log(0.01) / std::log(1.0 - p_all);
          needed = static_cast<int>(std::min<double>(
              config.iterations, std::ceil(est)));
        }
      }
    }
  }

  auto failure = [&](const std::string& reason) -> ConsensusError {
    std::shared_ptr<RansacResult> carried;
    if (have_model) {
      carried = std::make_shared<RansacResult>();
      carried->solution = best_solution;
      carried->inlier_mask = best.mask;
      carried->per_detection_error_px = best.errors;
    }
    return ConsensusError("consensus failure: " + reason, carried);
  };

  if (!have_model)
    throw failure("no sample produced a usable model");
  if (best.inliers < config.min_inliers)
    throw failure("best candidate has " + std::to_string(best.inliers) +
                  " inliers, need " + std::to_string(config.min_inliers));

  // Refit on the consensus set, then re-verify the mask under the refit
  // model until it stops changing (fixed point, capped rounds). The shipped
  // mask is always the one verified against the shipped model.
  std::vector<bool> fit_set = best.mask;
  CalibrationSolution refit = best_solution;
  Scored verified = best;
  for (int round = 0; round < kMaxRefitRounds; ++round) {
    CalibrationSolution fit;
    try {
      fit = calibrate(select(detections, fit_set), intrinsics, pose, heights,
                      Formulation::VerticalConstrained,
                      config.min_box_height_px);
    } catch (const GeometryError&) {
      break;  // keep the last verified model
    }
    const Scored scored = score_model(fit.projection, detections, eligible,
                                      heights, config.inlier_threshold_px);
    if (scored.inliers < config.min_inliers) break;
    refit = fit;
    verified = scored;
    if (scored.mask == fit_set) break;  // fixed point reached
    fit_set = scored.mask;
  }

  if (verified.inliers < config.min_inliers)
    throw failure("refit lost consensus");

  RansacResult result;
  result.solution = refit;
  result.inlier_mask = verified.mask;
  result.per_detection_error_px = verified.errors;
  return result;
}

}  // namespace scenecal
