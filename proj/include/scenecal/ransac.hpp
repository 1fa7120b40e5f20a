#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "scenecal/calibration.hpp"

namespace scenecal {

struct RansacConfig {
  /// A detection is an inlier when its head reprojection error does not
  /// exceed this many pixels.
  double inlier_threshold_px = 5.0;
  int iterations = 500;
  /// Persons per minimal sample. Two persons give 8 equations for the 5
  /// unknowns of the vertical formulation.
  int sample_size = 2;
  int min_inliers = 4;
  std::uint64_t rng_seed = 0;
  /// Standard inlier-ratio stopping rule (99% confidence); off by default so
  /// the iteration count is exactly `iterations`.
  bool adaptive_stop = false;
  double min_box_height_px = 8.0;

  void validate() const;
};

struct RansacResult {
  /// Refit over the consensus set (VerticalConstrained). Its
  /// person_positions correspond to the detections the final model was fit
  /// on; once the refit loop reaches its fixed point (the normal case) that
  /// is exactly the inlier mask, in input order.
  CalibrationSolution solution;
  /// One flag per input detection. Detections dropped by the box-height
  /// floor are never inliers.
  std::vector<bool> inlier_mask;
  /// Head reprojection error per input detection under the final model;
  /// +infinity marks detections whose foot ray cannot reach the foot plane.
  std::vector<double> per_detection_error_px;

  int inlier_count() const;
};

/// RANSAC could not reach min_inliers; carries the best candidate seen.
class ConsensusError : public Error {
public:
  ConsensusError(const std::string& message,
                 std::shared_ptr<const RansacResult> best);

  /// Best-scoring candidate, or null when no sample produced a model at all.
  const std::shared_ptr<const RansacResult>& best_candidate() const {
    return best_;
  }

private:
  std::shared_ptr<const RansacResult> best_;
};

/// Pixel distance between the observed head and the head predicted by
/// back-projecting the foot to the foot plane and lifting it to the average
/// head plane. Returns +infinity for horizon-degenerate feet or predictions
/// behind the camera.
double reprojection_error(const ProjectionMatrix& projection,
                          const PersonDetection& detection,
                          const HeightModel& heights);

/// Robust calibration: repeated minimal-sample vertical fits scored by
/// inlier count (ties broken by inlier RMS error), followed by a refit on
/// the consensus set that is re-verified to a fixed point (at most 10
/// rounds). Deterministic for a fixed seed; per-iteration RNG streams are
/// derived by counter, so results do not depend on evaluation order.
RansacResult ransac_calibrate(std::span<const PersonDetection> detections,
                              const CameraIntrinsics& intrinsics,
                              const CameraPose& pose,
                              const HeightModel& heights,
                              const RansacConfig& config);

}  // namespace scenecal
