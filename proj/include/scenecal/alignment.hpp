#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "scenecal/geometry.hpp"

namespace scenecal {

struct RigidTransform {
  RotationMatrix rotation{Eigen::Matrix3d::Identity()};
  Eigen::Vector3d translation{0.0, 0.0, 0.0};

  WorldPoint apply(const WorldPoint& p) const;
};

struct CorrespondenceReport {
  double mean_error_m = 0.0;
  double std_error_m = 0.0;  // population standard deviation
  double max_error_m = 0.0;
  std::vector<double> per_point_error_m;
};

/// Closed-form least-squares rotation and translation mapping source points
/// onto target points (SVD of the centered cross-covariance). A reflection
/// in the raw SVD solution is corrected by flipping the smallest singular
/// direction, so the result is always a proper rotation. Requires at least
/// three non-collinear correspondences.
RigidTransform fit_rigid(std::span<const WorldPoint> source,
                         std::span<const WorldPoint> target);

struct SimilarityTransform {
  RigidTransform rigid;
  double scale = 1.0;
};

/// Rigid fit extended with a global scale. Diagnostics only: the pipeline's
/// metric scale is owned by the height prior and must not be absorbed here.
SimilarityTransform fit_similarity(std::span<const WorldPoint> source,
                                   std::span<const WorldPoint> target);

/// Per-point Euclidean errors of transform(source) against target.
CorrespondenceReport correspondence_errors(const RigidTransform& transform,
                                           std::span<const WorldPoint> source,
                                           std::span<const WorldPoint> target);

}  // namespace scenecal
