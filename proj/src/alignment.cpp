#include "scenecal/alignment.hpp"

#include <cmath>

namespace scenecal {

namespace {

Eigen::Vector3d to_vec(const WorldPoint& p) {
  return Eigen::Vector3d(p.x, p.y, p.z);
}

struct Centered {
  Eigen::Matrix3Xd source;
  Eigen::Matrix3Xd target;
  Eigen::Vector3d source_mean;
  Eigen::Vector3d target_mean;
};

Centered center(std::span<const WorldPoint> source,
                std::span<const WorldPoint> target) {
  if (source.size() != target.size())
    throw InputError("correspondence lists must have equal length");
  if (source.size() < 3)
    throw GeometryError("rigid fit needs at least 3 correspondences");
  const int n = static_cast<int>(source.size());
  Centered c;
  c.source.resize(3, n);
  c.target.resize(3, n);
  for (int i = 0; i < n; ++i) {
    c.source.col(i) = to_vec(source[i]);
    c.target.col(i) = to_vec(target[i]);
  }
  c.source_mean = c.source.rowwise().mean();
  c.target_mean = c.target.rowwise().mean();
  c.source.colwise() -= c.source_mean;
  c.target.colwise() -= c.target_mean;
  return c;
}

// The rotation is unique (among proper rotations) only when the centered
// cross-covariance has at least two nonzero singular values; one vanishes
// for collinear or coincident configurations on either side.
Eigen::Matrix3d rotation_from_covariance(const Eigen::Matrix3d& cov) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) <= 1e-10 * s(0))
    throw GeometryError(
        "degenerate fit: correspondences are collinear or coincident");
  Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;  // smallest singular direction is last
    r = svd.matrixV() * flip * svd.matrixU().transpose();
  }
  return r;
}

}  // namespace

WorldPoint RigidTransform::apply(const WorldPoint& p) const {
  const Eigen::Vector3d q = rotation.matrix() * to_vec(p) + translation;
  return WorldPoint{q(0), q(1), q(2)};
}

RigidTransform fit_rigid(std::span<const WorldPoint> source,
                         std::span<const WorldPoint> target) {
  const Centered c = center(source, target);
  const Eigen::Matrix3d cov = c.source * c.target.transpose();
  const Eigen::Matrix3d r = rotation_from_covariance(cov);
  RigidTransform t;
  t.rotation = RotationMatrix(r);
  t.translation = c.target_mean - r * c.source_mean;
  return t;
}

SimilarityTransform fit_similarity(std::span<const WorldPoint> source,
                                   std::span<const WorldPoint> target) {
  const Centered c = center(source, target);
  const Eigen::Matrix3d cov = c.source * c.target.transpose();
  const Eigen::Matrix3d r = rotation_from_covariance(cov);
  const double source_var = c.source.squaredNorm();
  if (!(source_var > 0.0))
    throw GeometryError("degenerate fit: source points coincide");
  const double scale = (r.transpose() * c.target)
                           .cwiseProduct(c.source)
                           .sum() /
                       source_var;
  SimilarityTransform st;
  st.scale = scale;
  st.rigid.rotation = RotationMatrix(r);
  st.rigid.translation = c.target_mean - scale * (r * c.source_mean);
  return st;
}

CorrespondenceReport correspondence_errors(const RigidTransform& transform,
                                           std::span<const WorldPoint> source,
                                           std::span<const WorldPoint> target) {
  if (source.size() != target.size())
    throw InputError("correspondence lists must have equal length");
  if (source.empty())
    throw InputError("cannot report errors on empty correspondence lists");
  CorrespondenceReport report;
  report.per_point_error_m.reserve(source.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const WorldPoint moved = transform.apply(source[i]);
    const double e = (to_vec(moved) - to_vec(target[i])).norm();
    report.per_point_error_m.push_back(e);
    sum += e;
    report.max_error_m = std::max(report.max_error_m, e);
  }
  const double n = static_cast<double>(source.size());
  report.mean_error_m = sum / n;
  double var = 0.0;
  for (double e : report.per_point_error_m) {
    const double d = e - report.mean_error_m;
    var += d * d;
  }
  report.std_error_m = std::sqrt(var / n);
  return report;
}

}  // namespace scenecal
