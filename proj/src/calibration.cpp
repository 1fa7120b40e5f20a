#include "scenecal/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace scenecal {

namespace {

constexpr double kRankCutoff = 1e-10;

void check_box(const BoundingBox& box) {
  if (!std::isfinite(box.left) || !std::isfinite(box.top) ||
      !std::isfinite(box.right) || !std::isfinite(box.bottom))
    throw InputError("bounding box coordinates must be finite");
  if (!(box.right > box.left))
    throw InputError("bounding box must have right > left");
  if (!(box.bottom > box.top))
    throw InputError("bounding box must have bottom > top");
}

// Fills the two rows contributed by one observed pixel at world plane z:
//   Cz (d - u l) + X (a - u i) + Y (b - u j) = z (u k - c)
//   Cz (h - v l) + X (e - v i) + Y (f - v j) = z (v k - g)
void fill_pixel_rows(Eigen::MatrixXd& a, Eigen::VectorXd& b, int row,
                     int xy_col, const ProjectionCoefficients& c,
                     const PixelPoint& px, double z) {
  a(row, 0) = c.d - px.u * c.l;
  a(row, xy_col) = c.a - px.u * c.i;
  a(row, xy_col + 1) = c.b - px.u * c.j;
  b(row) = z * (px.u * c.k - c.c);

  a(row + 1, 0) = c.h - px.v * c.l;
  a(row + 1, xy_col) = c.e - px.v * c.i;
  a(row + 1, xy_col + 1) = c.f - px.v * c.j;
  b(row + 1) = z * (px.v * c.k - c.g);
}

double pixel_distance(const PixelPoint& p, const PixelPoint& q) {
  return std::hypot(p.u - q.u, p.v - q.v);
}

}  // namespace

PersonDetection::PersonDetection(std::int64_t frame_id, BoundingBox box,
                                 PixelPoint foot, PixelPoint head)
    : frame_id_(frame_id), box_(box), foot_(foot), head_(head) {
  check_box(box);
  if (!std::isfinite(foot.u) || !std::isfinite(foot.v) ||
      !std::isfinite(head.u) || !std::isfinite(head.v))
    throw InputError("foot/head pixels must be finite");
}

PersonDetection PersonDetection::from_box(std::int64_t frame_id,
                                          BoundingBox box) {
  check_box(box);
  const double center_u = (box.left + box.right) / 2.0;
  return PersonDetection(frame_id, box, PixelPoint{center_u, box.bottom},
                         PixelPoint{center_u, box.top});
}

void HeightModel::validate() const {
  if (!std::isfinite(avg_height_m) || !std::isfinite(foot_plane_m))
    throw InputError("height model values must be finite");
  if (!(avg_height_m > foot_plane_m))
    throw InputError("average head plane must lie above the foot plane");
}

LinearSystem build_system_literal(std::span<const PersonDetection> detections,
                                  const ProjectionCoefficients& coeffs,
                                  const HeightModel& heights) {
  heights.validate();
  if (detections.empty())
    throw InputError("cannot build a calibration system from zero detections");
  const int n = static_cast<int>(detections.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4 * n, 4 * n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(4 * n);
  for (int i = 0; i < n; ++i) {
    fill_pixel_rows(a, b, 4 * i, 1 + 4 * i, coeffs,
                    detections[i].foot_pixel(), heights.foot_plane_m);
    fill_pixel_rows(a, b, 4 * i + 2, 3 + 4 * i, coeffs,
                    detections[i].head_pixel(), heights.avg_height_m);
  }
  return LinearSystem{std::move(a), std::move(b)};
}

LinearSystem build_system_vertical(std::span<const PersonDetection> detections,
                                   const ProjectionCoefficients& coeffs,
                                   const HeightModel& heights) {
  heights.validate();
  if (detections.empty())
    throw InputError("cannot build a calibration system from zero detections");
  const int n = static_cast<int>(detections.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4 * n, 2 * n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(4 * n);
  for (int i = 0; i < n; ++i) {
    fill_pixel_rows(a, b, 4 * i, 1 + 2 * i, coeffs,
                    detections[i].foot_pixel(), heights.foot_plane_m);
    fill_pixel_rows(a, b, 4 * i + 2, 1 + 2 * i, coeffs,
                    detections[i].head_pixel(), heights.avg_height_m);
  }
  return LinearSystem{std::move(a), std::move(b)};
}

LeastSquaresSolution solve_system(const Eigen::MatrixXd& a,
                                  const Eigen::VectorXd& b) {
  if (a.rows() == 0 || a.cols() == 0)
    throw InputError("cannot solve an empty system");
  // BDCSVD scales to the thousands-of-rows systems a long recording
  // produces; it falls back to Jacobi for the small minimal-sample fits.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double top = sigma(0);
  if (!(top > 0.0))
    throw GeometryError("degenerate system: all-zero coefficient matrix");

  const double cutoff = kRankCutoff * top;
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++rank;

  // Minimum-norm pseudo-inverse solution restricted to the retained
  // singular directions.
  Eigen::VectorXd uy = svd.matrixU().transpose() * b;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(sigma.size());
  for (int i = 0; i < rank; ++i) coeffs(i) = uy(i) / sigma(i);
  Eigen::VectorXd x = svd.matrixV() * coeffs;

  const double residual = (a * x - b).norm() / std::sqrt(double(a.rows()));
  const double condition = sigma(0) / sigma(rank - 1);
  return LeastSquaresSolution{std::move(x), residual, rank, condition};
}

std::vector<PersonDetection> filter_detections(
    std::span<const PersonDetection> detections, double min_box_height_px) {
  std::vector<PersonDetection> kept;
  kept.reserve(detections.size());
  for (const auto& d : detections)
    if (d.box().height() >= min_box_height_px) kept.push_back(d);
  return kept;
}

CalibrationSolution calibrate(std::span<const PersonDetection> detections,
                              const CameraIntrinsics& intrinsics,
                              const CameraPose& pose,
                              const HeightModel& heights,
                              Formulation formulation,
                              double min_box_height_px) {
  pose.validate();
  heights.validate();
  const std::vector<PersonDetection> used =
      filter_detections(detections, min_box_height_px);
  if (used.empty())
    throw InputError("no usable detections (all below the box-height floor)");

  const RotationMatrix rotation = build_rotation(pose.tilt_deg, pose.roll_deg);
  // Height-free coefficient grid: composing at unit height leaves the fourth
  // column exactly the (d, h, l) coefficients.
  const ProjectionCoefficients coeffs =
      compose_projection(intrinsics, rotation, 1.0).coefficients();

  const LinearSystem system =
      formulation == Formulation::PaperLiteral
          ? build_system_literal(used, coeffs, heights)
          : build_system_vertical(used, coeffs, heights);
  const LeastSquaresSolution ls = solve_system(system.a, system.b);
  const int columns = static_cast<int>(system.a.cols());

  if (formulation == Formulation::VerticalConstrained && ls.rank < columns)
    throw GeometryError(
        "degenerate configuration: calibration system is rank-deficient (" +
        std::to_string(ls.rank) + " of " + std::to_string(columns) + ")");

  const double camera_height = ls.x(0);
  if (formulation == Formulation::VerticalConstrained &&
      !(camera_height > heights.avg_height_m))
    throw GeometryError(
        "implausible geometry: recovered camera height " +
        std::to_string(camera_height) + " m is not above the head plane");

  CalibrationSolution solution;
  solution.formulation = formulation;
  solution.camera_height_m = camera_height;
  solution.rank = ls.rank;
  solution.columns = columns;
  solution.solver_residual_rms = ls.residual_rms;
  solution.solver_condition = ls.condition;

  const int n = static_cast<int>(used.size());
  solution.person_positions.reserve(n);
  for (int i = 0; i < n; ++i) {
    PersonPosition pos;
    if (formulation == Formulation::PaperLiteral) {
      pos.foot = WorldPoint{ls.x(1 + 4 * i), ls.x(2 + 4 * i),
                            heights.foot_plane_m};
      pos.head = WorldPoint{ls.x(3 + 4 * i), ls.x(4 + 4 * i),
                            heights.avg_height_m};
    } else {
      pos.foot = WorldPoint{ls.x(1 + 2 * i), ls.x(2 + 2 * i),
                            heights.foot_plane_m};
      pos.head = WorldPoint{ls.x(1 + 2 * i), ls.x(2 + 2 * i),
                            heights.avg_height_m};
    }
    solution.person_positions.push_back(pos);
  }

  // Reprojection residual is only meaningful when the recovered height can
  // compose a projection; the literal minimum-norm representative may not
  // admit one.
  if (camera_height > 0.0) {
    solution.projection =
        compose_projection(intrinsics, rotation, camera_height);
    double sq_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto& pos = solution.person_positions[i];
      sq_sum += std::pow(pixel_distance(project(solution.projection, pos.foot),
                                        used[i].foot_pixel()),
                         2);
      sq_sum += std::pow(pixel_distance(project(solution.projection, pos.head),
                                        used[i].head_pixel()),
                         2);
    }
    solution.residual_rms_px = std::sqrt(sq_sum / (2.0 * n));
  } else {
    solution.residual_rms_px = std::numeric_limits<double>::quiet_NaN();
  }
  return solution;
}

double binned_mode(std::span<const double> values, double bin_width) {
  if (values.empty()) throw InputError("cannot take the mode of an empty list");
  if (!(bin_width > 0.0)) throw InputError("bin width must be positive");
  std::map<long long, int> counts;
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("mode input must be finite");
    counts[static_cast<long long>(std::floor(v / bin_width))]++;
  }
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return (static_cast<double>(best->first) + 0.5) * bin_width;
}

}  // namespace scenecal
