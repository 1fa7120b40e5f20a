#include "scenecal/geometry.hpp"

#include <cmath>

namespace scenecal {

namespace {

constexpr double kDegToRad = 0.017453292519943295;
constexpr double kLambdaEps = 1e-12;
constexpr double kPlaneEps = 1e-12;

// Axis alignment for a level camera looking along world +Y: u along +X,
// v along -Z (image v grows downward).
Eigen::Matrix3d level_axis_alignment() {
  Eigen::Matrix3d b;
  b << 1, 0, 0,
       0, 0, -1,
       0, 1, 0;
  return b;
}

Eigen::Matrix3d pitch_about_camera_x(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Eigen::Matrix3d m;
  m << 1, 0, 0,
       0, c, s,
       0, -s, c;
  return m;
}

Eigen::Matrix3d roll_about_optical_axis(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Eigen::Matrix3d m;
  m << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return m;
}

}  // namespace

CameraIntrinsics::CameraIntrinsics(double focal_px, double principal_u,
                                   double principal_v)
    : focal_px_(focal_px), principal_u_(principal_u), principal_v_(principal_v) {
  if (!(focal_px > 0.0) || !std::isfinite(focal_px))
    throw InputError("focal length must be a positive number of pixels");
  if (!std::isfinite(principal_u) || !std::isfinite(principal_v))
    throw InputError("principal point must be finite");
}

CameraIntrinsics CameraIntrinsics::with_image_center(double focal_px,
                                                     double image_width,
                                                     double image_height) {
  if (!(image_width > 0.0) || !(image_height > 0.0))
    throw InputError("image dimensions must be positive");
  return CameraIntrinsics(focal_px, image_width / 2.0, image_height / 2.0);
}

Eigen::Matrix3d CameraIntrinsics::matrix() const {
  Eigen::Matrix3d k;
  k << focal_px_, 0, principal_u_,
       0, focal_px_, principal_v_,
       0, 0, 1;
  return k;
}

RotationMatrix::RotationMatrix(const Eigen::Matrix3d& m) : m_(m) {
  const double residual =
      (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (residual > 1e-9)
    throw InputError("rotation matrix is not orthonormal (residual " +
                     std::to_string(residual) + ")");
  if (std::fabs(m.determinant() - 1.0) > 1e-9)
    throw InputError("rotation matrix determinant is not +1");
}

double RotationMatrix::orthonormality_residual() const {
  return (m_.transpose() * m_ - Eigen::Matrix3d::Identity())
      .cwiseAbs()
      .maxCoeff();
}

void CameraPose::validate() const {
  if (!(tilt_deg > 0.0) || !(tilt_deg < 180.0))
    throw InputError("tilt must lie strictly between 0 and 180 degrees");
  if (!std::isfinite(roll_deg)) throw InputError("roll must be finite");
  if (camera_height_m && !(*camera_height_m > 0.0))
    throw InputError("camera height must be positive");
}

RotationMatrix build_rotation(double tilt_deg, double roll_deg) {
  if (!(tilt_deg > 0.0) || !(tilt_deg < 180.0))
    throw InputError("tilt must lie strictly between 0 and 180 degrees, got " +
                     std::to_string(tilt_deg));
  const double pitch_rad = (tilt_deg - 90.0) * kDegToRad;
  const double roll_rad = roll_deg * kDegToRad;
  return RotationMatrix(roll_about_optical_axis(roll_rad) *
                        pitch_about_camera_x(pitch_rad) *
                        level_axis_alignment());
}

ProjectionMatrix::ProjectionMatrix(const Matrix34& grid, double height)
    : grid_(grid), height_(height) {}

ProjectionMatrix::ProjectionMatrix() : height_(1.0) {
  grid_.leftCols<3>() = Eigen::Matrix3d::Identity();
  grid_.col(3) = Eigen::Vector3d(0.0, 0.0, -1.0);
}

ProjectionMatrix::ProjectionMatrix(const Matrix34& m) : grid_(m), height_(1.0) {
  if (std::fabs(m.leftCols<3>().determinant()) < 1e-14)
    throw InputError("projection matrix has a singular left 3x3 block");
}

ProjectionMatrix ProjectionMatrix::from_full_matrix(const Matrix34& m,
                                                    double camera_height) {
  if (!(camera_height > 0.0))
    throw InputError("camera height must be positive");
  if (std::fabs(m.leftCols<3>().determinant()) < 1e-14)
    throw InputError("projection matrix has a singular left 3x3 block");
  Matrix34 grid = m;
  grid.col(3) /= camera_height;
  return ProjectionMatrix(grid, camera_height);
}

Matrix34 ProjectionMatrix::matrix() const {
  Matrix34 m = grid_;
  m.col(3) *= height_;
  return m;
}

ProjectionCoefficients ProjectionMatrix::coefficients() const {
  return ProjectionCoefficients{grid_(0, 0), grid_(0, 1), grid_(0, 2),
                                grid_(0, 3), grid_(1, 0), grid_(1, 1),
                                grid_(1, 2), grid_(1, 3), grid_(2, 0),
                                grid_(2, 1), grid_(2, 2), grid_(2, 3)};
}

ProjectionMatrix compose_projection(const CameraIntrinsics& intrinsics,
                                    const RotationMatrix& rotation,
                                    double camera_height_m) {
  if (!(camera_height_m > 0.0))
    throw InputError("camera height must be positive, got " +
                     std::to_string(camera_height_m));
  const Eigen::Matrix3d k = intrinsics.matrix();
  const Eigen::Matrix3d& r = rotation.matrix();
  const Eigen::Vector3d center(0.0, 0.0, camera_height_m);
  const Eigen::Vector3d t = -(r * center);
  Matrix34 grid;
  grid.leftCols<3>() = k * r;
  grid.col(3) = (k * t) / camera_height_m;
  return ProjectionMatrix(grid, camera_height_m);
}

PixelPoint project(const ProjectionMatrix& p, const WorldPoint& point) {
  const Matrix34 m = p.matrix();
  const Eigen::Vector4d x(point.x, point.y, point.z, 1.0);
  const Eigen::Vector3d img = m * x;
  if (std::fabs(img(2)) < kLambdaEps)
    throw GeometryError("degenerate projection: point on the principal plane");
  return PixelPoint{img(0) / img(2), img(1) / img(2)};
}

WorldPoint backproject_to_plane(const ProjectionMatrix& p,
                                const PixelPoint& px, double plane_z) {
  const ProjectionCoefficients c = p.coefficients();
  const double cz = p.camera_height();
  // Two linear equations in (X, Y) from u and v at fixed Z.
  const double a00 = c.a - px.u * c.i;
  const double a01 = c.b - px.u * c.j;
  const double a10 = c.e - px.v * c.i;
  const double a11 = c.f - px.v * c.j;
  const double r0 = px.u * (c.k * plane_z + c.l * cz) - (c.c * plane_z + c.d * cz);
  const double r1 = px.v * (c.k * plane_z + c.l * cz) - (c.g * plane_z + c.h * cz);
  const double det = a00 * a11 - a01 * a10;
  // Scale-aware parallelism test: the raw determinant scales with the square
  // of the matrix scale, so normalize by the left-block magnitude.
  const double scale = p.coefficient_grid().leftCols<3>().cwiseAbs().maxCoeff();
  if (std::fabs(det) < kPlaneEps * scale * scale)
    throw GeometryError(
        "horizon-degenerate back-projection: ray parallel to plane");
  return WorldPoint{(r0 * a11 - r1 * a01) / det, (a00 * r1 - a10 * r0) / det,
                    plane_z};
}

bool in_front_of_camera(const ProjectionMatrix& p, const WorldPoint& point) {
  const Matrix34 m = p.matrix();
  const Eigen::Vector4d x(point.x, point.y, point.z, 1.0);
  return (m.row(2) * x).value() > 0.0;
}

}  // namespace scenecal
