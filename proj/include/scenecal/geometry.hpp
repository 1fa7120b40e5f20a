#pragma once

#include <Eigen/Dense>
#include <optional>

#include "scenecal/errors.hpp"

namespace scenecal {

using Matrix34 = Eigen::Matrix<double, 3, 4>;

/// World frame: right-handed, Z up, ground plane Z = 0, camera centered at
/// (0, 0, camera_height). Image frame: u grows right, v grows down, origin at
/// the top-left pixel.
///
/// Orientation is parameterized by tilt and roll:
///   - tilt is the angle of the optical axis from nadir (straight down), in
///     degrees; tilt = 90 is a level camera, surveillance cameras are
///     typically in the 55..85 range.
///   - roll turns the camera about its own optical axis.
/// The rotation is assembled as
///   R = R_roll(roll) * R_pitch(tilt - 90) * B
/// where B is the fixed axis alignment for a level camera looking along
/// world +Y with u along +X and v along -Z:
///   B = [ 1  0  0 ]
///       [ 0  0 -1 ]
///       [ 0  1  0 ]
/// R_pitch rotates about the camera x axis (positive pitch raises the optical
/// axis) and R_roll about the camera z axis. A camera point is
/// p_cam = R * (p_world - C).

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Focal length in pixels plus principal point; square pixels, zero skew.
class CameraIntrinsics {
public:
  CameraIntrinsics(double focal_px, double principal_u, double principal_v);

  /// Principal point defaulted to the image center.
  static CameraIntrinsics with_image_center(double focal_px,
                                            double image_width,
                                            double image_height);

  double focal_px() const { return focal_px_; }
  double principal_u() const { return principal_u_; }
  double principal_v() const { return principal_v_; }

  Eigen::Matrix3d matrix() const;

private:
  double focal_px_;
  double principal_u_;
  double principal_v_;
};

/// Orthonormal right-handed rotation; construction rejects matrices whose
/// orthonormality residual exceeds 1e-9 or whose determinant is not +1.
class RotationMatrix {
public:
  explicit RotationMatrix(const Eigen::Matrix3d& m);

  const Eigen::Matrix3d& matrix() const { return m_; }

  double orthonormality_residual() const;

private:
  Eigen::Matrix3d m_;
};

/// Exterior orientation angles plus the camera height, which stays empty
/// until calibration recovers it.
struct CameraPose {
  double tilt_deg = 90.0;
  double roll_deg = 0.0;
  std::optional<double> camera_height_m;

  /// Throws InputError when tilt is outside (0, 180) or a non-positive
  /// height is present.
  void validate() const;
};

/// The height-free pixel-equation coefficients of the projection map,
///   u = (a X + b Y + c Z + d Cz) / (i X + j Y + k Z + l Cz)
///   v = (e X + f Y + g Z + h Cz) / (i X + j Y + k Z + l Cz)
/// laid out row-major over the 3x4 grid. For a map composed from (K, R, Cz)
/// the identities d = -c, h = -g, l = -k hold up to rounding.
struct ProjectionCoefficients {
  double a, b, c, d;
  double e, f, g, h;
  double i, j, k, l;
};

/// 3x4 projective map from homogeneous world points to homogeneous pixels.
/// Stored as the height-free coefficient grid plus the camera height; the
/// materialized matrix scales the fourth column by the height. A matrix
/// adopted as-is (unknown height) folds the height into the grid as 1.
class ProjectionMatrix {
public:
  /// Unit camera at height 1 (identity intrinsics and rotation).
  ProjectionMatrix();

  /// Adopts a general 3x4 matrix. The left 3x3 block must have full rank.
  explicit ProjectionMatrix(const Matrix34& m);

  /// Rebuilds from a full matrix and the known camera height (e.g. when
  /// reading a calibration report back).
  static ProjectionMatrix from_full_matrix(const Matrix34& m,
                                           double camera_height);

  /// The full matrix: coefficient grid with the fourth column scaled by the
  /// camera height.
  Matrix34 matrix() const;

  const Matrix34& coefficient_grid() const { return grid_; }
  ProjectionCoefficients coefficients() const;
  double camera_height() const { return height_; }

private:
  ProjectionMatrix(const Matrix34& grid, double height);
  friend ProjectionMatrix compose_projection(const CameraIntrinsics&,
                                             const RotationMatrix&, double);

  Matrix34 grid_;
  double height_;
};

/// R = R_roll * R_pitch * B with pitch = tilt - 90 degrees.
/// Throws InputError unless 0 < tilt_deg < 180.
RotationMatrix build_rotation(double tilt_deg, double roll_deg);

/// P = K [R | t] with t = -R * (0, 0, camera_height). Throws InputError for
/// a non-positive height.
ProjectionMatrix compose_projection(const CameraIntrinsics& intrinsics,
                                    const RotationMatrix& rotation,
                                    double camera_height_m);

/// Homogeneous projection. Throws GeometryError when the scale factor
/// |lambda| falls below 1e-12 (point on the principal plane).
PixelPoint project(const ProjectionMatrix& p, const WorldPoint& point);

/// Intersects the viewing ray through the pixel with the plane Z = plane_z.
/// The result satisfies project(p, result) == px and result.z == plane_z.
/// Throws GeometryError when the ray is (numerically) parallel to the plane,
/// i.e. the pixel sits on the plane's horizon line.
WorldPoint backproject_to_plane(const ProjectionMatrix& p,
                                const PixelPoint& px, double plane_z);

/// True when the point has positive depth along the viewing direction.
bool in_front_of_camera(const ProjectionMatrix& p, const WorldPoint& point);

}  // namespace scenecal
