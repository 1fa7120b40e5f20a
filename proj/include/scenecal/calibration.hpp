#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "scenecal/geometry.hpp"

namespace scenecal {

struct BoundingBox {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
};

/// A person observation reduced to its foot and head pixels. When built from
/// a raw bounding box the foot is the bottom-center and the head the
/// top-center; synthetic sources may supply the two pixels directly (they
/// need not share a column).
class PersonDetection {
public:
  static PersonDetection from_box(std::int64_t frame_id, BoundingBox box);

  PersonDetection(std::int64_t frame_id, BoundingBox box, PixelPoint foot,
                  PixelPoint head);

  std::int64_t frame_id() const { return frame_id_; }
  const BoundingBox& box() const { return box_; }
  const PixelPoint& foot_pixel() const { return foot_; }
  const PixelPoint& head_pixel() const { return head_; }

private:
  std::int64_t frame_id_;
  BoundingBox box_;
  PixelPoint foot_;
  PixelPoint head_;
};

/// Vertical scale prior: the world Z of the average head plane and of the
/// foot plane. The implied average body height is the difference.
struct HeightModel {
  double avg_height_m = 1.7018;
  double foot_plane_m = 0.0;

  void validate() const;
};

enum class Formulation {
  /// One independent (X, Y) unknown pair per foot and per head; the system
  /// has 4N rows, 4N+1 columns and a one-dimensional null space, so only a
  /// minimum-norm solution is returned.
  PaperLiteral,
  /// Head constrained directly above the foot: one (X, Y) pair per person,
  /// 4N rows, 2N+1 columns, generically full column rank.
  VerticalConstrained,
};

struct PersonPosition {
  WorldPoint foot;
  WorldPoint head;
};

struct CalibrationSolution {
  double camera_height_m = 0.0;
  std::vector<PersonPosition> person_positions;
  /// RMS pixel distance between the observed foot/head pixels and the
  /// projections of the recovered world points.
  double residual_rms_px = 0.0;
  Formulation formulation = Formulation::VerticalConstrained;
  ProjectionMatrix projection;
  /// Solver diagnostics: numerical rank, column count, the algebraic
  /// least-squares residual ||Ax - b|| / sqrt(rows) and the condition number
  /// of the retained singular spectrum.
  int rank = 0;
  int columns = 0;
  double solver_residual_rms = 0.0;
  double solver_condition = 0.0;

  int nullspace_dimension() const { return columns - rank; }
};

struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

struct LeastSquaresSolution {
  Eigen::VectorXd x;
  double residual_rms = 0.0;
  int rank = 0;
  /// Ratio of the largest retained singular value to the smallest.
  double condition = 0.0;
};

/// Assembles the exact per-paper system over the unknowns
/// [Cz, X0_foot, Y0_foot, X0_head, Y0_head, ...]: for each detection the
/// foot contributes two rows at plane Z = foot_plane and the head two rows
/// at plane Z = avg_height, each row pairing the shared Cz column with the
/// observation's own (X, Y) columns.
LinearSystem build_system_literal(std::span<const PersonDetection> detections,
                                  const ProjectionCoefficients& coeffs,
                                  const HeightModel& heights);

/// Same rows, but the head reuses the foot's (X, Y) columns, encoding that
/// people stand vertically. Unknowns are [Cz, X0, Y0, X1, Y1, ...].
LinearSystem build_system_vertical(std::span<const PersonDetection> detections,
                                   const ProjectionCoefficients& coeffs,
                                   const HeightModel& heights);

/// Minimum-norm least squares via SVD. Rank uses a relative singular-value
/// cutoff of 1e-10; singular directions below the cutoff are dropped from
/// the pseudo-inverse.
LeastSquaresSolution solve_system(const Eigen::MatrixXd& a,
                                  const Eigen::VectorXd& b);

/// Drops detections whose box height falls below the floor (pixel
/// quantization dominates tiny boxes).
std::vector<PersonDetection> filter_detections(
    std::span<const PersonDetection> detections, double min_box_height_px);

/// Solves for the camera height and the person positions given trusted
/// intrinsics and orientation. VerticalConstrained requires full column
/// rank and a camera height above the head plane; PaperLiteral reports the
/// minimum-norm representative of its solution family together with the
/// rank diagnostic and performs no plausibility check.
CalibrationSolution calibrate(std::span<const PersonDetection> detections,
                              const CameraIntrinsics& intrinsics,
                              const CameraPose& pose,
                              const HeightModel& heights,
                              Formulation formulation =
                                  Formulation::VerticalConstrained,
                              double min_box_height_px = 8.0);

/// Mode of a sample computed over fixed-width bins (returns the center of
/// the fullest bin; ties resolve to the lowest bin). Intended for collapsing
/// per-frame camera parameter predictions to a single value.
double binned_mode(std::span<const double> values, double bin_width);

}  // namespace scenecal
