#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scenecal/calibration.hpp"
#include "scenecal/geometry.hpp"

namespace scenecal {

struct Region {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

struct SceneCamera {
  double focal_px = 1000.0;
  double tilt_deg = 70.0;
  double roll_deg = 0.0;
  double height_m = 8.0;
  double image_width = 1920.0;
  double image_height = 1080.0;
  /// Defaults to the image center.
  std::optional<PixelPoint> principal_point;

  CameraIntrinsics intrinsics() const;
  CameraPose pose() const;
};

struct PersonSpec {
  int count = 0;
  double height_mean_m = 1.7018;
  double height_std_m = 0.0;
  Region region;
};

struct VehicleSpec {
  /// Explicit ground placements; used as given.
  std::vector<WorldPoint> positions;
  /// Additionally places this many vehicles uniformly in `region` (the
  /// person region when unset).
  int random_count = 0;
  std::optional<Region> region;
};

struct NoiseSpec {
  double pixel_std = 0.0;
  /// Fraction of persons replaced by off-model objects (odd heights or feet
  /// off the ground plane).
  double outlier_fraction = 0.0;
};

struct SceneSpec {
  SceneCamera camera;
  PersonSpec persons;
  VehicleSpec vehicles;
  NoiseSpec noise;
  double foot_plane_m = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct TruePerson {
  WorldPoint foot;
  double height_m = 0.0;
  bool outlier = false;
  /// False when the noiseless foot or head pixel fell outside the image;
  /// such persons produce no detection.
  bool visible = true;
  /// Index into SyntheticScene::detections, or -1 when not visible.
  int detection_index = -1;
};

struct TrueVehicle {
  WorldPoint position;
  PixelPoint pixel;
  BoundingBox box;
};

struct SyntheticScene {
  std::vector<PersonDetection> detections;
  /// detection index -> person index.
  std::vector<int> detection_person;
  std::vector<TruePerson> persons;
  std::vector<TrueVehicle> vehicles;
  SceneCamera camera;
  ProjectionMatrix true_projection;
  double foot_plane_m = 0.0;

  bool detection_is_outlier(std::size_t detection_index) const;
};

/// Builds a scene with known ground truth. Deterministic for a fixed seed.
/// Detections carry the exact projected foot and head pixels (plus noise
/// when configured); the synthesized box is sized 0.4x the pixel height and
/// matters only when the scene is exported to the box-only detection file
/// format. Throws GeometryError when no person lands inside the image.
SyntheticScene generate(const SceneSpec& spec);

}  // namespace scenecal
