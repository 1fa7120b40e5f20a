#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenecal/calibration.hpp"
#include "scenecal/evaluation.hpp"
#include "scenecal/proximity.hpp"
#include "scenecal/ransac.hpp"
#include "scenecal/simulate.hpp"

namespace scenecal {

enum class ObjectClass { Person, Vehicle };

std::string to_string(ObjectClass c);
ObjectClass object_class_from_string(const std::string& s);

/// One detection file line:
/// {"frame_id":0,"object_class":"person","left":..,"top":..,"right":..,"bottom":..}
struct DetectionRecord {
  std::int64_t frame_id = 0;
  ObjectClass object_class = ObjectClass::Person;
  BoundingBox box;
};

std::vector<DetectionRecord> parse_detections_jsonl(const std::string& text);
std::string detections_to_jsonl(const std::vector<DetectionRecord>& records);

/// Batch-run configuration (single JSON object; unknown keys rejected to
/// catch typos). Only the camera section is mandatory for calibration.
struct RunConfig {
  double focal_px = 0.0;
  double tilt_deg = 0.0;
  double roll_deg = 0.0;
  std::optional<PixelPoint> principal_point;
  std::optional<double> image_width;
  std::optional<double> image_height;
  bool has_camera = false;

  HeightModel heights;
  RansacConfig ransac;
  NearPredicate proximity;
  double eval_gt_threshold_m = 4.0;

  /// Throws InputError when the camera section is missing or incomplete.
  CameraIntrinsics intrinsics() const;
  CameraPose pose() const;
};

RunConfig parse_run_config(const std::string& json_text);

/// A located record: the back-projected ground position of one detection.
struct PositionRecord {
  std::int64_t id = 0;  // line index of the source detection record
  std::int64_t frame_id = 0;
  ObjectClass object_class = ObjectClass::Person;
  bool ok = true;  // false for horizon-degenerate pixels
  WorldPoint point;
};

std::vector<PositionRecord> parse_positions(const std::string& text);
std::string positions_to_jsonl(const std::vector<PositionRecord>& records);

/// Calibration report payload (JSON object on disk).
struct CalibrationReport {
  double camera_height_m = 0.0;
  Matrix34 projection;  // full 3x4 matrix, fourth column includes the height
  Formulation formulation = Formulation::VerticalConstrained;
  double focal_px = 0.0;
  PixelPoint principal_point;
  double tilt_deg = 0.0;
  double roll_deg = 0.0;
  HeightModel heights;
  double residual_rms_px = 0.0;
  int rank = 0;
  int columns = 0;
  std::vector<bool> inlier_mask;
  std::vector<double> per_detection_error_px;

  ProjectionMatrix projection_matrix() const;
};

std::string calibration_report_to_json(const CalibrationReport& report);
CalibrationReport parse_calibration_report(const std::string& json_text);

/// Scene specification file for the simulator.
SceneSpec parse_scene_spec(const std::string& json_text);

/// Detections-file records of a synthetic scene (boxes only; a box-derived
/// head pixel differs from the exact one whenever the projected body axis is
/// not image-vertical, which is the same measurement error real detector
/// boxes carry).
std::vector<DetectionRecord> scene_detection_records(
    const SyntheticScene& scene);

/// Truth sidecar: camera parameters, per-person/vehicle ground truth, and a
/// "positions" array aligned with the exported detection record ids so it
/// can stand in for a positions file in align/roc runs.
std::string scene_truth_json(const SyntheticScene& scene);

/// Accepts either a positions JSONL file or a truth sidecar (a JSON object
/// with a "positions" array).
std::vector<PositionRecord> parse_positions_any(const std::string& text);

/// One gt/est distance pair per person-vehicle combination, matched by
/// record ids present in both files.
struct DistancePair {
  std::int64_t frame_id = 0;
  std::int64_t person_id = 0;
  std::int64_t vehicle_id = 0;
  double gt_distance_m = 0.0;
  double est_distance_m = 0.0;
};

std::vector<DistancePair> make_distance_pairs(
    const std::vector<PositionRecord>& gt,
    const std::vector<PositionRecord>& est);

std::vector<DistancePair> parse_pairs_jsonl(const std::string& text);
std::string pairs_to_jsonl(const std::vector<DistancePair>& pairs);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace scenecal
