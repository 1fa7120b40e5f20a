#include "scenecal/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace scenecal {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

double require_number(const json& obj, const std::string& path,
                      const std::string& key) {
  if (!obj.contains(key))
    throw ParseError("missing required field '" + path + "." + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ParseError("field '" + path + "." + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& path,
                 const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_null()) return fallback;  // non-finite values serialize as null
  if (!v.is_number())
    throw ParseError("field '" + path + "." + key + "' must be a number");
  return v.get<double>();
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw ParseError("unknown field '" + path + "." + key + "'");
  }
}

PixelPoint parse_pixel_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError("field '" + path + "' must be a [u, v] number pair");
  return PixelPoint{v[0].get<double>(), v[1].get<double>()};
}

Region parse_region(const json& v, const std::string& path) {
  if (!v.is_object())
    throw ParseError("field '" + path + "' must be an object");
  reject_unknown_keys(v, path, {"x_min", "x_max", "y_min", "y_max"});
  return Region{require_number(v, path, "x_min"),
                require_number(v, path, "x_max"),
                require_number(v, path, "y_min"),
                require_number(v, path, "y_max")};
}

const char* formulation_name(Formulation f) {
  return f == Formulation::PaperLiteral ? "literal" : "vertical";
}

Formulation formulation_from_name(const std::string& s) {
  if (s == "literal") return Formulation::PaperLiteral;
  if (s == "vertical") return Formulation::VerticalConstrained;
  throw ParseError("unknown formulation '" + s +
                   "' (expected 'vertical' or 'literal')");
}

json matrix_to_json(const Matrix34& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix34 matrix_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3)
    throw ParseError("field '" + path + "' must be a 3x4 matrix");
  Matrix34 m;
  for (int r = 0; r < 3; ++r) {
    const json& row = v[r];
    if (!row.is_array() || row.size() != 4)
      throw ParseError("field '" + path + "' must be a 3x4 matrix");
    for (int c = 0; c < 4; ++c) {
      if (!row[c].is_number())
        throw ParseError("field '" + path + "' must contain numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

}  // namespace

std::string to_string(ObjectClass c) {
  return c == ObjectClass::Person ? "person" : "vehicle";
}

ObjectClass object_class_from_string(const std::string& s) {
  if (s == "person") return ObjectClass::Person;
  if (s == "vehicle") return ObjectClass::Vehicle;
  throw ParseError("unknown object class '" + s +
                   "' (expected 'person' or 'vehicle')");
}

std::vector<DetectionRecord> parse_detections_jsonl(const std::string& text) {
  std::vector<DetectionRecord> records;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("detections line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    const std::string path = "line " + std::to_string(line_no);
    try {
      reject_unknown_keys(obj, path,
                          {"frame_id", "object_class", "left", "top", "right",
                           "bottom"});
      DetectionRecord rec;
      rec.frame_id = static_cast<std::int64_t>(
          require_number(obj, path, "frame_id"));
      if (!obj.contains("object_class") || !obj.at("object_class").is_string())
        throw ParseError("missing or non-string field '" + path +
                         ".object_class'");
      rec.object_class =
          object_class_from_string(obj.at("object_class").get<std::string>());
      rec.box = BoundingBox{require_number(obj, path, "left"),
                            require_number(obj, path, "top"),
                            require_number(obj, path, "right"),
                            require_number(obj, path, "bottom")};
      if (!(rec.box.right > rec.box.left) || !(rec.box.bottom > rec.box.top))
        throw ParseError(path +
                         ": box must satisfy right > left and bottom > top");
      records.push_back(rec);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("detections " + path + ": " + e.what());
    }
  }
  return records;
}

std::string detections_to_jsonl(const std::vector<DetectionRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    json obj{{"frame_id", rec.frame_id},
             {"object_class", to_string(rec.object_class)},
             {"left", rec.box.left},
             {"top", rec.box.top},
             {"right", rec.box.right},
             {"bottom", rec.box.bottom}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

CameraIntrinsics RunConfig::intrinsics() const {
  if (!has_camera)
    throw InputError("config is missing the required 'camera' section");
  if (principal_point) {
    if (image_width && image_height &&
        (principal_point->u < 0.0 || principal_point->u > 4.0 * *image_width ||
         principal_point->v < 0.0 || principal_point->v > 4.0 * *image_height))
      throw InputError(
          "camera.principal_point outside the [0, 4 x image] sanity band");
    return CameraIntrinsics(focal_px, principal_point->u, principal_point->v);
  }
  if (image_width && image_height)
    return CameraIntrinsics::with_image_center(focal_px, *image_width,
                                               *image_height);
  throw InputError(
      "config camera section needs either 'principal_point' or "
      "'image_width'+'image_height'");
}

CameraPose RunConfig::pose() const {
  if (!has_camera)
    throw InputError("config is missing the required 'camera' section");
  CameraPose p;
  p.tilt_deg = tilt_deg;
  p.roll_deg = roll_deg;
  p.validate();
  return p;
}

RunConfig parse_run_config(const std::string& json_text) {
  const json root = parse_json(json_text, "config");
  if (!root.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown_keys(root, "config",
                      {"camera", "heights", "ransac", "proximity", "eval"});
  RunConfig cfg;

  if (root.contains("camera")) {
    const json& cam = root.at("camera");
    if (!cam.is_object())
      throw ParseError("field 'config.camera' must be an object");
    reject_unknown_keys(cam, "camera",
                        {"focal_px", "tilt_deg", "roll_deg", "principal_point",
                         "image_width", "image_height"});
    cfg.has_camera = true;
    cfg.focal_px = require_number(cam, "camera", "focal_px");
    cfg.tilt_deg = require_number(cam, "camera", "tilt_deg");
    cfg.roll_deg = require_number(cam, "camera", "roll_deg");
    if (cam.contains("principal_point"))
      cfg.principal_point =
          parse_pixel_pair(cam.at("principal_point"), "camera.principal_point");
    if (cam.contains("image_width"))
      cfg.image_width = require_number(cam, "camera", "image_width");
    if (cam.contains("image_height"))
      cfg.image_height = require_number(cam, "camera", "image_height");
  }

  if (root.contains("heights")) {
    const json& h = root.at("heights");
    reject_unknown_keys(h, "heights", {"avg_m", "foot_plane_m"});
    cfg.heights.avg_height_m =
        number_or(h, "heights", "avg_m", cfg.heights.avg_height_m);
    cfg.heights.foot_plane_m =
        number_or(h, "heights", "foot_plane_m", cfg.heights.foot_plane_m);
  }

  if (root.contains("ransac")) {
    const json& r = root.at("ransac");
    reject_unknown_keys(r, "ransac",
                        {"threshold_px", "iterations", "seed", "sample_size",
                         "min_inliers", "adaptive_stop", "min_box_height_px"});
    cfg.ransac.inlier_threshold_px =
        number_or(r, "ransac", "threshold_px", cfg.ransac.inlier_threshold_px);
    cfg.ransac.iterations = static_cast<int>(
        number_or(r, "ransac", "iterations", cfg.ransac.iterations));
    cfg.ransac.rng_seed = static_cast<std::uint64_t>(
        number_or(r, "ransac", "seed", 0.0));
    cfg.ransac.sample_size = static_cast<int>(
        number_or(r, "ransac", "sample_size", cfg.ransac.sample_size));
    cfg.ransac.min_inliers = static_cast<int>(
        number_or(r, "ransac", "min_inliers", cfg.ransac.min_inliers));
    cfg.ransac.min_box_height_px = number_or(r, "ransac", "min_box_height_px",
                                             cfg.ransac.min_box_height_px);
    if (r.contains("adaptive_stop")) {
      if (!r.at("adaptive_stop").is_boolean())
        throw ParseError("field 'ransac.adaptive_stop' must be a boolean");
      cfg.ransac.adaptive_stop = r.at("adaptive_stop").get<bool>();
    }
  }

  if (root.contains("proximity")) {
    const json& p = root.at("proximity");
    reject_unknown_keys(p, "proximity", {"tau_m", "sharpness_m"});
    cfg.proximity.threshold_m =
        number_or(p, "proximity", "tau_m", cfg.proximity.threshold_m);
    cfg.proximity.sharpness_m =
        number_or(p, "proximity", "sharpness_m", cfg.proximity.sharpness_m);
  }

  if (root.contains("eval")) {
    const json& e = root.at("eval");
    reject_unknown_keys(e, "eval", {"gt_threshold_m"});
    cfg.eval_gt_threshold_m =
        number_or(e, "eval", "gt_threshold_m", cfg.eval_gt_threshold_m);
  }
  return cfg;
}

std::vector<PositionRecord> parse_positions(const std::string& text) {
  std::vector<PositionRecord> records;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("positions line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    const std::string path = "line " + std::to_string(line_no);
    reject_unknown_keys(obj, path,
                        {"id", "frame_id", "object_class", "ok", "x", "y",
                         "z"});
    PositionRecord rec;
    rec.id = static_cast<std::int64_t>(require_number(obj, path, "id"));
    rec.frame_id =
        static_cast<std::int64_t>(require_number(obj, path, "frame_id"));
    if (!obj.contains("object_class") || !obj.at("object_class").is_string())
      throw ParseError("missing or non-string field '" + path +
                       ".object_class'");
    rec.object_class =
        object_class_from_string(obj.at("object_class").get<std::string>());
    if (obj.contains("ok") && !obj.at("ok").is_boolean())
      throw ParseError("field '" + path + ".ok' must be a boolean");
    rec.ok = !obj.contains("ok") || obj.at("ok").get<bool>();
    if (rec.ok) {
      rec.point = WorldPoint{require_number(obj, path, "x"),
                             require_number(obj, path, "y"),
                             number_or(obj, path, "z", 0.0)};
    }
    records.push_back(rec);
  }
  return records;
}

std::string positions_to_jsonl(const std::vector<PositionRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    json obj{{"id", rec.id},
             {"frame_id", rec.frame_id},
             {"object_class", to_string(rec.object_class)},
             {"ok", rec.ok}};
    if (rec.ok) {
      obj["x"] = rec.point.x;
      obj["y"] = rec.point.y;
      obj["z"] = rec.point.z;
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

ProjectionMatrix CalibrationReport::projection_matrix() const {
  return ProjectionMatrix::from_full_matrix(projection, camera_height_m);
}

std::string calibration_report_to_json(const CalibrationReport& report) {
  json obj;
  obj["camera_height_m"] = report.camera_height_m;
  obj["projection_matrix"] = matrix_to_json(report.projection);
  obj["formulation"] = formulation_name(report.formulation);
  obj["camera"] = {{"focal_px", report.focal_px},
                   {"principal_point",
                    {report.principal_point.u, report.principal_point.v}},
                   {"tilt_deg", report.tilt_deg},
                   {"roll_deg", report.roll_deg}};
  obj["heights"] = {{"avg_m", report.heights.avg_height_m},
                    {"foot_plane_m", report.heights.foot_plane_m}};
  obj["residual_rms_px"] = report.residual_rms_px;
  obj["rank"] = report.rank;
  obj["columns"] = report.columns;
  obj["inlier_mask"] = report.inlier_mask;
  obj["per_detection_error_px"] = json::array();
  for (double e : report.per_detection_error_px) {
    if (std::isfinite(e))
      obj["per_detection_error_px"].push_back(e);
    else
      obj["per_detection_error_px"].push_back(nullptr);
  }
  obj["inlier_count"] = static_cast<int>(
      std::count(report.inlier_mask.begin(), report.inlier_mask.end(), true));
  obj["detection_count"] = report.inlier_mask.size();
  return obj.dump(2) + "\n";
}

namespace {

CalibrationReport parse_calibration_report_fields(const json& obj) {
  CalibrationReport report;
  report.camera_height_m = require_number(obj, "report", "camera_height_m");
  if (!obj.contains("projection_matrix"))
    throw ParseError("missing required field 'report.projection_matrix'");
  report.projection =
      matrix_from_json(obj.at("projection_matrix"), "report.projection_matrix");
  if (obj.contains("formulation"))
    report.formulation =
        formulation_from_name(obj.at("formulation").get<std::string>());
  if (obj.contains("camera")) {
    const json& cam = obj.at("camera");
    report.focal_px = require_number(cam, "report.camera", "focal_px");
    report.tilt_deg = require_number(cam, "report.camera", "tilt_deg");
    report.roll_deg = require_number(cam, "report.camera", "roll_deg");
    if (cam.contains("principal_point"))
      report.principal_point = parse_pixel_pair(
          cam.at("principal_point"), "report.camera.principal_point");
  }
  if (obj.contains("heights")) {
    const json& h = obj.at("heights");
    report.heights.avg_height_m = require_number(h, "report.heights", "avg_m");
    report.heights.foot_plane_m =
        number_or(h, "report.heights", "foot_plane_m", 0.0);
  }
  report.residual_rms_px = number_or(obj, "report", "residual_rms_px", 0.0);
  report.rank = static_cast<int>(number_or(obj, "report", "rank", 0.0));
  report.columns = static_cast<int>(number_or(obj, "report", "columns", 0.0));
  if (obj.contains("inlier_mask"))
    report.inlier_mask = obj.at("inlier_mask").get<std::vector<bool>>();
  if (obj.contains("per_detection_error_px"))
    for (const json& e : obj.at("per_detection_error_px"))
      report.per_detection_error_px.push_back(
          e.is_null() ? std::numeric_limits<double>::infinity()
                      : e.get<double>());
  return report;
}

}  // namespace

CalibrationReport parse_calibration_report(const std::string& json_text) {
  const json obj = parse_json(json_text, "calibration report");
  try {
    return parse_calibration_report_fields(obj);
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration report: ") + e.what());
  }
}

SceneSpec parse_scene_spec(const std::string& json_text) {
  const json root = parse_json(json_text, "scene spec");
  if (!root.is_object()) throw ParseError("scene spec must be a JSON object");
  reject_unknown_keys(root, "scene",
                      {"camera", "persons", "vehicles", "noise",
                       "foot_plane_m", "rng_seed"});
  SceneSpec spec;

  if (!root.contains("camera"))
    throw ParseError("missing required section 'scene.camera'");
  const json& cam = root.at("camera");
  reject_unknown_keys(cam, "scene.camera",
                      {"focal_px", "tilt_deg", "roll_deg", "height_m",
                       "image_width", "image_height", "principal_point"});
  spec.camera.focal_px = require_number(cam, "scene.camera", "focal_px");
  spec.camera.tilt_deg = require_number(cam, "scene.camera", "tilt_deg");
  spec.camera.roll_deg = require_number(cam, "scene.camera", "roll_deg");
  spec.camera.height_m = require_number(cam, "scene.camera", "height_m");
  spec.camera.image_width =
      require_number(cam, "scene.camera", "image_width");
  spec.camera.image_height =
      require_number(cam, "scene.camera", "image_height");
  if (cam.contains("principal_point"))
    spec.camera.principal_point = parse_pixel_pair(
        cam.at("principal_point"), "scene.camera.principal_point");

  if (root.contains("persons")) {
    const json& p = root.at("persons");
    reject_unknown_keys(p, "scene.persons",
                        {"count", "height_mean_m", "height_std_m", "region"});
    spec.persons.count =
        static_cast<int>(require_number(p, "scene.persons", "count"));
    spec.persons.height_mean_m = number_or(p, "scene.persons", "height_mean_m",
                                           spec.persons.height_mean_m);
    spec.persons.height_std_m = number_or(p, "scene.persons", "height_std_m",
                                          spec.persons.height_std_m);
    if (p.contains("region"))
      spec.persons.region = parse_region(p.at("region"), "scene.persons.region");
    else if (spec.persons.count > 0)
      throw ParseError("missing required field 'scene.persons.region'");
  }

  if (root.contains("vehicles")) {
    const json& v = root.at("vehicles");
    reject_unknown_keys(v, "scene.vehicles",
                        {"positions", "random_count", "region"});
    if (v.contains("positions")) {
      const json& pos = v.at("positions");
      if (!pos.is_array())
        throw ParseError("field 'scene.vehicles.positions' must be an array");
      for (const json& xy : pos) {
        if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() ||
            !xy[1].is_number())
          throw ParseError(
              "entries of 'scene.vehicles.positions' must be [x, y] pairs");
        spec.vehicles.positions.push_back(
            WorldPoint{xy[0].get<double>(), xy[1].get<double>(), 0.0});
      }
    }
    spec.vehicles.random_count = static_cast<int>(
        number_or(v, "scene.vehicles", "random_count", 0.0));
    if (v.contains("region"))
      spec.vehicles.region =
          parse_region(v.at("region"), "scene.vehicles.region");
  }

  if (root.contains("noise")) {
    const json& n = root.at("noise");
    reject_unknown_keys(n, "scene.noise", {"pixel_std", "outlier_fraction"});
    spec.noise.pixel_std = number_or(n, "scene.noise", "pixel_std", 0.0);
    spec.noise.outlier_fraction =
        number_or(n, "scene.noise", "outlier_fraction", 0.0);
  }

  spec.foot_plane_m = number_or(root, "scene", "foot_plane_m", 0.0);
  spec.rng_seed = static_cast<std::uint64_t>(
      number_or(root, "scene", "rng_seed", 0.0));
  spec.validate();
  return spec;
}

std::vector<DetectionRecord> scene_detection_records(
    const SyntheticScene& scene) {
  std::vector<DetectionRecord> records;
  records.reserve(scene.detections.size() + scene.vehicles.size());
  for (const auto& det : scene.detections)
    records.push_back(
        DetectionRecord{det.frame_id(), ObjectClass::Person, det.box()});
  for (const auto& vehicle : scene.vehicles)
    records.push_back(DetectionRecord{0, ObjectClass::Vehicle, vehicle.box});
  return records;
}

std::string scene_truth_json(const SyntheticScene& scene) {
  json obj;
  PixelPoint pp{scene.camera.image_width / 2.0,
                scene.camera.image_height / 2.0};
  if (scene.camera.principal_point) pp = *scene.camera.principal_point;
  obj["camera"] = {{"focal_px", scene.camera.focal_px},
                   {"tilt_deg", scene.camera.tilt_deg},
                   {"roll_deg", scene.camera.roll_deg},
                   {"height_m", scene.camera.height_m},
                   {"image_width", scene.camera.image_width},
                   {"image_height", scene.camera.image_height},
                   {"principal_point", {pp.u, pp.v}}};
  obj["foot_plane_m"] = scene.foot_plane_m;

  json persons = json::array();
  for (const auto& p : scene.persons)
    persons.push_back({{"x", p.foot.x},
                       {"y", p.foot.y},
                       {"foot_z", p.foot.z},
                       {"height_m", p.height_m},
                       {"outlier", p.outlier},
                       {"visible", p.visible},
                       {"detection_index", p.detection_index}});
  obj["persons"] = persons;

  json vehicles = json::array();
  for (const auto& v : scene.vehicles)
    vehicles.push_back({{"x", v.position.x}, {"y", v.position.y}});
  obj["vehicles"] = vehicles;

  // Positions aligned with the exported detection records: persons first in
  // detection order, then vehicles.
  json positions = json::array();
  std::int64_t id = 0;
  for (std::size_t d = 0; d < scene.detections.size(); ++d) {
    const TruePerson& p = scene.persons[scene.detection_person[d]];
    positions.push_back({{"id", id++},
                         {"frame_id", 0},
                         {"object_class", "person"},
                         {"ok", true},
                         {"x", p.foot.x},
                         {"y", p.foot.y},
                         {"z", p.foot.z}});
  }
  for (const auto& v : scene.vehicles)
    positions.push_back({{"id", id++},
                         {"frame_id", 0},
                         {"object_class", "vehicle"},
                         {"ok", true},
                         {"x", v.position.x},
                         {"y", v.position.y},
                         {"z", 0.0}});
  obj["positions"] = positions;
  return obj.dump(2) + "\n";
}

std::vector<PositionRecord> parse_positions_any(const std::string& text) {
  // A truth sidecar is a single JSON object carrying a "positions" array;
  // a positions file is JSON lines (which never parses as one document).
  try {
    const json obj = json::parse(text);
    if (obj.is_object() && obj.contains("positions")) {
      std::string jsonl;
      for (const json& rec : obj.at("positions")) {
        jsonl += rec.dump();
        jsonl += '\n';
      }
      return parse_positions(jsonl);
    }
  } catch (const json::exception&) {
    // fall through to the line-based format
  }
  return parse_positions(text);
}

std::vector<DistancePair> make_distance_pairs(
    const std::vector<PositionRecord>& gt,
    const std::vector<PositionRecord>& est) {
  std::map<std::int64_t, const PositionRecord*> est_by_id;
  for (const auto& rec : est) est_by_id[rec.id] = &rec;

  // Matched records per frame, split by class.
  struct Matched {
    const PositionRecord* gt;
    const PositionRecord* est;
  };
  std::map<std::int64_t, std::vector<Matched>> persons, vehicles;
  for (const auto& rec : gt) {
    auto it = est_by_id.find(rec.id);
    if (it == est_by_id.end()) continue;
    const PositionRecord* e = it->second;
    if (e->object_class != rec.object_class || e->frame_id != rec.frame_id)
      throw InputError("position record id " + std::to_string(rec.id) +
                       " disagrees between the two files");
    if (!rec.ok || !e->ok) continue;
    auto& bucket = rec.object_class == ObjectClass::Person
                       ? persons[rec.frame_id]
                       : vehicles[rec.frame_id];
    bucket.push_back(Matched{&rec, e});
  }

  std::vector<DistancePair> pairs;
  for (const auto& [frame, ps] : persons) {
    auto vit = vehicles.find(frame);
    if (vit == vehicles.end()) continue;
    for (const auto& p : ps)
      for (const auto& v : vit->second)
        pairs.push_back(DistancePair{
            frame, p.gt->id, v.gt->id,
            ground_distance(p.gt->point, v.gt->point),
            ground_distance(p.est->point, v.est->point)});
  }
  return pairs;
}

std::vector<DistancePair> parse_pairs_jsonl(const std::string& text) {
  std::vector<DistancePair> pairs;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("pairs line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    const std::string path = "line " + std::to_string(line_no);
    reject_unknown_keys(obj, path,
                        {"frame_id", "person_id", "vehicle_id",
                         "gt_distance_m", "est_distance_m"});
    pairs.push_back(DistancePair{
        static_cast<std::int64_t>(number_or(obj, path, "frame_id", 0.0)),
        static_cast<std::int64_t>(number_or(obj, path, "person_id", 0.0)),
        static_cast<std::int64_t>(number_or(obj, path, "vehicle_id", 0.0)),
        require_number(obj, path, "gt_distance_m"),
        require_number(obj, path, "est_distance_m")});
  }
  return pairs;
}

std::string pairs_to_jsonl(const std::vector<DistancePair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    json obj{{"frame_id", p.frame_id},
             {"person_id", p.person_id},
             {"vehicle_id", p.vehicle_id},
             {"gt_distance_m", p.gt_distance_m},
             {"est_distance_m", p.est_distance_m}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace scenecal
