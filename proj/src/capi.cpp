#include "scenecal.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenecal/alignment.hpp"
#include "scenecal/calibration.hpp"
#include "scenecal/evaluation.hpp"
#include "scenecal/io.hpp"
#include "scenecal/proximity.hpp"
#include "scenecal/ransac.hpp"
#include "scenecal/simulate.hpp"

using nlohmann::json;

struct sc_config {
  scenecal::RunConfig cfg;
};

struct sc_detections {
  std::vector<scenecal::DetectionRecord> records;
};

struct sc_calibration {
  scenecal::CalibrationReport report;
};

struct sc_positions {
  std::vector<scenecal::PositionRecord> records;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
sc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SC_OK;
  } catch (const scenecal::ParseError& e) {
    g_last_error = e.what();
    return SC_ERROR_PARSE;
  } catch (const scenecal::IoError& e) {
    g_last_error = e.what();
    return SC_ERROR_IO;
  } catch (const scenecal::InputError& e) {
    g_last_error = e.what();
    return SC_ERROR_INVALID;
  } catch (const scenecal::ConsensusError& e) {
    g_last_error = e.what();
    return SC_ERROR_CONSENSUS;
  } catch (const scenecal::SingleClassError& e) {
    g_last_error = e.what();
    return SC_ERROR_SINGLE_CLASS;
  } catch (const scenecal::GeometryError& e) {
    g_last_error = e.what();
    return SC_ERROR_DEGENERATE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SC_ERROR_INTERNAL;
  }
}

sc_status require(bool ok, const char* message) {
  if (ok) return SC_OK;
  g_last_error = message;
  return SC_ERROR_INVALID;
}

std::vector<scenecal::PersonDetection> person_detections(
    const std::vector<scenecal::DetectionRecord>& records) {
  std::vector<scenecal::PersonDetection> persons;
  for (const auto& rec : records)
    if (rec.object_class == scenecal::ObjectClass::Person)
      persons.push_back(
          scenecal::PersonDetection::from_box(rec.frame_id, rec.box));
  return persons;
}

scenecal::CalibrationReport report_from_ransac(
    const scenecal::RunConfig& cfg, const scenecal::RansacResult& result) {
  scenecal::CalibrationReport report;
  const scenecal::CameraIntrinsics k = cfg.intrinsics();
  report.camera_height_m = result.solution.camera_height_m;
  report.projection = result.solution.projection.matrix();
  report.formulation = result.solution.formulation;
  report.focal_px = k.focal_px();
  report.principal_point = {k.principal_u(), k.principal_v()};
  report.tilt_deg = cfg.tilt_deg;
  report.roll_deg = cfg.roll_deg;
  report.heights = cfg.heights;
  report.residual_rms_px = result.solution.residual_rms_px;
  report.rank = result.solution.rank;
  report.columns = result.solution.columns;
  report.inlier_mask = result.inlier_mask;
  report.per_detection_error_px = result.per_detection_error_px;
  return report;
}

}  // namespace

extern "C" {

const char* sc_status_name(sc_status status) {
  switch (status) {
    case SC_OK: return "ok";
    case SC_ERROR_INVALID: return "invalid-input";
    case SC_ERROR_PARSE: return "parse-error";
    case SC_ERROR_IO: return "io-error";
    case SC_ERROR_DEGENERATE: return "degenerate-geometry";
    case SC_ERROR_CONSENSUS: return "consensus-failure";
    case SC_ERROR_SINGLE_CLASS: return "single-class";
    case SC_ERROR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* sc_last_error(void) { return g_last_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_config_parse(const char* json_text, sc_config** out) {
  if (sc_status s = require(json_text && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_config{scenecal::parse_run_config(json_text)};
  });
}

sc_status sc_config_load(const char* path, sc_config** out) {
  if (sc_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_config{scenecal::parse_run_config(scenecal::read_file(path))};
  });
}

void sc_config_free(sc_config* config) { delete config; }

void sc_config_set_seed(sc_config* config, uint64_t seed) {
  if (config) config->cfg.ransac.rng_seed = seed;
}

sc_status sc_detections_parse(const char* jsonl_text, sc_detections** out) {
  if (sc_status s = require(jsonl_text && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_detections{scenecal::parse_detections_jsonl(jsonl_text)};
  });
}

sc_status sc_detections_load(const char* path, sc_detections** out) {
  if (sc_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_detections{
        scenecal::parse_detections_jsonl(scenecal::read_file(path))};
  });
}

void sc_detections_free(sc_detections* detections) { delete detections; }

int64_t sc_detections_count(const sc_detections* detections) {
  return detections ? static_cast<int64_t>(detections->records.size()) : 0;
}

int64_t sc_detections_person_count(const sc_detections* detections) {
  if (!detections) return 0;
  return std::count_if(
      detections->records.begin(), detections->records.end(),
      [](const scenecal::DetectionRecord& r) {
        return r.object_class == scenecal::ObjectClass::Person;
      });
}

sc_status sc_calibrate(const sc_detections* detections,
                       const sc_config* config, sc_calibration** out) {
  if (sc_status s = require(detections && config && out, "null argument"))
    return s;
  return guarded([&] {
    const auto persons = person_detections(detections->records);
    if (persons.empty())
      throw scenecal::InputError("no person records in the detections input");
    const scenecal::RansacResult result = scenecal::ransac_calibrate(
        persons, config->cfg.intrinsics(), config->cfg.pose(),
        config->cfg.heights, config->cfg.ransac);
    *out = new sc_calibration{report_from_ransac(config->cfg, result)};
  });
}

sc_status sc_calibrate_direct(const sc_detections* detections,
                              const sc_config* config, const char* formulation,
                              sc_calibration** out) {
  if (sc_status s = require(detections && config && out, "null argument"))
    return s;
  return guarded([&] {
    scenecal::Formulation f = scenecal::Formulation::VerticalConstrained;
    if (formulation && std::string(formulation) == "literal")
      f = scenecal::Formulation::PaperLiteral;
    else if (formulation && std::string(formulation) != "vertical" &&
             std::string(formulation) != "")
      throw scenecal::InputError("formulation must be 'vertical' or 'literal'");
    const auto persons = person_detections(detections->records);
    if (persons.empty())
      throw scenecal::InputError("no person records in the detections input");
    const scenecal::CalibrationSolution solution = scenecal::calibrate(
        persons, config->cfg.intrinsics(), config->cfg.pose(),
        config->cfg.heights, f, config->cfg.ransac.min_box_height_px);

    // Direct solve: every detection above the box floor is "in"; errors are
    // reprojection residuals under the solved model when it composes one.
    scenecal::RansacResult as_result;
    as_result.solution = solution;
    as_result.inlier_mask.assign(persons.size(), false);
    as_result.per_detection_error_px.assign(
        persons.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < persons.size(); ++i) {
      if (persons[i].box().height() < config->cfg.ransac.min_box_height_px)
        continue;
      as_result.inlier_mask[i] = true;
      if (solution.camera_height_m > 0.0)
        as_result.per_detection_error_px[i] = scenecal::reprojection_error(
            solution.projection, persons[i], config->cfg.heights);
    }
    *out = new sc_calibration{report_from_ransac(config->cfg, as_result)};
  });
}

sc_status sc_calibration_from_json(const char* json_text,
                                   sc_calibration** out) {
  if (sc_status s = require(json_text && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_calibration{scenecal::parse_calibration_report(json_text)};
  });
}

sc_status sc_calibration_to_json(const sc_calibration* calibration,
                                 char** json_out) {
  if (sc_status s = require(calibration && json_out, "null argument"))
    return s;
  return guarded([&] {
    *json_out =
        dup_string(scenecal::calibration_report_to_json(calibration->report));
  });
}

double sc_calibration_camera_height(const sc_calibration* calibration) {
  return calibration ? calibration->report.camera_height_m : 0.0;
}

void sc_calibration_free(sc_calibration* calibration) { delete calibration; }

sc_status sc_locate(const sc_detections* detections,
                    const sc_calibration* calibration, sc_positions** out) {
  if (sc_status s = require(detections && calibration && out, "null argument"))
    return s;
  return guarded([&] {
    const scenecal::ProjectionMatrix projection =
        calibration->report.projection_matrix();
    const double foot_plane = calibration->report.heights.foot_plane_m;
    auto positions = std::make_unique<sc_positions>();
    std::int64_t id = 0;
    for (const auto& rec : detections->records) {
      scenecal::PositionRecord pos;
      pos.id = id++;
      pos.frame_id = rec.frame_id;
      pos.object_class = rec.object_class;
      const bool is_person = rec.object_class == scenecal::ObjectClass::Person;
      const scenecal::PixelPoint pixel =
          is_person
              ? scenecal::PixelPoint{(rec.box.left + rec.box.right) / 2.0,
                                     rec.box.bottom}
              : scenecal::PixelPoint{(rec.box.left + rec.box.right) / 2.0,
                                     (rec.box.top + rec.box.bottom) / 2.0};
      const double plane_z = is_person ? foot_plane : 0.0;
      try {
        pos.point = scenecal::backproject_to_plane(projection, pixel, plane_z);
        pos.ok = scenecal::in_front_of_camera(projection, pos.point);
      } catch (const scenecal::GeometryError&) {
        pos.ok = false;
      }
      if (!pos.ok) pos.point = scenecal::WorldPoint{};
      positions->records.push_back(pos);
    }
    *out = positions.release();
  });
}

sc_status sc_positions_parse(const char* text, sc_positions** out) {
  if (sc_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_positions{scenecal::parse_positions_any(text)};
  });
}

sc_status sc_positions_load(const char* path, sc_positions** out) {
  if (sc_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    *out = new sc_positions{
        scenecal::parse_positions_any(scenecal::read_file(path))};
  });
}

sc_status sc_positions_to_jsonl(const sc_positions* positions,
                                char** jsonl_out) {
  if (sc_status s = require(positions && jsonl_out, "null argument")) return s;
  return guarded([&] {
    *jsonl_out = dup_string(scenecal::positions_to_jsonl(positions->records));
  });
}

void sc_positions_free(sc_positions* positions) { delete positions; }

sc_status sc_proximity_report(const sc_positions* positions,
                              const sc_config* config, char** json_out) {
  if (sc_status s = require(positions && config && json_out, "null argument"))
    return s;
  return guarded([&] {
    config->cfg.proximity.validate();
    std::map<std::int64_t, std::vector<const scenecal::PositionRecord*>>
        persons, vehicles;
    for (const auto& rec : positions->records) {
      if (!rec.ok) continue;
      (rec.object_class == scenecal::ObjectClass::Person
           ? persons[rec.frame_id]
           : vehicles[rec.frame_id])
          .push_back(&rec);
    }
    json pairs = json::array();
    json near_events = json::array();
    for (const auto& [frame, ps] : persons) {
      auto vit = vehicles.find(frame);
      if (vit == vehicles.end()) continue;
      for (const auto* p : ps) {
        for (const auto* v : vit->second) {
          const double d = scenecal::ground_distance(p->point, v->point);
          const double prob = scenecal::p_near(config->cfg.proximity, d);
          json entry{{"frame_id", frame},
                     {"person_id", p->id},
                     {"vehicle_id", v->id},
                     {"distance_m", d},
                     {"p_near", prob}};
          pairs.push_back(entry);
          if (prob >= 0.5) near_events.push_back(entry);
        }
      }
    }
    json report{{"tau_m", config->cfg.proximity.threshold_m},
                {"sharpness_m", config->cfg.proximity.sharpness_m},
                {"pairs", pairs},
                {"near_events", near_events}};
    *json_out = dup_string(report.dump(2) + "\n");
  });
}

sc_status sc_p_near(const sc_config* config, double distance_m, double* out) {
  if (sc_status s = require(config && out, "null argument")) return s;
  return guarded(
      [&] { *out = scenecal::p_near(config->cfg.proximity, distance_m); });
}

sc_status sc_align(const sc_positions* estimated,
                   const sc_positions* reference, int allow_scale,
                   char** report_json_out, sc_positions** aligned_out) {
  if (sc_status s =
          require(estimated && reference && report_json_out, "null argument"))
    return s;
  return guarded([&] {
    std::map<std::int64_t, const scenecal::PositionRecord*> ref_by_id;
    for (const auto& rec : reference->records) ref_by_id[rec.id] = &rec;
    std::vector<scenecal::WorldPoint> source, target;
    for (const auto& rec : estimated->records) {
      if (!rec.ok) continue;
      auto it = ref_by_id.find(rec.id);
      if (it == ref_by_id.end() || !it->second->ok) continue;
      source.push_back(rec.point);
      target.push_back(it->second->point);
    }
    const scenecal::RigidTransform transform =
        scenecal::fit_rigid(source, target);
    const scenecal::CorrespondenceReport errors =
        scenecal::correspondence_errors(transform, source, target);

    json obj;
    const Eigen::Matrix3d& r = transform.rotation.matrix();
    json rot = json::array();
    for (int i = 0; i < 3; ++i)
      rot.push_back({r(i, 0), r(i, 1), r(i, 2)});
    obj["rotation"] = rot;
    obj["translation"] = {transform.translation(0), transform.translation(1),
                          transform.translation(2)};
    obj["mean_error_m"] = errors.mean_error_m;
    obj["std_error_m"] = errors.std_error_m;
    obj["max_error_m"] = errors.max_error_m;
    obj["per_point_error_m"] = errors.per_point_error_m;
    obj["point_count"] = source.size();
    if (allow_scale) {
      const scenecal::SimilarityTransform sim =
          scenecal::fit_similarity(source, target);
      obj["similarity_scale"] = sim.scale;
    }
    *report_json_out = dup_string(obj.dump(2) + "\n");

    if (aligned_out) {
      auto aligned = std::make_unique<sc_positions>();
      aligned->records = estimated->records;
      for (auto& rec : aligned->records)
        if (rec.ok) rec.point = transform.apply(rec.point);
      *aligned_out = aligned.release();
    }
  });
}

sc_status sc_roc_from_positions(const sc_positions* reference,
                                const sc_positions* estimated,
                                const sc_config* config, char** csv_out,
                                double* auc_out) {
  if (sc_status s = require(reference && estimated && config && csv_out &&
                                auc_out,
                            "null argument"))
    return s;
  return guarded([&] {
    const auto pairs =
        scenecal::make_distance_pairs(reference->records, estimated->records);
    if (pairs.empty())
      throw scenecal::InputError(
          "no person-vehicle pairs shared between the two position sets");
    std::vector<scenecal::LabeledPair> labeled;
    labeled.reserve(pairs.size());
    for (const auto& p : pairs)
      labeled.push_back(
          scenecal::LabeledPair{p.gt_distance_m, p.est_distance_m});
    const scenecal::RocCurve curve = scenecal::roc_auc(
        scenecal::label_pairs(labeled, config->cfg.eval_gt_threshold_m));
    *csv_out = dup_string(curve.to_csv());
    *auc_out = curve.auc;
  });
}

sc_status sc_roc_from_pairs(const char* pairs_jsonl, const sc_config* config,
                            char** csv_out, double* auc_out) {
  if (sc_status s =
          require(pairs_jsonl && config && csv_out && auc_out, "null argument"))
    return s;
  return guarded([&] {
    const auto pairs = scenecal::parse_pairs_jsonl(pairs_jsonl);
    if (pairs.empty()) throw scenecal::InputError("pairs input is empty");
    std::vector<scenecal::LabeledPair> labeled;
    labeled.reserve(pairs.size());
    for (const auto& p : pairs)
      labeled.push_back(
          scenecal::LabeledPair{p.gt_distance_m, p.est_distance_m});
    const scenecal::RocCurve curve = scenecal::roc_auc(
        scenecal::label_pairs(labeled, config->cfg.eval_gt_threshold_m));
    *csv_out = dup_string(curve.to_csv());
    *auc_out = curve.auc;
  });
}

namespace {

sc_status simulate_impl(const char* scene_spec_json, const uint64_t* seed,
                        char** detections_jsonl_out, char** truth_json_out) {
  if (sc_status s = require(scene_spec_json && detections_jsonl_out &&
                                truth_json_out,
                            "null argument"))
    return s;
  return guarded([&] {
    scenecal::SceneSpec spec = scenecal::parse_scene_spec(scene_spec_json);
    if (seed) spec.rng_seed = *seed;
    const scenecal::SyntheticScene scene = scenecal::generate(spec);
    *detections_jsonl_out = dup_string(
        scenecal::detections_to_jsonl(scenecal::scene_detection_records(scene)));
    *truth_json_out = dup_string(scenecal::scene_truth_json(scene));
  });
}

}  // namespace

sc_status sc_simulate(const char* scene_spec_json, char** detections_jsonl_out,
                      char** truth_json_out) {
  return simulate_impl(scene_spec_json, nullptr, detections_jsonl_out,
                       truth_json_out);
}

sc_status sc_simulate_seeded(const char* scene_spec_json, uint64_t seed,
                             char** detections_jsonl_out,
                             char** truth_json_out) {
  return simulate_impl(scene_spec_json, &seed, detections_jsonl_out,
                       truth_json_out);
}

sc_status sc_binned_mode(const double* values, size_t count, double bin_width,
                         double* out) {
  if (sc_status s = require(values && out, "null argument")) return s;
  return guarded([&] {
    *out = scenecal::binned_mode(std::span<const double>(values, count),
                                 bin_width);
  });
}

const char* sc_version(void) { return "0.1.0"; }

}  // extern "C"
