/*
 * scenecal C API: camera auto-calibration from pedestrian detections,
 * ground-plane localization, spatial proximity scoring and ROC evaluation.
 *
 * All functions return a status code; SC_OK is 0. On failure,
 * sc_last_error() returns a thread-local message describing what went
 * wrong. Every non-NULL object handle and every string returned through an
 * out parameter is owned by the caller: release handles with their *_free
 * function and strings with sc_string_free.
 */
#ifndef SCENECAL_H
#define SCENECAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef SCENECAL_BUILD
#    define SC_API __declspec(dllexport)
#  else
#    define SC_API __declspec(dllimport)
#  endif
#else
#  define SC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERROR_INVALID = 1,      /* bad argument or unusable input */
  SC_ERROR_PARSE = 2,        /* malformed file or JSON */
  SC_ERROR_IO = 3,           /* file system failure */
  SC_ERROR_DEGENERATE = 4,   /* degenerate or implausible geometry */
  SC_ERROR_CONSENSUS = 5,    /* RANSAC failed to reach min_inliers */
  SC_ERROR_SINGLE_CLASS = 6, /* ROC input had only one class */
  SC_ERROR_INTERNAL = 7
} sc_status;

SC_API const char* sc_status_name(sc_status status);

/* Message for the most recent failure on this thread ("" if none). */
SC_API const char* sc_last_error(void);

SC_API void sc_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

typedef struct sc_config sc_config;

SC_API sc_status sc_config_parse(const char* json_text, sc_config** out);
SC_API sc_status sc_config_load(const char* path, sc_config** out);
SC_API void sc_config_free(sc_config* config);
/* Overrides the RANSAC seed from the config file. */
SC_API void sc_config_set_seed(sc_config* config, uint64_t seed);

/* ---- detections ------------------------------------------------------- */

typedef struct sc_detections sc_detections;

SC_API sc_status sc_detections_parse(const char* jsonl_text,
                                     sc_detections** out);
SC_API sc_status sc_detections_load(const char* path, sc_detections** out);
SC_API void sc_detections_free(sc_detections* detections);
SC_API int64_t sc_detections_count(const sc_detections* detections);
SC_API int64_t sc_detections_person_count(const sc_detections* detections);

/* ---- calibration ------------------------------------------------------ */

typedef struct sc_calibration sc_calibration;

/* Robust (RANSAC) calibration over the person records. */
SC_API sc_status sc_calibrate(const sc_detections* detections,
                              const sc_config* config, sc_calibration** out);
/* Single least-squares solve over all person records, no RANSAC.
 * formulation is "vertical" or "literal". */
SC_API sc_status sc_calibrate_direct(const sc_detections* detections,
                                     const sc_config* config,
                                     const char* formulation,
                                     sc_calibration** out);
SC_API sc_status sc_calibration_from_json(const char* json_text,
                                          sc_calibration** out);
SC_API sc_status sc_calibration_to_json(const sc_calibration* calibration,
                                        char** json_out);
SC_API double sc_calibration_camera_height(const sc_calibration* calibration);
SC_API void sc_calibration_free(sc_calibration* calibration);

/* ---- localization ------------------------------------------------------ */

typedef struct sc_positions sc_positions;

/* Back-projects every record to its ground plane: persons at the calibrated
 * foot plane via the box bottom-center, vehicles at Z = 0 via the box
 * center. Horizon-degenerate records are flagged, not fatal. */
SC_API sc_status sc_locate(const sc_detections* detections,
                           const sc_calibration* calibration,
                           sc_positions** out);
SC_API sc_status sc_positions_parse(const char* text, sc_positions** out);
SC_API sc_status sc_positions_load(const char* path, sc_positions** out);
SC_API sc_status sc_positions_to_jsonl(const sc_positions* positions,
                                       char** jsonl_out);
SC_API void sc_positions_free(sc_positions* positions);

/* ---- proximity ---------------------------------------------------------- */

/* Per-frame person-vehicle distances and P(near) as a JSON report. */
SC_API sc_status sc_proximity_report(const sc_positions* positions,
                                     const sc_config* config, char** json_out);

/* P(near) for a single distance under the config's predicate. */
SC_API sc_status sc_p_near(const sc_config* config, double distance_m,
                           double* out);

/* ---- alignment ---------------------------------------------------------- */

/* Rigid least-squares alignment of the estimated positions onto the
 * reference positions (matched by record id). Writes a JSON report; when
 * aligned_out is non-NULL it also returns the transformed estimated
 * positions. allow_scale adds a similarity-fit scale to the report as a
 * diagnostic (the transform stays rigid). */
SC_API sc_status sc_align(const sc_positions* estimated,
                          const sc_positions* reference, int allow_scale,
                          char** report_json_out, sc_positions** aligned_out);

/* ---- ROC ---------------------------------------------------------------- */

/* Builds gt/est distance pairs from two positions files, labels them with
 * the config's eval threshold and sweeps a ROC. csv_out receives the curve
 * ("fpr,tpr" header). */
SC_API sc_status sc_roc_from_positions(const sc_positions* reference,
                                       const sc_positions* estimated,
                                       const sc_config* config, char** csv_out,
                                       double* auc_out);
/* Same from a pre-built pairs JSONL file. */
SC_API sc_status sc_roc_from_pairs(const char* pairs_jsonl,
                                   const sc_config* config, char** csv_out,
                                   double* auc_out);

/* ---- simulation --------------------------------------------------------- */

/* Generates a synthetic scene from a scene-spec JSON. Returns the
 * detections file content and the ground-truth sidecar. */
SC_API sc_status sc_simulate(const char* scene_spec_json,
                             char** detections_jsonl_out,
                             char** truth_json_out);
/* Same, with the spec's rng_seed replaced by the given seed. */
SC_API sc_status sc_simulate_seeded(const char* scene_spec_json, uint64_t seed,
                                    char** detections_jsonl_out,
                                    char** truth_json_out);

/* ---- utilities ---------------------------------------------------------- */

/* Mode of a sample over fixed-width bins; collapses per-frame camera
 * parameter predictions to one value. */
SC_API sc_status sc_binned_mode(const double* values, size_t count,
                                double bin_width, double* out);

SC_API const char* sc_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCENECAL_H */
