// scenecal command line: calibrate / locate / proximity / align / roc /
// simulate over JSONL detection files and JSON reports. Exit codes:
// 0 success, 2 input or parse error, 3 algorithmic failure (no consensus,
// degenerate geometry, single-class ROC).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scenecal.h"

namespace {

int exit_code_for(sc_status status) {
  switch (status) {
    case SC_OK:
      return 0;
    case SC_ERROR_INVALID:
    case SC_ERROR_PARSE:
    case SC_ERROR_IO:
      return 2;
    case SC_ERROR_DEGENERATE:
    case SC_ERROR_CONSENSUS:
    case SC_ERROR_SINGLE_CLASS:
      return 3;
    case SC_ERROR_INTERNAL:
      break;
  }
  return 1;
}

struct Failure {
  sc_status status;
};

void check(sc_status status) {
  if (status != SC_OK) throw Failure{status};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error (io-error): cannot open " << path << "\n";
    throw Failure{SC_ERROR_IO};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const char* content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    std::cerr << "error (io-error): cannot write " << path << "\n";
    throw Failure{SC_ERROR_IO};
  }
}

struct StringOut {
  char* value = nullptr;
  ~StringOut() { sc_string_free(value); }
};

struct ConfigHandle {
  sc_config* value = nullptr;
  ~ConfigHandle() { sc_config_free(value); }
};

struct DetectionsHandle {
  sc_detections* value = nullptr;
  ~DetectionsHandle() { sc_detections_free(value); }
};

struct CalibrationHandle {
  sc_calibration* value = nullptr;
  ~CalibrationHandle() { sc_calibration_free(value); }
};

struct PositionsHandle {
  sc_positions* value = nullptr;
  ~PositionsHandle() { sc_positions_free(value); }
};

struct GlobalOptions {
  std::string config_path;
  std::string output_path;
  std::int64_t seed = -1;
  bool has_seed = false;
  bool quiet = false;

  void load_config(ConfigHandle& config) const {
    if (config_path.empty())
      check(sc_config_parse("{}", &config.value));
    else
      check(sc_config_load(config_path.c_str(), &config.value));
    if (has_seed)
      sc_config_set_seed(config.value, static_cast<std::uint64_t>(seed));
  }

  void emit(const std::string& path_hint, const char* content) const {
    if (!output_path.empty())
      write_text(output_path, content);
    else if (!path_hint.empty())
      write_text(path_hint, content);
    else
      std::cout << content;
  }

  void info(const std::string& message) const {
    if (!quiet) std::cerr << message << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "scenecal: surveillance-camera calibration from pedestrian detections, "
      "3-D localization and person-near-vehicle evaluation"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "Run configuration (JSON)");
  app.add_option("--output", global.output_path, "Output file path");
  app.add_option("--seed", global.seed, "Override the configured RNG seed");
  app.add_flag("--quiet", global.quiet, "Suppress informational messages");

  // calibrate
  std::string detections_path;
  bool direct = false;
  std::string formulation = "vertical";
  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "Estimate camera height and projection matrix");
  calibrate_cmd->fallthrough();
  calibrate_cmd->add_option("detections", detections_path, "Detections JSONL")
      ->required();
  calibrate_cmd->add_flag("--direct", direct,
                          "Single least-squares solve instead of RANSAC");
  calibrate_cmd->add_option("--formulation", formulation,
                            "vertical (default) or literal (--direct only)");

  // locate
  std::string locate_detections, calibration_path;
  auto* locate_cmd =
      app.add_subcommand("locate", "Back-project detections to the ground");
  locate_cmd->fallthrough();
  locate_cmd->add_option("detections", locate_detections, "Detections JSONL")
      ->required();
  locate_cmd
      ->add_option("--calibration", calibration_path,
                   "Calibration report JSON")
      ->required();

  // proximity
  std::string positions_path;
  auto* proximity_cmd = app.add_subcommand(
      "proximity", "Person-vehicle ground distances and P(near)");
  proximity_cmd->fallthrough();
  proximity_cmd->add_option("positions", positions_path, "Positions JSONL")
      ->required();

  // align
  std::string est_path, ref_path, aligned_out;
  bool allow_scale = false;
  auto* align_cmd = app.add_subcommand(
      "align", "Rigid alignment of estimated positions onto reference ones");
  align_cmd->fallthrough();
  align_cmd->add_option("estimated", est_path, "Estimated positions")
      ->required();
  align_cmd->add_option("reference", ref_path, "Reference positions")
      ->required();
  align_cmd->add_option("--aligned-out", aligned_out,
                        "Write the transformed estimated positions here");
  align_cmd->add_flag("--allow-scale", allow_scale,
                      "Report the similarity-fit scale as a diagnostic");

  // roc
  std::string pairs_path, gt_path, roc_est_path;
  auto* roc_cmd =
      app.add_subcommand("roc", "ROC curve and AUC for the near predicate");
  roc_cmd->fallthrough();
  roc_cmd->add_option("--pairs", pairs_path, "Pre-built gt/est pairs JSONL");
  roc_cmd->add_option("--gt", gt_path, "Reference positions file");
  roc_cmd->add_option("--est", roc_est_path, "Estimated positions file");

  // simulate
  std::string spec_path, truth_path;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Generate a synthetic scene");
  simulate_cmd->fallthrough();
  simulate_cmd->add_option("spec", spec_path, "Scene spec JSON")->required();
  simulate_cmd->add_option("--truth", truth_path,
                           "Truth sidecar path (default: <output>.truth.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is an input error; --help is fine
  }
  global.has_seed = app.count("--seed") > 0;

  try {
    if (calibrate_cmd->parsed()) {
      ConfigHandle config;
      global.load_config(config);
      DetectionsHandle detections;
      check(sc_detections_load(detections_path.c_str(), &detections.value));
      CalibrationHandle calibration;
      if (direct)
        check(sc_calibrate_direct(detections.value, config.value,
                                  formulation.c_str(), &calibration.value));
      else
        check(sc_calibrate(detections.value, config.value, &calibration.value));
      StringOut report;
      check(sc_calibration_to_json(calibration.value, &report.value));
      global.emit("", report.value);
      char height[64];
      std::snprintf(height, sizeof height, "camera height: %.4f m",
                    sc_calibration_camera_height(calibration.value));
      global.info(height);
    } else if (locate_cmd->parsed()) {
      DetectionsHandle detections;
      check(sc_detections_load(locate_detections.c_str(), &detections.value));
      CalibrationHandle calibration;
      const std::string report_text = read_text(calibration_path);
      check(sc_calibration_from_json(report_text.c_str(), &calibration.value));
      PositionsHandle positions;
      check(sc_locate(detections.value, calibration.value, &positions.value));
      StringOut jsonl;
      check(sc_positions_to_jsonl(positions.value, &jsonl.value));
      global.emit("", jsonl.value);
    } else if (proximity_cmd->parsed()) {
      ConfigHandle config;
      global.load_config(config);
      PositionsHandle positions;
      check(sc_positions_load(positions_path.c_str(), &positions.value));
      StringOut report;
      check(sc_proximity_report(positions.value, config.value, &report.value));
      global.emit("", report.value);
    } else if (align_cmd->parsed()) {
      PositionsHandle estimated, reference;
      check(sc_positions_load(est_path.c_str(), &estimated.value));
      check(sc_positions_load(ref_path.c_str(), &reference.value));
      StringOut report;
      PositionsHandle aligned;
      check(sc_align(estimated.value, reference.value, allow_scale ? 1 : 0,
                     &report.value, aligned_out.empty() ? nullptr
                                                        : &aligned.value));
      global.emit("", report.value);
      if (!aligned_out.empty()) {
        StringOut jsonl;
        check(sc_positions_to_jsonl(aligned.value, &jsonl.value));
        write_text(aligned_out, jsonl.value);
      }
    } else if (roc_cmd->parsed()) {
      ConfigHandle config;
      global.load_config(config);
      StringOut csv;
      double auc = 0.0;
      if (!pairs_path.empty()) {
        const std::string pairs_text = read_text(pairs_path);
        check(sc_roc_from_pairs(pairs_text.c_str(), config.value, &csv.value,
                                &auc));
      } else if (!gt_path.empty() && !roc_est_path.empty()) {
        PositionsHandle gt, est;
        check(sc_positions_load(gt_path.c_str(), &gt.value));
        check(sc_positions_load(roc_est_path.c_str(), &est.value));
        check(sc_roc_from_positions(gt.value, est.value, config.value,
                                    &csv.value, &auc));
      } else {
        std::cerr << "error (invalid-input): roc needs --pairs or both "
                     "--gt and --est\n";
        return 2;
      }
      if (!global.output_path.empty())
        write_text(global.output_path, csv.value);
      else
        global.info("no --output given; ROC CSV not written");
      std::printf("%.4f\n", auc);
    } else if (simulate_cmd->parsed()) {
      if (global.output_path.empty()) {
        std::cerr
            << "error (invalid-input): simulate requires --output for the "
               "detections file\n";
        return 2;
      }
      const std::string spec_text = read_text(spec_path);
      StringOut detections, truth;
      if (global.has_seed)
        check(sc_simulate_seeded(spec_text.c_str(),
                                 static_cast<std::uint64_t>(global.seed),
                                 &detections.value, &truth.value));
      else
        check(sc_simulate(spec_text.c_str(), &detections.value, &truth.value));
      write_text(global.output_path, detections.value);
      const std::string truth_file =
          truth_path.empty() ? global.output_path + ".truth.json" : truth_path;
      write_text(truth_file, truth.value);
      global.info("wrote " + global.output_path + " and " + truth_file);
    }
  } catch (const Failure& failure) {
    const char* message = sc_last_error();
    if (message && message[0] != '\0')
      std::cerr << "error (" << sc_status_name(failure.status)
                << "): " << message << "\n";
    return exit_code_for(failure.status);
  }
  return 0;
}
