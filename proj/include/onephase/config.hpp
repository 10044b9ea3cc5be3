#pragma once

#include <string>
#include <vector>

#include "onephase/flow.hpp"
#include "onephase/mountainpass.hpp"

// Flat JSON run configuration (strict schema) and the pipeline report.

namespace onephase {

struct RunConfig {
  int n = 3;
  double k = 1.0;
  double eps = 0.1;
  double a = 8.0;
  int Nr = 128;
  int Nz = 96;
  std::string scheme = "imex";     // "imex" | "explicit"
  double dt = 0.0;                 // 0 = auto
  double steady_tol = 0.0;         // 0 = auto
  long max_steps = 1000000;
  int path_members = 33;
  int minimax_rounds = 40;
  double round_time = 0.12;
  double fit_window_lo = 0.3;      // fractions of a
  double fit_window_hi = 0.8;
  double blowup_scale = 3.0;
  int snapshot_every = 0;          // relax snapshot cadence (0 = none)
  std::string out_dir = "out";

  FlowConfig flow_config() const;
  MinimaxConfig minimax_config() const;
};

RunConfig parse_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);
void emit_config(const RunConfig& cfg, const std::string& path);
// throws with the offending fields listed
void validate(const RunConfig& cfg);

struct StageSummary {
  std::string name;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> values;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

struct PipelineReport {
  RunConfig config;
  std::vector<StageSummary> stages;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;

  bool all_pass() const;
};

void emit_report(const PipelineReport& report, const std::string& path);

}  // namespace onephase
