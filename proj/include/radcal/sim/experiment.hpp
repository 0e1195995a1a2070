#pragma once

#include <string>
#include <vector>

#include "radcal/sim/metrics.hpp"
#include "radcal/sim/pipeline.hpp"
#include "radcal/sim/scenario.hpp"

namespace radcal::sim {

enum class Mode { calibration, sbb, combined, st_baseline };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// End-of-trial sidelobe evaluation on a noise-free vector distorted by the final
/// injected imbalance.
struct SllsEvaluation {
  bool enabled = false;
  RVector doa_deg{-45.0, 0.0, 50.0};
  RVector amplitude_db{0.0, 0.0, 0.0};
  double guard_bins = 1.0;

  TargetSet targets(const ArrayGeometry& geom) const;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  CleanConfig clean;
  SbbConfig sbb;
  std::vector<PipelineSpec> pipelines;
  SllsEvaluation slls;
  std::size_t workers = 1;
  bool record_traces = true;
  /// With a fault injected, end a trial once every SBB-monitoring pipeline has
  /// detected (the remaining iterations are then missing from the curves).
  bool stop_after_detection = false;
  bool keep_trial_traces = false;

  void validate() const;
};

/// Pipelines of a mode:
///   calibration: proposed
///   st_baseline: proposed and single_target
///   sbb: proposed with mu_0 = sbb.mu_0_fast and SBB monitoring
///   combined: combined structure using `calibration` for the slow estimator
std::vector<PipelineSpec> pipelines_for(Mode mode, const EstimatorConfig& calibration, const SbbConfig& sbb);

struct ExperimentResult {
  Metrics metrics;
  std::vector<TrialResult> trials;  // only with keep_trial_traces
};

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial_index);

/// Runs cfg.scenario.n_mcs trials and reduces them in trial order. Failed trials are
/// recorded; more than 5% failures raise experiment_failed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// SLLS grid over SNR and imbalance level I_l (phases within +-l * phase_step_deg,
/// gains within +-l * gain_step). Each cell runs the proposed and single-target
/// pipelines and scores them on a noise-free single target.
struct HeatmapConfig {
  ExperimentConfig base;  // scenario, CLEAN settings, workers; pipelines are replaced
  EstimatorConfig estimator;
  RVector snr_db{6.0, 12.0, 20.0};
  std::vector<int> levels{1, 3, 5};
  double phase_step_deg = 10.0;
  double gain_step = 0.1;
  double eval_doa_deg = -20.0;
};

struct HeatmapCell {
  double snr_db = 0.0;
  int level = 0;
  SllsStats proposed;
  SllsStats st;
  SllsStats ideal;
};

std::vector<HeatmapCell> slls_heatmap(const HeatmapConfig& cfg);

}  // namespace radcal::sim
