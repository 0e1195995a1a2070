#pragma once

#include <json.hpp>
#include <string>

#include "radcal/nlms_estimator.hpp"
#include "radcal/reconstruction.hpp"
#include "radcal/sim/experiment.hpp"
#include "radcal/sim/scenario.hpp"

namespace radcal::sim {

struct HeatmapSettings {
  RVector snr_db{6.0, 12.0, 20.0};
  std::vector<int> levels{1, 3, 5};
  double phase_step_deg = 10.0;
  double gain_step = 0.1;
  double eval_doa_deg = -20.0;
};

struct ReplaySettings {
  std::string file;                   // empty: generate a synthetic recording
  std::size_t generate_vectors = 2000;
  double phase_range_deg = 20.0;      // artificial imbalances
  double gain_range = 0.2;
  bool include_st = true;
};

struct DoaBiasSettings {
  std::string observations_file;  // empty: synthesize
  double v_s = 15.0;
  double theta_b_deg = 3.0;
  double noise_sigma = 0.1;
  std::size_t count = 50;
  Interval theta_range_deg{-60.0, 60.0};
};

/// Everything a command-line run can configure. JSON keys mirror the field names;
/// unknown keys are rejected so typos do not pass silently.
struct RunConfig {
  ScenarioConfig scenario;
  EstimatorConfig estimator;
  bool estimator_given = false;  // set when the config file supplies a step schedule
  SbbConfig sbb;
  CleanConfig clean;
  SllsEvaluation slls;
  HeatmapSettings heatmap;
  ReplaySettings replay;
  DoaBiasSettings doa_bias;
  std::size_t workers = 1;
  bool plots = false;
};

/// Overlays the keys present in `j` onto `cfg`.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

void load_config_file(RunConfig& cfg, const std::string& path);

}  // namespace radcal::sim
