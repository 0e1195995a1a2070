#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radcal/sim/metrics.hpp"
#include "radcal/sim/pipeline.hpp"
#include "radcal/sim/scenario.hpp"

namespace radcal::sim {

/// One recorded signal vector. File line: `frame_id, peak_id, K, re_1, im_1, ..., re_K, im_K`.
struct ReplayRecord {
  std::uint64_t frame_id = 0;
  std::uint64_t peak_id = 0;
  SignalVector x;
};

std::vector<ReplayRecord> read_replay(std::istream& in);
std::vector<ReplayRecord> read_replay_file(const std::string& path);
/// Writes with 17 significant digits so a read-back is exact.
void write_replay(std::ostream& out, std::span<const ReplayRecord> records);
void write_replay_file(const std::string& path, std::span<const ReplayRecord> records);

struct SyntheticReplay {
  std::vector<ReplayRecord> records;
  ImbalanceProfile truth;
};

/// Vectors from the simulated scene distribution with one constant imbalance.
SyntheticReplay generate_synthetic_replay(const ScenarioConfig& cfg, std::size_t n_vectors);

struct RelativeEstimationConfig {
  ArrayGeometry geom;
  CleanConfig clean;
  EstimatorConfig estimator;
  double phase_range_deg = 20.0;  // artificial Tx/Rx phases within +-range
  double gain_range = 0.2;
  std::size_t n_mcs = 100;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool include_st = true;
};

struct RelativeEstimationResult {
  Metrics metrics;  // curves over the second estimation, one point per even vector
  std::size_t n_odd = 0;
  std::size_t n_even = 0;
  std::vector<std::string> pipelines;
  std::vector<CVector> baselines;  // xi_hat_base per pipeline
};

/// Two consecutive estimations on the same recording. Vectors 1, 3, 5, ... (1-based)
/// give the baseline xi_hat_base. Per trial, random artificial Tx/Rx imbalances are
/// applied to vectors 2, 4, 6, ..., a fresh estimator runs over them, and
/// xi_hat_2 / xi_hat_base is scored against the artificial imbalances.
RelativeEstimationResult relative_estimation(std::span<const ReplayRecord> records,
                                             const RelativeEstimationConfig& cfg);

}  // namespace radcal::sim
