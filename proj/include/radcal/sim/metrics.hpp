#pragma once

#include <map>
#include <string>
#include <vector>

#include "radcal/factorization_sbb.hpp"
#include "radcal/sim/scenario.hpp"

namespace radcal::sim {

enum class SeriesSide { va, tx, rx };

const char* to_string(SeriesSide side);

/// Order of the per-iteration series: K VA channels, then K_t Tx, then K_r Rx channels.
struct SeriesLayout {
  std::size_t k = 12;
  std::size_t k_t = 3;
  std::size_t k_r = 4;

  static SeriesLayout from(const ArrayGeometry& geom) { return {geom.k(), geom.k_t, geom.k_r}; }
  std::size_t size() const { return k + k_t + k_r; }
  SeriesSide side(std::size_t s) const;
  /// 1-based channel number within its side.
  std::size_t channel(std::size_t s) const;
};

/// Per-iteration record of one pipeline in one trial. Series values are stored
/// iteration-major: value(i, s) = data[i * layout.size() + s]. Phases in radians.
struct TrialTrace {
  std::string pipeline;
  SeriesLayout layout;
  RVector gamma_hat;
  RVector phi_hat;
  RVector gamma_err;
  RVector phi_err;  // wrapped into (-pi, pi]
  RVector recon_error;  // ||s_hat - s|| of the reconstruction that fed the update
  std::size_t skipped = 0;
  SbbReport sbb;

  std::size_t iterations() const { return recon_error.size(); }
  void reserve(std::size_t n);
  /// Appends one iteration given the estimate and the reference of the applied profile.
  void record(std::span<const double> gamma_hat_va, std::span<const double> phi_hat_va, const TxRxGpi& est_txrx,
              const ReferenceGpi& ref, double recon_err);
};

struct TrialResult {
  std::size_t index = 0;
  std::vector<TrialTrace> traces;  // one per pipeline
  RVector slls_db;                 // one per pipeline when SLLS evaluation is on
  double ideal_slls_db = 0.0;
  bool has_slls = false;
  std::vector<CVector> final_xi;  // one per pipeline
};

/// Aggregates over one series of one pipeline; phases in degrees.
struct ChannelCurves {
  SeriesSide side = SeriesSide::va;
  std::size_t channel = 1;
  RVector mean_gamma;
  RVector mean_phi;
  RVector bias_gamma;  // mean of (estimate - truth)
  RVector bias_phi;
  RVector var_gamma;  // variance of (estimate - truth) across trials
  RVector var_phi;
};

struct PipelineMetrics {
  std::string name;
  std::vector<ChannelCurves> channels;
  RVector mae_phi;    // degrees, averaged over VA channels 2..K and trials
  RVector mae_gamma;  // same for gains
  RVector mean_recon_error;
  std::vector<std::size_t> trials_at_iteration;
  std::vector<SbbReport> sbb_reports;  // one per completed trial, trial order
  RVector slls_db;                     // one per completed trial
  std::size_t total_skipped = 0;

  const ChannelCurves& curves(SeriesSide side, std::size_t channel) const;
};

struct SllsStats {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  /// Fraction of values strictly below the threshold.
  double fraction_below(double threshold_db) const;
  RVector values;
};

SllsStats slls_stats(const RVector& values);

struct TrialFailure {
  std::size_t index = 0;
  std::string message;
};

struct Metrics {
  std::vector<PipelineMetrics> pipelines;
  RVector ideal_slls_db;
  std::size_t completed = 0;
  std::vector<TrialFailure> failures;

  const PipelineMetrics& pipeline(const std::string& name) const;
};

/// delay = detection_iteration - injection_iteration + 1 for every detected trial.
/// Detections before the injection are counted under their (non-positive) delay.
std::map<long, std::size_t> detection_histogram(const PipelineMetrics& m, std::size_t injection_iteration);

/// Ordered reduction of trial results into Metrics. Only completed trials contribute.
class MetricsAccumulator {
 public:
  MetricsAccumulator(std::vector<std::string> pipelines, SeriesLayout layout, std::size_t n_iterations);

  void add(const TrialResult& trial);
  void add_failure(std::size_t index, std::string message);
  Metrics finish() const;

 private:
  struct Sums {
    RVector est_g, est_p, err_g, err_p, sq_g, sq_p;
    RVector mae_p, mae_g, recon;
    std::vector<std::size_t> count;
  };

  std::vector<std::string> names_;
  SeriesLayout layout_;
  std::size_t n_iterations_;
  std::vector<Sums> sums_;
  std::vector<std::vector<SbbReport>> sbb_;
  std::vector<RVector> slls_;
  std::vector<std::size_t> skipped_;
  RVector ideal_slls_;
  std::size_t completed_ = 0;
  std::vector<TrialFailure> failures_;
};

}  // namespace radcal::sim
