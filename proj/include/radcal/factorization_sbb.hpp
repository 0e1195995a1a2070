#pragma once

#include <optional>
#include <span>
#include <vector>

#include "radcal/array_model.hpp"
#include "radcal/nlms_estimator.hpp"
#include "radcal/reconstruction.hpp"

namespace radcal {

/// Tx and Rx gain/phase imbalances (phases in radians); index 0 is the reference.
struct TxRxGpi {
  RVector gamma_t;
  RVector phi_t;
  RVector gamma_r;
  RVector phi_r;
  CVector xi_t;
  CVector xi_r;
};

/// Splits a VA imbalance estimate into Tx and Rx factors. The vector is viewed as
/// a K_r x K_t column-major matrix (Rx index fastest); every row normalized by its
/// first element is averaged into the Tx factor, every column normalized by its first
/// element into the Rx factor. Averaging happens on the complex values.
TxRxGpi estimate_txrx_gpi(std::span<const Complex> xi_hat, const ArrayGeometry& geom);

struct SbbConfig {
  double delta = 15.0;  // degrees
  double mu_0_fast = 3.0;

  void validate(std::size_t k) const;
};

enum class Side { tx, rx };

const char* to_string(Side side);

/// Channel number is 1-based, as channels are named on a datasheet.
struct ChannelId {
  Side side = Side::rx;
  std::size_t number = 1;

  friend bool operator==(const ChannelId&, const ChannelId&) = default;
};

struct SbbReport {
  bool detected = false;
  std::vector<ChannelId> channels;  // Rx ascending, then Tx ascending
  std::optional<std::size_t> detection_iteration;

  /// First reported channel; only meaningful when detected.
  ChannelId channel() const { return channels.empty() ? ChannelId{} : channels.front(); }
};

/// Flags every Tx/Rx phase whose magnitude strictly exceeds delta. Gains are ignored.
SbbReport sbb_check(const TxRxGpi& gpi, const SbbConfig& cfg, std::size_t iteration);

/// Keeps the first positive report.
class SbbLatch {
 public:
  void update(const SbbReport& report) {
    if (!report_.detected && report.detected) report_ = report;
  }
  const SbbReport& report() const { return report_; }

 private:
  SbbReport report_;
};

struct CombinedStepResult {
  ReconstructionResult reconstruction;
  StepOutcome calibration_outcome = StepOutcome::skipped;
  StepOutcome detector_outcome = StepOutcome::skipped;
  TxRxGpi detector_gpi;
};

/// Slow calibration NLMS and fast SBB NLMS sharing one reconstruction block. The
/// predistortion always uses the calibration estimator's imbalance estimate; the
/// detector's weights never feed back into the reconstruction.
class CombinedStructure {
 public:
  CombinedStructure(const ArrayGeometry& geom, EstimatorConfig calibration, SbbConfig sbb, CleanConfig clean);

  CombinedStepResult process(const SignalVector& x);

  const EstimatorState& calibration() const { return calibration_state_; }
  const EstimatorState& detector() const { return detector_state_; }
  EstimatorState& detector_mutable() { return detector_state_; }
  const SbbReport& report() const { return latch_.report(); }
  /// Imbalance estimate used for the most recent predistortion.
  const CVector& last_predistortion() const { return last_predistortion_; }
  const ArrayGeometry& geometry() const { return geom_; }

 private:
  ArrayGeometry geom_;
  EstimatorConfig calibration_cfg_;
  EstimatorConfig detector_cfg_;
  SbbConfig sbb_cfg_;
  Reconstructor reconstructor_;
  EstimatorState calibration_state_;
  EstimatorState detector_state_;
  SbbLatch latch_;
  CVector last_predistortion_;
};

struct CombinedRun {
  // Calibration estimator after each iteration.
  std::vector<RVector> gamma_trace;
  std::vector<RVector> phi_trace;
  std::vector<TxRxGpi> txrx_trace;
  SbbReport report;
};

CombinedRun run_combined(std::span<const SignalVector> stream, const ArrayGeometry& geom,
                         const EstimatorConfig& calibration, const SbbConfig& sbb, const CleanConfig& clean);

}  // namespace radcal
