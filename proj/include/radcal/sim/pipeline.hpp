#pragma once

#include <memory>
#include <optional>
#include <string>

#include "radcal/factorization_sbb.hpp"
#include "radcal/nlms_estimator.hpp"
#include "radcal/reconstruction.hpp"

namespace radcal::sim {

enum class PipelineKind { proposed, single_target, combined };

const char* to_string(PipelineKind kind);

/// One estimator chain driven inside a trial.
///
/// proposed: reconstruction + NLMS on every vector.
/// single_target: same chain but the NLMS update only runs when CLEAN finds exactly one target.
/// combined: slow calibration NLMS plus fast SBB NLMS sharing the reconstruction; the
/// tracked (reported) estimator is the calibration one and SBB monitoring is always on.
struct PipelineSpec {
  std::string name;
  PipelineKind kind = PipelineKind::proposed;
  EstimatorConfig estimator;
  bool monitor_sbb = false;
};

/// Gated update: identical to nlms_step when the reconstruction holds exactly one
/// target, otherwise the state is left alone apart from the iteration and skip counters.
StepOutcome st_baseline_step(EstimatorState& state, const EstimatorConfig& cfg, std::span<const Complex> x,
                             const ReconstructionResult& rec);

class Pipeline {
 public:
  Pipeline(PipelineSpec spec, const ArrayGeometry& geom, const CleanConfig& clean, const SbbConfig& sbb);

  StepOutcome process(const SignalVector& x);

  const PipelineSpec& spec() const { return spec_; }
  /// Estimator whose imbalance estimate drives the predistortion.
  const EstimatorState& calibration() const;
  const SbbReport& sbb_report() const;
  const ReconstructionResult& last_reconstruction() const { return last_; }

 private:
  PipelineSpec spec_;
  ArrayGeometry geom_;
  SbbConfig sbb_cfg_;
  std::optional<Reconstructor> reconstructor_;
  std::optional<CombinedStructure> combined_;
  EstimatorState state_;
  SbbLatch latch_;
  ReconstructionResult last_;
};

}  // namespace radcal::sim
