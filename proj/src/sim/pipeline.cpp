#include "radcal/sim/pipeline.hpp"

namespace radcal::sim {

const char* to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::proposed: return "proposed";
    case PipelineKind::single_target: return "single_target";
    case PipelineKind::combined: return "combined";
  }
  return "proposed";
}

StepOutcome st_baseline_step(EstimatorState& state, const EstimatorConfig& cfg, std::span<const Complex> x,
                             const ReconstructionResult& rec) {
  if (rec.estimated_targets.size() != 1) {
    ++state.iteration;
    ++state.skipped;
    return StepOutcome::skipped;
  }
  return nlms_step(state, cfg, x, rec.reconstructed.samples);
}

Pipeline::Pipeline(PipelineSpec spec, const ArrayGeometry& geom, const CleanConfig& clean, const SbbConfig& sbb)
    : spec_(std::move(spec)), geom_(geom), sbb_cfg_(sbb), state_(EstimatorState::initial(geom.k())) {
  spec_.estimator.k = geom.k();
  spec_.estimator.validate();
  if (spec_.kind == PipelineKind::combined) {
    combined_.emplace(geom, spec_.estimator, sbb, clean);
    spec_.monitor_sbb = true;
  } else {
    reconstructor_.emplace(geom.k(), clean);
    if (spec_.monitor_sbb) sbb_cfg_.validate(geom.k());
  }
}

const EstimatorState& Pipeline::calibration() const {
  return combined_ ? combined_->calibration() : state_;
}

const SbbReport& Pipeline::sbb_report() const { return combined_ ? combined_->report() : latch_.report(); }

StepOutcome Pipeline::process(const SignalVector& x) {
  if (combined_) {
    auto res = combined_->process(x);
    last_ = std::move(res.reconstruction);
    return res.calibration_outcome;
  }
  const std::size_t iteration = state_.iteration;
  last_ = reconstructor_->reconstruct(x, state_.xi_hat);
  const StepOutcome out = spec_.kind == PipelineKind::single_target
                              ? st_baseline_step(state_, spec_.estimator, x.samples, last_)
                              : nlms_step(state_, spec_.estimator, x.samples, last_.reconstructed.samples);
  if (spec_.monitor_sbb) latch_.update(sbb_check(estimate_txrx_gpi(state_.xi_hat, geom_), sbb_cfg_, iteration));
  return out;
}

}  // namespace radcal::sim
