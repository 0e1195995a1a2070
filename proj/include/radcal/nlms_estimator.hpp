#pragma once

#include <span>
#include <string>

#include "radcal/linear_fit.hpp"
#include "radcal/types.hpp"

namespace radcal {

struct StepStage {
  std::size_t start_iteration = 1;
  double mu_0 = 0.1;
};

/// Normalized step-size schedule shared by all K single-tap filters.
struct EstimatorConfig {
  std::vector<StepStage> step_schedule{{1, 0.1}};
  std::size_t k = 12;

  /// Enforces mu_0 in (0, 2K) for every stage and strictly increasing starts beginning at 1.
  void validate() const;

  static EstimatorConfig constant(std::size_t k, double mu_0);
  /// 1.0 up to 50, 0.8 up to 200, 0.4 up to 500, 0.2 up to 1000, then 0.1.
  static EstimatorConfig staged(std::size_t k);
};

/// Piecewise-constant lookup; iterations past the last breakpoint use the final mu_0.
double step_size_at(const EstimatorConfig& cfg, std::size_t iteration);

/// Output of the normalization + detrend stage.
struct NormalizedEstimate {
  CVector xi_hat;
  RVector gamma_hat;
  RVector phi_hat;  // radians, zero at the reference channel, zero LS slope
  DetrendFit fit;   // line fitted to the unwrapped normalized phase
};

/// Divides by the reference weight, unwraps the phase and removes its least-squares
/// slope. Only the slope is removed, so the reference channel keeps phase 0 and
/// xi_hat[0] == 1; the discarded intercept is a global phase.
NormalizedEstimate normalize_and_detrend(std::span<const Complex> psi_hat);

struct EstimatorState {
  CVector psi_hat;  // raw NLMS weights
  std::size_t iteration = 1;
  CVector xi_hat;
  RVector gamma_hat;
  RVector phi_hat;
  std::size_t skipped = 0;

  std::size_t size() const { return psi_hat.size(); }

  /// psi_hat = xi_hat = all-ones, iteration 1.
  static EstimatorState initial(std::size_t k);
};

enum class StepOutcome { updated, skipped };

/// One NLMS pass over all channels with the shared step mu = mu_0 / ||s_hat||^2:
///   w[k] <- w[k] - mu conj(s_hat[k]) (w[k] s_hat[k] - x[k]).
/// No step-size bound is enforced here. Returns the applied mu, or 0 when s_hat has
/// no energy (weights untouched).
double apply_nlms_update(std::span<Complex> weights, std::span<const Complex> x, std::span<const Complex> s_hat,
                         double mu_0);

/// Scheduled NLMS update followed by normalization and detrend. An all-zero s_hat
/// skips the update (counted in `skipped`); the iteration counter advances either way.
StepOutcome nlms_step(EstimatorState& state, const EstimatorConfig& cfg, std::span<const Complex> x,
                      std::span<const Complex> s_hat);

/// c = 1 / xi_hat elementwise.
CVector current_calibration(const EstimatorState& state);
CVector calibration_from(std::span<const Complex> xi_hat);

/// Single-line JSON record: iteration, psi_hat as [re, im] pairs, gamma_hat, phi_hat.
std::string snapshot_record(const EstimatorState& state);

}  // namespace radcal
