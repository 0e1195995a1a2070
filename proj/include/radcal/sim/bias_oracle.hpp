#pragma once

#include "radcal/nlms_estimator.hpp"
#include "radcal/reconstruction.hpp"
#include "radcal/sim/scenario.hpp"

namespace radcal::sim {

/// Monte Carlo check of the steady-state NLMS bias.
///
/// With e = psi_hat / psi - 1 and r = s_hat - s the update gives in steady state
///   E[e[k]] = (-E[conj(s_hat[k]) r[k] / ||s_hat||^2] + E[conj(s_hat[k]) n[k] / (psi[k] ||s_hat||^2)])
///             / E[|s_hat[k]|^2 / ||s_hat||^2].
/// The first numerator term alone is the reconstruction-error coefficient b0[k]; the
/// second captures CLEAN's correlation with the noise it fitted. Both expectations are
/// estimated as ratios of sample means over the post-burn-in iterations of every
/// trial and compared with the measured mean relative error of the raw NLMS weights.
struct BiasOracleConfig {
  ScenarioConfig scenario;
  CleanConfig clean;
  EstimatorConfig estimator;
  std::size_t burn_in = 1000;
  bool exact_reconstruction = false;  // feed the true s as s_hat
  std::size_t workers = 1;
};

struct BiasOracleResult {
  std::size_t n_trials = 0;
  CVector b0;
  RVector b0_se_re;
  RVector b0_se_im;
  CVector noise_term;
  CVector predicted;  // b0 + noise_term
  CVector measured;   // mean of psi_hat / psi - 1
  RVector measured_se_re;
  RVector measured_se_im;
  // Standard errors of (measured - predicted) and (measured - b0) from paired trials.
  RVector diff_se_re;
  RVector diff_se_im;
  RVector diff_b0_se_re;
  RVector diff_b0_se_im;

  /// Every channel's measured - predicted within n_se standard errors (real and imaginary).
  bool agrees(double n_se) const;
  bool agrees_b0_only(double n_se) const;
  /// Every channel's Im(b0) within n_se standard errors of 0.
  bool b0_imag_zero(double n_se) const;
};

BiasOracleResult empirical_bias_oracle(const BiasOracleConfig& cfg, std::size_t n_mcs);

}  // namespace radcal::sim
