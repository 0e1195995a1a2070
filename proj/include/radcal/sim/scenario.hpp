#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "radcal/array_model.hpp"
#include "radcal/factorization_sbb.hpp"

namespace radcal::sim {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class ImbalanceKind { random, explicit_profile, heatup };

const char* to_string(ImbalanceKind kind);
ImbalanceKind imbalance_kind_from_string(const std::string& name);

/// How the injected Tx/Rx imbalances of a trial are produced.
///
/// random: phases uniform in [-phase_range_deg, phase_range_deg], gains uniform in
/// [-gain_range, gain_range], reference channels 0, constant over the trial.
/// explicit_profile: the listed Tx/Rx values (phases in degrees), constant.
/// heatup: random gains and final phases phi_inf; the phase follows
/// phi_inf (1 - exp(-i / heatup_tau)) until heatup_iterations and is frozen afterwards.
struct ImbalanceGen {
  ImbalanceKind kind = ImbalanceKind::random;
  double phase_range_deg = 20.0;
  double gain_range = 0.2;
  RVector gamma_t;
  RVector phi_t_deg;
  RVector gamma_r;
  RVector phi_r_deg;
  double heatup_tau = 250.0;
  std::size_t heatup_iterations = 1000;
  bool detrend = true;  // remove the linear phase trend of the injected profile
};

/// Phase offset added to one Tx or Rx channel from `iteration` on (sudden beam break).
struct FaultInjection {
  bool enabled = false;
  std::size_t iteration = 1000;
  Side side = Side::rx;
  std::size_t channel = 3;  // 1-based
  double offset_deg = 30.0;
};

struct ScenarioConfig {
  ArrayGeometry geom;
  RVector primary_count_pmf{0.40, 0.30, 0.15, 0.10, 0.05};  // P(count = 1 + index)
  RVector secondary_count_pmf{0.25, 0.25, 0.25, 0.25};      // P(count = index)
  Interval primary_amp_db_range{-10.0, 0.0};
  Interval secondary_amp_db_range{-20.0, -10.0};  // relative to the dominant primary target
  Interval doa_range_deg{-90.0, 90.0};
  double snr_db = 20.0;
  bool noise_enabled = true;
  ImbalanceGen imbalance_gen;
  FaultInjection fault;
  std::size_t n_iterations = 2000;
  std::size_t n_mcs = 1000;
  std::uint64_t seed = 1;

  void validate() const;
  NoiseModel noise() const { return {snr_db, noise_enabled}; }
};

struct Scene {
  TargetSet targets;
  ImbalanceProfile truth;  // profile applied to this vector
  SignalVector ideal;
  SignalVector measured;
};

/// What an ideal estimator would report for an applied profile: the phase with its
/// linear trend removed, referenced to channel 1, and the matching Tx/Rx split.
struct ReferenceGpi {
  RVector gamma;
  RVector phi;  // radians
  CVector xi;
  TxRxGpi txrx;
};

ReferenceGpi reference_gpi(const ImbalanceProfile& applied, const ArrayGeometry& geom);

TargetSet draw_targets(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Final (asymptotic) Tx/Rx imbalances of a trial; phases in radians.
struct TxRxDraw {
  RVector gamma_t;
  RVector phi_t;
  RVector gamma_r;
  RVector phi_r;
};

TxRxDraw draw_txrx(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Profile in effect at a 1-based iteration, including heat-up scaling, optional
/// detrending and fault injection.
ImbalanceProfile profile_at(const ScenarioConfig& cfg, const TxRxDraw& draw, std::size_t iteration);

/// One scene with a freshly drawn constant imbalance.
Scene generate_scene(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Scene sequence of one trial: the imbalance is drawn once, targets and noise per vector.
class SceneStream {
 public:
  SceneStream(const ScenarioConfig& cfg, std::uint64_t trial_seed);

  Scene next();
  /// Iteration number the next call to next() will produce.
  std::size_t iteration() const { return iteration_; }
  const TxRxDraw& draw() const { return draw_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  const ImbalanceProfile& current_profile();

  ScenarioConfig cfg_;
  std::mt19937_64 rng_;
  TxRxDraw draw_;
  std::size_t iteration_ = 1;
  ImbalanceProfile cached_;
  bool cache_valid_ = false;
  bool cache_is_faulted_ = false;
};

/// Independent per-trial seed derived from the experiment seed.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial_index);

}  // namespace radcal::sim
