#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "radcal/types.hpp"

namespace radcal::sim {

struct DoaBiasObservation {
  double theta_meas_deg = 0.0;  // measured DoA of a stationary target
  double v_t = 0.0;             // its measured relative radial velocity
};

/// v_t = v_s cos(theta_meas - theta_b): the velocity peaks where the measured angle
/// equals the bias.
struct DoaBiasFit {
  double v_s = 0.0;
  double theta_b_deg = 0.0;
  double rms_residual = 0.0;
};

/// Linear least squares on v_t = A cos(theta_meas) + B sin(theta_meas), then
/// v_s = hypot(A, B) and theta_b = atan2(B, A). Needs at least three finite
/// observations spanning more than 10 degrees.
DoaBiasFit estimate_doa_bias(std::span<const DoaBiasObservation> obs);

/// Noisy synthetic drive: one observation per true angle.
std::vector<DoaBiasObservation> synthesize_doa_observations(double v_s, double theta_b_deg,
                                                            std::span<const double> theta_true_deg,
                                                            double velocity_sigma, std::mt19937_64& rng);

/// CSV with header `theta_meas_deg,v_t`; `#` lines are skipped.
std::vector<DoaBiasObservation> read_doa_observations(std::istream& in);
void write_doa_observations(std::ostream& out, std::span<const DoaBiasObservation> obs);

}  // namespace radcal::sim
