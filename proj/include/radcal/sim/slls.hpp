#pragma once

#include <span>
#include <vector>

#include "radcal/array_model.hpp"

namespace radcal::sim {

/// Largest sidelobe relative to the main peak, in dB (negative).
///
/// The spectrum is |FFT_N(v)|^2. Around every true target frequency the mainlobe is
/// located as the strongest bin within +-guard_bins / K and every bin within
/// +-guard_bins / K of that located peak is excluded. The main peak is the strongest
/// located mainlobe; the sidelobe level is the strongest remaining bin.
double sidelobe_level_db(std::span<const Complex> v, std::span<const double> target_freqs, double guard_bins,
                         std::size_t fft_len);

struct SllsResult {
  double slls_db = 0.0;
  double sll_uncalibrated_db = 0.0;
  double sll_calibrated_db = 0.0;
};

/// SLLS = SLL(uncalibrated) - SLL(c (.) uncalibrated), both relative to their main peak.
SllsResult compute_slls(const SignalVector& uncalibrated, std::span<const Complex> calibration,
                        const TargetSet& ideal, std::size_t fft_len, double guard_bins = 1.0);

}  // namespace radcal::sim
