#include "radcal/sim/slls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radcal/error.hpp"
#include "radcal/fft.hpp"

namespace radcal::sim {

namespace {

// Circular distance between two frequencies in cycles per element.
double freq_distance(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

double sidelobe_level_db(std::span<const Complex> v, std::span<const double> target_freqs, double guard_bins,
                         std::size_t fft_len) {
  if (target_freqs.empty()) throw Error(ErrorCode::degenerate_spectrum, "no target frequencies given");
  if (!(guard_bins > 0.0)) throw Error(ErrorCode::invalid_config, "guard must be positive");
  Fft fft(fft_len);
  CVector y;
  fft.forward_padded(v, y);
  const std::size_t n = fft_len;
  RVector power(n);
  RVector freq(n);
  for (std::size_t m = 0; m < n; ++m) {
    power[m] = std::norm(y[m]);
    const double f = static_cast<double>(m) / static_cast<double>(n);
    freq[m] = f >= 0.5 ? f - 1.0 : f;
  }
  const double guard = guard_bins / static_cast<double>(v.size());

  std::vector<bool> excluded(n, false);
  double main_peak = 0.0;
  for (double ft : target_freqs) {
    std::size_t best = n;
    for (std::size_t m = 0; m < n; ++m) {
      if (freq_distance(freq[m], ft) <= guard && (best == n || power[m] > power[best])) best = m;
    }
    if (best == n) continue;
    main_peak = std::max(main_peak, power[best]);
    for (std::size_t m = 0; m < n; ++m) {
      if (freq_distance(freq[m], freq[best]) <= guard) excluded[m] = true;
    }
  }
  if (!(main_peak > 0.0)) throw Error(ErrorCode::degenerate_spectrum, "no detectable main peak");

  double side = 0.0;
  bool any = false;
  for (std::size_t m = 0; m < n; ++m) {
    if (excluded[m]) continue;
    side = std::max(side, power[m]);
    any = true;
  }
  if (!any) throw Error(ErrorCode::degenerate_spectrum, "guard regions cover the whole spectrum");
  if (!(side > 0.0)) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(side / main_peak);
}

SllsResult compute_slls(const SignalVector& uncalibrated, std::span<const Complex> calibration,
                        const TargetSet& ideal, std::size_t fft_len, double guard_bins) {
  if (uncalibrated.size() != calibration.size()) {
    throw Error(ErrorCode::length_mismatch, "calibration and signal lengths differ");
  }
  CVector cal(uncalibrated.size());
  for (std::size_t k = 0; k < cal.size(); ++k) cal[k] = calibration[k] * uncalibrated[k];
  SllsResult r;
  r.sll_uncalibrated_db = sidelobe_level_db(uncalibrated.samples, ideal.frequencies, guard_bins, fft_len);
  r.sll_calibrated_db = sidelobe_level_db(cal, ideal.frequencies, guard_bins, fft_len);
  r.slls_db = r.sll_uncalibrated_db - r.sll_calibrated_db;
  return r;
}

}  // namespace radcal::sim
