#include "radcal/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "radcal/error.hpp"

namespace radcal {

void CleanConfig::validate(std::size_t k) const {
  if (!is_power_of_two(fft_len)) throw Error(ErrorCode::invalid_config, "fft_len must be a power of two");
  if (fft_len < k) throw Error(ErrorCode::invalid_config, "fft_len must be at least the array length");
  if (!(stop_ratio_db < 0.0)) throw Error(ErrorCode::invalid_config, "stop_ratio_db must be negative");
  if (max_targets < 1) throw Error(ErrorCode::invalid_config, "max_targets must be at least 1");
}

namespace {

double energy(std::span<const Complex> v) {
  double e = 0.0;
  for (const auto& c : v) e += std::norm(c);
  return e;
}

}  // namespace

CleanEstimator::CleanEstimator(std::size_t k, CleanConfig cfg) : cfg_(cfg), k_(k), fft_(cfg.fft_len) {
  cfg_.validate(k);
  const CVector ones(k, Complex(1.0, 0.0));
  fft_.forward_padded(ones, kernel_);
  power_.resize(cfg_.fft_len);
}

TargetSet CleanEstimator::estimate(std::span<const Complex> x, CleanDiagnostics* diag) {
  if (x.size() != k_) throw Error(ErrorCode::length_mismatch, "CLEAN input length differs from array size");
  const std::size_t n = cfg_.fft_len;
  const std::size_t half = n / 2;
  const double inv_k = 1.0 / static_cast<double>(k_);
  const double ratio = cfg_.stop_ratio();

  residual_.assign(x.begin(), x.end());
  fft_.forward_padded(x, spectrum_);
  if (diag) {
    *diag = {};
    diag->residual_power.push_back(energy(residual_));
  }

  TargetSet out;
  double first_mag = 0.0;
  auto* y = reinterpret_cast<double*>(spectrum_.data());
  const auto* ker = reinterpret_cast<const double*>(kernel_.data());

  while (out.size() < cfg_.max_targets) {
    for (std::size_t m = 0; m < n; ++m) power_[m] = y[2 * m] * y[2 * m] + y[2 * m + 1] * y[2 * m + 1];
    // Scan in fftshifted order so ties resolve to the lowest shifted index.
    std::size_t best_l = 0;
    double best = -1.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double p = power_[(l + half) & (n - 1)];
      if (p > best) {
        best = p;
        best_l = l;
      }
    }
    if (diag) ++diag->passes;
    if (!(best > 0.0)) break;

    const std::size_t m_best = (best_l + half) & (n - 1);
    const Complex alpha = spectrum_[m_best] * inv_k;
    const double freq = -0.5 + static_cast<double>(best_l) / static_cast<double>(n);
    const double mag = std::abs(alpha);
    if (!out.empty() && mag < ratio * first_mag) {
      if (diag) diag->stopped_by_ratio = true;
      break;
    }
    if (out.empty()) first_mag = mag;
    out.push_back(alpha, freq);

    for (std::size_t k = 0; k < k_; ++k) {
      const double arg = kTwoPi * freq * static_cast<double>(k);
      residual_[k] -= alpha * Complex(std::cos(arg), std::sin(arg));
    }
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t d = (m - m_best) & (n - 1);
      const double kr = ker[2 * d];
      const double ki = ker[2 * d + 1];
      y[2 * m] -= ar * kr - ai * ki;
      y[2 * m + 1] -= ar * ki + ai * kr;
    }
    if (diag) diag->residual_power.push_back(energy(residual_));
  }
  return out;
}

TargetSet clean_estimate(std::span<const Complex> x_pd, const CleanConfig& cfg) {
  CleanEstimator clean(x_pd.size(), cfg);
  return clean.estimate(x_pd);
}

TargetSet fft_peak_estimate(std::span<const Complex> x, const CleanConfig& cfg) {
  cfg.validate(x.size());
  const std::size_t n = cfg.fft_len;
  const std::size_t half = n / 2;
  Fft fft(n);
  CVector y;
  fft.forward_padded(x, y);

  // Work in fftshifted order: index l <-> frequency -0.5 + l / N.
  RVector mag(n);
  for (std::size_t l = 0; l < n; ++l) mag[l] = std::abs(y[(l + half) & (n - 1)]);
  const double peak = *std::max_element(mag.begin(), mag.end());
  TargetSet out;
  if (!(peak > 0.0)) return out;

  std::vector<std::size_t> maxima;
  for (std::size_t l = 0; l < n; ++l) {
    const double left = mag[(l + n - 1) % n];
    const double right = mag[(l + 1) % n];
    if (mag[l] > left && mag[l] >= right && mag[l] >= cfg.stop_ratio() * peak) maxima.push_back(l);
  }
  std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  if (maxima.size() > cfg.max_targets) maxima.resize(cfg.max_targets);
  const double inv_k = 1.0 / static_cast<double>(x.size());
  for (std::size_t l : maxima) {
    out.push_back(y[(l + half) & (n - 1)] * inv_k, -0.5 + static_cast<double>(l) / static_cast<double>(n));
  }
  return out;
}

SignalVector predistort(const SignalVector& x, std::span<const Complex> xi_hat) {
  if (x.size() != xi_hat.size()) throw Error(ErrorCode::length_mismatch, "calibration and signal lengths differ");
  SignalVector out{CVector(x.size()), SignalKind::predistorted};
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(std::abs(xi_hat[k]) >= kCalibrationFloor)) {
      throw Error(ErrorCode::degenerate_calibration,
                  "imbalance estimate of channel " + std::to_string(k + 1) + " is near zero");
    }
    out[k] = x[k] / xi_hat[k];
  }
  return out;
}

Reconstructor::Reconstructor(std::size_t k, CleanConfig cfg) : clean_(k, cfg) {}

ReconstructionResult Reconstructor::reconstruct(const SignalVector& x, std::span<const Complex> xi_hat) {
  ReconstructionResult r;
  r.predistorted = predistort(x, xi_hat);
  r.estimated_targets = clean_.estimate(r.predistorted.samples);
  r.reconstructed = SignalVector{CVector(x.size()), SignalKind::reconstructed};
  synthesize_into(r.estimated_targets, r.reconstructed.samples);
  return r;
}

ReconstructionResult reconstruct(const SignalVector& x, std::span<const Complex> xi_hat, const CleanConfig& cfg,
                                 const ArrayGeometry& geom) {
  if (x.size() != geom.k()) throw Error(ErrorCode::length_mismatch, "signal length differs from array size");
  Reconstructor rec(geom.k(), cfg);
  return rec.reconstruct(x, xi_hat);
}

}  // namespace radcal
