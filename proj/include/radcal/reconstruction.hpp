#pragma once

#include <span>

#include "radcal/array_model.hpp"
#include "radcal/fft.hpp"

namespace radcal {

/// Smallest imbalance magnitude accepted for predistortion.
inline constexpr double kCalibrationFloor = 1e-6;

struct CleanConfig {
  std::size_t fft_len = 1024;
  double stop_ratio_db = -15.0;  // relative to the first accepted peak
  std::size_t max_targets = 10;

  void validate(std::size_t k) const;
  double stop_ratio() const { return db_to_amplitude(stop_ratio_db); }
};

struct CleanDiagnostics {
  RVector residual_power;  // ||residual||^2 before the first pass and after each accepted subtraction
  std::size_t passes = 0;  // FFT peak searches performed
  bool stopped_by_ratio = false;
};

/// CLEAN sinusoid extraction on an N-point zero-padded FFT grid.
///
/// Each pass picks the strongest bin of the residual spectrum (ties go to the lowest
/// fftshifted bin), takes alpha = y[l] / K, and removes that sinusoid. Because the
/// removed sinusoid is on the FFT grid its spectrum is a shifted copy of the
/// transform of a length-K rectangular window, so the residual spectrum is updated
/// in O(N) instead of re-running the FFT. The loop stops when a new peak falls below
/// stop_ratio * |alpha_1| (that peak is not reported) or after max_targets peaks.
///
/// Holds per-instance scratch; use one instance per thread.
class CleanEstimator {
 public:
  CleanEstimator(std::size_t k, CleanConfig cfg);

  TargetSet estimate(std::span<const Complex> x, CleanDiagnostics* diag = nullptr);

  const CleanConfig& config() const { return cfg_; }
  std::size_t array_size() const { return k_; }

 private:
  CleanConfig cfg_;
  std::size_t k_;
  Fft fft_;
  CVector kernel_;
  CVector spectrum_;
  CVector residual_;
  RVector power_;
};

TargetSet clean_estimate(std::span<const Complex> x_pd, const CleanConfig& cfg);

/// Non-iterative baseline: local maxima of a single FFT within stop_ratio of the
/// strongest one, strongest first, at most max_targets of them.
TargetSet fft_peak_estimate(std::span<const Complex> x, const CleanConfig& cfg);

/// output[k] = x[k] / xi_hat[k]
SignalVector predistort(const SignalVector& x, std::span<const Complex> xi_hat);

struct ReconstructionResult {
  TargetSet estimated_targets;
  SignalVector reconstructed;
  SignalVector predistorted;
};

/// predistort -> CLEAN -> resynthesis, reusing scratch across calls.
class Reconstructor {
 public:
  Reconstructor(std::size_t k, CleanConfig cfg);

  ReconstructionResult reconstruct(const SignalVector& x, std::span<const Complex> xi_hat);

  std::size_t array_size() const { return clean_.array_size(); }
  const CleanConfig& config() const { return clean_.config(); }

 private:
  CleanEstimator clean_;
};

ReconstructionResult reconstruct(const SignalVector& x, std::span<const Complex> xi_hat, const CleanConfig& cfg,
                                 const ArrayGeometry& geom);

}  // namespace radcal
