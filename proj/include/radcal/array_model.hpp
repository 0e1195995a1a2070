#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "radcal/linear_fit.hpp"
#include "radcal/types.hpp"

namespace radcal {

/// Uniform linear virtual array formed by every Tx/Rx pair of a MIMO front end.
struct ArrayGeometry {
  std::size_t k_t = 3;
  std::size_t k_r = 4;
  double spacing_over_lambda = 0.5;

  std::size_t k() const { return k_t * k_r; }
  void validate() const;

  static ArrayGeometry make(std::size_t k_t, std::size_t k_r, double spacing_over_lambda = 0.5);
};

/// Sinusoid parameters of one signal vector. Frequencies are in cycles per
/// element and live in [-0.5, 0.5).
struct TargetSet {
  CVector amplitudes;
  RVector frequencies;

  std::size_t size() const { return amplitudes.size(); }
  bool empty() const { return amplitudes.empty(); }
  void validate() const;
  void push_back(Complex amplitude, double frequency);
};

enum class SignalKind { ideal, measured, predistorted, reconstructed };

struct SignalVector {
  CVector samples;
  SignalKind kind = SignalKind::ideal;

  std::size_t size() const { return samples.size(); }
  const Complex& operator[](std::size_t k) const { return samples[k]; }
  Complex& operator[](std::size_t k) { return samples[k]; }
};

/// Per-channel complex offsets and their gain/phase decomposition.
///
/// `phi` holds continuous (unwrapped) phases in radians; `xi[k] = (1 + gamma[k]) e^{j phi[k]}`
/// with the first channel as reference. When the profile comes from Tx/Rx factors,
/// `xi_t`/`xi_r` hold them and `xi = xi_t (x) xi_r` with the Rx index varying fastest.
struct ImbalanceProfile {
  CVector psi;
  CVector xi;
  CVector xi_t;
  CVector xi_r;
  RVector gamma;
  RVector phi;
  double f_delta = 0.0;

  std::size_t size() const { return xi.size(); }

  /// Builds a profile from Tx and Rx gain/phase imbalances (radians). Reference
  /// entries (index 0) must be zero. psi is set equal to xi.
  static ImbalanceProfile from_txrx(std::span<const double> gamma_t, std::span<const double> phi_t,
                                    std::span<const double> gamma_r, std::span<const double> phi_r);

  /// Builds a VA-only profile (no Tx/Rx factors) from gains and phases (radians).
  static ImbalanceProfile from_gpi(std::span<const double> gamma, std::span<const double> phi);

  static ImbalanceProfile identity(const ArrayGeometry& geom);
};

struct NoiseModel {
  double snr_db = 20.0;
  bool enabled = true;

  void validate() const;
  /// Per-element complex noise variance for a dominant target of the given amplitude.
  double variance(double dominant_amplitude) const;
};

/// s[k] = sum_q alpha_q e^{j 2 pi f_q k}, k = 0..K-1 (first element has zero phase).
SignalVector synthesize_ideal(const TargetSet& targets, std::size_t k);
SignalVector synthesize_ideal(const TargetSet& targets, const ArrayGeometry& geom);

/// Accumulates the synthesized vector into `out` (no allocation). `out.size()` is K.
void synthesize_into(const TargetSet& targets, std::span<Complex> out);

/// f = (d / lambda) sin(theta), theta in degrees, |theta| <= 90.
double angle_to_frequency(double theta_deg, const ArrayGeometry& geom);
/// Inverse of angle_to_frequency; requires |f| <= d / lambda.
double frequency_to_angle(double frequency, const ArrayGeometry& geom);

/// Largest |alpha_q|, 0 for an empty set.
double dominant_amplitude(const TargetSet& targets);

/// x[k] = psi[k] s[k] + n[k] with circularly-symmetric complex Gaussian noise
/// whose variance follows the dominant-target SNR definition.
SignalVector apply_imbalance(const SignalVector& ideal, std::span<const Complex> psi,
                             const NoiseModel& noise, double dominant_amplitude,
                             std::mt19937_64& rng);
SignalVector apply_imbalance(const SignalVector& ideal, const ImbalanceProfile& profile,
                             const NoiseModel& noise, double dominant_amplitude,
                             std::uint64_t rng_seed);

/// Kronecker product with the Rx index varying fastest: xi[kt * K_r + kr] = xi_t[kt] xi_r[kr].
CVector factor_to_va(std::span<const Complex> xi_t, std::span<const Complex> xi_r);

struct LinearPhaseSplit {
  double f_delta = 0.0;  // cycles per element
  RVector residual;
};

/// phi[k] = 2 pi f_delta k + residual[k]; the residual has zero least-squares slope
/// and keeps the reference element's phase.
LinearPhaseSplit split_linear_phase(std::span<const double> phi);

/// Removes the linear phase trend from a profile. The result stays Kronecker-separable
/// when the input was (the trend splits into a Tx and an Rx ramp).
ImbalanceProfile remove_linear_phase(const ImbalanceProfile& profile);

/// xi = (1 + gamma) e^{j phi}
CVector gpi_to_complex(std::span<const double> gamma, std::span<const double> phi);

}  // namespace radcal
