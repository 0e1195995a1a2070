#include "radcal/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radcal/error.hpp"

namespace radcal {

void ArrayGeometry::validate() const {
  if (k_t == 0 || k_r == 0) throw Error(ErrorCode::invalid_config, "array needs at least one Tx and one Rx");
  if (!(spacing_over_lambda > 0.0) || !std::isfinite(spacing_over_lambda)) {
    throw Error(ErrorCode::invalid_config, "spacing_over_lambda must be positive");
  }
}

ArrayGeometry ArrayGeometry::make(std::size_t k_t, std::size_t k_r, double spacing_over_lambda) {
  ArrayGeometry g{k_t, k_r, spacing_over_lambda};
  g.validate();
  return g;
}

void TargetSet::validate() const {
  if (amplitudes.size() != frequencies.size()) {
    throw Error(ErrorCode::invalid_target_set,
                std::to_string(amplitudes.size()) + " amplitudes vs " +
                    std::to_string(frequencies.size()) + " frequencies");
  }
  for (double f : frequencies) {
    if (!(f >= -0.5 && f < 0.5)) {
      throw Error(ErrorCode::invalid_target_set, "frequency " + std::to_string(f) + " outside [-0.5, 0.5)");
    }
  }
}

void TargetSet::push_back(Complex amplitude, double frequency) {
  amplitudes.push_back(amplitude);
  frequencies.push_back(frequency);
}

namespace {

void check_factor_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(ErrorCode::length_mismatch, what);
}

}  // namespace

CVector gpi_to_complex(std::span<const double> gamma, std::span<const double> phi) {
  check_factor_lengths(gamma.size(), phi.size(), "gain and phase vectors differ in length");
  CVector out(gamma.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::polar(1.0 + gamma[k], phi[k]);
  return out;
}

ImbalanceProfile ImbalanceProfile::from_txrx(std::span<const double> gamma_t, std::span<const double> phi_t,
                                             std::span<const double> gamma_r, std::span<const double> phi_r) {
  check_factor_lengths(gamma_t.size(), phi_t.size(), "Tx gain and phase vectors differ in length");
  check_factor_lengths(gamma_r.size(), phi_r.size(), "Rx gain and phase vectors differ in length");
  if (gamma_t.empty() || gamma_r.empty()) throw Error(ErrorCode::shape_error, "empty Tx or Rx factor");

  ImbalanceProfile p;
  p.xi_t = gpi_to_complex(gamma_t, phi_t);
  p.xi_r = gpi_to_complex(gamma_r, phi_r);
  p.xi = factor_to_va(p.xi_t, p.xi_r);
  const std::size_t kr = gamma_r.size();
  p.gamma.resize(p.xi.size());
  p.phi.resize(p.xi.size());
  for (std::size_t t = 0; t < gamma_t.size(); ++t) {
    for (std::size_t r = 0; r < kr; ++r) {
      p.gamma[t * kr + r] = std::abs(p.xi[t * kr + r]) - 1.0;
      p.phi[t * kr + r] = phi_t[t] + phi_r[r];
    }
  }
  p.f_delta = split_linear_phase(p.phi).f_delta;
  p.psi = p.xi;
  return p;
}

ImbalanceProfile ImbalanceProfile::from_gpi(std::span<const double> gamma, std::span<const double> phi) {
  ImbalanceProfile p;
  p.xi = gpi_to_complex(gamma, phi);
  p.gamma.assign(gamma.begin(), gamma.end());
  p.phi.assign(phi.begin(), phi.end());
  p.f_delta = split_linear_phase(p.phi).f_delta;
  p.psi = p.xi;
  return p;
}

ImbalanceProfile ImbalanceProfile::identity(const ArrayGeometry& geom) {
  const RVector zt(geom.k_t, 0.0);
  const RVector zr(geom.k_r, 0.0);
  return from_txrx(zt, zt, zr, zr);
}

void NoiseModel::validate() const {
  if (enabled && !std::isfinite(snr_db)) throw Error(ErrorCode::invalid_config, "snr_db must be finite");
}

double NoiseModel::variance(double dominant) const {
  if (!enabled) return 0.0;
  return dominant * dominant / db_to_power(snr_db);
}

void synthesize_into(const TargetSet& targets, std::span<Complex> out) {
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t q = 0; q < targets.size(); ++q) {
    const double w = kTwoPi * targets.frequencies[q];
    const Complex a = targets.amplitudes[q];
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double arg = w * static_cast<double>(k);
      out[k] += a * Complex(std::cos(arg), std::sin(arg));
    }
  }
}

SignalVector synthesize_ideal(const TargetSet& targets, std::size_t k) {
  targets.validate();
  SignalVector s{CVector(k), SignalKind::ideal};
  synthesize_into(targets, s.samples);
  return s;
}

SignalVector synthesize_ideal(const TargetSet& targets, const ArrayGeometry& geom) {
  return synthesize_ideal(targets, geom.k());
}

double angle_to_frequency(double theta_deg, const ArrayGeometry& geom) {
  if (!(std::abs(theta_deg) <= 90.0)) {
    throw Error(ErrorCode::out_of_range, "DoA " + std::to_string(theta_deg) + " deg outside [-90, 90]");
  }
  return geom.spacing_over_lambda * std::sin(deg2rad(theta_deg));
}

double frequency_to_angle(double frequency, const ArrayGeometry& geom) {
  if (!(std::abs(frequency) <= geom.spacing_over_lambda)) {
    throw Error(ErrorCode::unmappable_frequency,
                "|f| = " + std::to_string(std::abs(frequency)) + " exceeds d/lambda");
  }
  return rad2deg(std::asin(frequency / geom.spacing_over_lambda));
}

double dominant_amplitude(const TargetSet& targets) {
  double m = 0.0;
  for (const auto& a : targets.amplitudes) m = std::max(m, std::abs(a));
  return m;
}

SignalVector apply_imbalance(const SignalVector& ideal, std::span<const Complex> psi, const NoiseModel& noise,
                             double dominant, std::mt19937_64& rng) {
  if (ideal.size() != psi.size()) {
    throw Error(ErrorCode::length_mismatch, "signal vector and imbalance profile differ in length");
  }
  SignalVector x{CVector(ideal.size()), SignalKind::measured};
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = psi[k] * ideal[k];
  const double var = noise.variance(dominant);
  if (var > 0.0) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(var / 2.0));
    for (auto& v : x.samples) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v += Complex(re, im);
    }
  }
  return x;
}

SignalVector apply_imbalance(const SignalVector& ideal, const ImbalanceProfile& profile, const NoiseModel& noise,
                             double dominant, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return apply_imbalance(ideal, profile.psi, noise, dominant, rng);
}

CVector factor_to_va(std::span<const Complex> xi_t, std::span<const Complex> xi_r) {
  if (xi_t.empty() || xi_r.empty()) throw Error(ErrorCode::shape_error, "empty Tx or Rx factor");
  constexpr double tol = 1e-12;
  if (std::abs(xi_t[0] - 1.0) > tol || std::abs(xi_r[0] - 1.0) > tol) {
    throw Error(ErrorCode::invalid_reference, "Tx and Rx reference elements must equal 1");
  }
  CVector xi(xi_t.size() * xi_r.size());
  for (std::size_t t = 0; t < xi_t.size(); ++t) {
    for (std::size_t r = 0; r < xi_r.size(); ++r) xi[t * xi_r.size() + r] = xi_t[t] * xi_r[r];
  }
  return xi;
}

LinearPhaseSplit split_linear_phase(std::span<const double> phi) {
  const DetrendFit fit = fit_line(phi);
  LinearPhaseSplit out{fit.slope / kTwoPi, RVector(phi.begin(), phi.end())};
  for (std::size_t k = 0; k < phi.size(); ++k) out.residual[k] -= fit.slope * static_cast<double>(k);
  return out;
}

ImbalanceProfile remove_linear_phase(const ImbalanceProfile& profile) {
  ImbalanceProfile out = profile;
  const auto split = split_linear_phase(profile.phi);
  const double slope = kTwoPi * split.f_delta;
  out.phi = split.residual;
  out.f_delta = 0.0;
  out.xi = gpi_to_complex(out.gamma, out.phi);
  for (std::size_t k = 0; k < out.psi.size(); ++k) {
    out.psi[k] = profile.psi[k] * std::polar(1.0, -slope * static_cast<double>(k));
  }
  if (!out.xi_t.empty()) {
    const std::size_t kr = out.xi_r.size();
    for (std::size_t t = 0; t < out.xi_t.size(); ++t) {
      out.xi_t[t] *= std::polar(1.0, -slope * static_cast<double>(t * kr));
    }
    for (std::size_t r = 0; r < kr; ++r) out.xi_r[r] *= std::polar(1.0, -slope * static_cast<double>(r));
  }
  return out;
}

}  // namespace radcal
