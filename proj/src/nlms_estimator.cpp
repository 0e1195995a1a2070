#include "radcal/nlms_estimator.hpp"

#include <cmath>
#include <json.hpp>

#include "radcal/error.hpp"
#include "radcal/array_model.hpp"
#include "radcal/reconstruction.hpp"

namespace radcal {

void EstimatorConfig::validate() const {
  if (k == 0) throw Error(ErrorCode::invalid_config, "estimator needs at least one channel");
  if (step_schedule.empty()) throw Error(ErrorCode::invalid_config, "empty step schedule");
  if (step_schedule.front().start_iteration != 1) {
    throw Error(ErrorCode::invalid_config, "step schedule must start at iteration 1");
  }
  const double upper = 2.0 * static_cast<double>(k);
  for (std::size_t i = 0; i < step_schedule.size(); ++i) {
    const auto& st = step_schedule[i];
    if (!(st.mu_0 > 0.0 && st.mu_0 < upper)) {
      throw Error(ErrorCode::invalid_config,
                  "mu_0 = " + std::to_string(st.mu_0) + " outside the stable range (0, 2K)");
    }
    if (i > 0 && st.start_iteration <= step_schedule[i - 1].start_iteration) {
      throw Error(ErrorCode::invalid_config, "step schedule start iterations must increase strictly");
    }
  }
}

EstimatorConfig EstimatorConfig::constant(std::size_t k, double mu_0) {
  EstimatorConfig cfg{{{1, mu_0}}, k};
  cfg.validate();
  return cfg;
}

EstimatorConfig EstimatorConfig::staged(std::size_t k) {
  EstimatorConfig cfg{{{1, 1.0}, {51, 0.8}, {201, 0.4}, {501, 0.2}, {1001, 0.1}}, k};
  cfg.validate();
  return cfg;
}

double step_size_at(const EstimatorConfig& cfg, std::size_t iteration) {
  double mu = cfg.step_schedule.front().mu_0;
  for (const auto& st : cfg.step_schedule) {
    if (st.start_iteration > iteration) break;
    mu = st.mu_0;
  }
  return mu;
}

NormalizedEstimate normalize_and_detrend(std::span<const Complex> psi_hat) {
  if (psi_hat.empty()) throw Error(ErrorCode::shape_error, "empty weight vector");
  if (!(std::abs(psi_hat[0]) >= 1e-9)) {
    throw Error(ErrorCode::reference_channel_degenerate, "reference weight magnitude below 1e-9");
  }
  const std::size_t k = psi_hat.size();
  NormalizedEstimate out;
  out.gamma_hat.resize(k);
  RVector wrapped(k);
  const Complex ref = psi_hat[0];
  for (std::size_t i = 0; i < k; ++i) {
    const Complex v = psi_hat[i] / ref;
    out.gamma_hat[i] = std::abs(v) - 1.0;
    wrapped[i] = std::arg(v);
  }
  wrapped[0] = 0.0;
  out.phi_hat = unwrap_phase(wrapped);
  out.fit = fit_line(out.phi_hat);
  for (std::size_t i = 0; i < k; ++i) out.phi_hat[i] -= out.fit.slope * static_cast<double>(i);
  out.xi_hat = gpi_to_complex(out.gamma_hat, out.phi_hat);
  return out;
}

EstimatorState EstimatorState::initial(std::size_t k) {
  EstimatorState s;
  s.psi_hat.assign(k, Complex(1.0, 0.0));
  s.xi_hat.assign(k, Complex(1.0, 0.0));
  s.gamma_hat.assign(k, 0.0);
  s.phi_hat.assign(k, 0.0);
  return s;
}

double apply_nlms_update(std::span<Complex> weights, std::span<const Complex> x, std::span<const Complex> s_hat,
                         double mu_0) {
  if (weights.size() != x.size() || x.size() != s_hat.size()) {
    throw Error(ErrorCode::length_mismatch, "weights, measurement and reconstruction differ in length");
  }
  double energy = 0.0;
  for (const auto& s : s_hat) energy += std::norm(s);
  if (!(energy > 0.0)) return 0.0;
  const double mu = mu_0 / energy;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Complex err = weights[k] * s_hat[k] - x[k];
    weights[k] -= mu * std::conj(s_hat[k]) * err;
  }
  return mu;
}

StepOutcome nlms_step(EstimatorState& state, const EstimatorConfig& cfg, std::span<const Complex> x,
                      std::span<const Complex> s_hat) {
  const double mu_0 = step_size_at(cfg, state.iteration);
  const double mu = apply_nlms_update(state.psi_hat, x, s_hat, mu_0);
  ++state.iteration;
  if (mu == 0.0) {
    ++state.skipped;
    return StepOutcome::skipped;
  }
  auto est = normalize_and_detrend(state.psi_hat);
  state.xi_hat = std::move(est.xi_hat);
  state.gamma_hat = std::move(est.gamma_hat);
  state.phi_hat = std::move(est.phi_hat);
  return StepOutcome::updated;
}

CVector calibration_from(std::span<const Complex> xi_hat) {
  CVector c(xi_hat.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!(std::abs(xi_hat[k]) >= kCalibrationFloor)) {
      throw Error(ErrorCode::degenerate_calibration,
                  "imbalance estimate of channel " + std::to_string(k + 1) + " is near zero");
    }
    c[k] = 1.0 / xi_hat[k];
  }
  return c;
}

CVector current_calibration(const EstimatorState& state) { return calibration_from(state.xi_hat); }

std::string snapshot_record(const EstimatorState& state) {
  nlohmann::json j;
  j["iteration"] = state.iteration;
  auto psi = nlohmann::json::array();
  for (const auto& w : state.psi_hat) psi.push_back({w.real(), w.imag()});
  j["psi_hat"] = std::move(psi);
  j["gamma_hat"] = state.gamma_hat;
  j["phi_hat"] = state.phi_hat;
  j["skipped"] = state.skipped;
  return j.dump();
}

}  // namespace radcal
