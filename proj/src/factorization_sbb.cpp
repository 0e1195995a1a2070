#include "radcal/factorization_sbb.hpp"

#include <cmath>

#include "radcal/error.hpp"

namespace radcal {

TxRxGpi estimate_txrx_gpi(std::span<const Complex> xi_hat, const ArrayGeometry& geom) {
  const std::size_t kt = geom.k_t;
  const std::size_t kr = geom.k_r;
  if (xi_hat.size() != kt * kr) {
    throw Error(ErrorCode::shape_error, "VA estimate of length " + std::to_string(xi_hat.size()) +
                                            " does not match K_t * K_r = " + std::to_string(kt * kr));
  }
  // M[r, t] = xi_hat[t * kr + r]
  auto m = [&](std::size_t r, std::size_t t) { return xi_hat[t * kr + r]; };

  TxRxGpi out;
  out.xi_t.assign(kt, Complex{});
  out.xi_r.assign(kr, Complex{});
  for (std::size_t r = 0; r < kr; ++r) {
    const Complex lead = m(r, 0);
    for (std::size_t t = 0; t < kt; ++t) out.xi_t[t] += m(r, t) / lead;
  }
  for (std::size_t t = 0; t < kt; ++t) {
    const Complex lead = m(0, t);
    for (std::size_t r = 0; r < kr; ++r) out.xi_r[r] += m(r, t) / lead;
  }
  for (auto& v : out.xi_t) v /= static_cast<double>(kr);
  for (auto& v : out.xi_r) v /= static_cast<double>(kt);

  auto split = [](const CVector& xi, RVector& gamma, RVector& phi) {
    gamma.resize(xi.size());
    phi.resize(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
      gamma[i] = std::abs(xi[i]) - 1.0;
      phi[i] = std::arg(xi[i]);
    }
  };
  split(out.xi_t, out.gamma_t, out.phi_t);
  split(out.xi_r, out.gamma_r, out.phi_r);
  return out;
}

void SbbConfig::validate(std::size_t k) const {
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_config, "SBB threshold delta must be positive");
  if (!(mu_0_fast > 0.0 && mu_0_fast < 2.0 * static_cast<double>(k))) {
    throw Error(ErrorCode::invalid_config, "mu_0_fast outside the stable range (0, 2K)");
  }
}

const char* to_string(Side side) { return side == Side::tx ? "tx" : "rx"; }

SbbReport sbb_check(const TxRxGpi& gpi, const SbbConfig& cfg, std::size_t iteration) {
  SbbReport rep;
  for (std::size_t r = 0; r < gpi.phi_r.size(); ++r) {
    if (std::abs(rad2deg(gpi.phi_r[r])) > cfg.delta) rep.channels.push_back({Side::rx, r + 1});
  }
  for (std::size_t t = 0; t < gpi.phi_t.size(); ++t) {
    if (std::abs(rad2deg(gpi.phi_t[t])) > cfg.delta) rep.channels.push_back({Side::tx, t + 1});
  }
  rep.detected = !rep.channels.empty();
  if (rep.detected) rep.detection_iteration = iteration;
  return rep;
}

CombinedStructure::CombinedStructure(const ArrayGeometry& geom, EstimatorConfig calibration, SbbConfig sbb,
                                     CleanConfig clean)
    : geom_(geom),
      calibration_cfg_(std::move(calibration)),
      detector_cfg_(EstimatorConfig::constant(geom.k(), sbb.mu_0_fast)),
      sbb_cfg_(sbb),
      reconstructor_(geom.k(), clean),
      calibration_state_(EstimatorState::initial(geom.k())),
      detector_state_(EstimatorState::initial(geom.k())) {
  geom_.validate();
  calibration_cfg_.k = geom.k();
  calibration_cfg_.validate();
  sbb_cfg_.validate(geom.k());
}

CombinedStepResult CombinedStructure::process(const SignalVector& x) {
  const std::size_t iteration = calibration_state_.iteration;
  last_predistortion_ = calibration_state_.xi_hat;
  CombinedStepResult res;
  res.reconstruction = reconstructor_.reconstruct(x, last_predistortion_);
  const auto& s_hat = res.reconstruction.reconstructed.samples;
  res.calibration_outcome = nlms_step(calibration_state_, calibration_cfg_, x.samples, s_hat);
  res.detector_outcome = nlms_step(detector_state_, detector_cfg_, x.samples, s_hat);
  res.detector_gpi = estimate_txrx_gpi(detector_state_.xi_hat, geom_);
  latch_.update(sbb_check(res.detector_gpi, sbb_cfg_, iteration));
  return res;
}

CombinedRun run_combined(std::span<const SignalVector> stream, const ArrayGeometry& geom,
                         const EstimatorConfig& calibration, const SbbConfig& sbb, const CleanConfig& clean) {
  CombinedStructure structure(geom, calibration, sbb, clean);
  CombinedRun run;
  run.gamma_trace.reserve(stream.size());
  run.phi_trace.reserve(stream.size());
  run.txrx_trace.reserve(stream.size());
  for (const auto& x : stream) {
    structure.process(x);
    const auto& cal = structure.calibration();
    run.gamma_trace.push_back(cal.gamma_hat);
    run.phi_trace.push_back(cal.phi_hat);
    run.txrx_trace.push_back(estimate_txrx_gpi(cal.xi_hat, geom));
  }
  run.report = structure.report();
  return run;
}

}  // namespace radcal
