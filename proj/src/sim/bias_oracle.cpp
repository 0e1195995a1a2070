#include "radcal/sim/bias_oracle.hpp"

#include <cmath>

#include "radcal/error.hpp"
#include "radcal/sim/trial_runner.hpp"

namespace radcal::sim {

namespace {

struct TrialSums {
  CVector num;    // mean of conj(s_hat) r / ||s_hat||^2
  RVector den;    // mean of |s_hat|^2 / ||s_hat||^2
  CVector noise;  // mean of conj(s_hat) n / (psi ||s_hat||^2)
  CVector err;    // mean of psi_hat / psi - 1
};

TrialSums run_bias_trial(const BiasOracleConfig& cfg, std::size_t index) {
  const auto& geom = cfg.scenario.geom;
  const std::size_t k = geom.k();
  SceneStream stream(cfg.scenario, trial_seed(cfg.scenario.seed, index));
  Reconstructor rec(k, cfg.clean);
  EstimatorConfig est = cfg.estimator;
  est.k = k;
  EstimatorState state = EstimatorState::initial(k);

  TrialSums sums{CVector(k), RVector(k, 0.0), CVector(k), CVector(k)};
  std::size_t n_terms = 0;
  std::size_t n_err = 0;
  CVector noise(k);
  for (std::size_t i = 1; i <= cfg.scenario.n_iterations; ++i) {
    const Scene scene = stream.next();
    const auto& psi = scene.truth.psi;
    const CVector s_hat =
        cfg.exact_reconstruction ? scene.ideal.samples : rec.reconstruct(scene.measured, state.xi_hat).reconstructed.samples;
    const bool collect = i > cfg.burn_in;
    if (collect) {
      double energy = 0.0;
      for (const auto& v : s_hat) energy += std::norm(v);
      if (energy > 0.0) {
        for (std::size_t c = 0; c < k; ++c) {
          const Complex r = s_hat[c] - scene.ideal[c];
          const Complex n = scene.measured[c] - psi[c] * scene.ideal[c];
          sums.num[c] += std::conj(s_hat[c]) * r / energy;
          sums.den[c] += std::norm(s_hat[c]) / energy;
          sums.noise[c] += std::conj(s_hat[c]) * n / (psi[c] * energy);
        }
        ++n_terms;
      }
    }
    nlms_step(state, est, scene.measured.samples, s_hat);
    if (collect) {
      for (std::size_t c = 0; c < k; ++c) sums.err[c] += state.psi_hat[c] / psi[c] - 1.0;
      ++n_err;
    }
  }
  if (n_terms == 0 || n_err == 0) throw Error(ErrorCode::insufficient_data, "no iterations after burn-in");
  for (std::size_t c = 0; c < k; ++c) {
    sums.num[c] /= static_cast<double>(n_terms);
    sums.den[c] /= static_cast<double>(n_terms);
    sums.noise[c] /= static_cast<double>(n_terms);
    sums.err[c] /= static_cast<double>(n_err);
  }
  return sums;
}

double sample_sd(const RVector& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

bool within(const CVector& a, const CVector& b, const RVector& se_re, const RVector& se_im, double n_se) {
  for (std::size_t c = 0; c < a.size(); ++c) {
    const Complex d = a[c] - b[c];
    if (std::abs(d.real()) > n_se * se_re[c] || std::abs(d.imag()) > n_se * se_im[c]) return false;
  }
  return true;
}

}  // namespace

bool BiasOracleResult::agrees(double n_se) const { return within(measured, predicted, diff_se_re, diff_se_im, n_se); }

bool BiasOracleResult::agrees_b0_only(double n_se) const {
  return within(measured, b0, diff_b0_se_re, diff_b0_se_im, n_se);
}

bool BiasOracleResult::b0_imag_zero(double n_se) const {
  for (std::size_t c = 0; c < b0.size(); ++c) {
    if (std::abs(b0[c].imag()) > n_se * b0_se_im[c]) return false;
  }
  return true;
}

BiasOracleResult empirical_bias_oracle(const BiasOracleConfig& cfg, std::size_t n_mcs) {
  cfg.scenario.validate();
  if (cfg.burn_in >= cfg.scenario.n_iterations) {
    throw Error(ErrorCode::invalid_config, "burn-in must leave iterations to average");
  }
  std::vector<TrialSums> trials;
  std::size_t failures = 0;
  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  run_ordered<TrialSums>(
      n_mcs, workers, 4 * workers, [&](std::size_t i) { return run_bias_trial(cfg, i); },
      [&](std::size_t, TrialOutcome<TrialSums>&& o) {
        if (o.value) {
          trials.push_back(std::move(*o.value));
        } else {
          ++failures;
        }
      });
  if (failures * 20 > n_mcs || trials.size() < 2) {
    throw Error(ErrorCode::experiment_failed, "too many failed bias-oracle trials");
  }

  const std::size_t k = cfg.scenario.geom.k();
  const double n = static_cast<double>(trials.size());
  const double root_n = std::sqrt(n);
  BiasOracleResult out;
  out.n_trials = trials.size();
  for (auto* v : {&out.b0, &out.noise_term, &out.predicted, &out.measured}) v->assign(k, Complex{});
  for (auto* v : {&out.b0_se_re, &out.b0_se_im, &out.measured_se_re, &out.measured_se_im, &out.diff_se_re,
                  &out.diff_se_im, &out.diff_b0_se_re, &out.diff_b0_se_im}) {
    v->assign(k, 0.0);
  }

  RVector a_re(trials.size()), a_im(trials.size()), b_re(trials.size()), b_im(trials.size());
  RVector m_re(trials.size()), m_im(trials.size()), d_re(trials.size()), d_im(trials.size());
  RVector e_re(trials.size()), e_im(trials.size());
  for (std::size_t c = 0; c < k; ++c) {
    Complex num{}, noise{}, err{};
    double den = 0.0;
    for (const auto& t : trials) {
      num += t.num[c];
      noise += t.noise[c];
      err += t.err[c];
      den += t.den[c];
    }
    num /= n;
    noise /= n;
    err /= n;
    den /= n;
    const Complex b0 = -num / den;
    const Complex pred = (noise - num) / den;
    out.b0[c] = b0;
    out.noise_term[c] = noise / den;
    out.predicted[c] = pred;
    out.measured[c] = err;

    // Linearized ratio estimators: R_hat - R ~ mean((A_i - R D_i) / D).
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const auto& t = trials[i];
      const Complex lin_b0 = (-t.num[c] - b0 * t.den[c]) / den;
      const Complex lin_pred = (t.noise[c] - t.num[c] - pred * t.den[c]) / den;
      a_re[i] = lin_b0.real();
      a_im[i] = lin_b0.imag();
      m_re[i] = t.err[c].real();
      m_im[i] = t.err[c].imag();
      d_re[i] = t.err[c].real() - lin_pred.real();
      d_im[i] = t.err[c].imag() - lin_pred.imag();
      e_re[i] = t.err[c].real() - lin_b0.real();
      e_im[i] = t.err[c].imag() - lin_b0.imag();
      b_re[i] = lin_pred.real();
      b_im[i] = lin_pred.imag();
    }
    out.b0_se_re[c] = sample_sd(a_re) / root_n;
    out.b0_se_im[c] = sample_sd(a_im) / root_n;
    out.measured_se_re[c] = sample_sd(m_re) / root_n;
    out.measured_se_im[c] = sample_sd(m_im) / root_n;
    out.diff_se_re[c] = sample_sd(d_re) / root_n;
    out.diff_se_im[c] = sample_sd(d_im) / root_n;
    out.diff_b0_se_re[c] = sample_sd(e_re) / root_n;
    out.diff_b0_se_im[c] = sample_sd(e_im) / root_n;
  }
  return out;
}

}  // namespace radcal::sim
