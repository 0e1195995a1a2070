#include "radcal/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radcal/error.hpp"

namespace radcal::sim {

const char* to_string(SeriesSide side) {
  switch (side) {
    case SeriesSide::va: return "va";
    case SeriesSide::tx: return "tx";
    case SeriesSide::rx: return "rx";
  }
  return "va";
}

SeriesSide SeriesLayout::side(std::size_t s) const {
  if (s < k) return SeriesSide::va;
  if (s < k + k_t) return SeriesSide::tx;
  return SeriesSide::rx;
}

std::size_t SeriesLayout::channel(std::size_t s) const {
  if (s < k) return s + 1;
  if (s < k + k_t) return s - k + 1;
  return s - k - k_t + 1;
}

void TrialTrace::reserve(std::size_t n) {
  const std::size_t m = n * layout.size();
  gamma_hat.reserve(m);
  phi_hat.reserve(m);
  gamma_err.reserve(m);
  phi_err.reserve(m);
  recon_error.reserve(n);
}

void TrialTrace::record(std::span<const double> gamma_va, std::span<const double> phi_va, const TxRxGpi& est,
                        const ReferenceGpi& ref, double recon_err) {
  auto push = [&](double g, double p, double g_ref, double p_ref) {
    gamma_hat.push_back(g);
    phi_hat.push_back(p);
    gamma_err.push_back(g - g_ref);
    phi_err.push_back(wrap_angle(p - p_ref));
  };
  for (std::size_t i = 0; i < layout.k; ++i) push(gamma_va[i], phi_va[i], ref.gamma[i], ref.phi[i]);
  for (std::size_t t = 0; t < layout.k_t; ++t) push(est.gamma_t[t], est.phi_t[t], ref.txrx.gamma_t[t], ref.txrx.phi_t[t]);
  for (std::size_t r = 0; r < layout.k_r; ++r) push(est.gamma_r[r], est.phi_r[r], ref.txrx.gamma_r[r], ref.txrx.phi_r[r]);
  recon_error.push_back(recon_err);
}

const ChannelCurves& PipelineMetrics::curves(SeriesSide side, std::size_t channel) const {
  for (const auto& c : channels) {
    if (c.side == side && c.channel == channel) return c;
  }
  throw Error(ErrorCode::out_of_range, "no curves for the requested channel");
}

double SllsStats::fraction_below(double threshold_db) const {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(), [&](double v) { return v < threshold_db; });
  return static_cast<double>(n) / static_cast<double>(values.size());
}

SllsStats slls_stats(const RVector& values) {
  SllsStats st;
  st.values = values;
  if (values.empty()) return st;
  st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  st.max = *std::max_element(values.begin(), values.end());
  st.min = *std::min_element(values.begin(), values.end());
  return st;
}

const PipelineMetrics& Metrics::pipeline(const std::string& name) const {
  for (const auto& p : pipelines) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::out_of_range, "no pipeline named '" + name + "'");
}

std::map<long, std::size_t> detection_histogram(const PipelineMetrics& m, std::size_t injection_iteration) {
  std::map<long, std::size_t> hist;
  for (const auto& rep : m.sbb_reports) {
    if (!rep.detected || !rep.detection_iteration) continue;
    const long delay = static_cast<long>(*rep.detection_iteration) - static_cast<long>(injection_iteration) + 1;
    ++hist[delay];
  }
  return hist;
}

MetricsAccumulator::MetricsAccumulator(std::vector<std::string> pipelines, SeriesLayout layout,
                                       std::size_t n_iterations)
    : names_(std::move(pipelines)), layout_(layout), n_iterations_(n_iterations) {
  const std::size_t m = n_iterations * layout.size();
  sums_.resize(names_.size());
  for (auto& s : sums_) {
    for (RVector* v : {&s.est_g, &s.est_p, &s.err_g, &s.err_p, &s.sq_g, &s.sq_p}) v->assign(m, 0.0);
    for (RVector* v : {&s.mae_p, &s.mae_g, &s.recon}) v->assign(n_iterations, 0.0);
    s.count.assign(n_iterations, 0);
  }
  sbb_.resize(names_.size());
  slls_.resize(names_.size());
  skipped_.assign(names_.size(), 0);
}

void MetricsAccumulator::add(const TrialResult& trial) {
  if (trial.traces.size() != names_.size()) throw Error(ErrorCode::shape_error, "trial has the wrong pipeline count");
  const std::size_t ns = layout_.size();
  const double va_channels = static_cast<double>(std::max<std::size_t>(layout_.k - 1, 1));
  for (std::size_t p = 0; p < names_.size(); ++p) {
    const auto& tr = trial.traces[p];
    auto& s = sums_[p];
    const std::size_t n = std::min(tr.iterations(), n_iterations_);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t base = i * ns;
      double mae_p = 0.0;
      double mae_g = 0.0;
      for (std::size_t c = 0; c < ns; ++c) {
        const std::size_t at = base + c;
        s.est_g[at] += tr.gamma_hat[at];
        s.est_p[at] += tr.phi_hat[at];
        s.err_g[at] += tr.gamma_err[at];
        s.err_p[at] += tr.phi_err[at];
        s.sq_g[at] += tr.gamma_err[at] * tr.gamma_err[at];
        s.sq_p[at] += tr.phi_err[at] * tr.phi_err[at];
        if (c >= 1 && c < layout_.k) {
          mae_p += std::abs(tr.phi_err[at]);
          mae_g += std::abs(tr.gamma_err[at]);
        }
      }
      s.mae_p[i] += mae_p / va_channels;
      s.mae_g[i] += mae_g / va_channels;
      s.recon[i] += tr.recon_error[i];
      ++s.count[i];
    }
    sbb_[p].push_back(tr.sbb);
    skipped_[p] += tr.skipped;
    if (trial.has_slls) slls_[p].push_back(trial.slls_db[p]);
  }
  if (trial.has_slls) ideal_slls_.push_back(trial.ideal_slls_db);
  ++completed_;
}

void MetricsAccumulator::add_failure(std::size_t index, std::string message) {
  failures_.push_back({index, std::move(message)});
}

Metrics MetricsAccumulator::finish() const {
  Metrics out;
  out.completed = completed_;
  out.failures = failures_;
  out.ideal_slls_db = ideal_slls_;
  const std::size_t ns = layout_.size();
  for (std::size_t p = 0; p < names_.size(); ++p) {
    const auto& s = sums_[p];
    PipelineMetrics pm;
    pm.name = names_[p];
    pm.trials_at_iteration = s.count;
    pm.sbb_reports = sbb_[p];
    pm.slls_db = slls_[p];
    pm.total_skipped = skipped_[p];
    pm.mae_phi.resize(n_iterations_);
    pm.mae_gamma.resize(n_iterations_);
    pm.mean_recon_error.resize(n_iterations_);
    for (std::size_t i = 0; i < n_iterations_; ++i) {
      const double n = static_cast<double>(s.count[i]);
      pm.mae_phi[i] = n > 0 ? rad2deg(s.mae_p[i] / n) : std::nan("");
      pm.mae_gamma[i] = n > 0 ? s.mae_g[i] / n : std::nan("");
      pm.mean_recon_error[i] = n > 0 ? s.recon[i] / n : std::nan("");
    }
    for (std::size_t c = 0; c < ns; ++c) {
      ChannelCurves cc;
      cc.side = layout_.side(c);
      cc.channel = layout_.channel(c);
      for (RVector* v : {&cc.mean_gamma, &cc.mean_phi, &cc.bias_gamma, &cc.bias_phi, &cc.var_gamma, &cc.var_phi}) {
        v->assign(n_iterations_, std::nan(""));
      }
      for (std::size_t i = 0; i < n_iterations_; ++i) {
        const double n = static_cast<double>(s.count[i]);
        if (n == 0) continue;
        const std::size_t at = i * ns + c;
        cc.mean_gamma[i] = s.est_g[at] / n;
        cc.mean_phi[i] = rad2deg(s.est_p[at] / n);
        const double bg = s.err_g[at] / n;
        const double bp = s.err_p[at] / n;
        cc.bias_gamma[i] = bg;
        cc.bias_phi[i] = rad2deg(bp);
        if (n > 1) {
          cc.var_gamma[i] = std::max(0.0, (s.sq_g[at] - n * bg * bg) / (n - 1));
          cc.var_phi[i] = rad2deg(rad2deg(std::max(0.0, (s.sq_p[at] - n * bp * bp) / (n - 1))));
        } else {
          cc.var_gamma[i] = 0.0;
          cc.var_phi[i] = 0.0;
        }
      }
      pm.channels.push_back(std::move(cc));
    }
    out.pipelines.push_back(std::move(pm));
  }
  return out;
}

}  // namespace radcal::sim
