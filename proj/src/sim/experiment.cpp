#include "radcal/sim/experiment.hpp"

#include <cmath>

#include "radcal/error.hpp"
#include "radcal/sim/slls.hpp"
#include "radcal/sim/trial_runner.hpp"

namespace radcal::sim {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::calibration: return "calibration";
    case Mode::sbb: return "sbb";
    case Mode::combined: return "combined";
    case Mode::st_baseline: return "st_baseline";
  }
  return "calibration";
}

Mode mode_from_string(const std::string& name) {
  if (name == "calibration") return Mode::calibration;
  if (name == "sbb") return Mode::sbb;
  if (name == "combined") return Mode::combined;
  if (name == "st_baseline") return Mode::st_baseline;
  throw Error(ErrorCode::parse_error, "unknown mode '" + name + "'");
}

TargetSet SllsEvaluation::targets(const ArrayGeometry& geom) const {
  if (doa_deg.size() != amplitude_db.size() || doa_deg.empty()) {
    throw Error(ErrorCode::invalid_config, "SLLS evaluation needs matching, non-empty DoA and amplitude lists");
  }
  TargetSet t;
  for (std::size_t q = 0; q < doa_deg.size(); ++q) {
    t.push_back(Complex(db_to_amplitude(amplitude_db[q]), 0.0), angle_to_frequency(doa_deg[q], geom));
  }
  return t;
}

void ExperimentConfig::validate() const {
  scenario.validate();
  clean.validate(scenario.geom.k());
  if (pipelines.empty()) throw Error(ErrorCode::invalid_config, "no pipelines configured");
  for (const auto& p : pipelines) {
    auto est = p.estimator;
    est.k = scenario.geom.k();
    est.validate();
    if (p.monitor_sbb || p.kind == PipelineKind::combined) sbb.validate(scenario.geom.k());
  }
  if (slls.enabled) slls.targets(scenario.geom).validate();
}

std::vector<PipelineSpec> pipelines_for(Mode mode, const EstimatorConfig& calibration, const SbbConfig& sbb) {
  switch (mode) {
    case Mode::calibration:
      return {{"proposed", PipelineKind::proposed, calibration, false}};
    case Mode::st_baseline:
      return {{"proposed", PipelineKind::proposed, calibration, false},
              {"st", PipelineKind::single_target, calibration, false}};
    case Mode::sbb:
      return {{"standalone", PipelineKind::proposed, EstimatorConfig::constant(calibration.k, sbb.mu_0_fast), true}};
    case Mode::combined:
      return {{"combined", PipelineKind::combined, calibration, true}};
  }
  return {};
}

namespace {

double distance(const CVector& a, const CVector& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e += std::norm(a[k] - b[k]);
  return std::sqrt(e);
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  const auto& geom = cfg.scenario.geom;
  const std::size_t n_iter = cfg.scenario.n_iterations;
  SceneStream stream(cfg.scenario, trial_seed(cfg.scenario.seed, trial_index));

  std::vector<Pipeline> pipes;
  pipes.reserve(cfg.pipelines.size());
  TrialResult res;
  res.index = trial_index;
  for (const auto& spec : cfg.pipelines) {
    pipes.emplace_back(spec, geom, cfg.clean, cfg.sbb);
    TrialTrace tr;
    tr.pipeline = spec.name;
    tr.layout = SeriesLayout::from(geom);
    if (cfg.record_traces) tr.reserve(n_iter);
    res.traces.push_back(std::move(tr));
  }

  ReferenceGpi ref;
  CVector ref_psi;
  const bool can_stop = cfg.stop_after_detection && cfg.scenario.fault.enabled;
  for (std::size_t i = 1; i <= n_iter; ++i) {
    const Scene scene = stream.next();
    if (cfg.record_traces && scene.truth.psi != ref_psi) {
      ref = reference_gpi(scene.truth, geom);
      ref_psi = scene.truth.psi;
    }
    for (std::size_t p = 0; p < pipes.size(); ++p) {
      pipes[p].process(scene.measured);
      if (!cfg.record_traces) continue;
      const auto& st = pipes[p].calibration();
      res.traces[p].record(st.gamma_hat, st.phi_hat, estimate_txrx_gpi(st.xi_hat, geom), ref,
                           distance(pipes[p].last_reconstruction().reconstructed.samples, scene.ideal.samples));
    }
    if (can_stop && i >= cfg.scenario.fault.iteration) {
      bool all = true;
      for (const auto& p : pipes) {
        if (p.spec().monitor_sbb || p.spec().kind == PipelineKind::combined) all = all && p.sbb_report().detected;
      }
      if (all) break;
    }
  }

  for (std::size_t p = 0; p < pipes.size(); ++p) {
    res.traces[p].skipped = pipes[p].calibration().skipped;
    res.traces[p].sbb = pipes[p].sbb_report();
    res.final_xi.push_back(pipes[p].calibration().xi_hat);
  }

  if (cfg.slls.enabled) {
    const TargetSet eval = cfg.slls.targets(geom);
    const ImbalanceProfile truth = profile_at(cfg.scenario, stream.draw(), stream.iteration() - 1);
    SignalVector x = synthesize_ideal(eval, geom);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= truth.psi[k];
    x.kind = SignalKind::measured;
    const std::size_t n = cfg.clean.fft_len;
    res.has_slls = true;
    for (const auto& p : pipes) {
      res.slls_db.push_back(compute_slls(x, calibration_from(p.calibration().xi_hat), eval, n, cfg.slls.guard_bins).slls_db);
    }
    res.ideal_slls_db = compute_slls(x, calibration_from(truth.psi), eval, n, cfg.slls.guard_bins).slls_db;
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::string> names;
  for (const auto& p : cfg.pipelines) names.push_back(p.name);
  MetricsAccumulator acc(names, SeriesLayout::from(cfg.scenario.geom),
                         cfg.record_traces ? cfg.scenario.n_iterations : 0);
  ExperimentResult out;
  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  run_ordered<TrialResult>(
      cfg.scenario.n_mcs, workers, 4 * workers, [&](std::size_t i) { return run_trial(cfg, i); },
      [&](std::size_t i, TrialOutcome<TrialResult>&& o) {
        if (!o.value) {
          acc.add_failure(i, std::move(o.error));
          return;
        }
        acc.add(*o.value);
        if (cfg.keep_trial_traces) out.trials.push_back(std::move(*o.value));
      });
  out.metrics = acc.finish();
  const auto& failures = out.metrics.failures;
  if (failures.size() * 20 > cfg.scenario.n_mcs) {
    throw Error(ErrorCode::experiment_failed, std::to_string(failures.size()) + " of " +
                                                  std::to_string(cfg.scenario.n_mcs) +
                                                  " trials failed; first: " + failures.front().message);
  }
  return out;
}

std::vector<HeatmapCell> slls_heatmap(const HeatmapConfig& cfg) {
  if (cfg.snr_db.empty() || cfg.levels.empty()) throw Error(ErrorCode::invalid_config, "empty heat-map grid");
  std::vector<HeatmapCell> cells;
  for (double snr : cfg.snr_db) {
    for (int level : cfg.levels) {
      if (level < 1) throw Error(ErrorCode::invalid_config, "imbalance levels start at 1");
      ExperimentConfig ec = cfg.base;
      ec.scenario.snr_db = snr;
      ec.scenario.imbalance_gen.kind = ImbalanceKind::random;
      ec.scenario.imbalance_gen.phase_range_deg = level * cfg.phase_step_deg;
      ec.scenario.imbalance_gen.gain_range = level * cfg.gain_step;
      ec.pipelines = pipelines_for(Mode::st_baseline, cfg.estimator, ec.sbb);
      ec.slls.enabled = true;
      ec.slls.doa_deg = {cfg.eval_doa_deg};
      ec.slls.amplitude_db = {0.0};
      ec.record_traces = false;
      ec.keep_trial_traces = false;
      const auto res = run_experiment(ec);
      HeatmapCell cell;
      cell.snr_db = snr;
      cell.level = level;
      cell.proposed = slls_stats(res.metrics.pipeline("proposed").slls_db);
      cell.st = slls_stats(res.metrics.pipeline("st").slls_db);
      cell.ideal = slls_stats(res.metrics.ideal_slls_db);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace radcal::sim
