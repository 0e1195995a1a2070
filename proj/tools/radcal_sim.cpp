// radcal-sim: Monte Carlo driver for the imbalance estimator.
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "radcal/error.hpp"
#include "radcal/fft.hpp"
#include "radcal/sim/bias_oracle.hpp"
#include "radcal/sim/config_io.hpp"
#include "radcal/sim/doa_bias.hpp"
#include "radcal/sim/experiment.hpp"
#include "radcal/sim/replay.hpp"
#include "radcal/sim/report.hpp"
#include "radcal/sim/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace radcal;
using namespace radcal::sim;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> mcs;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> workers;
  std::optional<bool> plots;
  std::string out;
};

// Preset -> config file -> command-line flags.
RunConfig resolve(RunConfig preset, const CommonFlags& f) {
  if (!f.config.empty()) load_config_file(preset, f.config);
  if (f.seed) preset.scenario.seed = *f.seed;
  if (f.mcs) preset.scenario.n_mcs = *f.mcs;
  if (f.iters) preset.scenario.n_iterations = *f.iters;
  if (f.workers) preset.workers = *f.workers;
  if (f.plots) preset.plots = *f.plots;
  preset.estimator.k = preset.scenario.geom.k();
  return preset;
}

fs::path out_dir(const CommonFlags& f, const std::string& command) {
  fs::path dir = f.out.empty() ? fs::path("results") / command : fs::path(f.out);
  fs::create_directories(dir);
  return dir;
}

template <class Fn>
void write_csv(const fs::path& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  fn(out);
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg, const json& summary) {
  write_text(dir / "manifest.json", make_manifest(command, to_json(cfg), cfg.scenario.seed, summary).dump(2) + "\n");
}

EstimatorConfig estimator_or(const RunConfig& cfg, double mu_0) {
  if (cfg.estimator_given) return cfg.estimator;
  return EstimatorConfig::constant(cfg.scenario.geom.k(), mu_0);
}

ExperimentConfig experiment_from(const RunConfig& cfg, std::vector<PipelineSpec> pipelines) {
  ExperimentConfig ec;
  ec.scenario = cfg.scenario;
  ec.clean = cfg.clean;
  ec.sbb = cfg.sbb;
  ec.pipelines = std::move(pipelines);
  ec.slls = cfg.slls;
  ec.workers = cfg.workers;
  return ec;
}

RVector iteration_axis(std::size_t n) {
  RVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
  return x;
}

void plot_mae(const fs::path& dir, const Metrics& m, const std::string& title) {
  LinePlot phase{title + ": phase", "iteration", "MAE phase (deg)", {}};
  LinePlot gain{title + ": gain", "iteration", "MAE gain", {}};
  for (const auto& p : m.pipelines) {
    phase.series.push_back({p.name, iteration_axis(p.mae_phi.size()), p.mae_phi});
    gain.series.push_back({p.name, iteration_axis(p.mae_gamma.size()), p.mae_gamma});
  }
  write_text(dir / "mae_phase.svg", render_svg(phase));
  write_text(dir / "mae_gain.svg", render_svg(gain));
}

void plot_txrx(const fs::path& dir, const Metrics& m) {
  for (const auto& p : m.pipelines) {
    LinePlot bias{p.name + ": Tx/Rx phase bias", "iteration", "mean phase error (deg)", {}};
    LinePlot var{p.name + ": Tx/Rx phase variance", "iteration", "variance (deg^2)", {}};
    for (const auto& c : p.channels) {
      if (c.side == SeriesSide::va || c.channel == 1) continue;
      const std::string name = std::string(to_string(c.side)) + std::to_string(c.channel);
      bias.series.push_back({name, iteration_axis(c.bias_phi.size()), c.bias_phi});
      var.series.push_back({name, iteration_axis(c.var_phi.size()), c.var_phi});
    }
    write_text(dir / (p.name + "_txrx_phase_bias.svg"), render_svg(bias));
    write_text(dir / (p.name + "_txrx_phase_var.svg"), render_svg(var));
  }
}

json curve_summary(const Metrics& m) {
  json s = json::object();
  s["completed_trials"] = m.completed;
  s["failed_trials"] = m.failures.size();
  for (const auto& p : m.pipelines) {
    if (p.mae_phi.empty()) continue;
    const std::size_t last = p.mae_phi.size() - 1;
    double worst_bias_phi = 0.0;
    double worst_bias_gamma = 0.0;
    for (const auto& c : p.channels) {
      if (c.side != SeriesSide::va) continue;
      worst_bias_phi = std::max(worst_bias_phi, std::abs(c.bias_phi[last]));
      worst_bias_gamma = std::max(worst_bias_gamma, std::abs(c.bias_gamma[last]));
    }
    s[p.name] = {{"final_mae_phi_deg", p.mae_phi[last]},
                 {"final_mae_gamma", p.mae_gamma[last]},
                 {"max_abs_bias_phi_deg", worst_bias_phi},
                 {"max_abs_bias_gamma", worst_bias_gamma},
                 {"skipped_updates", p.total_skipped}};
  }
  return s;
}

void emit_curves(const fs::path& dir, const Metrics& m) {
  write_csv(dir / "gpi_curves.csv", [&](std::ostream& o) { write_gpi_curves_csv(o, m); });
  write_csv(dir / "mae.csv", [&](std::ostream& o) { write_mae_csv(o, m); });
}

int cmd_calibrate(RunConfig cfg, const CommonFlags& f) {
  const auto dir = out_dir(f, "calibrate");
  auto ec = experiment_from(cfg, pipelines_for(Mode::calibration, estimator_or(cfg, 0.1), cfg.sbb));
  const auto res = run_experiment(ec);
  emit_curves(dir, res.metrics);
  if (cfg.plots) {
    plot_mae(dir, res.metrics, "Convergence");
    plot_txrx(dir, res.metrics);
  }
  const auto summary = curve_summary(res.metrics);
  write_manifest(dir, "calibrate", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_heatup(RunConfig cfg, const CommonFlags& f) {
  const auto dir = out_dir(f, "heatup");
  const std::size_t k = cfg.scenario.geom.k();
  std::vector<PipelineSpec> pipes{{"constant", PipelineKind::proposed, estimator_or(cfg, 0.1), false},
                                  {"staged", PipelineKind::proposed, EstimatorConfig::staged(k), false}};
  const auto res = run_experiment(experiment_from(cfg, pipes));
  emit_curves(dir, res.metrics);
  if (cfg.plots) {
    plot_mae(dir, res.metrics, "Heat-up tracking");
    plot_txrx(dir, res.metrics);
  }
  const auto summary = curve_summary(res.metrics);
  write_manifest(dir, "heatup", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// Spectra of trial 0's evaluation vector: uncalibrated, per pipeline, and ideal.
void write_spectra(const fs::path& dir, const ExperimentConfig& ec, bool plots) {
  const auto trial = run_trial(ec, 0);
  SceneStream stream(ec.scenario, trial_seed(ec.scenario.seed, 0));
  const auto truth = profile_at(ec.scenario, stream.draw(), ec.scenario.n_iterations);
  const auto eval = ec.slls.targets(ec.scenario.geom);
  SignalVector x = synthesize_ideal(eval, ec.scenario.geom);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] *= truth.psi[k];

  const std::size_t n = ec.clean.fft_len;
  Fft fft(n);
  auto spectrum_db = [&](const CVector& xi) {
    CVector v(x.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = x[k] / xi[k];
    CVector y;
    fft.forward_padded(v, y);
    double peak = 0.0;
    for (const auto& c : y) peak = std::max(peak, std::norm(c));
    RVector db(n);
    for (std::size_t l = 0; l < n; ++l) db[l] = 10.0 * std::log10(std::max(std::norm(y[(l + n / 2) % n]) / peak, 1e-12));
    return db;
  };
  std::vector<std::pair<std::string, RVector>> curves;
  curves.emplace_back("uncalibrated", spectrum_db(CVector(x.size(), Complex(1.0, 0.0))));
  for (std::size_t p = 0; p < ec.pipelines.size(); ++p) {
    curves.emplace_back(ec.pipelines[p].name, spectrum_db(trial.final_xi[p]));
  }
  curves.emplace_back("ideal", spectrum_db(truth.psi));
  RVector freq(n);
  for (std::size_t l = 0; l < n; ++l) freq[l] = -0.5 + static_cast<double>(l) / static_cast<double>(n);

  write_csv(dir / "spectra.csv", [&](std::ostream& o) {
    o << "frequency";
    for (const auto& c : curves) o << ',' << c.first << "_db";
    o << '\n';
    for (std::size_t l = 0; l < n; ++l) {
      o << format_number(freq[l]);
      for (const auto& c : curves) o << ',' << format_number(c.second[l]);
      o << '\n';
    }
  });
  if (plots) {
    LinePlot plot{"Angular spectrum of the evaluation scene", "frequency (cycles/element)", "power (dB)", {}};
    for (auto& c : curves) plot.series.push_back({c.first, freq, c.second});
    write_text(dir / "spectra.svg", render_svg(plot));
  }
}

int cmd_compare_st(RunConfig cfg, const CommonFlags& f) {
  const auto dir = out_dir(f, "compare-st");
  cfg.slls.enabled = true;
  auto ec = experiment_from(cfg, pipelines_for(Mode::st_baseline, estimator_or(cfg, 0.1), cfg.sbb));
  const auto res = run_experiment(ec);
  emit_curves(dir, res.metrics);
  write_csv(dir / "slls.csv", [&](std::ostream& o) { write_slls_csv(o, res.metrics); });
  write_spectra(dir, ec, cfg.plots);
  if (cfg.plots) plot_mae(dir, res.metrics, "Proposed vs single-target");

  auto summary = curve_summary(res.metrics);
  for (const auto& p : res.metrics.pipelines) {
    const auto st = slls_stats(p.slls_db);
    summary[p.name]["slls_mean_db"] = st.mean;
    summary[p.name]["slls_max_db"] = st.max;
    summary[p.name]["slls_fraction_below_1db"] = st.fraction_below(1.0);
  }
  const auto ideal = slls_stats(res.metrics.ideal_slls_db);
  summary["ideal"] = {{"slls_mean_db", ideal.mean}, {"slls_max_db", ideal.max}};
  write_manifest(dir, "compare-st", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_heatmap(RunConfig cfg, const CommonFlags& f) {
  const auto dir = out_dir(f, "slls-heatmap");
  HeatmapConfig hc;
  hc.base = experiment_from(cfg, {});
  hc.estimator = estimator_or(cfg, 0.1);
  hc.snr_db = cfg.heatmap.snr_db;
  hc.levels = cfg.heatmap.levels;
  hc.phase_step_deg = cfg.heatmap.phase_step_deg;
  hc.gain_step = cfg.heatmap.gain_step;
  hc.eval_doa_deg = cfg.heatmap.eval_doa_deg;
  const auto cells = slls_heatmap(hc);
  write_csv(dir / "heatmap.csv", [&](std::ostream& o) { write_heatmap_csv(o, cells); });

  json summary = json::array();
  for (const auto& c : cells) {
    summary.push_back({{"snr_db", c.snr_db},
                       {"level", c.level},
                       {"proposed_mean", c.proposed.mean},
                       {"st_mean", c.st.mean},
                       {"ideal_mean", c.ideal.mean}});
  }
  if (cfg.plots) {
    auto grid = [&](auto pick, const std::string& name, const std::string& stat) {
      HeatmapPlot hp{name + " " + stat + " SLLS (dB)", "imbalance level", "SNR (dB)", {}, {}, {}};
      for (int l : hc.levels) hp.x_ticks.push_back("I" + std::to_string(l));
      for (double s : hc.snr_db) {
        hp.y_ticks.push_back(format_number(s));
        RVector row;
        for (int l : hc.levels) {
          for (const auto& c : cells) {
            if (c.snr_db == s && c.level == l) row.push_back(pick(c));
          }
        }
        hp.values.push_back(row);
      }
      write_text(dir / ("heatmap_" + name + "_" + stat + ".svg"), render_svg(hp));
    };
    grid([](const HeatmapCell& c) { return c.proposed.mean; }, "proposed", "mean");
    grid([](const HeatmapCell& c) { return c.st.mean; }, "st", "mean");
    grid([](const HeatmapCell& c) { return c.ideal.mean; }, "ideal", "mean");
    grid([](const HeatmapCell& c) { return c.proposed.max; }, "proposed", "max");
    grid([](const HeatmapCell& c) { return c.st.max; }, "st", "max");
    grid([](const HeatmapCell& c) { return c.ideal.max; }, "ideal", "max");
  }
  write_manifest(dir, "slls-heatmap", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

json sbb_summary(const Metrics& m, const FaultInjection& fault) {
  json s = json::object();
  for (const auto& p : m.pipelines) {
    std::size_t detected = 0, correct = 0, early = 0;
    double sum = 0.0;
    long max_delay = 0;
    for (const auto& r : p.sbb_reports) {
      if (!r.detected) continue;
      ++detected;
      const long delay = static_cast<long>(*r.detection_iteration) - static_cast<long>(fault.iteration) + 1;
      if (!fault.enabled || delay <= 0) {
        ++early;
        continue;
      }
      sum += static_cast<double>(delay);
      max_delay = std::max(max_delay, delay);
      if (r.channel() == ChannelId{fault.side, fault.channel}) ++correct;
    }
    const std::size_t late = detected - early;
    s[p.name] = {{"trials", p.sbb_reports.size()},
                 {"detections", detected},
                 {"false_alarms", early},
                 {"mean_delay", late ? sum / static_cast<double>(late) : NAN},
                 {"max_delay", max_delay},
                 {"correct_channel", correct}};
  }
  return s;
}

int cmd_sbb(RunConfig cfg, const CommonFlags& f, Mode mode, bool no_fault) {
  const std::string name = mode == Mode::sbb ? "sbb" : "combined";
  const auto dir = out_dir(f, name);
  cfg.scenario.fault.enabled = !no_fault;
  auto ec = experiment_from(cfg, pipelines_for(mode, estimator_or(cfg, 0.1), cfg.sbb));
  ec.record_traces = mode == Mode::combined;
  ec.stop_after_detection = !ec.record_traces;
  const auto res = run_experiment(ec);
  const std::size_t inj = cfg.scenario.fault.iteration;
  write_csv(dir / "sbb_detection.csv", [&](std::ostream& o) { write_sbb_csv(o, res.metrics, inj); });
  write_csv(dir / "sbb_histogram.csv", [&](std::ostream& o) { write_sbb_histogram_csv(o, res.metrics, inj); });
  if (ec.record_traces) emit_curves(dir, res.metrics);
  if (cfg.plots) {
    for (const auto& p : res.metrics.pipelines) {
      BarPlot bp{p.name + ": detection delay", "iterations after injection", "trials", {}, {}};
      for (const auto& [delay, count] : detection_histogram(p, inj)) {
        bp.labels.push_back(std::to_string(delay));
        bp.values.push_back(static_cast<double>(count));
      }
      write_text(dir / (p.name + "_delay_histogram.svg"), render_svg(bp));
    }
    if (ec.record_traces) plot_txrx(dir, res.metrics);
  }
  auto summary = sbb_summary(res.metrics, cfg.scenario.fault);
  write_manifest(dir, name, cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_replay(RunConfig cfg, const CommonFlags& f, const std::string& input) {
  const auto dir = out_dir(f, "replay");
  std::vector<ReplayRecord> records;
  std::string source = input.empty() ? cfg.replay.file : input;
  if (source.empty()) {
    auto synth = generate_synthetic_replay(cfg.scenario, cfg.replay.generate_vectors);
    records = std::move(synth.records);
    source = (dir / "synthetic_replay.txt").string();
    write_replay_file(source, records);
  } else {
    records = read_replay_file(source);
  }
  RelativeEstimationConfig rc;
  rc.geom = cfg.scenario.geom;
  rc.clean = cfg.clean;
  rc.estimator = estimator_or(cfg, 0.1);
  rc.phase_range_deg = cfg.replay.phase_range_deg;
  rc.gain_range = cfg.replay.gain_range;
  rc.n_mcs = cfg.scenario.n_mcs;
  rc.seed = cfg.scenario.seed;
  rc.workers = cfg.workers;
  rc.include_st = cfg.replay.include_st;
  const auto res = relative_estimation(records, rc);
  emit_curves(dir, res.metrics);
  if (cfg.plots) {
    plot_mae(dir, res.metrics, "Relative estimation");
    plot_txrx(dir, res.metrics);
  }
  auto summary = curve_summary(res.metrics);
  summary["source"] = source;
  summary["odd_vectors"] = res.n_odd;
  summary["even_vectors"] = res.n_even;
  write_manifest(dir, "replay", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_doa_bias(RunConfig cfg, const CommonFlags& f) {
  const auto dir = out_dir(f, "doa-bias");
  const auto& d = cfg.doa_bias;
  std::vector<DoaBiasObservation> obs;
  if (!d.observations_file.empty()) {
    std::ifstream in(d.observations_file);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + d.observations_file + "'");
    obs = read_doa_observations(in);
  } else {
    std::mt19937_64 rng(trial_seed(cfg.scenario.seed, 0));
    RVector thetas(d.count);
    std::uniform_real_distribution<double> u(d.theta_range_deg.lo, d.theta_range_deg.hi);
    for (auto& t : thetas) t = u(rng);
    obs = synthesize_doa_observations(d.v_s, d.theta_b_deg, thetas, d.noise_sigma, rng);
  }
  const auto fit = estimate_doa_bias(obs);
  write_csv(dir / "observations.csv", [&](std::ostream& o) { write_doa_observations(o, obs); });
  json summary = {{"v_s", fit.v_s}, {"theta_b_deg", fit.theta_b_deg}, {"rms_residual", fit.rms_residual},
                  {"observations", obs.size()}};
  if (cfg.plots) {
    PlotSeries pts{"fit", {}, {}};
    for (double th = -90.0; th <= 90.0; th += 1.0) {
      pts.x.push_back(th);
      pts.y.push_back(fit.v_s * std::cos(deg2rad(th - fit.theta_b_deg)));
    }
    std::vector<std::pair<double, double>> sorted;
    for (const auto& o : obs) sorted.emplace_back(o.theta_meas_deg, o.v_t);
    std::sort(sorted.begin(), sorted.end());
    PlotSeries meas{"measured", {}, {}};
    for (const auto& [a, v] : sorted) {
      meas.x.push_back(a);
      meas.y.push_back(v);
    }
    write_text(dir / "doa_bias_fit.svg",
               render_svg(LinePlot{"Cosine fit of stationary-target velocities", "measured DoA (deg)",
                                   "relative velocity", {meas, pts}}));
  }
  write_manifest(dir, "doa-bias", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_bias_oracle(RunConfig cfg, const CommonFlags& f, std::size_t burn_in, bool exact) {
  const auto dir = out_dir(f, "bias-oracle");
  BiasOracleConfig bc;
  bc.scenario = cfg.scenario;
  bc.clean = cfg.clean;
  bc.estimator = estimator_or(cfg, 0.1);
  bc.burn_in = burn_in;
  bc.exact_reconstruction = exact;
  bc.workers = cfg.workers;
  const auto r = empirical_bias_oracle(bc, cfg.scenario.n_mcs);
  write_csv(dir / "bias_oracle.csv", [&](std::ostream& o) { write_bias_oracle_csv(o, r); });
  json summary = {{"trials", r.n_trials},
                  {"agrees_3se", r.agrees(3.0)},
                  {"agrees_b0_only_3se", r.agrees_b0_only(3.0)},
                  {"b0_imag_zero_3se", r.b0_imag_zero(3.0)}};
  write_manifest(dir, "bias-oracle", cfg, summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for MIMO radar channel-imbalance estimation"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "experiment seed");
    sub->add_option("--mcs", flags.mcs, "Monte Carlo trials");
    sub->add_option("--iters", flags.iters, "signal vectors per trial");
    sub->add_option("--out", flags.out, "output directory (default results/<command>)");
    sub->add_option("--workers", flags.workers, "worker threads");
    sub->add_option("--plots", flags.plots, "write SVG plots (true/false)");
  };

  auto* calibrate = app.add_subcommand("calibrate", "convergence with constant imbalances");
  auto* heatup = app.add_subcommand("heatup", "tracking of exponentially drifting phases");
  auto* compare = app.add_subcommand("compare-st", "proposed vs single-target baseline, MAE and SLLS");
  auto* heatmap = app.add_subcommand("slls-heatmap", "SLLS over SNR and imbalance level");
  auto* sbb = app.add_subcommand("sbb", "standalone sudden-beam-break detection");
  auto* combined = app.add_subcommand("combined", "calibration with concurrent SBB detection");
  auto* replay = app.add_subcommand("replay", "two-step relative estimation on a recording");
  auto* doa = app.add_subcommand("doa-bias", "cosine fit of stationary-target velocities");
  auto* oracle = app.add_subcommand("bias-oracle", "steady-state bias prediction vs measurement");
  for (auto* s : {calibrate, heatup, compare, heatmap, sbb, combined, replay, doa, oracle}) add_common(s);

  bool no_fault = false;
  for (auto* s : {sbb, combined}) s->add_flag("--no-fault", no_fault, "run without the injected beam break");
  std::string replay_input;
  replay->add_option("--input", replay_input, "replay file (default: generate a synthetic one)");
  std::size_t burn_in = 1000;
  bool exact = false;
  oracle->add_option("--burn-in", burn_in, "iterations discarded before averaging");
  oracle->add_flag("--exact", exact, "feed the true signal instead of the reconstruction");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig preset;
    preset.scenario.n_mcs = 100;
    if (*calibrate) return cmd_calibrate(resolve(preset, flags), flags);
    if (*heatup) {
      preset.scenario.imbalance_gen.kind = ImbalanceKind::heatup;
      return cmd_heatup(resolve(preset, flags), flags);
    }
    if (*compare) return cmd_compare_st(resolve(preset, flags), flags);
    if (*heatmap) {
      preset.scenario.noise_enabled = true;
      return cmd_heatmap(resolve(preset, flags), flags);
    }
    if (*sbb || *combined) {
      // No background imbalance: the threshold would otherwise flag the imbalances themselves.
      preset.scenario.imbalance_gen.phase_range_deg = 0.0;
      preset.scenario.imbalance_gen.gain_range = 0.0;
      preset.scenario.fault.enabled = true;
      return cmd_sbb(resolve(preset, flags), flags, *sbb ? Mode::sbb : Mode::combined, no_fault);
    }
    if (*replay) return cmd_replay(resolve(preset, flags), flags, replay_input);
    if (*doa) return cmd_doa_bias(resolve(preset, flags), flags);
    if (*oracle) {
      preset.scenario.n_iterations = 3000;
      return cmd_bias_oracle(resolve(preset, flags), flags, burn_in, exact);
    }
  } catch (const radcal::Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
