#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/oracles.hpp"
#include "radcal/error.hpp"
#include "radcal/sim/config_io.hpp"
#include "radcal/sim/doa_bias.hpp"
#include "radcal/sim/replay.hpp"
#include "radcal/sim/report.hpp"
#include "radcal/sim/slls.hpp"

using namespace radcal;
using namespace radcal::sim;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_error;
}

/// Peak sidelobe of a length-K rectangular window outside +-guard/K, from the closed-form
/// Dirichlet kernel sampled on the N-point grid.
double dirichlet_sll_db(std::size_t k, std::size_t n, double guard_bins) {
  double best = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    double f = static_cast<double>(m) / static_cast<double>(n);
    if (f >= 0.5) f -= 1.0;
    if (std::abs(f) <= guard_bins / static_cast<double>(k)) continue;
    const double d = std::sin(oracle::pi * k * f) / (k * std::sin(oracle::pi * f));
    best = std::max(best, d * d);
  }
  return 10.0 * std::log10(best);
}

}  // namespace

TEST_CASE("sidelobe level of an ideal single target equals the window's") {
  const auto s = oracle::sum_of_tones({1.0}, {0.0}, 12);
  for (const double guard : {1.0, 2.0}) {
    const RVector f{0.0};
    CHECK(sidelobe_level_db(s, f, guard, 1024) == doctest::Approx(dirichlet_sll_db(12, 1024, guard)).epsilon(1e-9));
  }
  MESSAGE("K = 12 first sidelobe: " << dirichlet_sll_db(12, 1024, 1.0) << " dB");
}

TEST_CASE("SLLS references") {
  oracle::Gen gen(61);
  const TargetSet ideal{{1.0, Complex(0.0, 1.0), 0.8}, {angle_to_frequency(-45, ArrayGeometry{}),
                                                          angle_to_frequency(0, ArrayGeometry{}),
                                                          angle_to_frequency(50, ArrayGeometry{})}};
  const auto s = synthesize_ideal(ideal, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto xi = gen.imbalance(12, 0.2, deg2rad(20.0));
    SignalVector x{CVector(12), SignalKind::measured};
    for (std::size_t k = 0; k < 12; ++k) x[k] = xi[k] * s[k];
    const auto none = compute_slls(x, CVector(12, 1.0), ideal, 1024);
    CHECK(none.slls_db == 0.0);
    CVector c(12);
    for (std::size_t k = 0; k < 12; ++k) c[k] = 1.0 / xi[k];
    const auto exact = compute_slls(x, c, ideal, 1024);
    CHECK(exact.sll_calibrated_db == doctest::Approx(sidelobe_level_db(s.samples, ideal.frequencies, 1.0, 1024)));
    CHECK(exact.slls_db == doctest::Approx(exact.sll_uncalibrated_db - exact.sll_calibrated_db));
  }
  CHECK(code_of([] { sidelobe_level_db(CVector(12), RVector{0.1}, 1.0, 1024); }) == ErrorCode::degenerate_spectrum);
  CHECK(code_of([] { sidelobe_level_db(CVector(12, 1.0), RVector{}, 1.0, 1024); }) == ErrorCode::degenerate_spectrum);
}

TEST_CASE("DoA bias fit") {
  auto grid = [](double lo, double hi, std::size_t n) {
    RVector t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
  };
  std::mt19937_64 rng(1);
  SUBCASE("noiseless boresight") {
    const auto obs = synthesize_doa_observations(10.0, 0.0, grid(-40, 40, 9), 0.0, rng);
    const auto fit = estimate_doa_bias(obs);
    CHECK(fit.v_s == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(fit.theta_b_deg) < 1e-9);
  }
  SUBCASE("noiseless offset") {
    const auto thetas = grid(-60, 60, 25);
    std::vector<DoaBiasObservation> obs;
    for (double t : thetas) obs.push_back({t + 3.0, 15.0 * std::cos(deg2rad(t))});
    const auto fit = estimate_doa_bias(obs);
    CHECK(std::abs(fit.v_s - 15.0) < 1e-9);
    CHECK(std::abs(fit.theta_b_deg - 3.0) < 1e-9);
    CHECK(fit.rms_residual < 1e-9);
  }
  SUBCASE("noisy velocities") {
    int within = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto obs = synthesize_doa_observations(15.0, 3.0, grid(-60, 60, 50), 0.1, rng);
      within += std::abs(estimate_doa_bias(obs).theta_b_deg - 3.0) < 1.0;
    }
    CHECK(within == 200);
  }
  SUBCASE("insufficient geometry") {
    std::vector<DoaBiasObservation> two{{0.0, 1.0}, {30.0, 0.8}};
    CHECK(code_of([&] { estimate_doa_bias(two); }) == ErrorCode::insufficient_geometry);
    std::vector<DoaBiasObservation> narrow{{0.0, 1.0}, {3.0, 1.0}, {6.0, 1.0}};
    CHECK(code_of([&] { estimate_doa_bias(narrow); }) == ErrorCode::insufficient_geometry);
  }
  SUBCASE("CSV round trip") {
    const auto obs = synthesize_doa_observations(12.0, -2.0, grid(-30, 30, 7), 0.05, rng);
    std::stringstream ss;
    write_doa_observations(ss, obs);
    const auto back = read_doa_observations(ss);
    REQUIRE(back.size() == obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      CHECK(back[i].theta_meas_deg == obs[i].theta_meas_deg);
      CHECK(back[i].v_t == obs[i].v_t);
    }
  }
}

TEST_CASE("replay files") {
  ScenarioConfig sc;
  auto rep = generate_synthetic_replay(sc, 21);
  REQUIRE(rep.records.size() == 21);
  SUBCASE("write and read back exactly") {
    std::stringstream ss;
    write_replay(ss, rep.records);
    const auto back = read_replay(ss);
    REQUIRE(back.size() == rep.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].frame_id == rep.records[i].frame_id);
      CHECK(back[i].peak_id == rep.records[i].peak_id);
      CHECK(back[i].x.samples == rep.records[i].x.samples);
    }
  }
  SUBCASE("comments and blank lines are skipped") {
    std::stringstream ss("# header\n\n1, 0, 2, 1.5, -2, 0, 1e-3\n  # indented comment\n2,1,2,0,0,1,1\n");
    const auto back = read_replay(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0].x[0] == Complex(1.5, -2.0));
    CHECK(back[0].x[1] == Complex(0.0, 1e-3));
    CHECK(back[1].frame_id == 2);
  }
  SUBCASE("malformed input") {
    std::stringstream short_line("1,0,2,1,2,3\n");
    CHECK(code_of([&] { read_replay(short_line); }) == ErrorCode::parse_error);
    std::stringstream bad_num("1,0,1,abc,2\n");
    CHECK(code_of([&] { read_replay(bad_num); }) == ErrorCode::parse_error);
    std::stringstream k_change("1,0,1,1,2\n2,0,2,1,2,3,4\n");
    CHECK(code_of([&] { read_replay(k_change); }) == ErrorCode::parse_error);
    CHECK(code_of([] { read_replay_file("/nonexistent/replay.txt"); }) == ErrorCode::io_error);
  }
}

TEST_CASE("relative estimation on synthetic recordings") {
  ScenarioConfig sc;
  sc.seed = 5;
  RelativeEstimationConfig rc;
  rc.n_mcs = 4;
  rc.estimator = EstimatorConfig::staged(12);

  SUBCASE("too few vectors") {
    const auto rep = generate_synthetic_replay(sc, 99);
    CHECK(code_of([&] { relative_estimation(rep.records, rc); }) == ErrorCode::insufficient_data);
  }
  SUBCASE("odd count splits into halves differing by one") {
    const auto rep = generate_synthetic_replay(sc, 201);
    const auto res = relative_estimation(rep.records, rc);
    CHECK(res.n_odd == 101);
    CHECK(res.n_even == 100);
    CHECK(res.metrics.pipeline("proposed").mae_phi.size() == 100);
  }
  SUBCASE("zero artificial imbalance gives a relative estimate near one") {
    const auto rep = generate_synthetic_replay(sc, 4000);
    rc.phase_range_deg = 0.0;
    rc.gain_range = 0.0;
    rc.include_st = false;
    const auto res = relative_estimation(rep.records, rc);
    const auto& pm = res.metrics.pipeline("proposed");
    MESSAGE("final MAE with null injection: " << pm.mae_phi.back() << " deg, " << pm.mae_gamma.back());
    CHECK(pm.mae_phi.back() < 1.0);
    CHECK(pm.mae_gamma.back() < 0.02);
  }
}

TEST_CASE("configuration files") {
  SUBCASE("unknown keys are rejected at every level") {
    RunConfig cfg;
    CHECK(code_of([&] { apply_json(cfg, nlohmann::json::parse(R"({"scenari": {}})")); }) == ErrorCode::parse_error);
    CHECK(code_of([&] { apply_json(cfg, nlohmann::json::parse(R"({"scenario": {"snr": 3}})")); }) ==
          ErrorCode::parse_error);
    CHECK(code_of([&] { apply_json(cfg, nlohmann::json::parse(R"({"sbb": {"delta_deg": 3}})")); }) ==
          ErrorCode::parse_error);
  }
  SUBCASE("keys are applied and survive a round trip") {
    RunConfig cfg;
    apply_json(cfg, nlohmann::json::parse(R"({
      "scenario": {"snr_db": 12.5, "n_mcs": 7, "seed": 99,
                   "geom": {"k_t": 2, "k_r": 4, "spacing_over_lambda": 0.6},
                   "fault": {"enabled": true, "side": "tx", "channel": 2, "offset_deg": 25}},
      "estimator": {"step_schedule": [[1, 1.0], [51, 0.2]]},
      "sbb": {"delta": 10, "mu_0_fast": 2},
      "clean": {"stop_ratio_db": -20},
      "workers": 2})"));
    CHECK(cfg.scenario.snr_db == 12.5);
    CHECK(cfg.scenario.geom.k() == 8);
    CHECK(cfg.scenario.fault.side == Side::tx);
    CHECK(cfg.estimator_given);
    CHECK(cfg.estimator.step_schedule.size() == 2);
    CHECK(cfg.sbb.delta == 10.0);
    CHECK(cfg.clean.stop_ratio_db == -20.0);
    RunConfig again;
    apply_json(again, to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
  }
  SUBCASE("files may carry comments") {
    const auto path = std::filesystem::temp_directory_path() / "radcal_config_test.json";
    {
      std::ofstream out(path);
      out << "// experiment settings\n{\n  \"scenario\": {\"n_iterations\": 321} /* short run */\n}\n";
    }
    RunConfig cfg;
    load_config_file(cfg, path.string());
    CHECK(cfg.scenario.n_iterations == 321);
    std::filesystem::remove(path);
    CHECK(code_of([&] { load_config_file(cfg, "/nonexistent/cfg.json"); }) == ErrorCode::io_error);
  }
}

TEST_CASE("report formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(format_number(std::nan("")) == "nan");

  Metrics m;
  m.completed = 1;
  PipelineMetrics pm;
  pm.name = "proposed";
  pm.mae_phi = {1.5, 0.5};
  pm.mae_gamma = {0.1, 0.05};
  pm.mean_recon_error = {0.2, 0.2};
  pm.trials_at_iteration = {1, 1};
  m.pipelines.push_back(pm);
  std::stringstream ss;
  write_mae_csv(ss, m);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "pipeline,iteration,mae_phi_deg,mae_gamma,mean_recon_error,trials");
  std::string row;
  std::getline(ss, row);
  CHECK(row == "proposed,1,1.5,0.1,0.2,1");

  const auto man = make_manifest("calibrate", nlohmann::json::object(), 42, nlohmann::json::object());
  CHECK(man.at("seed") == 42);
  CHECK(man.at("command") == "calibrate");
  CHECK(man.contains("git_describe"));
}
