#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "radcal/error.hpp"
#include "radcal/factorization_sbb.hpp"
#include "radcal/sim/scenario.hpp"

using namespace radcal;

namespace {

TxRxGpi phases_deg(const RVector& t, const RVector& r) {
  TxRxGpi g;
  for (double v : t) g.phi_t.push_back(deg2rad(v));
  for (double v : r) g.phi_r.push_back(deg2rad(v));
  g.gamma_t.assign(t.size(), 0.0);
  g.gamma_r.assign(r.size(), 0.0);
  return g;
}

sim::ScenarioConfig quiet_scenario() {
  sim::ScenarioConfig sc;
  sc.imbalance_gen.phase_range_deg = 0.0;
  sc.imbalance_gen.gain_range = 0.0;
  return sc;
}

}  // namespace

TEST_CASE("Tx/Rx split of simple inputs") {
  const auto geom = ArrayGeometry::make(3, 4);
  const auto g = estimate_txrx_gpi(CVector(12, 1.0), geom);
  for (double v : g.gamma_t) CHECK(v == 0.0);
  for (double v : g.phi_t) CHECK(v == 0.0);
  for (double v : g.gamma_r) CHECK(v == 0.0);
  for (double v : g.phi_r) CHECK(v == 0.0);

  const CVector xt{1.0, std::polar(1.0, oracle::pi / 6.0)};
  const CVector xr{1.0, Complex(1.0, 0.1)};
  const auto r = estimate_txrx_gpi(factor_to_va(xt, xr), ArrayGeometry::make(2, 2));
  CHECK(oracle::max_abs_diff(r.xi_t, xt) < 1e-9);
  CHECK(oracle::max_abs_diff(r.xi_r, xr) < 1e-9);
  CHECK(r.phi_t[1] == doctest::Approx(oracle::pi / 6.0));
  CHECK(r.gamma_r[1] == doctest::Approx(std::abs(Complex(1.0, 0.1)) - 1.0));

  try {
    estimate_txrx_gpi(CVector(11, 1.0), geom);
    FAIL("expected shape_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::shape_error);
  }
}

TEST_CASE("separable estimates: every normalized row and column equals its factor") {
  oracle::Gen gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t kt = gen.index(1, 4);
    const std::size_t kr = gen.index(1, 5);
    const auto xt = gen.imbalance(kt, 0.4, 2.0);
    const auto xr = gen.imbalance(kr, 0.4, 2.0);
    const auto va = factor_to_va(xt, xr);
    for (std::size_t r = 0; r < kr; ++r) {
      for (std::size_t t = 0; t < kt; ++t) CHECK(std::abs(va[t * kr + r] / va[r] - xt[t]) < 1e-12);
    }
    for (std::size_t t = 0; t < kt; ++t) {
      for (std::size_t r = 0; r < kr; ++r) CHECK(std::abs(va[t * kr + r] / va[t * kr] - xr[r]) < 1e-12);
    }
  }
}

TEST_CASE("Tx/Rx split error scales with a small perturbation") {
  oracle::Gen gen(52);
  const auto geom = ArrayGeometry::make(3, 4);
  const double eps = 1e-3;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto xt = gen.imbalance(3, 0.2, 0.35);
    const auto xr = gen.imbalance(4, 0.2, 0.35);
    auto va = factor_to_va(xt, xr);
    for (auto& v : va) v += eps * gen.unit_phasor();
    const auto g = estimate_txrx_gpi(va, geom);
    worst = std::max({worst, oracle::max_abs_diff(g.xi_t, xt), oracle::max_abs_diff(g.xi_r, xr)});
  }
  MESSAGE("worst factor error at eps = 1e-3: " << worst);
  CHECK(worst < 10.0 * eps);
  CHECK(worst > 0.0);
}

TEST_CASE("SBB threshold check") {
  const SbbConfig cfg{15.0, 3.0};
  CHECK_FALSE(sbb_check(phases_deg({0, 0, 0}, {0, 0, 0, 0}), cfg, 5).detected);
  CHECK_FALSE(sbb_check(phases_deg({0, 0, 0}, {0, 0, 0, 0}), cfg, 5).detection_iteration.has_value());

  const auto rx3 = sbb_check(phases_deg({0, 0, 0}, {0, 0, 30, 0}), cfg, 1001);
  CHECK(rx3.detected);
  CHECK(rx3.channel() == ChannelId{Side::rx, 3});
  CHECK(rx3.detection_iteration == 1001u);

  CHECK_FALSE(sbb_check(phases_deg({0, 14.9, 0}, {0, 0, 0, 0}), cfg, 1).detected);
  CHECK_FALSE(sbb_check(phases_deg({0, 15.0, 0}, {0, 0, 0, 0}), cfg, 1).detected);
  CHECK(sbb_check(phases_deg({0, -15.01, 0}, {0, 0, 0, 0}), cfg, 1).channel() == ChannelId{Side::tx, 2});

  const auto many = sbb_check(phases_deg({0, 20, 0}, {0, 0, -40, 16}), cfg, 9);
  REQUIRE(many.channels.size() == 3);
  CHECK(many.channels[0] == ChannelId{Side::rx, 3});
  CHECK(many.channels[1] == ChannelId{Side::rx, 4});
  CHECK(many.channels[2] == ChannelId{Side::tx, 2});

  auto gains_only = phases_deg({0, 0, 0}, {0, 0, 0, 0});
  gains_only.gamma_r = {0.0, 0.9, 0.9, 0.9};
  CHECK_FALSE(sbb_check(gains_only, cfg, 1).detected);

  SbbLatch latch;
  latch.update(sbb_check(phases_deg({0}, {0, 0}), cfg, 1));
  latch.update(sbb_check(phases_deg({0}, {0, 20}), cfg, 2));
  latch.update(sbb_check(phases_deg({0}, {0, 40}), cfg, 3));
  CHECK(latch.report().detection_iteration == 2u);
}

TEST_CASE("fast estimator stays above the threshold once a persistent offset is learned") {
  const auto geom = ArrayGeometry::make(3, 4);
  const RVector zt(3, 0.0);
  const RVector pr{0.0, 0.0, deg2rad(30.0), 0.0};
  const auto prof = ImbalanceProfile::from_txrx(zt, zt, RVector(4, 0.0), pr);
  auto st = EstimatorState::initial(12);
  const auto cfg = EstimatorConfig::constant(12, 3.0);
  const SbbConfig sbb{15.0, 3.0};
  oracle::Gen gen(53);
  std::optional<std::size_t> first;
  for (std::size_t it = 1; it <= 400; ++it) {
    const auto s = oracle::sum_of_tones({gen.complex_in_annulus(0.3, 1.0), gen.complex_in_annulus(0.1, 0.3)},
                                        {gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5)}, 12);
    CVector x(12);
    for (std::size_t k = 0; k < 12; ++k) x[k] = prof.psi[k] * s[k];
    nlms_step(st, cfg, x, s);
    const auto rep = sbb_check(estimate_txrx_gpi(st.xi_hat, geom), sbb, it);
    if (!first && rep.detected) {
      first = it;
      CHECK(rep.channel() == ChannelId{Side::rx, 3});
    }
    if (first) CHECK(rep.detected);
  }
  REQUIRE(first.has_value());
  CHECK(*first <= 20u);
}

TEST_CASE("combined structure predistorts with the calibration estimate only") {
  auto sc = quiet_scenario();
  sc.fault = {true, 50, Side::rx, 3, 30.0};
  const auto calib = EstimatorConfig::constant(12, 0.1);
  const SbbConfig sbb{15.0, 3.0};
  CombinedStructure a(sc.geom, calib, sbb, CleanConfig{});
  CombinedStructure b(sc.geom, calib, sbb, CleanConfig{});
  sim::SceneStream stream(sc, 9);
  oracle::Gen gen(54);
  for (int it = 0; it < 150; ++it) {
    const auto scene = stream.next();
    const CVector xi_before = a.calibration().xi_hat;
    a.process(scene.measured);
    CHECK(a.last_predistortion() == xi_before);
    // Scramble b's detector weights: nothing on the calibration side may change.
    for (auto& w : b.detector_mutable().psi_hat) w = gen.complex_in_annulus(0.5, 2.0);
    b.process(scene.measured);
    CHECK(b.calibration().psi_hat == a.calibration().psi_hat);
    CHECK(b.last_predistortion() == a.last_predistortion());
  }
  CHECK(a.report().detected);
  CHECK(a.report().channel() == ChannelId{Side::rx, 3});
  CHECK(*a.report().detection_iteration >= 50u);
}

TEST_CASE("combined run without a fault raises no alarm") {
  const auto sc = quiet_scenario();
  sim::SceneStream stream(sc, 10);
  std::vector<SignalVector> xs;
  for (int i = 0; i < 400; ++i) xs.push_back(stream.next().measured);
  const auto run = run_combined(xs, sc.geom, EstimatorConfig::staged(12), SbbConfig{}, CleanConfig{});
  CHECK_FALSE(run.report.detected);
  CHECK(run.gamma_trace.size() == 400);
  CHECK(run.txrx_trace.size() == 400);
}

TEST_CASE("SBB configuration checks") {
  CHECK_THROWS_AS(SbbConfig({0.0, 3.0}).validate(12), Error);
  CHECK_THROWS_AS(SbbConfig({15.0, 24.0}).validate(12), Error);
  CHECK_NOTHROW(SbbConfig({15.0, 3.0}).validate(12));
}
