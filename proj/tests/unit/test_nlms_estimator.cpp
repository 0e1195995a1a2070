#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "../support/oracles.hpp"
#include "radcal/array_model.hpp"
#include "radcal/error.hpp"
#include "radcal/nlms_estimator.hpp"

using namespace radcal;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_error;
}

CVector hadamard(const CVector& a, const CVector& b) {
  CVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

TEST_CASE("step-size schedule") {
  const auto staged = EstimatorConfig::staged(12);
  CHECK(step_size_at(staged, 1) == 1.0);
  CHECK(step_size_at(staged, 25) == 1.0);
  CHECK(step_size_at(staged, 50) == 1.0);
  CHECK(step_size_at(staged, 51) == 0.8);
  CHECK(step_size_at(staged, 200) == 0.8);
  CHECK(step_size_at(staged, 201) == 0.4);
  CHECK(step_size_at(staged, 501) == 0.2);
  CHECK(step_size_at(staged, 1000) == 0.2);
  CHECK(step_size_at(staged, 1001) == 0.1);
  CHECK(step_size_at(staged, 1000000) == 0.1);
  const auto single = EstimatorConfig::constant(12, 0.1);
  for (std::size_t i : {1u, 7u, 5000u}) CHECK(step_size_at(single, i) == 0.1);
}

TEST_CASE("schedule validation") {
  CHECK(code_of([] { EstimatorConfig::constant(12, 0.0); }) == ErrorCode::invalid_config);
  CHECK(code_of([] { EstimatorConfig::constant(12, 24.0); }) == ErrorCode::invalid_config);
  CHECK(code_of([] { EstimatorConfig::constant(12, 23.9); }) == ErrorCode::io_error);
  CHECK(code_of([] { EstimatorConfig({{2, 0.1}}, 12).validate(); }) == ErrorCode::invalid_config);
  CHECK(code_of([] { EstimatorConfig({{1, 0.1}, {1, 0.2}}, 12).validate(); }) == ErrorCode::invalid_config);
  CHECK(code_of([] { EstimatorConfig({}, 12).validate(); }) == ErrorCode::invalid_config);
}

TEST_CASE("NLMS update on hand-checked inputs") {
  SUBCASE("perfect model leaves the weights alone") {
    auto st = EstimatorState::initial(12);
    const CVector ones(12, 1.0);
    CHECK(nlms_step(st, EstimatorConfig::constant(12, 0.5), ones, ones) == StepOutcome::updated);
    for (const auto& w : st.psi_hat) CHECK(w == Complex(1.0));
    CHECK(st.iteration == 2);
  }
  SUBCASE("single channel with a full step lands on the target") {
    const Complex c(0.3, -1.2);
    CVector w{Complex{}};
    const double mu = apply_nlms_update(w, CVector{c}, CVector{1.0}, 1.0);
    CHECK(mu == 1.0);
    CHECK(std::abs(w[0] - c) < 1e-15);

    EstimatorState st = EstimatorState::initial(1);
    st.psi_hat[0] = Complex{};
    nlms_step(st, EstimatorConfig::constant(1, 1.0), CVector{c}, CVector{1.0});
    CHECK(std::abs(st.psi_hat[0] - c) < 1e-15);
    CHECK(st.xi_hat[0] == Complex(1.0));
  }
  SUBCASE("empty reconstruction skips the update") {
    auto st = EstimatorState::initial(4);
    st.psi_hat = {1.0, Complex(0.5, 0.5), 2.0, Complex(0, 1)};
    const auto before = st.psi_hat;
    CHECK(nlms_step(st, EstimatorConfig::constant(4, 1.0), CVector(4, 1.0), CVector(4)) == StepOutcome::skipped);
    CHECK(st.psi_hat == before);
    CHECK(st.skipped == 1);
    CHECK(st.iteration == 2);
  }
  SUBCASE("length mismatch") {
    CVector w(3, 1.0);
    CHECK(code_of([&] { apply_nlms_update(w, CVector(3), CVector(2), 0.1); }) == ErrorCode::length_mismatch);
  }
}

TEST_CASE("weight error follows the scalar recurrence under exact reconstruction") {
  oracle::Gen gen(31);
  const std::size_t k = 12;
  const auto psi = gen.imbalance(k, 0.2, 0.35);
  auto st = EstimatorState::initial(k);
  const auto cfg = EstimatorConfig::constant(k, 0.1);
  CVector err(k);
  for (std::size_t i = 0; i < k; ++i) err[i] = st.psi_hat[i] - psi[i];
  for (int it = 0; it < 500; ++it) {
    const std::size_t q = gen.index(1, 5);
    std::vector<Complex> a;
    std::vector<double> f;
    for (std::size_t j = 0; j < q; ++j) {
      a.push_back(gen.complex_in_annulus(0.3, 1.0));
      f.push_back(gen.uniform(-0.5, 0.5));
    }
    const auto s = oracle::sum_of_tones(a, f, k);
    double e = 0;
    for (const auto& v : s) e += std::norm(v);
    for (std::size_t i = 0; i < k; ++i) err[i] *= 1.0 - 0.1 * std::norm(s[i]) / e;
    nlms_step(st, cfg, hadamard(psi, s), s);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs((st.psi_hat[i] - psi[i]) - err[i]) < 1e-12);
  }
}

TEST_CASE("one shared step size across channels") {
  oracle::Gen gen(32);
  for (int trial = 0; trial < 100; ++trial) {
    CVector w(8), x(8), s(8);
    for (std::size_t i = 0; i < 8; ++i) {
      w[i] = gen.complex_in_annulus(0.5, 1.5);
      x[i] = gen.complex_in_annulus(0.1, 1.0);
      s[i] = gen.complex_in_annulus(0.1, 1.0);
    }
    const auto w0 = w;
    const double mu = apply_nlms_update(w, x, s, 0.7);
    double e = 0;
    for (const auto& v : s) e += std::norm(v);
    CHECK(mu == doctest::Approx(0.7 / e).epsilon(1e-14));
    for (std::size_t i = 0; i < 8; ++i) {
      const Complex implied = -(w[i] - w0[i]) / (std::conj(s[i]) * (w0[i] * s[i] - x[i]));
      CHECK(std::abs(implied - mu) < 1e-12 * mu + 1e-15);
    }
  }
}

TEST_CASE("normalization and detrend") {
  SUBCASE("all ones") {
    const auto r = normalize_and_detrend(CVector(12, 1.0));
    for (std::size_t k = 0; k < 12; ++k) {
      CHECK(r.xi_hat[k] == Complex(1.0));
      CHECK(r.gamma_hat[k] == 0.0);
      CHECK(r.phi_hat[k] == 0.0);
    }
  }
  SUBCASE("a pure line is annihilated") {
    for (const double beta : {0.3, -1.7, 2.9, 3.2}) {
      CVector psi(12);
      for (std::size_t k = 0; k < 12; ++k) psi[k] = std::polar(1.0, beta * static_cast<double>(k));
      const auto r = normalize_and_detrend(psi);
      for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(r.phi_hat[k]) < 1e-9);
    }
  }
  SUBCASE("degenerate reference") {
    CVector psi(12, 1.0);
    psi[0] = 1e-10;
    CHECK(code_of([&] { normalize_and_detrend(psi); }) == ErrorCode::reference_channel_degenerate);
  }
}

TEST_CASE("normalization is invariant to a complex scale and a linear phase") {
  oracle::Gen gen(33);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = gen.index(2, 16);
    const auto psi = gen.imbalance(k, 0.3, oracle::pi / 9.0);
    const Complex c = gen.complex_in_annulus(0.05, 20.0);
    const double beta = gen.uniform(-2.0, 2.0);
    CVector amb(k);
    for (std::size_t i = 0; i < k; ++i) amb[i] = c * psi[i] * std::polar(1.0, beta * static_cast<double>(i));
    const auto a = normalize_and_detrend(psi);
    const auto b = normalize_and_detrend(amb);
    CHECK(oracle::max_abs_diff(a.xi_hat, b.xi_hat) < 1e-9);
    CHECK(oracle::max_abs_diff(a.gamma_hat, b.gamma_hat) < 1e-9);
    CHECK(oracle::max_abs_diff(a.phi_hat, b.phi_hat) < 1e-9);
  }
}

TEST_CASE("every update leaves a unit reference and a zero phase slope") {
  oracle::Gen gen(34);
  const std::size_t k = 12;
  auto st = EstimatorState::initial(k);
  const auto cfg = EstimatorConfig::staged(k);
  for (int it = 0; it < 300; ++it) {
    CVector x(k), s(k);
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = gen.complex_in_annulus(0.0, 1.0);
      s[i] = gen.complex_in_annulus(0.0, 1.0);
    }
    nlms_step(st, cfg, x, s);
    CHECK(std::abs(st.xi_hat[0] - 1.0) < 1e-15);
    CHECK(std::abs(oracle::ls_line(st.phi_hat).slope) < 1e-9);
    CHECK(oracle::max_abs_diff(st.xi_hat, gpi_to_complex(st.gamma_hat, st.phi_hat)) < 1e-15);
  }
}

TEST_CASE("calibration vector") {
  auto st = EstimatorState::initial(12);
  for (const auto& c : current_calibration(st)) CHECK(c == Complex(1.0));
  st.xi_hat.assign(12, 2.0);
  for (const auto& c : current_calibration(st)) CHECK(c == Complex(0.5));

  oracle::Gen gen(35);
  const auto xi = gen.imbalance(12, 0.5, oracle::pi);
  const auto c = calibration_from(xi);
  for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(c[k] * xi[k] - 1.0) < 1e-12);

  CVector bad(12, 1.0);
  bad[4] = 0.0;
  CHECK(code_of([&] { calibration_from(bad); }) == ErrorCode::degenerate_calibration);
}

TEST_CASE("stability range under exact noiseless reconstruction") {
  const std::size_t k = 12;
  auto run = [&](double mu0, std::size_t iters, std::uint64_t seed) {
    oracle::Gen gen(seed);
    const auto psi = gen.imbalance(k, 0.2, 0.35);
    CVector w(k, 1.0);
    auto dist = [&] {
      double d = 0;
      for (std::size_t i = 0; i < k; ++i) d += std::norm(w[i] - psi[i]);
      return std::sqrt(d);
    };
    const double d0 = dist();
    for (std::size_t it = 0; it < iters; ++it) {
      const auto s = oracle::sum_of_tones({gen.complex_in_annulus(0.3, 1.0), gen.complex_in_annulus(0.1, 0.5)},
                                          {gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5)}, k);
      apply_nlms_update(w, hadamard(psi, s), s, mu0);
    }
    return dist() / d0;
  };
  for (const double mu0 : {0.1, 1.0, 3.0, 12.0}) CHECK(run(mu0, 2000, 41) < 1e-3);
  CHECK(run(48.0, 500, 41) > 10.0);
}

TEST_CASE("state snapshot record") {
  auto st = EstimatorState::initial(3);
  st.psi_hat[1] = Complex(0.5, -0.25);
  const auto j = nlohmann::json::parse(snapshot_record(st));
  CHECK(j.at("iteration") == 1);
  CHECK(j.at("psi_hat").size() == 3);
  CHECK(j.at("psi_hat")[1][0] == 0.5);
  CHECK(j.at("psi_hat")[1][1] == -0.25);
  CHECK(j.at("gamma_hat").size() == 3);
  CHECK(j.at("phi_hat").size() == 3);
  CHECK(snapshot_record(st).find('\n') == std::string::npos);
}
