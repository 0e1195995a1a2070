#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "radcal/array_model.hpp"
#include "radcal/error.hpp"
#include "radcal/factorization_sbb.hpp"
#include "radcal/fft.hpp"
#include "radcal/linear_fit.hpp"

using namespace radcal;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::io_error;
}

}  // namespace

TEST_CASE("geometry") {
  const auto g = ArrayGeometry::make(3, 4, 0.5);
  CHECK(g.k() == 12);
  CHECK(code_of([] { ArrayGeometry::make(0, 4); }) == ErrorCode::invalid_config);
  CHECK(code_of([] { ArrayGeometry::make(3, 4, 0.0); }) == ErrorCode::invalid_config);
}

TEST_CASE("synthesis of simple target sets") {
  SUBCASE("zero frequency gives all ones") {
    const auto s = synthesize_ideal(TargetSet{{Complex(1, 0)}, {0.0}}, 12);
    CHECK(s.size() == 12);
    for (const auto& v : s.samples) CHECK(std::abs(v - 1.0) == 0.0);
  }
  SUBCASE("empty set gives zeros") {
    const auto s = synthesize_ideal(TargetSet{}, 12);
    for (const auto& v : s.samples) CHECK(v == Complex{});
  }
  SUBCASE("two opposite tones form a cosine") {
    const auto s = synthesize_ideal(TargetSet{{1.0, 1.0}, {0.25, -0.25}}, 4);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(s[k] - 2.0 * std::cos(2.0 * oracle::pi * 0.25 * static_cast<double>(k))) < 1e-12);
    }
  }
  SUBCASE("mismatched lengths are rejected") {
    CHECK(code_of([] { synthesize_ideal(TargetSet{{1.0, 2.0}, {0.1}}, 4); }) == ErrorCode::invalid_target_set);
    CHECK(code_of([] { synthesize_ideal(TargetSet{{1.0}, {0.5}}, 4); }) == ErrorCode::invalid_target_set);
  }
}

TEST_CASE("synthesis matches direct summation on random sets") {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t q = gen.index(0, 8);
    const std::size_t k = gen.index(1, 24);
    TargetSet t;
    for (std::size_t i = 0; i < q; ++i) t.push_back(gen.complex_in_annulus(0.01, 2.0), gen.uniform(-0.5, 0.5));
    const auto s = synthesize_ideal(t, k);
    CHECK(oracle::max_abs_diff(s.samples, oracle::sum_of_tones(t.amplitudes, t.frequencies, k)) < 1e-12);
  }
}

TEST_CASE("angle to frequency") {
  const auto g = ArrayGeometry::make(3, 4, 0.5);
  CHECK(angle_to_frequency(0.0, g) == 0.0);
  CHECK(angle_to_frequency(90.0, g) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(angle_to_frequency(30.0, g) == doctest::Approx(0.5 * std::sin(oracle::pi / 6.0)));
  CHECK(frequency_to_angle(0.25, g) == doctest::Approx(30.0));
  CHECK(code_of([&] { angle_to_frequency(90.5, g); }) == ErrorCode::out_of_range);
  CHECK(code_of([&] { frequency_to_angle(0.51, g); }) == ErrorCode::unmappable_frequency);
}

TEST_CASE("imbalance application") {
  const auto s = synthesize_ideal(TargetSet{{Complex(0.3, -0.2), 1.0}, {0.1, -0.3}}, 12);
  NoiseModel off{20.0, false};
  std::mt19937_64 rng(1);

  SUBCASE("unit profile without noise is the identity") {
    const auto x = apply_imbalance(s, CVector(12, 1.0), off, 1.0, rng);
    CHECK(oracle::max_abs_diff(x.samples, s.samples) == 0.0);
  }
  SUBCASE("uniform scaling") {
    const auto ones = synthesize_ideal(TargetSet{{1.0}, {0.0}}, 12);
    const auto x = apply_imbalance(ones, CVector(12, 2.0), off, 1.0, rng);
    for (const auto& v : x.samples) CHECK(v == Complex(2.0, 0.0));
  }
  SUBCASE("length mismatch") {
    CHECK(code_of([&] { apply_imbalance(s, CVector(11, 1.0), off, 1.0, rng); }) == ErrorCode::length_mismatch);
  }
}

TEST_CASE("noise variance follows the dominant-target SNR") {
  const SignalVector zero{CVector(1), SignalKind::ideal};
  std::mt19937_64 rng(5);
  const NoiseModel nm{20.0, true};
  const int n = 100000;
  double acc = 0.0;
  Complex mean{};
  for (int i = 0; i < n; ++i) {
    const auto x = apply_imbalance(zero, CVector(1, 1.0), nm, 1.0, rng);
    acc += std::norm(x[0]);
    mean += x[0];
  }
  CHECK(acc / n == doctest::Approx(0.01).epsilon(0.05));
  CHECK(std::abs(mean / static_cast<double>(n)) < 0.002);
}

TEST_CASE("Kronecker ordering") {
  const Complex a(0.3, 0.7);
  const Complex b(-1.1, 0.2);
  const auto xi = factor_to_va(CVector{1.0, a}, CVector{1.0, b});
  REQUIRE(xi.size() == 4);
  CHECK(xi[0] == Complex(1.0));
  CHECK(xi[1] == b);
  CHECK(xi[2] == a);
  CHECK(std::abs(xi[3] - a * b) < 1e-15);
  for (const auto& v : factor_to_va(CVector{1.0}, CVector(4, 1.0))) CHECK(v == Complex(1.0));
  CHECK(code_of([] { factor_to_va(CVector{2.0}, CVector{1.0}); }) == ErrorCode::invalid_reference);
}

TEST_CASE("Kronecker and factorization round trip on random factors") {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t kt = gen.index(1, 4);
    const std::size_t kr = gen.index(1, 6);
    const auto xt = gen.imbalance(kt, 0.5, oracle::pi);
    const auto xr = gen.imbalance(kr, 0.5, oracle::pi);
    const auto va = factor_to_va(xt, xr);
    CHECK(oracle::max_abs_diff(va, oracle::kron(xt, xr)) < 1e-15);
    const auto gpi = estimate_txrx_gpi(va, ArrayGeometry::make(kt, kr));
    CHECK(oracle::max_abs_diff(gpi.xi_t, xt) < 1e-9);
    CHECK(oracle::max_abs_diff(gpi.xi_r, xr) < 1e-9);
  }
}

TEST_CASE("GPI round trip") {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto gamma = gen.reals(12, -0.5, 0.5);
    const auto phi = gen.reals(12, -3.0, 3.0);
    const auto xi = gpi_to_complex(gamma, phi);
    for (std::size_t k = 0; k < 12; ++k) {
      CHECK(std::abs(std::abs(xi[k]) - 1.0 - gamma[k]) < 1e-12);
      CHECK(std::abs(std::arg(xi[k]) - phi[k]) < 1e-12);
    }
  }
}

TEST_CASE("profile from Tx/Rx factors") {
  const RVector gt{0.0, 0.1, -0.05};
  const RVector pt{0.0, 0.2, -0.3};
  const RVector gr{0.0, -0.1, 0.05, 0.15};
  const RVector pr{0.0, 0.1, 0.4, -0.2};
  const auto p = ImbalanceProfile::from_txrx(gt, pt, gr, pr);
  REQUIRE(p.size() == 12);
  CHECK(p.xi[0] == Complex(1.0));
  CHECK(p.xi_t[0] == Complex(1.0));
  CHECK(p.xi_r[0] == Complex(1.0));
  CHECK(oracle::max_abs_diff(p.xi, oracle::kron(p.xi_t, p.xi_r)) < 1e-15);
  CHECK(oracle::max_abs_diff(p.xi, gpi_to_complex(p.gamma, p.phi)) < 1e-12);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t r = 0; r < 4; ++r) CHECK(p.phi[t * 4 + r] == doctest::Approx(pt[t] + pr[r]));
  }
}

TEST_CASE("linear phase split") {
  SUBCASE("pure line") {
    RVector phi(12);
    for (std::size_t k = 0; k < 12; ++k) phi[k] = 2.0 * oracle::pi * 0.1 * static_cast<double>(k);
    const auto s = split_linear_phase(phi);
    CHECK(s.f_delta == doctest::Approx(0.1).epsilon(1e-12));
    for (double r : s.residual) CHECK(std::abs(r) < 1e-12);
  }
  SUBCASE("zeros") {
    const auto s = split_linear_phase(RVector(12, 0.0));
    CHECK(s.f_delta == 0.0);
    for (double r : s.residual) CHECK(r == 0.0);
  }
  SUBCASE("line plus ripple matches explicit normal equations") {
    RVector phi(12);
    for (std::size_t k = 0; k < 12; ++k) {
      phi[k] = 2.0 * oracle::pi * 0.05 * static_cast<double>(k) + 0.1 * std::sin(static_cast<double>(k));
    }
    const auto s = split_linear_phase(phi);
    const auto ref = oracle::ls_line(phi);
    CHECK(std::abs(s.f_delta - ref.slope / (2.0 * oracle::pi)) < 1e-12);
    CHECK(std::abs(s.f_delta - 0.05) < 0.01);
    CHECK(std::abs(oracle::ls_line(s.residual).slope) < 1e-12);
  }
}

TEST_CASE("line fit agrees with explicit normal equations") {
  oracle::Gen gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = gen.reals(gen.index(2, 40), -10.0, 10.0);
    const auto fit = fit_line(z);
    const auto ref = oracle::ls_line(z);
    CHECK(fit.slope == doctest::Approx(ref.slope).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(ref.intercept).epsilon(1e-9));
  }
  CHECK(fit_line(RVector{3.0}).slope == 0.0);
}

TEST_CASE("unwrap keeps successive differences in (-pi, pi]") {
  oracle::Gen gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    RVector smooth(16);
    double acc = gen.uniform(-3, 3);
    for (auto& v : smooth) {
      acc += gen.uniform(-3.0, 3.0);
      v = acc;
    }
    RVector wrapped(smooth.size());
    for (std::size_t i = 0; i < smooth.size(); ++i) wrapped[i] = wrap_angle(smooth[i]);
    const auto un = unwrap_phase(wrapped);
    for (std::size_t i = 0; i < un.size(); ++i) {
      CHECK(std::abs((un[i] - smooth[i]) - (un[0] - smooth[0])) < 1e-9);
    }
  }
}

TEST_CASE("linear phase shifts a single target's frequency") {
  oracle::Gen gen(9);
  for (int trial = 0; trial < 100; ++trial) {
    const double f = gen.uniform(-0.3, 0.3);
    const double fd = gen.uniform(-0.1, 0.1);
    const Complex a = gen.complex_in_annulus(0.5, 1.5);
    RVector phi(12);
    for (std::size_t k = 0; k < 12; ++k) phi[k] = 2.0 * oracle::pi * fd * static_cast<double>(k);
    const auto prof = ImbalanceProfile::from_gpi(RVector(12, 0.0), phi);
    CHECK(prof.f_delta == doctest::Approx(fd).epsilon(1e-9));
    std::mt19937_64 rng(1);
    const auto x = apply_imbalance(synthesize_ideal(TargetSet{{a}, {f}}, 12), prof.psi, NoiseModel{20, false}, 1.0, rng);
    const auto shifted = synthesize_ideal(TargetSet{{a}, {f + fd}}, 12);
    CHECK(oracle::max_abs_diff(x.samples, shifted.samples) < 1e-9);
  }
}

TEST_CASE("removing the linear phase keeps a Kronecker profile separable") {
  oracle::Gen gen(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gt = gen.reals(3, -0.2, 0.2);
    const auto pt = gen.reals(3, -1.0, 1.0);
    const auto gr = gen.reals(4, -0.2, 0.2);
    const auto pr = gen.reals(4, -1.0, 1.0);
    RVector g0t = gt, p0t = pt, g0r = gr, p0r = pr;
    g0t[0] = p0t[0] = g0r[0] = p0r[0] = 0.0;
    const auto p = remove_linear_phase(ImbalanceProfile::from_txrx(g0t, p0t, g0r, p0r));
    CHECK(std::abs(oracle::ls_line(p.phi).slope) < 1e-12);
    CHECK(oracle::max_abs_diff(p.xi, oracle::kron(p.xi_t, p.xi_r)) < 1e-12);
    CHECK(oracle::max_abs_diff(p.xi, p.psi) < 1e-12);
  }
}

TEST_CASE("FFT matches a direct DFT") {
  oracle::Gen gen(12);
  for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
    Fft fft(n);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Complex> x(gen.index(1, n));
      for (auto& v : x) v = gen.complex_in_annulus(0.0, 1.0);
      CVector y;
      fft.forward_padded(x, y);
      CHECK(oracle::max_abs_diff(y, oracle::dft(x, n)) < 1e-10 * static_cast<double>(n));
    }
  }
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(1000));
  CHECK_FALSE(is_power_of_two(0));
}
