#include "radcal/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radcal/error.hpp"

namespace radcal::sim {

const char* to_string(ImbalanceKind kind) {
  switch (kind) {
    case ImbalanceKind::random: return "random";
    case ImbalanceKind::explicit_profile: return "explicit";
    case ImbalanceKind::heatup: return "heatup";
  }
  return "random";
}

ImbalanceKind imbalance_kind_from_string(const std::string& name) {
  if (name == "random") return ImbalanceKind::random;
  if (name == "explicit") return ImbalanceKind::explicit_profile;
  if (name == "heatup") return ImbalanceKind::heatup;
  throw Error(ErrorCode::parse_error, "unknown imbalance kind '" + name + "'");
}

namespace {

void check_pmf(const RVector& pmf, const char* name) {
  if (pmf.empty()) throw Error(ErrorCode::invalid_config, std::string(name) + " is empty");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0)) throw Error(ErrorCode::invalid_config, std::string(name) + " has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::invalid_config, std::string(name) + " does not sum to 1");
}

void check_interval(const Interval& iv, const char* name) {
  if (!(iv.lo <= iv.hi)) throw Error(ErrorCode::invalid_config, std::string(name) + " is not ordered");
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t draw_index(std::mt19937_64& rng, const RVector& pmf) {
  std::discrete_distribution<std::size_t> dist(pmf.begin(), pmf.end());
  return dist(rng);
}

}  // namespace

void ScenarioConfig::validate() const {
  geom.validate();
  check_pmf(primary_count_pmf, "primary_count_pmf");
  check_pmf(secondary_count_pmf, "secondary_count_pmf");
  check_interval(primary_amp_db_range, "primary_amp_db_range");
  check_interval(secondary_amp_db_range, "secondary_amp_db_range");
  check_interval(doa_range_deg, "doa_range_deg");
  if (doa_range_deg.lo < -90.0 || doa_range_deg.hi > 90.0) {
    throw Error(ErrorCode::invalid_config, "doa_range_deg must lie within [-90, 90]");
  }
  noise().validate();
  if (n_iterations == 0) throw Error(ErrorCode::invalid_config, "n_iterations must be positive");
  if (n_mcs == 0) throw Error(ErrorCode::invalid_config, "n_mcs must be positive");

  const auto& g = imbalance_gen;
  if (!(g.phase_range_deg >= 0.0) || !(g.gain_range >= 0.0) || g.gain_range >= 1.0) {
    throw Error(ErrorCode::invalid_config, "imbalance ranges must be non-negative, gain range below 1");
  }
  if (g.kind == ImbalanceKind::heatup && !(g.heatup_tau > 0.0)) {
    throw Error(ErrorCode::invalid_config, "heatup_tau must be positive");
  }
  if (g.kind == ImbalanceKind::explicit_profile) {
    if (g.gamma_t.size() != geom.k_t || g.phi_t_deg.size() != geom.k_t || g.gamma_r.size() != geom.k_r ||
        g.phi_r_deg.size() != geom.k_r) {
      throw Error(ErrorCode::invalid_config, "explicit imbalance profile does not match the geometry");
    }
  }
  if (fault.enabled) {
    const std::size_t n = fault.side == Side::tx ? geom.k_t : geom.k_r;
    if (fault.channel < 1 || fault.channel > n) {
      throw Error(ErrorCode::invalid_config, "fault channel outside the array");
    }
    if (fault.iteration < 1) throw Error(ErrorCode::invalid_config, "fault iteration is 1-based");
  }
}

ReferenceGpi reference_gpi(const ImbalanceProfile& applied, const ArrayGeometry& geom) {
  ReferenceGpi ref;
  const std::size_t k = applied.size();
  const double g0 = 1.0 + applied.gamma[0];
  ref.gamma.resize(k);
  for (std::size_t i = 0; i < k; ++i) ref.gamma[i] = (1.0 + applied.gamma[i]) / g0 - 1.0;
  ref.phi = split_linear_phase(applied.phi).residual;
  const double p0 = ref.phi[0];
  for (auto& p : ref.phi) p -= p0;
  ref.xi = gpi_to_complex(ref.gamma, ref.phi);
  ref.txrx = estimate_txrx_gpi(ref.xi, geom);
  return ref;
}

TargetSet draw_targets(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const std::size_t n_primary = 1 + draw_index(rng, cfg.primary_count_pmf);
  const std::size_t n_secondary = draw_index(rng, cfg.secondary_count_pmf);

  RVector amp(n_primary + n_secondary);
  double dominant = 0.0;
  for (std::size_t q = 0; q < n_primary; ++q) {
    amp[q] = db_to_amplitude(uniform(rng, cfg.primary_amp_db_range.lo, cfg.primary_amp_db_range.hi));
    dominant = std::max(dominant, amp[q]);
  }
  for (std::size_t q = n_primary; q < amp.size(); ++q) {
    amp[q] = dominant * db_to_amplitude(uniform(rng, cfg.secondary_amp_db_range.lo, cfg.secondary_amp_db_range.hi));
  }

  TargetSet targets;
  for (double a : amp) {
    const double phase = uniform(rng, -kPi, kPi);
    const double theta = uniform(rng, cfg.doa_range_deg.lo, cfg.doa_range_deg.hi);
    double f = angle_to_frequency(theta, cfg.geom);
    if (f >= 0.5) f -= 1.0;  // keep the half-open interval [-0.5, 0.5)
    targets.push_back(std::polar(a, phase), f);
  }
  return targets;
}

TxRxDraw draw_txrx(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const auto& g = cfg.imbalance_gen;
  const std::size_t kt = cfg.geom.k_t;
  const std::size_t kr = cfg.geom.k_r;
  TxRxDraw d;
  if (g.kind == ImbalanceKind::explicit_profile) {
    d.gamma_t = g.gamma_t;
    d.gamma_r = g.gamma_r;
    d.phi_t.resize(kt);
    d.phi_r.resize(kr);
    std::transform(g.phi_t_deg.begin(), g.phi_t_deg.end(), d.phi_t.begin(), deg2rad);
    std::transform(g.phi_r_deg.begin(), g.phi_r_deg.end(), d.phi_r.begin(), deg2rad);
    return d;
  }
  const double pr = deg2rad(g.phase_range_deg);
  auto fill = [&](RVector& v, std::size_t n, double range) {
    v.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) v[i] = uniform(rng, -range, range);
  };
  fill(d.gamma_t, kt, g.gain_range);
  fill(d.phi_t, kt, pr);
  fill(d.gamma_r, kr, g.gain_range);
  fill(d.phi_r, kr, pr);
  return d;
}

ImbalanceProfile profile_at(const ScenarioConfig& cfg, const TxRxDraw& draw, std::size_t iteration) {
  const auto& g = cfg.imbalance_gen;
  ImbalanceProfile p;
  if (g.kind == ImbalanceKind::heatup) {
    const double i = static_cast<double>(std::min(iteration, g.heatup_iterations));
    const double h = 1.0 - std::exp(-i / g.heatup_tau);
    RVector pt = draw.phi_t;
    RVector pr = draw.phi_r;
    for (auto& v : pt) v *= h;
    for (auto& v : pr) v *= h;
    p = ImbalanceProfile::from_txrx(draw.gamma_t, pt, draw.gamma_r, pr);
  } else {
    p = ImbalanceProfile::from_txrx(draw.gamma_t, draw.phi_t, draw.gamma_r, draw.phi_r);
  }
  if (g.detrend) p = remove_linear_phase(p);

  const auto& f = cfg.fault;
  if (f.enabled && iteration >= f.iteration) {
    const double off = deg2rad(f.offset_deg);
    const Complex rot = std::polar(1.0, off);
    const std::size_t kr = cfg.geom.k_r;
    const std::size_t ch = f.channel - 1;
    if (f.side == Side::rx) {
      p.xi_r[ch] *= rot;
    } else {
      p.xi_t[ch] *= rot;
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      const bool hit = f.side == Side::rx ? (k % kr == ch) : (k / kr == ch);
      if (!hit) continue;
      p.psi[k] *= rot;
      p.xi[k] *= rot;
      p.phi[k] += off;
    }
    p.f_delta = split_linear_phase(p.phi).f_delta;
  }
  return p;
}

Scene generate_scene(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const auto draw = draw_txrx(cfg, rng);
  Scene scene;
  scene.truth = profile_at(cfg, draw, 1);
  scene.targets = draw_targets(cfg, rng);
  scene.ideal = synthesize_ideal(scene.targets, cfg.geom);
  scene.measured = apply_imbalance(scene.ideal, scene.truth.psi, cfg.noise(), dominant_amplitude(scene.targets), rng);
  return scene;
}

SceneStream::SceneStream(const ScenarioConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
  cfg_.validate();
  draw_ = draw_txrx(cfg_, rng_);
}

const ImbalanceProfile& SceneStream::current_profile() {
  const bool faulted = cfg_.fault.enabled && iteration_ >= cfg_.fault.iteration;
  const bool drifting =
      cfg_.imbalance_gen.kind == ImbalanceKind::heatup && iteration_ <= cfg_.imbalance_gen.heatup_iterations;
  if (!cache_valid_ || drifting || faulted != cache_is_faulted_) {
    cached_ = profile_at(cfg_, draw_, iteration_);
    cache_valid_ = true;
    cache_is_faulted_ = faulted;
  }
  return cached_;
}

Scene SceneStream::next() {
  Scene scene;
  scene.truth = current_profile();
  scene.targets = draw_targets(cfg_, rng_);
  scene.ideal = SignalVector{CVector(cfg_.geom.k()), SignalKind::ideal};
  synthesize_into(scene.targets, scene.ideal.samples);
  scene.measured =
      apply_imbalance(scene.ideal, scene.truth.psi, cfg_.noise(), dominant_amplitude(scene.targets), rng_);
  ++iteration_;
  return scene;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial_index) {
  const auto idx = static_cast<std::uint64_t>(trial_index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace radcal::sim
