#include "radcal/sim/replay.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "radcal/error.hpp"
#include "radcal/sim/trial_runner.hpp"

namespace radcal::sim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::parse_error,
                "line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<ReplayRecord> read_replay(std::istream& in) {
  std::vector<ReplayRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = split_fields(body);
    if (f.size() < 3) throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": too few fields");
    ReplayRecord rec;
    rec.frame_id = parse_number<std::uint64_t>(f[0], line_no);
    rec.peak_id = parse_number<std::uint64_t>(f[1], line_no);
    const auto k = parse_number<std::size_t>(f[2], line_no);
    if (k == 0 || f.size() != 3 + 2 * k) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(2 * k) + " sample values after K");
    }
    rec.x = SignalVector{CVector(k), SignalKind::measured};
    for (std::size_t i = 0; i < k; ++i) {
      rec.x[i] = Complex(parse_number<double>(f[3 + 2 * i], line_no), parse_number<double>(f[4 + 2 * i], line_no));
    }
    if (!out.empty() && out.front().x.size() != k) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": array size changes within the file");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ReplayRecord> read_replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open replay file '" + path + "'");
  return read_replay(in);
}

void write_replay(std::ostream& out, std::span<const ReplayRecord> records) {
  out << "# frame_id, peak_id, K, re_1, im_1, ..., re_K, im_K\n";
  out << std::setprecision(17);
  for (const auto& r : records) {
    out << r.frame_id << ", " << r.peak_id << ", " << r.x.size();
    for (const auto& v : r.x.samples) out << ", " << v.real() << ", " << v.imag();
    out << '\n';
  }
}

void write_replay_file(const std::string& path, std::span<const ReplayRecord> records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write replay file '" + path + "'");
  write_replay(out, records);
}

SyntheticReplay generate_synthetic_replay(const ScenarioConfig& cfg, std::size_t n_vectors) {
  SceneStream stream(cfg, trial_seed(cfg.seed, 0));
  SyntheticReplay out;
  out.records.reserve(n_vectors);
  for (std::size_t i = 0; i < n_vectors; ++i) {
    Scene scene = stream.next();
    if (i == 0) out.truth = scene.truth;
    out.records.push_back({i + 1, 0, std::move(scene.measured)});
  }
  return out;
}

namespace {

PipelineSpec relative_spec(const std::string& name, PipelineKind kind, const EstimatorConfig& est) {
  return {name, kind, est, false};
}

}  // namespace

RelativeEstimationResult relative_estimation(std::span<const ReplayRecord> records,
                                             const RelativeEstimationConfig& cfg) {
  if (records.size() < 100) {
    throw Error(ErrorCode::insufficient_data,
                "relative estimation needs at least 100 vectors, got " + std::to_string(records.size()));
  }
  cfg.geom.validate();
  const std::size_t k = cfg.geom.k();
  for (const auto& r : records) {
    if (r.x.size() != k) throw Error(ErrorCode::shape_error, "replay vector size does not match the geometry");
  }
  EstimatorConfig est = cfg.estimator;
  est.k = k;
  est.validate();

  std::vector<PipelineSpec> specs{relative_spec("proposed", PipelineKind::proposed, est)};
  if (cfg.include_st) specs.push_back(relative_spec("st", PipelineKind::single_target, est));

  std::vector<const SignalVector*> odd, even;
  for (std::size_t i = 0; i < records.size(); ++i) (i % 2 == 0 ? odd : even).push_back(&records[i].x);

  RelativeEstimationResult out;
  out.n_odd = odd.size();
  out.n_even = even.size();
  SbbConfig sbb;
  std::vector<EstimatorState> base_states;
  for (const auto& spec : specs) {
    Pipeline p(spec, cfg.geom, cfg.clean, sbb);
    for (const auto* x : odd) p.process(*x);
    out.pipelines.push_back(spec.name);
    out.baselines.push_back(p.calibration().xi_hat);
    base_states.push_back(p.calibration());
  }

  ScenarioConfig art;
  art.geom = cfg.geom;
  art.imbalance_gen.kind = ImbalanceKind::random;
  art.imbalance_gen.phase_range_deg = cfg.phase_range_deg;
  art.imbalance_gen.gain_range = cfg.gain_range;
  art.n_mcs = cfg.n_mcs;
  art.seed = cfg.seed;
  art.validate();

  const auto layout = SeriesLayout::from(cfg.geom);
  auto work = [&](std::size_t trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, trial));
    const ImbalanceProfile injected = profile_at(art, draw_txrx(art, rng), 1);
    const ReferenceGpi ref = reference_gpi(injected, cfg.geom);
    TrialResult res;
    res.index = trial;
    for (std::size_t p = 0; p < specs.size(); ++p) {
      Pipeline pipe(specs[p], cfg.geom, cfg.clean, sbb);
      const auto& base = base_states[p];
      TrialTrace tr;
      tr.pipeline = specs[p].name;
      tr.layout = layout;
      tr.reserve(even.size());
      SignalVector x{CVector(k), SignalKind::measured};
      RVector gamma(k), phi(k);
      for (const auto* src : even) {
        for (std::size_t c = 0; c < k; ++c) x[c] = injected.psi[c] * (*src)[c];
        pipe.process(x);
        const auto& st = pipe.calibration();
        for (std::size_t c = 0; c < k; ++c) {
          gamma[c] = (1.0 + st.gamma_hat[c]) / (1.0 + base.gamma_hat[c]) - 1.0;
          phi[c] = st.phi_hat[c] - base.phi_hat[c];
        }
        tr.record(gamma, phi, estimate_txrx_gpi(gpi_to_complex(gamma, phi), cfg.geom), ref, 0.0);
      }
      tr.skipped = pipe.calibration().skipped;
      res.final_xi.push_back(pipe.calibration().xi_hat);
      res.traces.push_back(std::move(tr));
    }
    return res;
  };

  MetricsAccumulator acc(out.pipelines, layout, even.size());
  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  run_ordered<TrialResult>(cfg.n_mcs, workers, 4 * workers, work,
                           [&](std::size_t i, TrialOutcome<TrialResult>&& o) {
                             if (o.value) {
                               acc.add(*o.value);
                             } else {
                               acc.add_failure(i, std::move(o.error));
                             }
                           });
  out.metrics = acc.finish();
  if (out.metrics.failures.size() * 20 > cfg.n_mcs) {
    throw Error(ErrorCode::experiment_failed, "too many failed relative-estimation trials: " +
                                                  out.metrics.failures.front().message);
  }
  return out;
}

}  // namespace radcal::sim
