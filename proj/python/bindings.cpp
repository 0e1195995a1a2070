#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <string>

#include "radcal/array_model.hpp"
#include "radcal/error.hpp"
#include "radcal/factorization_sbb.hpp"
#include "radcal/nlms_estimator.hpp"
#include "radcal/reconstruction.hpp"
#include "radcal/sim/config_io.hpp"
#include "radcal/sim/doa_bias.hpp"
#include "radcal/sim/experiment.hpp"
#include "radcal/sim/scenario.hpp"
#include "radcal/sim/slls.hpp"

namespace py = pybind11;
using namespace radcal;

namespace {

py::dict targets_to_dict(const TargetSet& t) {
  py::dict d;
  d["amplitudes"] = t.amplitudes;
  d["frequencies"] = t.frequencies;
  return d;
}

TargetSet make_targets(const CVector& amplitudes, const RVector& frequencies) {
  TargetSet t{amplitudes, frequencies};
  t.validate();
  return t;
}

py::dict gpi_to_dict(const TxRxGpi& g) {
  py::dict d;
  d["gamma_t"] = g.gamma_t;
  d["phi_t"] = g.phi_t;
  d["gamma_r"] = g.gamma_r;
  d["phi_r"] = g.phi_r;
  d["xi_t"] = g.xi_t;
  d["xi_r"] = g.xi_r;
  return d;
}

nlohmann::json to_cpp_json(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return nlohmann::json::parse(obj.cast<std::string>());
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

py::object to_py_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json summarize(const sim::Metrics& m) {
  nlohmann::json out;
  out["completed"] = m.completed;
  out["failures"] = m.failures.size();
  for (const auto& p : m.pipelines) {
    nlohmann::json pj;
    pj["mae_phi_deg"] = p.mae_phi;
    pj["mae_gamma"] = p.mae_gamma;
    pj["total_skipped"] = p.total_skipped;
    pj["slls_db"] = p.slls_db;
    auto reports = nlohmann::json::array();
    for (const auto& r : p.sbb_reports) {
      nlohmann::json rj;
      rj["detected"] = r.detected;
      if (r.detection_iteration) rj["iteration"] = *r.detection_iteration;
      if (r.detected) {
        rj["side"] = to_string(r.channel().side);
        rj["channel"] = r.channel().number;
      }
      reports.push_back(std::move(rj));
    }
    pj["sbb_reports"] = std::move(reports);
    auto channels = nlohmann::json::array();
    for (const auto& c : p.channels) {
      nlohmann::json cj;
      cj["side"] = sim::to_string(c.side);
      cj["channel"] = c.channel;
      cj["bias_gamma_final"] = c.bias_gamma.empty() ? 0.0 : c.bias_gamma.back();
      cj["bias_phi_deg_final"] = c.bias_phi.empty() ? 0.0 : c.bias_phi.back();
      channels.push_back(std::move(cj));
    }
    pj["channels"] = std::move(channels);
    out["pipelines"][p.name] = std::move(pj);
  }
  if (!m.ideal_slls_db.empty()) out["ideal_slls_db"] = m.ideal_slls_db;
  return out;
}

/// NLMS estimator with its own state, for stepping from Python.
class PyEstimator {
 public:
  PyEstimator(std::size_t k, const std::vector<std::pair<std::size_t, double>>& schedule) {
    cfg_.k = k;
    cfg_.step_schedule.clear();
    for (const auto& [start, mu] : schedule) cfg_.step_schedule.push_back({start, mu});
    cfg_.validate();
    state_ = EstimatorState::initial(k);
  }

  std::string step(const CVector& x, const CVector& s_hat) {
    return nlms_step(state_, cfg_, x, s_hat) == StepOutcome::updated ? "updated" : "skipped";
  }

  const EstimatorState& state() const { return state_; }
  CVector calibration() const { return current_calibration(state_); }
  std::string snapshot() const { return snapshot_record(state_); }

 private:
  EstimatorConfig cfg_;
  EstimatorState state_;
};

}  // namespace

PYBIND11_MODULE(_radcal, m) {
  m.doc() = "Online gain/phase calibration of MIMO radar virtual arrays";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<ArrayGeometry>(m, "ArrayGeometry")
      .def(py::init([](std::size_t k_t, std::size_t k_r, double d) { return ArrayGeometry::make(k_t, k_r, d); }),
           py::arg("k_t") = 3, py::arg("k_r") = 4, py::arg("spacing_over_lambda") = 0.5)
      .def_readonly("k_t", &ArrayGeometry::k_t)
      .def_readonly("k_r", &ArrayGeometry::k_r)
      .def_readonly("spacing_over_lambda", &ArrayGeometry::spacing_over_lambda)
      .def_property_readonly("k", &ArrayGeometry::k);

  py::class_<CleanConfig>(m, "CleanConfig")
      .def(py::init([](std::size_t n, double p, std::size_t q) { return CleanConfig{n, p, q}; }),
           py::arg("fft_len") = 1024, py::arg("stop_ratio_db") = -15.0, py::arg("max_targets") = 10)
      .def_readwrite("fft_len", &CleanConfig::fft_len)
      .def_readwrite("stop_ratio_db", &CleanConfig::stop_ratio_db)
      .def_readwrite("max_targets", &CleanConfig::max_targets);

  m.def(
      "synthesize_ideal",
      [](const CVector& amplitudes, const RVector& frequencies, std::size_t k) {
        return synthesize_ideal(make_targets(amplitudes, frequencies), k).samples;
      },
      py::arg("amplitudes"), py::arg("frequencies"), py::arg("k"));
  m.def("angle_to_frequency", &angle_to_frequency, py::arg("theta_deg"), py::arg("geom"));
  m.def("frequency_to_angle", &frequency_to_angle, py::arg("frequency"), py::arg("geom"));
  m.def(
      "factor_to_va", [](const CVector& t, const CVector& r) { return factor_to_va(t, r); }, py::arg("xi_t"),
      py::arg("xi_r"));
  m.def(
      "estimate_txrx_gpi",
      [](const CVector& xi_hat, const ArrayGeometry& geom) { return gpi_to_dict(estimate_txrx_gpi(xi_hat, geom)); },
      py::arg("xi_hat"), py::arg("geom"));
  m.def(
      "sbb_check",
      [](const RVector& phi_t_deg, const RVector& phi_r_deg, double delta) {
        TxRxGpi g;
        for (double v : phi_t_deg) g.phi_t.push_back(deg2rad(v));
        for (double v : phi_r_deg) g.phi_r.push_back(deg2rad(v));
        const auto rep = sbb_check(g, SbbConfig{delta, 3.0}, 0);
        py::list channels;
        for (const auto& c : rep.channels) channels.append(py::make_tuple(to_string(c.side), c.number));
        return channels;
      },
      py::arg("phi_t_deg"), py::arg("phi_r_deg"), py::arg("delta") = 15.0,
      "Channels whose phase magnitude strictly exceeds delta, as (side, 1-based number).");

  m.def(
      "normalize_and_detrend",
      [](const CVector& psi_hat) {
        const auto est = normalize_and_detrend(psi_hat);
        py::dict d;
        d["xi_hat"] = est.xi_hat;
        d["gamma_hat"] = est.gamma_hat;
        d["phi_hat"] = est.phi_hat;
        d["slope"] = est.fit.slope;
        d["intercept"] = est.fit.intercept;
        return d;
      },
      py::arg("psi_hat"));
  m.def(
      "step_size_at",
      [](const std::vector<std::pair<std::size_t, double>>& schedule, std::size_t iteration) {
        EstimatorConfig cfg;
        cfg.step_schedule.clear();
        for (const auto& [start, mu] : schedule) cfg.step_schedule.push_back({start, mu});
        return step_size_at(cfg, iteration);
      },
      py::arg("schedule"), py::arg("iteration"));

  m.def(
      "clean_estimate",
      [](const CVector& x, const CleanConfig& cfg) { return targets_to_dict(clean_estimate(x, cfg)); },
      py::arg("x"), py::arg("cfg") = CleanConfig{});
  m.def(
      "predistort",
      [](const CVector& x, const CVector& xi_hat) {
        return predistort(SignalVector{x, SignalKind::measured}, xi_hat).samples;
      },
      py::arg("x"), py::arg("xi_hat"));
  m.def(
      "reconstruct",
      [](const CVector& x, const CVector& xi_hat, const CleanConfig& cfg) {
        Reconstructor rec(x.size(), cfg);
        const auto r = rec.reconstruct(SignalVector{x, SignalKind::measured}, xi_hat);
        py::dict d;
        d["targets"] = targets_to_dict(r.estimated_targets);
        d["reconstructed"] = r.reconstructed.samples;
        d["predistorted"] = r.predistorted.samples;
        return d;
      },
      py::arg("x"), py::arg("xi_hat"), py::arg("cfg") = CleanConfig{});

  py::class_<PyEstimator>(m, "Estimator")
      .def(py::init<std::size_t, const std::vector<std::pair<std::size_t, double>>&>(), py::arg("k"),
           py::arg("schedule") = std::vector<std::pair<std::size_t, double>>{{1, 0.1}})
      .def("step", &PyEstimator::step, py::arg("x"), py::arg("s_hat"))
      .def("calibration", &PyEstimator::calibration)
      .def("snapshot", &PyEstimator::snapshot)
      .def_property_readonly("psi_hat", [](const PyEstimator& e) { return e.state().psi_hat; })
      .def_property_readonly("xi_hat", [](const PyEstimator& e) { return e.state().xi_hat; })
      .def_property_readonly("gamma_hat", [](const PyEstimator& e) { return e.state().gamma_hat; })
      .def_property_readonly("phi_hat", [](const PyEstimator& e) { return e.state().phi_hat; })
      .def_property_readonly("iteration", [](const PyEstimator& e) { return e.state().iteration; })
      .def_property_readonly("skipped", [](const PyEstimator& e) { return e.state().skipped; });

  m.def(
      "generate_scene",
      [](const py::object& config, std::uint64_t seed) {
        sim::RunConfig rc;
        if (!config.is_none()) sim::apply_json(rc, to_cpp_json(config));
        rc.scenario.validate();
        std::mt19937_64 rng(seed);
        const auto scene = sim::generate_scene(rc.scenario, rng);
        py::dict d;
        d["targets"] = targets_to_dict(scene.targets);
        d["xi"] = scene.truth.xi;
        d["gamma"] = scene.truth.gamma;
        d["phi"] = scene.truth.phi;
        d["ideal"] = scene.ideal.samples;
        d["measured"] = scene.measured.samples;
        return d;
      },
      py::arg("config") = py::none(), py::arg("seed") = 1,
      "Draws one scene. `config` is a dict or JSON string with the CLI config keys.");

  m.def(
      "compute_slls",
      [](const CVector& uncalibrated, const CVector& calibration, const CVector& amplitudes,
         const RVector& frequencies, std::size_t fft_len, double guard_bins) {
        const auto r = sim::compute_slls(SignalVector{uncalibrated, SignalKind::measured}, calibration,
                                         make_targets(amplitudes, frequencies), fft_len, guard_bins);
        py::dict d;
        d["slls_db"] = r.slls_db;
        d["sll_uncalibrated_db"] = r.sll_uncalibrated_db;
        d["sll_calibrated_db"] = r.sll_calibrated_db;
        return d;
      },
      py::arg("uncalibrated"), py::arg("calibration"), py::arg("amplitudes"), py::arg("frequencies"),
      py::arg("fft_len") = 1024, py::arg("guard_bins") = 1.0);

  m.def(
      "estimate_doa_bias",
      [](const RVector& theta_meas_deg, const RVector& v_t) {
        if (theta_meas_deg.size() != v_t.size()) {
          throw Error(ErrorCode::length_mismatch, "angle and velocity lists differ in length");
        }
        std::vector<sim::DoaBiasObservation> obs;
        for (std::size_t i = 0; i < v_t.size(); ++i) obs.push_back({theta_meas_deg[i], v_t[i]});
        const auto fit = sim::estimate_doa_bias(obs);
        return py::make_tuple(fit.v_s, fit.theta_b_deg);
      },
      py::arg("theta_meas_deg"), py::arg("v_t"), "Returns (v_s, theta_b_deg).");

  m.def(
      "run_experiment",
      [](const py::object& config, const std::string& mode) {
        sim::RunConfig rc;
        if (!config.is_none()) sim::apply_json(rc, to_cpp_json(config));
        const auto md = sim::mode_from_string(mode);
        const auto est = rc.estimator_given ? rc.estimator : EstimatorConfig::constant(rc.scenario.geom.k(), 0.1);
        sim::ExperimentConfig ec;
        ec.scenario = rc.scenario;
        ec.clean = rc.clean;
        ec.sbb = rc.sbb;
        ec.slls = rc.slls;
        ec.workers = rc.workers;
        ec.pipelines = sim::pipelines_for(md, est, rc.sbb);
        nlohmann::json summary;
        {
          py::gil_scoped_release release;
          summary = summarize(sim::run_experiment(ec).metrics);
        }
        return to_py_json(summary);
      },
      py::arg("config") = py::none(), py::arg("mode") = "calibration",
      "Runs a Monte Carlo experiment and returns per-pipeline summary curves.");
}
