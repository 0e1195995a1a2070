#include "radcal/sim/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "radcal/error.hpp"

namespace radcal::sim {

using nlohmann::json;

namespace {

using Handlers = std::map<std::string, std::function<void(const json&)>>;

void dispatch(const json& j, const Handlers& handlers, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "'" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = handlers.find(key);
    const std::string path = where.empty() ? key : where + "." + key;
    if (it == handlers.end()) throw Error(ErrorCode::parse_error, "unknown config key '" + path + "'");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse_error, "config key '" + path + "': " + e.what());
    }
  }
}

template <class T>
std::function<void(const json&)> set(T& field) {
  return [&field](const json& v) { field = v.get<T>(); };
}

std::function<void(const json&)> set_interval(Interval& iv) {
  return [&iv](const json& v) {
    const auto pair = v.get<std::vector<double>>();
    if (pair.size() != 2) throw Error(ErrorCode::parse_error, "intervals are written as [lo, hi]");
    iv = {pair[0], pair[1]};
  };
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Side side_from(const std::string& s) {
  if (s == "tx") return Side::tx;
  if (s == "rx") return Side::rx;
  throw Error(ErrorCode::parse_error, "side must be 'tx' or 'rx', got '" + s + "'");
}

void apply_scenario(ScenarioConfig& sc, const json& j) {
  auto& g = sc.imbalance_gen;
  auto& f = sc.fault;
  dispatch(j,
           {{"geom",
             [&](const json& v) {
               dispatch(v,
                        {{"k_t", set(sc.geom.k_t)},
                         {"k_r", set(sc.geom.k_r)},
                         {"spacing_over_lambda", set(sc.geom.spacing_over_lambda)}},
                        "scenario.geom");
             }},
            {"primary_count_pmf", set(sc.primary_count_pmf)},
            {"secondary_count_pmf", set(sc.secondary_count_pmf)},
            {"primary_amp_db_range", set_interval(sc.primary_amp_db_range)},
            {"secondary_amp_db_range", set_interval(sc.secondary_amp_db_range)},
            {"doa_range_deg", set_interval(sc.doa_range_deg)},
            {"snr_db", set(sc.snr_db)},
            {"noise_enabled", set(sc.noise_enabled)},
            {"imbalance_gen",
             [&](const json& v) {
               dispatch(v,
                        {{"kind", [&](const json& x) { g.kind = imbalance_kind_from_string(x.get<std::string>()); }},
                         {"phase_range_deg", set(g.phase_range_deg)},
                         {"gain_range", set(g.gain_range)},
                         {"gamma_t", set(g.gamma_t)},
                         {"phi_t_deg", set(g.phi_t_deg)},
                         {"gamma_r", set(g.gamma_r)},
                         {"phi_r_deg", set(g.phi_r_deg)},
                         {"heatup_tau", set(g.heatup_tau)},
                         {"heatup_iterations", set(g.heatup_iterations)},
                         {"detrend", set(g.detrend)}},
                        "scenario.imbalance_gen");
             }},
            {"fault",
             [&](const json& v) {
               dispatch(v,
                        {{"enabled", set(f.enabled)},
                         {"iteration", set(f.iteration)},
                         {"side", [&](const json& x) { f.side = side_from(x.get<std::string>()); }},
                         {"channel", set(f.channel)},
                         {"offset_deg", set(f.offset_deg)}},
                        "scenario.fault");
             }},
            {"n_iterations", set(sc.n_iterations)},
            {"n_mcs", set(sc.n_mcs)},
            {"seed", set(sc.seed)}},
           "scenario");
}

}  // namespace

void apply_json(RunConfig& cfg, const json& j) {
  dispatch(j,
           {{"scenario", [&](const json& v) { apply_scenario(cfg.scenario, v); }},
            {"estimator",
             [&](const json& v) {
               dispatch(v,
                        {{"step_schedule",
                          [&](const json& x) {
                            cfg.estimator.step_schedule.clear();
                            for (const auto& st : x) {
                              const auto pair = st.get<std::vector<double>>();
                              if (pair.size() != 2) {
                                throw Error(ErrorCode::parse_error, "step_schedule entries are [start_iteration, mu_0]");
                              }
                              cfg.estimator.step_schedule.push_back({static_cast<std::size_t>(pair[0]), pair[1]});
                            }
                            cfg.estimator_given = true;
                          }},
                         {"k", set(cfg.estimator.k)}},
                        "estimator");
             }},
            {"sbb",
             [&](const json& v) {
               dispatch(v, {{"delta", set(cfg.sbb.delta)}, {"mu_0_fast", set(cfg.sbb.mu_0_fast)}}, "sbb");
             }},
            {"clean",
             [&](const json& v) {
               dispatch(v,
                        {{"fft_len", set(cfg.clean.fft_len)},
                         {"stop_ratio_db", set(cfg.clean.stop_ratio_db)},
                         {"max_targets", set(cfg.clean.max_targets)}},
                        "clean");
             }},
            {"slls",
             [&](const json& v) {
               dispatch(v,
                        {{"enabled", set(cfg.slls.enabled)},
                         {"doa_deg", set(cfg.slls.doa_deg)},
                         {"amplitude_db", set(cfg.slls.amplitude_db)},
                         {"guard_bins", set(cfg.slls.guard_bins)}},
                        "slls");
             }},
            {"heatmap",
             [&](const json& v) {
               auto& h = cfg.heatmap;
               dispatch(v,
                        {{"snr_db", set(h.snr_db)},
                         {"levels", set(h.levels)},
                         {"phase_step_deg", set(h.phase_step_deg)},
                         {"gain_step", set(h.gain_step)},
                         {"eval_doa_deg", set(h.eval_doa_deg)}},
                        "heatmap");
             }},
            {"replay",
             [&](const json& v) {
               auto& r = cfg.replay;
               dispatch(v,
                        {{"file", set(r.file)},
                         {"generate_vectors", set(r.generate_vectors)},
                         {"phase_range_deg", set(r.phase_range_deg)},
                         {"gain_range", set(r.gain_range)},
                         {"include_st", set(r.include_st)}},
                        "replay");
             }},
            {"doa_bias",
             [&](const json& v) {
               auto& d = cfg.doa_bias;
               dispatch(v,
                        {{"observations_file", set(d.observations_file)},
                         {"v_s", set(d.v_s)},
                         {"theta_b_deg", set(d.theta_b_deg)},
                         {"noise_sigma", set(d.noise_sigma)},
                         {"count", set(d.count)},
                         {"theta_range_deg", set_interval(d.theta_range_deg)}},
                        "doa_bias");
             }},
            {"workers", set(cfg.workers)},
            {"plots", set(cfg.plots)}},
           "");
}

json to_json(const RunConfig& cfg) {
  const auto& sc = cfg.scenario;
  const auto& g = sc.imbalance_gen;
  json schedule = json::array();
  for (const auto& st : cfg.estimator.step_schedule) schedule.push_back({st.start_iteration, st.mu_0});
  return {
      {"scenario",
       {{"geom",
         {{"k_t", sc.geom.k_t}, {"k_r", sc.geom.k_r}, {"spacing_over_lambda", sc.geom.spacing_over_lambda}}},
        {"primary_count_pmf", sc.primary_count_pmf},
        {"secondary_count_pmf", sc.secondary_count_pmf},
        {"primary_amp_db_range", interval_json(sc.primary_amp_db_range)},
        {"secondary_amp_db_range", interval_json(sc.secondary_amp_db_range)},
        {"doa_range_deg", interval_json(sc.doa_range_deg)},
        {"snr_db", sc.snr_db},
        {"noise_enabled", sc.noise_enabled},
        {"imbalance_gen",
         {{"kind", to_string(g.kind)},
          {"phase_range_deg", g.phase_range_deg},
          {"gain_range", g.gain_range},
          {"gamma_t", g.gamma_t},
          {"phi_t_deg", g.phi_t_deg},
          {"gamma_r", g.gamma_r},
          {"phi_r_deg", g.phi_r_deg},
          {"heatup_tau", g.heatup_tau},
          {"heatup_iterations", g.heatup_iterations},
          {"detrend", g.detrend}}},
        {"fault",
         {{"enabled", sc.fault.enabled},
          {"iteration", sc.fault.iteration},
          {"side", to_string(sc.fault.side)},
          {"channel", sc.fault.channel},
          {"offset_deg", sc.fault.offset_deg}}},
        {"n_iterations", sc.n_iterations},
        {"n_mcs", sc.n_mcs},
        {"seed", sc.seed}}},
      {"estimator", {{"step_schedule", schedule}, {"k", cfg.estimator.k}}},
      {"sbb", {{"delta", cfg.sbb.delta}, {"mu_0_fast", cfg.sbb.mu_0_fast}}},
      {"clean",
       {{"fft_len", cfg.clean.fft_len},
        {"stop_ratio_db", cfg.clean.stop_ratio_db},
        {"max_targets", cfg.clean.max_targets}}},
      {"slls",
       {{"enabled", cfg.slls.enabled},
        {"doa_deg", cfg.slls.doa_deg},
        {"amplitude_db", cfg.slls.amplitude_db},
        {"guard_bins", cfg.slls.guard_bins}}},
      {"heatmap",
       {{"snr_db", cfg.heatmap.snr_db},
        {"levels", cfg.heatmap.levels},
        {"phase_step_deg", cfg.heatmap.phase_step_deg},
        {"gain_step", cfg.heatmap.gain_step},
        {"eval_doa_deg", cfg.heatmap.eval_doa_deg}}},
      {"replay",
       {{"file", cfg.replay.file},
        {"generate_vectors", cfg.replay.generate_vectors},
        {"phase_range_deg", cfg.replay.phase_range_deg},
        {"gain_range", cfg.replay.gain_range},
        {"include_st", cfg.replay.include_st}}},
      {"doa_bias",
       {{"observations_file", cfg.doa_bias.observations_file},
        {"v_s", cfg.doa_bias.v_s},
        {"theta_b_deg", cfg.doa_bias.theta_b_deg},
        {"noise_sigma", cfg.doa_bias.noise_sigma},
        {"count", cfg.doa_bias.count},
        {"theta_range_deg", interval_json(cfg.doa_bias.theta_range_deg)}}},
      {"workers", cfg.workers},
      {"plots", cfg.plots}};
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, "config file '" + path + "': " + e.what());
  }
  apply_json(cfg, j);
}

}  // namespace radcal::sim
