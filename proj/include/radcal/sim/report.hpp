#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "radcal/sim/bias_oracle.hpp"
#include "radcal/sim/experiment.hpp"
#include "radcal/sim/metrics.hpp"

namespace radcal::sim {

/// Fixed-format number used by every CSV writer ("%.10g"), so identical runs give
/// identical files.
std::string format_number(double v);

/// pipeline,iteration,side,channel,mean_gamma,bias_gamma,var_gamma,mean_phi_deg,bias_phi_deg,var_phi_deg2,trials
void write_gpi_curves_csv(std::ostream& out, const Metrics& m);
/// pipeline,iteration,mae_phi_deg,mae_gamma,mean_recon_error,trials
void write_mae_csv(std::ostream& out, const Metrics& m);
/// pipeline,trial,detected,side,channel,all_channels,detection_iteration,delay
void write_sbb_csv(std::ostream& out, const Metrics& m, std::size_t injection_iteration);
/// pipeline,delay,count
void write_sbb_histogram_csv(std::ostream& out, const Metrics& m, std::size_t injection_iteration);
/// trial,method,slls_db
void write_slls_csv(std::ostream& out, const Metrics& m);
/// snr_db,level,method,mean_slls_db,max_slls_db,min_slls_db,trials
void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);
/// channel,b0_re,b0_im,b0_se_re,b0_se_im,noise_re,noise_im,predicted_re,predicted_im,measured_re,measured_im,diff_se_re,diff_se_im
void write_bias_oracle_csv(std::ostream& out, const BiasOracleResult& r);

/// Output of `git describe --always --dirty` captured at configure time.
const char* git_describe();

/// Experiment manifest: command, resolved configuration, seed, version string and a
/// free-form summary object.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config, std::uint64_t seed,
                             const nlohmann::json& summary);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace radcal::sim
