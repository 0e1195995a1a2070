#include "radcal/sim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "radcal/error.hpp"

#ifndef RADCAL_GIT_DESCRIBE
#define RADCAL_GIT_DESCRIBE "unknown"
#endif

namespace radcal::sim {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_gpi_curves_csv(std::ostream& out, const Metrics& m) {
  out << "pipeline,iteration,side,channel,mean_gamma,bias_gamma,var_gamma,mean_phi_deg,bias_phi_deg,var_phi_deg2,"
         "trials\n";
  for (const auto& p : m.pipelines) {
    for (const auto& c : p.channels) {
      for (std::size_t i = 0; i < c.mean_gamma.size(); ++i) {
        out << p.name << ',' << i + 1 << ',' << to_string(c.side) << ',' << c.channel << ','
            << format_number(c.mean_gamma[i]) << ',' << format_number(c.bias_gamma[i]) << ','
            << format_number(c.var_gamma[i]) << ',' << format_number(c.mean_phi[i]) << ','
            << format_number(c.bias_phi[i]) << ',' << format_number(c.var_phi[i]) << ','
            << p.trials_at_iteration[i] << '\n';
      }
    }
  }
}

void write_mae_csv(std::ostream& out, const Metrics& m) {
  out << "pipeline,iteration,mae_phi_deg,mae_gamma,mean_recon_error,trials\n";
  for (const auto& p : m.pipelines) {
    for (std::size_t i = 0; i < p.mae_phi.size(); ++i) {
      out << p.name << ',' << i + 1 << ',' << format_number(p.mae_phi[i]) << ',' << format_number(p.mae_gamma[i])
          << ',' << format_number(p.mean_recon_error[i]) << ',' << p.trials_at_iteration[i] << '\n';
    }
  }
}

void write_sbb_csv(std::ostream& out, const Metrics& m, std::size_t injection_iteration) {
  out << "pipeline,trial,detected,side,channel,all_channels,detection_iteration,delay\n";
  for (const auto& p : m.pipelines) {
    for (std::size_t t = 0; t < p.sbb_reports.size(); ++t) {
      const auto& r = p.sbb_reports[t];
      out << p.name << ',' << t << ',' << (r.detected ? 1 : 0) << ',';
      if (r.detected) {
        std::string all;
        for (const auto& c : r.channels) {
          if (!all.empty()) all += ' ';
          all += std::string(to_string(c.side)) + std::to_string(c.number);
        }
        const long delay = static_cast<long>(*r.detection_iteration) - static_cast<long>(injection_iteration) + 1;
        out << to_string(r.channel().side) << ',' << r.channel().number << ',' << all << ','
            << *r.detection_iteration << ',' << delay;
      } else {
        out << ",,,,";
      }
      out << '\n';
    }
  }
}

void write_sbb_histogram_csv(std::ostream& out, const Metrics& m, std::size_t injection_iteration) {
  out << "pipeline,delay,count\n";
  for (const auto& p : m.pipelines) {
    for (const auto& [delay, count] : detection_histogram(p, injection_iteration)) {
      out << p.name << ',' << delay << ',' << count << '\n';
    }
  }
}

void write_slls_csv(std::ostream& out, const Metrics& m) {
  out << "trial,method,slls_db\n";
  for (std::size_t t = 0; t < m.ideal_slls_db.size(); ++t) {
    for (const auto& p : m.pipelines) {
      if (t < p.slls_db.size()) out << t << ',' << p.name << ',' << format_number(p.slls_db[t]) << '\n';
    }
    out << t << ",ideal," << format_number(m.ideal_slls_db[t]) << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
  out << "snr_db,level,method,mean_slls_db,max_slls_db,min_slls_db,trials\n";
  for (const auto& c : cells) {
    const std::pair<const char*, const SllsStats*> rows[] = {{"proposed", &c.proposed}, {"st", &c.st},
                                                             {"ideal", &c.ideal}};
    for (const auto& [name, st] : rows) {
      out << format_number(c.snr_db) << ',' << c.level << ',' << name << ',' << format_number(st->mean) << ','
          << format_number(st->max) << ',' << format_number(st->min) << ',' << st->values.size() << '\n';
    }
  }
}

void write_bias_oracle_csv(std::ostream& out, const BiasOracleResult& r) {
  out << "channel,b0_re,b0_im,b0_se_re,b0_se_im,noise_re,noise_im,predicted_re,predicted_im,measured_re,measured_im,"
         "diff_se_re,diff_se_im\n";
  for (std::size_t c = 0; c < r.b0.size(); ++c) {
    out << c + 1 << ',' << format_number(r.b0[c].real()) << ',' << format_number(r.b0[c].imag()) << ','
        << format_number(r.b0_se_re[c]) << ',' << format_number(r.b0_se_im[c]) << ','
        << format_number(r.noise_term[c].real()) << ',' << format_number(r.noise_term[c].imag()) << ','
        << format_number(r.predicted[c].real()) << ',' << format_number(r.predicted[c].imag()) << ','
        << format_number(r.measured[c].real()) << ',' << format_number(r.measured[c].imag()) << ','
        << format_number(r.diff_se_re[c]) << ',' << format_number(r.diff_se_im[c]) << '\n';
  }
}

const char* git_describe() { return RADCAL_GIT_DESCRIBE; }

nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config, std::uint64_t seed,
                             const nlohmann::json& summary) {
  return {{"command", command},
          {"seed", seed},
          {"git_describe", git_describe()},
          {"config", config},
          {"summary", summary}};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace radcal::sim
