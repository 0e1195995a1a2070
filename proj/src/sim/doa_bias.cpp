#include "radcal/sim/doa_bias.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "radcal/error.hpp"

namespace radcal::sim {

DoaBiasFit estimate_doa_bias(std::span<const DoaBiasObservation> obs) {
  if (obs.size() < 3) throw Error(ErrorCode::insufficient_geometry, "need at least three observations");
  double lo = obs.front().theta_meas_deg;
  double hi = lo;
  for (const auto& o : obs) {
    if (!std::isfinite(o.theta_meas_deg) || !std::isfinite(o.v_t)) {
      throw Error(ErrorCode::insufficient_geometry, "non-finite observation");
    }
    lo = std::min(lo, o.theta_meas_deg);
    hi = std::max(hi, o.theta_meas_deg);
  }
  if (!(hi - lo > 10.0)) throw Error(ErrorCode::insufficient_geometry, "observations span 10 degrees or less");

  // Normal equations of the 2-parameter model.
  double scc = 0.0, sss = 0.0, scs = 0.0, scv = 0.0, ssv = 0.0;
  for (const auto& o : obs) {
    const double c = std::cos(deg2rad(o.theta_meas_deg));
    const double s = std::sin(deg2rad(o.theta_meas_deg));
    scc += c * c;
    sss += s * s;
    scs += c * s;
    scv += c * o.v_t;
    ssv += s * o.v_t;
  }
  const double det = scc * sss - scs * scs;
  if (!(std::abs(det) > 1e-12 * std::max(1.0, scc * sss))) {
    throw Error(ErrorCode::insufficient_geometry, "rank-deficient angle set");
  }
  const double a = (sss * scv - scs * ssv) / det;
  const double b = (scc * ssv - scs * scv) / det;

  DoaBiasFit fit;
  fit.v_s = std::hypot(a, b);
  fit.theta_b_deg = rad2deg(std::atan2(b, a));
  double ss = 0.0;
  for (const auto& o : obs) {
    const double th = deg2rad(o.theta_meas_deg);
    const double r = o.v_t - (a * std::cos(th) + b * std::sin(th));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(obs.size()));
  return fit;
}

std::vector<DoaBiasObservation> synthesize_doa_observations(double v_s, double theta_b_deg,
                                                            std::span<const double> theta_true_deg,
                                                            double velocity_sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<DoaBiasObservation> out;
  out.reserve(theta_true_deg.size());
  for (double th : theta_true_deg) {
    const double v = v_s * std::cos(deg2rad(th)) + velocity_sigma * noise(rng);
    out.push_back({th + theta_b_deg, v});
  }
  return out;
}

std::vector<DoaBiasObservation> read_doa_observations(std::istream& in) {
  std::vector<DoaBiasObservation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line[first]))) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    DoaBiasObservation o;
    if (!(ss >> o.theta_meas_deg >> o.v_t)) {
      throw Error(ErrorCode::parse_error, "bad observation on line " + std::to_string(line_no));
    }
    out.push_back(o);
  }
  return out;
}

void write_doa_observations(std::ostream& out, std::span<const DoaBiasObservation> obs) {
  out << "theta_meas_deg,v_t\n" << std::setprecision(17);
  for (const auto& o : obs) out << o.theta_meas_deg << ',' << o.v_t << '\n';
}

}  // namespace radcal::sim
