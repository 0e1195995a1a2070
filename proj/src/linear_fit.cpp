#include "radcal/linear_fit.hpp"

#include <cmath>

namespace radcal {

DetrendFit fit_line(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return {};
  if (values.size() == 1) return {0.0, values[0]};

  // Y^T Y = [[sum k^2, sum k], [sum k, n]] with k = 0..n-1.
  const double sk = n * (n - 1.0) / 2.0;
  const double skk = (n - 1.0) * n * (2.0 * n - 1.0) / 6.0;
  double sz = 0.0;
  double skz = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    sz += values[k];
    skz += static_cast<double>(k) * values[k];
  }
  const double det = skk * n - sk * sk;
  return {(n * skz - sk * sz) / det, (skk * sz - sk * skz) / det};
}

double wrap_angle(double rad) {
  double w = std::remainder(rad, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

RVector unwrap_phase(std::span<const double> wrapped) {
  RVector out(wrapped.begin(), wrapped.end());
  for (std::size_t k = 1; k < out.size(); ++k) {
    out[k] = out[k - 1] + wrap_angle(wrapped[k] - wrapped[k - 1]);
  }
  return out;
}

}  // namespace radcal
