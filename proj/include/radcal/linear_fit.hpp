#pragma once

#include <span>

#include "radcal/types.hpp"

namespace radcal {

/// Least-squares line z[k] = slope * k + intercept over the element index k = 0..K-1.
struct DetrendFit {
  double slope = 0.0;      // p1
  double intercept = 0.0;  // p2
};

/// Closed-form solve of the 2x2 normal equations with design rows (k, 1).
/// Requires at least two samples; a single sample yields a zero slope.
DetrendFit fit_line(std::span<const double> values);

/// Sequential phase unwrap: successive differences are brought into (-pi, pi].
RVector unwrap_phase(std::span<const double> wrapped);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double rad);

}  // namespace radcal
