#pragma once

#include <span>
#include <vector>

#include "radcal/types.hpp"

namespace radcal {

/// In-place iterative radix-2 FFT of a fixed power-of-two length,
/// y[m] = sum_n x[n] e^{-j 2 pi m n / N}.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::span<Complex> data) const;

  /// Zero-pads `input` to the plan length and transforms into `out` (resized).
  void forward_padded(std::span<const Complex> input, CVector& out) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  CVector twiddle_;  // e^{-j 2 pi i / N}, i < N/2
};

bool is_power_of_two(std::size_t n);

}  // namespace radcal
