#include "radcal/fft.hpp"

#include <algorithm>
#include <cmath>

#include "radcal/error.hpp"

namespace radcal {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n), bitrev_(n), twiddle_(n / 2) {
  if (!is_power_of_two(n)) throw Error(ErrorCode::invalid_config, "FFT length must be a power of two");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double arg = -kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    twiddle_[i] = Complex(std::cos(arg), std::sin(arg));
  }
}

void Fft::forward(std::span<Complex> data) const {
  if (data.size() != n_) throw Error(ErrorCode::length_mismatch, "FFT input length differs from plan");
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  }
  // Plain real arithmetic: std::complex operator* goes through the Annex G NaN path.
  auto* d = reinterpret_cast<double*>(data.data());
  const auto* w = reinterpret_cast<const double*>(twiddle_.data());
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const double wr = w[2 * j * stride];
        const double wi = w[2 * j * stride + 1];
        const std::size_t a = 2 * (start + j);
        const std::size_t b = 2 * (start + j + half);
        const double br = d[b] * wr - d[b + 1] * wi;
        const double bi = d[b] * wi + d[b + 1] * wr;
        d[b] = d[a] - br;
        d[b + 1] = d[a + 1] - bi;
        d[a] += br;
        d[a + 1] += bi;
      }
    }
  }
}

void Fft::forward_padded(std::span<const Complex> input, CVector& out) const {
  if (input.size() > n_) throw Error(ErrorCode::length_mismatch, "input longer than FFT length");
  out.assign(n_, Complex{});
  std::copy(input.begin(), input.end(), out.begin());
  forward(out);
}

}  // namespace radcal
