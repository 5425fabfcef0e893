#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include "valvecav/nosw.hpp"

namespace valvecav {

/// One-sided magnitude spectrum of a real signal, bins 0..fft_length/2.
struct Spectrum {
  std::vector<double> magnitudes;
  std::size_t fft_length = 0;
  double bin_hz = 0.0;
};

/// Smallest power of two >= n (n >= 1).
std::size_t padded_length(std::size_t n);

/// In-place iterative radix-2 transform. data.size() must be a power of two.
void fft_inplace(std::span<std::complex<double>> data);

/// Full complex spectrum of the zero-padded input (length padded_length(n)).
std::vector<std::complex<double>> fft_real(std::span<const double> samples);

/// Rectangular window, zero-padded to the next power of two.
Spectrum fft_magnitude(std::span<const double> samples, double sample_rate = 1.0);
Spectrum fft_magnitude(const Segment& segment);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

}  // namespace valvecav
