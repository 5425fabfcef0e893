#include "valvecav/spectrum.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>

#include "valvecav/error.hpp"
#include "valvecav/io.hpp"

namespace valvecav {

std::size_t padded_length(std::size_t n) {
  if (n == 0) throw ConfigError("cannot pad an empty signal");
  return std::bit_ceil(n);
}

void fft_inplace(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw ConfigError("fft length " + std::to_string(n) + " is not a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  // Twiddles evaluated directly rather than by recurrence to keep the
  // per-bin error at a few ulps times log2(n).
  std::vector<std::complex<double>> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto t = twiddle[k * step] * data[start + k + half];
        const auto u = data[start + k];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

std::vector<std::complex<double>> fft_real(std::span<const double> samples) {
  if (samples.empty()) throw ConfigError("cannot transform an empty signal");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw NumericError("non-finite sample at index " + std::to_string(i));
    }
  }
  std::vector<std::complex<double>> data(padded_length(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) data[i] = samples[i];
  fft_inplace(data);
  return data;
}

Spectrum fft_magnitude(std::span<const double> samples, double sample_rate) {
  const auto full = fft_real(samples);
  Spectrum s;
  s.fft_length = full.size();
  s.bin_hz = sample_rate / static_cast<double>(s.fft_length);
  s.magnitudes.resize(s.fft_length / 2 + 1);
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k) s.magnitudes[k] = std::abs(full[k]);
  return s;
}

Spectrum fft_magnitude(const Segment& segment) {
  return fft_magnitude(segment.samples(), segment.sample_rate);
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "bin,frequency_hz,magnitude\n";
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    out << k << ',' << io::format_double(static_cast<double>(k) * spectrum.bin_hz) << ','
        << io::format_double(spectrum.magnitudes[k]) << '\n';
  }
}

}  // namespace valvecav
