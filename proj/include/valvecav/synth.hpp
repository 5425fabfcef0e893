#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "valvecav/dataset.hpp"

namespace valvecav::synth {

struct Tone {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
};

/// Spectral signature of one flow state: tones, broadband Gaussian noise and
/// sinusoidal amplitude modulation of the tonal part.
struct ClassSignature {
  std::vector<Tone> tones;
  double noise_level = 0.0;
  double modulation_depth = 0.0;
  double modulation_hz = 0.0;

  bool operator==(const ClassSignature& other) const;
};

struct SynthSpec {
  std::map<FlowState, std::size_t> counts;
  std::size_t signal_length = 65536;
  double sample_rate = 1562500.0;
  std::vector<double> pressure_levels = {10, 9, 6, 4};
  std::vector<double> opening_levels = {100, 90, 75, 50, 25, 10, 5};
  std::map<FlowState, ClassSignature> signatures;
  /// Relative amplitude swing across the pressure and opening ranges.
  double condition_gain = 0.1;
  SignalCodec codec = SignalCodec::kF32le;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Five well-separated signatures with `per_class` signals each.
SynthSpec default_spec(std::size_t per_class = 20, std::size_t length = 65536, std::uint64_t seed = 0);

SynthSpec spec_from_json(const std::string& text);
std::string spec_to_json(const SynthSpec& spec);

struct SynthDataset {
  std::vector<SignalRecord> records;
  DatasetManifest manifest;  // entry paths are file names relative to the output directory
};

/// Samples are rounded to binary32 so the f32le files reproduce them exactly.
SynthDataset generate(const SynthSpec& spec);

/// Writes one signal file per record plus manifest.json. Returns the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir, const SynthDataset& data);

}  // namespace valvecav::synth
