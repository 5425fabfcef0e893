#include "valvecav/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "valvecav/io.hpp"
#include "valvecav/random.hpp"

namespace valvecav::synth {

using nlohmann::json;

bool ClassSignature::operator==(const ClassSignature& o) const {
  if (tones.size() != o.tones.size()) return false;
  for (std::size_t i = 0; i < tones.size(); ++i) {
    if (tones[i].frequency_hz != o.tones[i].frequency_hz || tones[i].amplitude != o.tones[i].amplitude) {
      return false;
    }
  }
  return noise_level == o.noise_level && modulation_depth == o.modulation_depth &&
         modulation_hz == o.modulation_hz;
}

void SynthSpec::validate() const {
  if (counts.empty()) throw ConfigError("synth: no classes requested");
  if (signal_length < 4) throw ConfigError("synth: signal_length must be >= 4");
  if (!(sample_rate > 0.0)) throw ConfigError("synth: sample_rate must be positive");
  if (pressure_levels.empty() || opening_levels.empty()) throw ConfigError("synth: empty category set");
  if (!(condition_gain >= 0.0 && condition_gain < 1.0)) throw ConfigError("synth: condition_gain must lie in [0, 1)");
  for (const auto& [state, n] : counts) {
    if (n < 1) throw ConfigError("synth: class " + to_string(state) + " needs at least one signal");
    auto it = signatures.find(state);
    if (it == signatures.end()) throw ConfigError("synth: no signature for " + to_string(state));
    const auto& sig = it->second;
    if (!(sig.noise_level >= 0.0) || !(sig.modulation_depth >= 0.0)) {
      throw ConfigError("synth: negative noise or modulation for " + to_string(state));
    }
    for (const auto& t : sig.tones) {
      if (!(t.frequency_hz >= 0.0 && t.frequency_hz <= sample_rate / 2)) {
        throw ConfigError("synth: tone frequency outside [0, Nyquist] for " + to_string(state));
      }
    }
  }
  for (auto a = signatures.begin(); a != signatures.end(); ++a) {
    for (auto b = std::next(a); b != signatures.end(); ++b) {
      if (counts.count(a->first) && counts.count(b->first) && a->second == b->second) {
        throw ConfigError("synth: classes " + to_string(a->first) + " and " + to_string(b->first) +
                          " share a signature");
      }
    }
  }
}

namespace {

// Tones on exact bin centres of a 65536-point transform at the default rate.
double bin_frequency(double bin, double sample_rate) { return bin * sample_rate / 65536.0; }

ClassSignature make_signature(std::size_t num_tones, double first_bin, double spacing_bins, double amplitude,
                              double noise, double depth, double sample_rate) {
  ClassSignature sig;
  for (std::size_t i = 0; i < num_tones; ++i) {
    sig.tones.push_back({bin_frequency(first_bin + spacing_bins * static_cast<double>(i), sample_rate),
                         amplitude * (1.0 - 0.04 * static_cast<double>(i))});
  }
  sig.noise_level = noise;
  sig.modulation_depth = depth;
  sig.modulation_hz = depth > 0.0 ? bin_frequency(7, sample_rate) : 0.0;
  return sig;
}

}  // namespace

SynthSpec default_spec(std::size_t per_class, std::size_t length, std::uint64_t seed) {
  SynthSpec s;
  s.signal_length = length;
  s.seed = seed;
  const double fs = s.sample_rate;
  for (FlowState st : kAllFlowStates) s.counts[st] = per_class;
  s.signatures[FlowState::kNoFlow] = make_signature(0, 0, 0, 0.0, 0.05, 0.0, fs);
  s.signatures[FlowState::kTurbulentFlow] = make_signature(2, 400, 900, 0.4, 0.35, 0.0, fs);
  s.signatures[FlowState::kIncipientCavitation] = make_signature(5, 500, 700, 0.6, 0.45, 0.3, fs);
  s.signatures[FlowState::kConstantCavitation] = make_signature(16, 300, 350, 0.9, 1.0, 0.5, fs);
  s.signatures[FlowState::kChokedFlowCavitation] = make_signature(9, 800, 500, 1.5, 0.7, 0.8, fs);
  return s;
}

SynthSpec spec_from_json(const std::string& text) {
  SynthSpec s;
  try {
    const json j = json::parse(text);
    s.signal_length = j.value("signal_length", s.signal_length);
    s.sample_rate = j.value("sample_rate", s.sample_rate);
    s.pressure_levels = j.value("pressure_levels", s.pressure_levels);
    s.opening_levels = j.value("opening_levels", s.opening_levels);
    s.condition_gain = j.value("condition_gain", s.condition_gain);
    s.seed = j.value("seed", s.seed);
    const std::string codec = j.value("codec", std::string("f32le"));
    if (codec == "csv") {
      s.codec = SignalCodec::kCsv;
    } else if (codec != "f32le") {
      throw ConfigError("synth: unknown codec '" + codec + "'");
    }
    for (const auto& c : j.at("classes")) {
      const FlowState st = parse_flow_state(c.at("label").get<std::string>());
      s.counts[st] = c.at("count").get<std::size_t>();
      ClassSignature sig;
      for (const auto& t : c.value("tones", json::array())) {
        sig.tones.push_back({t.at("frequency_hz").get<double>(), t.at("amplitude").get<double>()});
      }
      sig.noise_level = c.value("noise_level", 0.0);
      sig.modulation_depth = c.value("modulation_depth", 0.0);
      sig.modulation_hz = c.value("modulation_hz", 0.0);
      s.signatures[st] = std::move(sig);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string spec_to_json(const SynthSpec& s) {
  json j;
  j["signal_length"] = s.signal_length;
  j["sample_rate"] = s.sample_rate;
  j["pressure_levels"] = s.pressure_levels;
  j["opening_levels"] = s.opening_levels;
  j["condition_gain"] = s.condition_gain;
  j["seed"] = s.seed;
  j["codec"] = to_string(s.codec);
  json classes = json::array();
  for (const auto& [st, n] : s.counts) {
    const auto& sig = s.signatures.at(st);
    json tones = json::array();
    for (const auto& t : sig.tones) tones.push_back({{"frequency_hz", t.frequency_hz}, {"amplitude", t.amplitude}});
    classes.push_back({{"label", to_string(st)},
                       {"count", n},
                       {"tones", tones},
                       {"noise_level", sig.noise_level},
                       {"modulation_depth", sig.modulation_depth},
                       {"modulation_hz", sig.modulation_hz}});
  }
  j["classes"] = std::move(classes);
  return j.dump(2) + "\n";
}

SynthDataset generate(const SynthSpec& spec) {
  spec.validate();
  SynthDataset out;
  auto& m = out.manifest;
  m.sample_rate = spec.sample_rate;
  m.signal_length = spec.signal_length;
  m.pressure_levels = spec.pressure_levels;
  m.opening_levels = spec.opening_levels;
  m.codec = spec.codec;

  const auto [pmin, pmax] = std::minmax_element(spec.pressure_levels.begin(), spec.pressure_levels.end());
  const auto [omin, omax] = std::minmax_element(spec.opening_levels.begin(), spec.opening_levels.end());
  auto normalized = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) - 0.5 : 0.0; };

  const std::size_t cells = spec.pressure_levels.size() * spec.opening_levels.size();
  const double two_pi = 2.0 * std::numbers::pi;
  std::uint64_t stream = 0;
  std::size_t class_pos = 0;
  for (const auto& [state, count] : spec.counts) {
    const auto& sig = spec.signatures.at(state);
    for (std::size_t i = 0; i < count; ++i, ++stream) {
      Rng rng(derive_seed(spec.seed, stream));
      const std::size_t cell = (i + 3 * class_pos) % cells;
      const double pressure = spec.pressure_levels[cell % spec.pressure_levels.size()];
      const double opening = spec.opening_levels[(cell / spec.pressure_levels.size()) % spec.opening_levels.size()];
      const double gain = (1.0 + spec.condition_gain * normalized(pressure, *pmin, *pmax)) *
                          (1.0 + spec.condition_gain * normalized(opening, *omin, *omax));

      std::vector<double> phases(sig.tones.size());
      for (auto& ph : phases) ph = two_pi * rng.uniform();
      const double mod_phase = two_pi * rng.uniform();

      std::vector<double> x(spec.signal_length);
      for (std::size_t n = 0; n < x.size(); ++n) {
        const double t = static_cast<double>(n) / spec.sample_rate;
        double tonal = 0.0;
        for (std::size_t k = 0; k < sig.tones.size(); ++k) {
          tonal += sig.tones[k].amplitude * std::sin(two_pi * sig.tones[k].frequency_hz * t + phases[k]);
        }
        const double envelope = 1.0 + sig.modulation_depth * std::sin(two_pi * sig.modulation_hz * t + mod_phase);
        const double noise = sig.noise_level > 0.0 ? sig.noise_level * rng.normal() : 0.0;
        x[n] = static_cast<float>(gain * (envelope * tonal + noise));
      }

      char id[96];
      std::snprintf(id, sizeof(id), "%s_%03zu", to_string(state).c_str(), i);
      ManifestEntry e;
      e.id = id;
      e.path = std::string(id) + (spec.codec == SignalCodec::kF32le ? ".f32le" : ".csv");
      e.upstream_pressure = pressure;
      e.valve_opening = opening;
      e.label = state;
      m.entries.push_back(e);
      out.records.push_back(make_record(id, std::move(x), spec.sample_rate, pressure, opening, state));
    }
    ++class_pos;
  }
  return out;
}

std::filesystem::path write_dataset(const std::filesystem::path& dir, const SynthDataset& data) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto& r = data.records[i];
    const auto path = dir / data.manifest.entries[i].path;
    if (data.manifest.codec == SignalCodec::kF32le) {
      io::write_f32le(path, *r.samples);
    } else {
      io::write_signal_csv(path, *r.samples);
    }
  }
  const auto manifest_path = dir / "manifest.json";
  save_manifest(data.manifest, manifest_path);
  return manifest_path;
}

}  // namespace valvecav::synth
