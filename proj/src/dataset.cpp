#include "valvecav/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "valvecav/io.hpp"
#include "valvecav/random.hpp"

namespace valvecav {

using nlohmann::json;

std::string to_string(FlowState state) {
  switch (state) {
    case FlowState::kChokedFlowCavitation: return "ChokedFlowCavitation";
    case FlowState::kConstantCavitation: return "ConstantCavitation";
    case FlowState::kIncipientCavitation: return "IncipientCavitation";
    case FlowState::kTurbulentFlow: return "TurbulentFlow";
    case FlowState::kNoFlow: return "NoFlow";
  }
  return "?";
}

FlowState parse_flow_state(const std::string& name) {
  for (FlowState s : kAllFlowStates) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown flow state '" + name + "'");
}

std::string to_string(Task task) { return task == Task::kBinary ? "binary" : "four_class"; }

Task parse_task(const std::string& name) {
  if (name == "binary") return Task::kBinary;
  if (name == "four_class") return Task::kFourClass;
  throw ConfigError("unknown task '" + name + "' (expected binary or four_class)");
}

int num_classes(Task task) { return task == Task::kBinary ? 2 : 4; }

int class_index(FlowState state, Task task) {
  if (task == Task::kBinary) {
    switch (state) {
      case FlowState::kChokedFlowCavitation:
      case FlowState::kConstantCavitation:
      case FlowState::kIncipientCavitation: return 1;
      case FlowState::kTurbulentFlow:
      case FlowState::kNoFlow: return 0;
    }
  }
  switch (state) {
    case FlowState::kChokedFlowCavitation: return 0;
    case FlowState::kConstantCavitation: return 1;
    case FlowState::kIncipientCavitation: return 2;
    case FlowState::kTurbulentFlow:
    case FlowState::kNoFlow: return 3;
  }
  return -1;
}

std::vector<std::string> class_names(Task task) {
  if (task == Task::kBinary) return {"NoCavitation", "Cavitation"};
  return {"ChokedFlowCavitation", "ConstantCavitation", "IncipientCavitation", "NonCavitation"};
}

std::string to_string(Partition partition) {
  return partition == Partition::kTrain ? "train" : "test";
}

Partition parse_partition(const std::string& name) {
  if (name == "train") return Partition::kTrain;
  if (name == "test") return Partition::kTest;
  throw DataError("unknown partition '" + name + "'");
}

std::string to_string(SignalCodec codec) { return codec == SignalCodec::kF32le ? "f32le" : "csv"; }

SignalHeader SignalRecord::header() const {
  return SignalHeader{id, length(), upstream_pressure, valve_opening, label};
}

SignalRecord make_record(std::string id, std::vector<double> samples, double sample_rate,
                         double upstream_pressure, double valve_opening, FlowState label) {
  if (samples.empty()) throw DataError("signal '" + id + "' has no samples");
  if (!(sample_rate > 0.0)) throw DataError("signal '" + id + "' has non-positive sample rate");
  SignalRecord r;
  r.id = std::move(id);
  r.samples = std::make_shared<const std::vector<double>>(std::move(samples));
  r.sample_rate = sample_rate;
  r.upstream_pressure = upstream_pressure;
  r.valve_opening = valve_opening;
  r.label = label;
  return r;
}

std::map<FlowState, std::size_t> DatasetManifest::label_counts() const {
  std::map<FlowState, std::size_t> counts;
  for (const auto& e : entries) ++counts[e.label];
  return counts;
}

std::vector<SignalHeader> DatasetManifest::headers() const {
  std::vector<SignalHeader> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    out.push_back({e.id, signal_length, e.upstream_pressure, e.valve_opening, e.label});
  }
  return out;
}

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

bool contains(const std::vector<double>& levels, double v) {
  return std::find(levels.begin(), levels.end(), v) != levels.end();
}

std::string format_level(double v) { return io::format_double(v); }

std::size_t signal_length_on_disk(const std::filesystem::path& path, SignalCodec codec) {
  if (codec == SignalCodec::kF32le) {
    const auto bytes = std::filesystem::file_size(path);
    if (bytes % 4 != 0) throw DataError(path.string() + ": size is not a multiple of 4");
    return static_cast<std::size_t>(bytes / 4);
  }
  return io::read_signal_csv(path).size();
}

}  // namespace

DatasetManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir,
                               const ManifestOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest parse error at line " +
                      std::to_string(line_of_offset(json_text, e.byte)) + ": " + e.what());
  }

  DatasetManifest m;
  try {
    m.sample_rate = doc.at("sample_rate").get<double>();
    m.signal_length = doc.at("signal_length").get<std::size_t>();
    m.pressure_levels = doc.at("pressure_levels").get<std::vector<double>>();
    m.opening_levels = doc.at("opening_levels").get<std::vector<double>>();
    m.length_tolerance = doc.value("length_tolerance", std::size_t{0});
    const std::string codec = doc.value("codec", std::string("f32le"));
    if (codec == "f32le") {
      m.codec = SignalCodec::kF32le;
    } else if (codec == "csv") {
      m.codec = SignalCodec::kCsv;
    } else {
      throw ConfigError("manifest: unknown codec '" + codec + "'");
    }
    const auto& entries = doc.at("entries");
    if (!entries.is_array()) throw ConfigError("manifest: 'entries' must be an array");
    if (entries.empty()) throw ConfigError("manifest has no entries");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      ManifestEntry entry;
      const auto rel = e.at("path").get<std::string>();
      entry.path = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel)
                                                            : base_dir / rel;
      entry.id = e.contains("id") ? e.at("id").get<std::string>()
                                  : std::filesystem::path(rel).stem().string();
      entry.upstream_pressure = e.at("pressure").get<double>();
      entry.valve_opening = e.at("opening").get<double>();
      entry.label = parse_flow_state(e.at("label").get<std::string>());
      const std::string where = "manifest entry " + std::to_string(i) + " ('" + entry.id + "')";
      if (entry.id.empty() || entry.id.find(',') != std::string::npos) {
        throw ConfigError(where + ": id must be non-empty and contain no commas");
      }
      if (!ids.insert(entry.id).second) throw ConfigError(where + ": duplicate id");
      if (!contains(m.pressure_levels, entry.upstream_pressure)) {
        throw ConfigError(where + ": pressure " + format_level(entry.upstream_pressure) +
                          " not in declared pressure_levels");
      }
      if (!contains(m.opening_levels, entry.valve_opening)) {
        throw ConfigError(where + ": opening " + format_level(entry.valve_opening) +
                          " not in declared opening_levels");
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  if (!(m.sample_rate > 0.0)) throw ConfigError("manifest: sample_rate must be positive");
  if (m.signal_length == 0) throw ConfigError("manifest: signal_length must be positive");

  if (options.check_files) {
    std::vector<std::string> absent;
    for (const auto& e : m.entries) {
      if (!std::filesystem::is_regular_file(e.path)) absent.push_back(e.path.string());
    }
    if (!absent.empty()) {
      std::string msg = "manifest references " + std::to_string(absent.size()) + " missing file(s):";
      for (const auto& p : absent) msg += "\n  " + p;
      throw DataError(msg);
    }
    for (const auto& e : m.entries) {
      const std::size_t len = signal_length_on_disk(e.path, m.codec);
      const std::size_t diff = len > m.signal_length ? len - m.signal_length : m.signal_length - len;
      if (diff > m.length_tolerance) {
        throw DataError("signal '" + e.id + "' has length " + std::to_string(len) +
                        ", manifest declares " + std::to_string(m.signal_length));
      }
    }
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path, const ManifestOptions& options) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("manifest not found: " + path.string());
  }
  return parse_manifest(io::read_text(path), path.parent_path(), options);
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  json doc;
  doc["sample_rate"] = manifest.sample_rate;
  doc["signal_length"] = manifest.signal_length;
  doc["length_tolerance"] = manifest.length_tolerance;
  doc["codec"] = to_string(manifest.codec);
  doc["pressure_levels"] = manifest.pressure_levels;
  doc["opening_levels"] = manifest.opening_levels;
  json entries = json::array();
  const auto base = path.parent_path();
  for (const auto& e : manifest.entries) {
    json j;
    j["id"] = e.id;
    j["path"] = e.path.is_absolute() ? std::filesystem::relative(e.path, base).generic_string()
                                     : e.path.generic_string();
    j["pressure"] = e.upstream_pressure;
    j["opening"] = e.valve_opening;
    j["label"] = to_string(e.label);
    entries.push_back(std::move(j));
  }
  doc["entries"] = std::move(entries);
  io::write_text(path, doc.dump(2) + "\n");
}

std::vector<double> read_signal(const std::filesystem::path& path, SignalCodec codec) {
  return codec == SignalCodec::kF32le ? io::read_f32le(path) : io::read_signal_csv(path);
}

std::vector<SignalRecord> load_records(const DatasetManifest& manifest) {
  std::vector<SignalRecord> records;
  records.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    records.push_back(make_record(e.id, read_signal(e.path, manifest.codec), manifest.sample_rate,
                                  e.upstream_pressure, e.valve_opening, e.label));
  }
  return records;
}

Partition SplitAssignment::at(const std::string& id) const {
  auto it = partition.find(id);
  if (it == partition.end()) throw DataError("record '" + id + "' is not in the split assignment");
  return it->second;
}

std::size_t SplitAssignment::count(Partition p) const {
  return static_cast<std::size_t>(std::count_if(partition.begin(), partition.end(),
                                                [p](const auto& kv) { return kv.second == p; }));
}

SplitAssignment split_records(std::span<const SignalHeader> records, double train_fraction,
                              std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (records.empty()) throw DataError("cannot split an empty record list");

  SplitAssignment split;
  split.seed = seed;
  split.train_fraction = train_fraction;

  std::map<FlowState, std::vector<std::string>> by_label;
  for (const auto& r : records) {
    if (split.partition.count(r.id)) throw DataError("duplicate record id '" + r.id + "'");
    split.partition[r.id] = Partition::kTest;
    by_label[r.label].push_back(r.id);
  }

  // Per-label floor allocation, then the shortfall against floor(N * f) goes
  // to the labels with the largest fractional remainders (ties: label order).
  struct Quota {
    FlowState label;
    std::size_t train;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t allocated = 0;
  for (const auto& [label, ids] : by_label) {
    const double exact = static_cast<double>(ids.size()) * train_fraction;
    const auto base = static_cast<std::size_t>(std::floor(exact));
    quotas.push_back({label, base, exact - static_cast<double>(base)});
    allocated += base;
    if (ids.size() < 2) {
      split.warnings.push_back("label " + to_string(label) + " has fewer than 2 records");
    }
  }
  const auto target =
      static_cast<std::size_t>(std::floor(static_cast<double>(records.size()) * train_fraction));
  std::vector<std::size_t> order(quotas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].remainder > quotas[b].remainder;
  });
  for (std::size_t i = 0; allocated < target && i < order.size(); ++i) {
    auto& q = quotas[order[i]];
    if (q.remainder > 0.0) {
      ++q.train;
      ++allocated;
    }
  }
  if (allocated == 0 || allocated == records.size()) {
    throw DataError("stratified split with train_fraction " + io::format_double(train_fraction) +
                    " leaves one partition empty");
  }

  for (const auto& q : quotas) {
    auto ids = by_label[q.label];
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(q.label)));
    rng.shuffle(ids);
    for (std::size_t i = 0; i < q.train; ++i) split.partition[ids[i]] = Partition::kTrain;
  }
  for (const auto& w : split.warnings) log_warning(w);
  return split;
}

SplitAssignment split_records(const DatasetManifest& manifest, double train_fraction,
                              std::uint64_t seed) {
  const auto headers = manifest.headers();
  return split_records(std::span<const SignalHeader>(headers), train_fraction, seed);
}

}  // namespace valvecav
