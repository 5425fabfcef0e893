#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valvecav/error.hpp"

namespace valvecav {

enum class FlowState {
  kChokedFlowCavitation,
  kConstantCavitation,
  kIncipientCavitation,
  kTurbulentFlow,
  kNoFlow,
};

inline constexpr std::array<FlowState, 5> kAllFlowStates = {
    FlowState::kChokedFlowCavitation, FlowState::kConstantCavitation,
    FlowState::kIncipientCavitation, FlowState::kTurbulentFlow, FlowState::kNoFlow};

std::string to_string(FlowState state);
FlowState parse_flow_state(const std::string& name);

/// Classification task. Binary folds the three cavitation stages into one
/// positive class; four-class merges turbulent flow and no flow.
enum class Task { kBinary, kFourClass };

std::string to_string(Task task);
Task parse_task(const std::string& name);
int num_classes(Task task);
int class_index(FlowState state, Task task);
std::vector<std::string> class_names(Task task);

enum class Partition { kTrain, kTest };
std::string to_string(Partition partition);
Partition parse_partition(const std::string& name);

/// Metadata of a signal without its samples. Enough for window planning.
struct SignalHeader {
  std::string id;
  std::size_t length = 0;
  double upstream_pressure = 0.0;
  double valve_opening = 0.0;
  FlowState label = FlowState::kNoFlow;
};

/// One raw acoustic measurement. Samples are shared and never mutated, so
/// segments can view them without copying.
struct SignalRecord {
  std::string id;
  std::shared_ptr<const std::vector<double>> samples;
  double sample_rate = 0.0;
  double upstream_pressure = 0.0;
  double valve_opening = 0.0;
  FlowState label = FlowState::kNoFlow;

  std::size_t length() const { return samples ? samples->size() : 0; }
  SignalHeader header() const;
};

/// Builds a record and checks its invariants.
SignalRecord make_record(std::string id, std::vector<double> samples, double sample_rate,
                         double upstream_pressure, double valve_opening, FlowState label);

enum class SignalCodec { kF32le, kCsv };
std::string to_string(SignalCodec codec);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // resolved against the manifest directory
  double upstream_pressure = 0.0;
  double valve_opening = 0.0;
  FlowState label = FlowState::kNoFlow;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<double> pressure_levels;
  std::vector<double> opening_levels;
  double sample_rate = 0.0;
  std::size_t signal_length = 0;
  std::size_t length_tolerance = 0;
  SignalCodec codec = SignalCodec::kF32le;

  std::map<FlowState, std::size_t> label_counts() const;
  std::vector<SignalHeader> headers() const;
};

struct ManifestOptions {
  bool check_files = true;
};

/// Parses and validates a manifest document. Relative entry paths resolve
/// against base_dir.
DatasetManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir,
                               const ManifestOptions& options = {});
DatasetManifest load_manifest(const std::filesystem::path& path,
                              const ManifestOptions& options = {});

/// Writes a manifest with entry paths relative to the manifest's directory.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

std::vector<double> read_signal(const std::filesystem::path& path, SignalCodec codec);
std::vector<SignalRecord> load_records(const DatasetManifest& manifest);

struct SplitAssignment {
  std::map<std::string, Partition> partition;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  Warnings warnings;

  Partition at(const std::string& id) const;
  std::size_t count(Partition p) const;
};

/// Stratified record-level train/test split, performed before any windowing.
SplitAssignment split_records(std::span<const SignalHeader> records, double train_fraction,
                              std::uint64_t seed);
SplitAssignment split_records(const DatasetManifest& manifest, double train_fraction,
                              std::uint64_t seed);

}  // namespace valvecav
