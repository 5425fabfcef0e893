#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valvecav/dataset.hpp"

namespace valvecav {

/// One non-overlapping window of a parent signal. The samples are a view into
/// the parent's shared buffer, covering [window_index * size, (window_index + 1) * size).
struct Segment {
  std::string parent_id;
  std::size_t window_index = 0;
  std::shared_ptr<const std::vector<double>> buffer;
  std::size_t offset = 0;
  std::size_t size = 0;
  double sample_rate = 0.0;
  double upstream_pressure = 0.0;
  double valve_opening = 0.0;
  FlowState label = FlowState::kNoFlow;
  std::optional<Partition> partition;

  std::span<const double> samples() const { return {buffer->data() + offset, size}; }
};

/// Number of whole windows that fit; the remainder is discarded.
std::size_t window_count(std::size_t length, std::size_t window_size);

std::vector<Segment> segment_signal(const SignalRecord& record, std::size_t window_size,
                                    std::optional<Partition> partition = std::nullopt);

struct SegmentedDataset {
  std::vector<Segment> train;
  std::vector<Segment> test;
};

SegmentedDataset segment_dataset(std::span<const SignalRecord> records,
                                 const SplitAssignment& split, std::size_t window_size);

struct WindowCounts {
  std::size_t train = 0;
  std::size_t test = 0;
};

/// Same bookkeeping as segment_dataset from headers alone (no samples touched).
WindowCounts count_windows(std::span<const SignalHeader> headers, const SplitAssignment& split,
                           std::size_t window_size);

/// Writes one f32le file per segment plus index.csv into dir. Returns the index path.
std::filesystem::path write_segments(const std::filesystem::path& dir,
                                     std::span<const Segment> segments);

/// Reads an index.csv written by write_segments, loading every segment file.
std::vector<Segment> read_segment_index(const std::filesystem::path& index_path);

}  // namespace valvecav
