#include "valvecav/nosw.hpp"

#include <fstream>

#include "valvecav/io.hpp"

namespace valvecav {

std::size_t window_count(std::size_t length, std::size_t window_size) {
  if (window_size == 0) throw ConfigError("window size must be positive");
  return length / window_size;
}

std::vector<Segment> segment_signal(const SignalRecord& record, std::size_t window_size,
                                    std::optional<Partition> partition) {
  if (window_size == 0 || window_size > record.length()) {
    throw ConfigError("window size " + std::to_string(window_size) +
                      " outside [1, " + std::to_string(record.length()) + "] for signal '" +
                      record.id + "'");
  }
  const std::size_t n = window_count(record.length(), window_size);
  std::vector<Segment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Segment s;
    s.parent_id = record.id;
    s.window_index = i;
    s.buffer = record.samples;
    s.offset = i * window_size;
    s.size = window_size;
    s.sample_rate = record.sample_rate;
    s.upstream_pressure = record.upstream_pressure;
    s.valve_opening = record.valve_opening;
    s.label = record.label;
    s.partition = partition;
    out.push_back(std::move(s));
  }
  return out;
}

SegmentedDataset segment_dataset(std::span<const SignalRecord> records,
                                 const SplitAssignment& split, std::size_t window_size) {
  SegmentedDataset out;
  for (const auto& r : records) {
    const Partition p = split.at(r.id);
    auto segs = segment_signal(r, window_size, p);
    auto& dst = p == Partition::kTrain ? out.train : out.test;
    for (auto& s : segs) dst.push_back(std::move(s));
  }
  return out;
}

WindowCounts count_windows(std::span<const SignalHeader> headers, const SplitAssignment& split,
                           std::size_t window_size) {
  WindowCounts counts;
  for (const auto& h : headers) {
    if (window_size == 0 || window_size > h.length) {
      throw ConfigError("window size " + std::to_string(window_size) + " outside [1, " +
                        std::to_string(h.length) + "] for signal '" + h.id + "'");
    }
    const std::size_t n = window_count(h.length, window_size);
    (split.at(h.id) == Partition::kTrain ? counts.train : counts.test) += n;
  }
  return counts;
}

std::filesystem::path write_segments(const std::filesystem::path& dir,
                                     std::span<const Segment> segments) {
  std::filesystem::create_directories(dir);
  const auto index_path = dir / "index.csv";
  std::ofstream index(index_path, std::ios::trunc);
  if (!index) throw DataError("cannot write " + index_path.string());
  index << "parent_id,window_index,partition,label,pressure,opening,path,sample_rate\n";
  for (const auto& s : segments) {
    const std::string name = s.parent_id + "_w" + std::to_string(s.window_index) + ".f32le";
    io::write_f32le(dir / name, s.samples());
    index << s.parent_id << ',' << s.window_index << ','
          << (s.partition ? to_string(*s.partition) : std::string("none")) << ','
          << to_string(s.label) << ',' << io::format_double(s.upstream_pressure) << ','
          << io::format_double(s.valve_opening) << ',' << name << ','
          << io::format_double(s.sample_rate) << '\n';
  }
  return index_path;
}

std::vector<Segment> read_segment_index(const std::filesystem::path& index_path) {
  const auto doc = io::read_csv(index_path);
  const auto c_parent = doc.column("parent_id");
  const auto c_window = doc.column("window_index");
  const auto c_part = doc.column("partition");
  const auto c_label = doc.column("label");
  const auto c_pressure = doc.column("pressure");
  const auto c_opening = doc.column("opening");
  const auto c_path = doc.column("path");
  const auto c_rate = doc.column("sample_rate");
  const auto base = index_path.parent_path();
  std::vector<Segment> out;
  for (const auto& row : doc.rows) {
    Segment s;
    s.parent_id = row[c_parent];
    s.window_index = static_cast<std::size_t>(io::parse_int(row[c_window], "window_index"));
    if (row[c_part] != "none") s.partition = parse_partition(row[c_part]);
    s.label = parse_flow_state(row[c_label]);
    s.upstream_pressure = io::parse_double(row[c_pressure], "pressure");
    s.valve_opening = io::parse_double(row[c_opening], "opening");
    s.sample_rate = io::parse_double(row[c_rate], "sample_rate");
    auto samples = io::read_f32le(base / row[c_path]);
    s.size = samples.size();
    s.buffer = std::make_shared<const std::vector<double>>(std::move(samples));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace valvecav
