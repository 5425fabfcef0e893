#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace valvecav::io {

/// Shortest text form of a double that parses back to the same bits.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

/// Splits one CSV line; double-quoted fields may contain commas.
std::vector<std::string> split_csv_line(std::string_view line);
/// Quotes a field when it contains a comma, quote or newline.
std::string quote_csv_field(std::string_view field);

struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws DataError if absent.
  std::size_t column(std::string_view name) const;
};

CsvDocument read_csv(const std::filesystem::path& path);

/// Raw little-endian IEEE-754 binary32 samples, no header.
std::vector<double> read_f32le(const std::filesystem::path& path);
void write_f32le(const std::filesystem::path& path, std::span<const double> samples);

/// Single-column CSV (an optional non-numeric header line is skipped).
std::vector<double> read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, std::span<const double> samples);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace valvecav::io
