#pragma once

// Minimal RFC-4180-style CSV: comma separated, double-quoted fields may hold
// commas and doubled quotes. No embedded newlines.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>


namespace samaug {

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
};

CsvRow split_csv_line(std::string_view line);
std::string join_csv_row(const CsvRow& row);

/// Throws IoError / BadManifest (ragged rows).
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
/// Throws BadManifest.
double parse_double(std::string_view text);

struct PredictionRow {
  std::string id;
  std::vector<double> probs;
};

/// Header `id,p0,...,p{N-1}`; values in shortest round-trip form.
void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> read_predictions(const std::filesystem::path& path);

}  // namespace samaug
