#pragma once

// Dataset manifests (CSV: id,image_path,mask_manifest_path,label) and the
// batch augmentation that turns one manifest into another.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "samaug/augment.hpp"

namespace samaug {

struct DatasetRow {
  std::string id;
  std::filesystem::path image_path;  // absolute
  std::optional<std::filesystem::path> mask_manifest_path;  // absolute
  std::size_t label = 0;
};

struct DatasetManifest {
  std::vector<DatasetRow> rows;
  std::size_t num_classes = 2;

  /// Unique ids, labels below num_classes. Throws BadManifest.
  void validate() const;
};

/// Relative paths resolve against the manifest's directory. With
/// check_files, every referenced file must exist. num_classes is
/// max(label) + 1, at least 2. Throws BadManifest / IoError.
DatasetManifest load_dataset_manifest(const std::filesystem::path& path, bool check_files = true);

/// Paths are written relative to the manifest's directory.
void write_dataset_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// File-name stem for a row id; ids with unsafe characters get the row index
/// appended so distinct ids never collide.
std::string output_stem(const std::string& id, std::size_t row_index);

enum class ExportFormat { F32p, Png8 };
ExportFormat parse_export_format(std::string_view text);

/// [0,2] -> [0,255], rounding half away from zero, clamped.
std::uint8_t to_png8_value(float value) noexcept;
Image8 to_png8(const ImageTensor& image);

struct RowFailure {
  std::size_t row = 0;
  std::string id;
  std::string message;
};

struct AugmentOutcome {
  DatasetManifest manifest;  // rows that were written, in input order
  std::vector<RowFailure> failures;
};

/// Augments every row into out_dir/images/ and writes out_dir/manifest.csv and
/// out_dir/failures.csv. Rows without a mask manifest pass through
/// unaugmented. Per-row errors are collected, not thrown. Output bytes do not
/// depend on `workers`.
AugmentOutcome augment_dataset(const DatasetManifest& manifest, AugmentMode mode,
                               const std::filesystem::path& out_dir, ExportFormat format, int workers = 1);

}  // namespace samaug
