#include "samaug/dataset.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <unordered_set>

#include "samaug/csv.hpp"
#include "samaug/error.hpp"
#include "samaug/f32p.hpp"

namespace samaug {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base_dir, const std::string& text) {
  fs::path p = text;
  if (p.is_relative()) p = base_dir / p;
  return p.lexically_normal();
}

std::string relative_to(const fs::path& p, const fs::path& dir) {
  const auto rel = p.lexically_relative(dir);
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

fs::path manifest_dir(const fs::path& manifest_path) {
  return fs::absolute(manifest_path).parent_path().lexically_normal();
}

}  // namespace

void DatasetManifest::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    if (row.id.empty()) throw Error(ErrorKind::BadManifest, "empty id");
    if (!seen.insert(row.id).second) throw Error(ErrorKind::BadManifest, "duplicate id '" + row.id + "'");
    if (row.label >= num_classes) {
      throw Error(ErrorKind::BadManifest, "row '" + row.id + "' label " + std::to_string(row.label) +
                                              " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
}

DatasetManifest load_dataset_manifest(const fs::path& path, bool check_files) {
  const auto table = read_csv(path);
  const CsvRow expected{"id", "image_path", "mask_manifest_path", "label"};
  if (table.header != expected) {
    throw Error(ErrorKind::BadManifest, path.string() + ": header must be id,image_path,mask_manifest_path,label");
  }
  const auto base = manifest_dir(path);

  DatasetManifest m;
  std::size_t max_label = 0;
  for (const auto& r : table.rows) {
    DatasetRow row;
    row.id = r[0];
    if (r[1].empty()) throw Error(ErrorKind::BadManifest, path.string() + ": row '" + row.id + "' has no image_path");
    row.image_path = resolve(base, r[1]);
    if (!r[2].empty()) row.mask_manifest_path = resolve(base, r[2]);

    const auto& lt = r[3];
    const auto res = std::from_chars(lt.data(), lt.data() + lt.size(), row.label);
    if (lt.empty() || res.ec != std::errc{} || res.ptr != lt.data() + lt.size()) {
      throw Error(ErrorKind::BadManifest, path.string() + ": row '" + row.id + "' has invalid label '" + lt + "'");
    }
    if (check_files) {
      if (!fs::exists(row.image_path)) {
        throw Error(ErrorKind::BadManifest, path.string() + ": missing file " + row.image_path.string());
      }
      if (row.mask_manifest_path && !fs::exists(*row.mask_manifest_path)) {
        throw Error(ErrorKind::BadManifest, path.string() + ": missing file " + row.mask_manifest_path->string());
      }
    }
    max_label = std::max(max_label, row.label);
    m.rows.push_back(std::move(row));
  }
  m.num_classes = std::max<std::size_t>(2, max_label + 1);
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
  return m;
}

void write_dataset_manifest(const fs::path& path, const DatasetManifest& manifest) {
  const auto base = manifest_dir(path);
  CsvTable table;
  table.header = {"id", "image_path", "mask_manifest_path", "label"};
  for (const auto& row : manifest.rows) {
    table.rows.push_back({row.id, relative_to(fs::absolute(row.image_path).lexically_normal(), base),
                          row.mask_manifest_path
                              ? relative_to(fs::absolute(*row.mask_manifest_path).lexically_normal(), base)
                              : std::string{},
                          std::to_string(row.label)});
  }
  write_csv(path, table);
}

std::string output_stem(const std::string& id, std::size_t row_index) {
  std::string stem;
  bool changed = id.empty() || id == "." || id == "..";
  for (char ch : id) {
    const bool safe = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                      ch == '-' || ch == '_' || ch == '.';
    stem += safe ? ch : '_';
    changed = changed || !safe;
  }
  if (changed) stem += "__" + std::to_string(row_index);
  return stem;
}

ExportFormat parse_export_format(std::string_view text) {
  if (text == "f32p") return ExportFormat::F32p;
  if (text == "png8") return ExportFormat::Png8;
  throw Error(ErrorKind::BadConfig, "unknown export format '" + std::string(text) + "'");
}

std::uint8_t to_png8_value(float value) noexcept {
  const double scaled = static_cast<double>(value) * 255.0 / 2.0;
  if (!(scaled > 0.0)) return 0;
  if (scaled >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(scaled));
}

Image8 to_png8(const ImageTensor& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorKind::DimMismatch, "png8 export needs 1 or 3 channels");
  }
  Image8 out{image.height(), image.width(), image.channels(), {}};
  out.data.resize(image.data().size());
  for (std::size_t c = 0; c < image.channels(); ++c) {
    const auto plane = image.plane(c);
    for (std::size_t i = 0; i < plane.size(); ++i) out.data[i * image.channels() + c] = to_png8_value(plane[i]);
  }
  return out;
}

AugmentOutcome augment_dataset(const DatasetManifest& manifest, AugmentMode mode, const fs::path& out_dir,
                               ExportFormat format, int workers) {
  const auto images_dir = out_dir / "images";
  fs::create_directories(images_dir);

  const auto n = static_cast<std::int64_t>(manifest.rows.size());
  std::vector<std::optional<DatasetRow>> written(manifest.rows.size());
  std::vector<std::optional<std::string>> errors(manifest.rows.size());
  const char* ext = format == ExportFormat::F32p ? ".f32p" : ".png";

#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& row = manifest.rows[idx];
    try {
      const ImageTensor image = load_image(row.image_path);
      ImageTensor result = image;
      if (row.mask_manifest_path && mode != AugmentMode::None) {
        result = augment_image(image, load_mask_manifest(*row.mask_manifest_path), mode);
      }
      const auto out_path = (images_dir / (output_stem(row.id, idx) + ext)).lexically_normal();
      if (format == ExportFormat::F32p) {
        write_f32p(result, out_path);
      } else {
        write_png8(out_path, to_png8(result));
      }
      written[idx] = DatasetRow{row.id, fs::absolute(out_path), row.mask_manifest_path, row.label};
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }

  AugmentOutcome outcome;
  outcome.manifest.num_classes = manifest.num_classes;
  CsvTable failures;
  failures.header = {"row", "id", "message"};
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    if (written[i]) outcome.manifest.rows.push_back(std::move(*written[i]));
    if (errors[i]) {
      outcome.failures.push_back({i, manifest.rows[i].id, *errors[i]});
      failures.rows.push_back({std::to_string(i), manifest.rows[i].id, *errors[i]});
    }
  }
  write_dataset_manifest(out_dir / "manifest.csv", outcome.manifest);
  write_csv(out_dir / "failures.csv", failures);
  return outcome;
}

}  // namespace samaug
