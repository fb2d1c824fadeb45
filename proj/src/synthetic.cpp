#include "samaug/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>

#include "samaug/error.hpp"

namespace samaug {

namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// std::*_distribution output is library-specific; these conversions are not.
class ItemRng {
 public:
  ItemRng(std::uint64_t seed, std::uint64_t index) : engine_(splitmix64(seed ^ splitmix64(index))) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::string item_id(const SyntheticParams& params, std::size_t index) {
  const std::size_t label = index / params.n_per_class;
  const std::size_t within = index % params.n_per_class;
  char buf[48];
  std::snprintf(buf, sizeof buf, "c%zu_%05zu", label, within);
  return buf;
}

}  // namespace

void SyntheticParams::validate() const {
  if (n_per_class < 1) throw Error(ErrorKind::BadGeometry, "n_per_class must be >= 1");
  if (image_size < 1) throw Error(ErrorKind::BadGeometry, "image_size must be >= 1");
  if (!(disk_radius > 0.0) || 2.0 * disk_radius > static_cast<double>(image_size)) {
    throw Error(ErrorKind::BadGeometry, "disk of radius " + std::to_string(disk_radius) + " does not fit a " +
                                            std::to_string(image_size) + " px image");
  }
  if (!(intensity_delta >= 0.0 && intensity_delta <= 1.0)) {
    throw Error(ErrorKind::BadGeometry, "intensity_delta must lie in [0, 1]");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorKind::BadGeometry, "noise_sigma must be >= 0");
  }
}

bool Disk::covers(std::size_t row, std::size_t col) const noexcept {
  const double dx = static_cast<double>(col) + 0.5 - cx;
  const double dy = static_cast<double>(row) + 0.5 - cy;
  return dx * dx + dy * dy <= radius * radius;
}

SyntheticItem synthesize_item(const SyntheticParams& params, std::size_t index) {
  params.validate();
  ItemRng rng(params.seed, index);
  const double delta = params.intensity_delta;
  const double level = std::clamp((1.0 - delta) / 2.0 + params.noise_sigma * rng.normal(), 0.0, 1.0 - delta);

  SyntheticItem item;
  item.label = index / params.n_per_class;
  item.background = level;
  if (item.label == 1) {
    const double span = static_cast<double>(params.image_size) - 2.0 * params.disk_radius;
    item.disk = Disk{params.disk_radius + rng.uniform() * span, params.disk_radius + rng.uniform() * span,
                     params.disk_radius};
  }

  const std::size_t n = params.image_size;
  const std::uint8_t bg = quantize(level);
  const std::uint8_t fg = quantize(level + delta);
  item.image = Image8{n, n, 3, std::vector<std::uint8_t>(n * n * 3, bg)};
  if (item.disk) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (!item.disk->covers(r, c)) continue;
        for (std::size_t ch = 0; ch < 3; ++ch) item.image.data[(r * n + c) * 3 + ch] = fg;
      }
    }
  }
  return item;
}

DatasetManifest generate_synthetic_dataset(const SyntheticParams& params, const fs::path& out_dir, int workers) {
  params.validate();
  const auto images_dir = out_dir / "images";
  fs::create_directories(images_dir);

  const std::size_t total = 2 * params.n_per_class;
  DatasetManifest manifest;
  manifest.num_classes = 2;
  manifest.rows.resize(total);
  std::vector<std::optional<std::string>> errors(total);

#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const auto item = synthesize_item(params, idx);
      const auto id = item_id(params, idx);
      const auto path = fs::absolute(images_dir / (id + ".png")).lexically_normal();
      write_png8(path, item.image);
      manifest.rows[idx] = DatasetRow{id, path, std::nullopt, item.label};
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (e) throw Error(ErrorKind::IoError, "synthetic dataset: " + *e);
  }
  write_dataset_manifest(out_dir / "manifest.csv", manifest);
  return manifest;
}

}  // namespace samaug
