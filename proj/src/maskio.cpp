#include "samaug/maskio.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <json.hpp>

#include "samaug/error.hpp"
#include "samaug/png_io.hpp"

namespace samaug {

namespace {

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw Error(ErrorKind::EmptyDims, "mask dimensions must be >= 1, got " + std::to_string(height) + "x" +
                                          std::to_string(width));
  }
  if (width > std::numeric_limits<std::size_t>::max() / height) {
    throw Error(ErrorKind::EmptyDims, "mask dimensions overflow");
  }
}

}  // namespace

BinaryMask::BinaryMask(std::size_t height, std::size_t width, bool fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  bits_.assign(height * width, fill ? 1 : 0);
}

BinaryMask::BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  check_dims(height, width);
  if (bits_.size() != height * width) {
    throw Error(ErrorKind::DimensionMismatch, "bit buffer holds " + std::to_string(bits_.size()) +
                                                  " pixels, expected " + std::to_string(height * width));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void MaskSet::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& m = entries[i].mask;
    if (m.height() != height || m.width() != width) {
      throw Error(ErrorKind::DimMismatch, "mask " + std::to_string(i) + " is " + std::to_string(m.height()) + "x" +
                                              std::to_string(m.width()) + ", set is " + std::to_string(height) +
                                              "x" + std::to_string(width));
    }
    if (const auto& s = entries[i].stability_score; s && !(*s >= 0.0 && *s <= 1.0)) {
      throw Error(ErrorKind::SchemaError, "mask " + std::to_string(i) + " stability_score outside [0,1]");
    }
  }
}

BinaryMask decode_rle(std::span<const std::uint64_t> counts, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw Error(ErrorKind::EmptyDims, "decode_rle with zero dimension");
  const std::uint64_t total = static_cast<std::uint64_t>(height) * width;

  std::uint64_t sum = 0;
  for (auto c : counts) {
    if (c > total - std::min(sum, total)) {
      throw Error(ErrorKind::SumMismatch, "RLE counts exceed " + std::to_string(total) + " pixels");
    }
    sum += c;
  }
  if (sum != total) {
    throw Error(ErrorKind::SumMismatch,
                "RLE counts sum to " + std::to_string(sum) + ", expected " + std::to_string(total));
  }

  std::vector<std::uint8_t> bits(height * width, 0);
  std::uint64_t pos = 0;
  std::uint8_t value = 0;
  for (auto run : counts) {
    if (value != 0) {
      for (std::uint64_t k = pos; k < pos + run; ++k) {
        // column-major index k -> (row, col)
        const std::size_t col = static_cast<std::size_t>(k / height);
        const std::size_t row = static_cast<std::size_t>(k % height);
        bits[row * width + col] = 1;
      }
    }
    pos += run;
    value ^= 1;
  }
  return BinaryMask(height, width, std::move(bits));
}

std::vector<std::uint64_t> encode_rle(const BinaryMask& mask) {
  std::vector<std::uint64_t> counts;
  std::uint8_t current = 0;
  std::uint64_t run = 0;
  for (std::size_t col = 0; col < mask.width(); ++col) {
    for (std::size_t row = 0; row < mask.height(); ++row) {
      const std::uint8_t v = mask.at(row, col) ? 1 : 0;
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

BinaryMask load_png_mask(const std::filesystem::path& path, std::size_t expected_height,
                         std::size_t expected_width) {
  const Image8 img = read_png8(path);
  if (img.height != expected_height || img.width != expected_width) {
    throw Error(ErrorKind::DimensionMismatch, path.string() + " is " + std::to_string(img.height) + "x" +
                                                  std::to_string(img.width) + ", expected " +
                                                  std::to_string(expected_height) + "x" +
                                                  std::to_string(expected_width));
  }
  std::vector<std::uint8_t> bits(img.height * img.width, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    for (std::size_t c = 0; c < img.channels; ++c) {
      if (img.data[i * img.channels + c] != 0) {
        bits[i] = 1;
        break;
      }
    }
  }
  return BinaryMask(img.height, img.width, std::move(bits));
}

void save_png_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  Image8 img{mask.height(), mask.width(), 1, {}};
  img.data.reserve(mask.size());
  for (auto b : mask.bits()) img.data.push_back(b != 0 ? 255 : 0);
  write_png8(path, img);
}

namespace {

using nlohmann::json;

std::size_t require_dim(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::SchemaError, std::string("missing field '") + key + "'");
  const auto& v = doc[key];
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
    throw Error(ErrorKind::SchemaError, std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

MaskEntry parse_entry(const json& e, const std::filesystem::path& base_dir, std::size_t height,
                      std::size_t width) {
  if (!e.is_object()) throw Error(ErrorKind::SchemaError, "entry must be an object");
  if (!e.contains("format") || !e["format"].is_string()) {
    throw Error(ErrorKind::SchemaError, "field 'format' missing or not a string");
  }
  const auto format = e["format"].get<std::string>();

  std::optional<double> score;
  if (e.contains("stability_score") && !e["stability_score"].is_null()) {
    const auto& s = e["stability_score"];
    if (!s.is_number()) throw Error(ErrorKind::SchemaError, "field 'stability_score' must be a number");
    const double v = s.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::SchemaError, "field 'stability_score' outside [0,1]");
    score = v;
  }

  std::string source = format;
  if (e.contains("source") && e["source"].is_string()) source = e["source"].get<std::string>();

  if (format == "rle") {
    if (!e.contains("counts") || !e["counts"].is_array()) {
      throw Error(ErrorKind::SchemaError, "field 'counts' missing or not an array");
    }
    std::vector<std::uint64_t> counts;
    counts.reserve(e["counts"].size());
    for (const auto& c : e["counts"]) {
      if (!c.is_number_unsigned()) {
        throw Error(ErrorKind::SchemaError, "field 'counts' must hold nonnegative integers");
      }
      counts.push_back(c.get<std::uint64_t>());
    }
    return MaskEntry{decode_rle(counts, height, width), score, std::move(source)};
  }
  if (format == "png") {
    if (!e.contains("path") || !e["path"].is_string()) {
      throw Error(ErrorKind::SchemaError, "field 'path' missing or not a string");
    }
    std::filesystem::path p = e["path"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return MaskEntry{load_png_mask(p, height, width), score, std::move(source)};
  }
  throw Error(ErrorKind::SchemaError, "field 'format' must be \"rle\" or \"png\", got \"" + format + "\"");
}

}  // namespace

MaskSet load_mask_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open " + path.string());

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::SchemaError, path.string() + ": top level must be an object");

  MaskSet set;
  try {
    if (!doc.contains("image") || !doc["image"].is_string()) {
      throw Error(ErrorKind::SchemaError, "field 'image' missing or not a string");
    }
    set.image_id = doc["image"].get<std::string>();
    set.height = require_dim(doc, "height");
    set.width = require_dim(doc, "width");
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }

  if (!doc.contains("masks") || doc["masks"].is_null()) return set;
  if (!doc["masks"].is_array()) throw Error(ErrorKind::SchemaError, path.string() + ": field 'masks' must be an array");

  const auto base_dir = path.parent_path();
  const auto& masks = doc["masks"];
  set.entries.reserve(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    try {
      set.entries.push_back(parse_entry(masks[i], base_dir, set.height, set.width));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ": masks[" + std::to_string(i) + "]: " + e.detail());
    }
  }
  return set;
}

void write_mask_manifest(const std::filesystem::path& path, const MaskSet& masks) {
  masks.validate();
  nlohmann::ordered_json doc;
  doc["image"] = masks.image_id;
  doc["height"] = masks.height;
  doc["width"] = masks.width;
  doc["masks"] = nlohmann::ordered_json::array();
  for (const auto& entry : masks.entries) {
    nlohmann::ordered_json e;
    e["format"] = "rle";
    e["counts"] = encode_rle(entry.mask);
    if (entry.stability_score) e["stability_score"] = *entry.stability_score;
    if (!entry.source.empty()) e["source"] = entry.source;
    doc["masks"].push_back(std::move(e));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot create " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace samaug
