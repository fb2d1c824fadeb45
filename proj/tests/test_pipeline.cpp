#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "oracles.hpp"
#include "samaug/csv.hpp"
#include "samaug/dataset.hpp"
#include "samaug/experiment.hpp"
#include "samaug/f32p.hpp"
#include "samaug/genmask.hpp"
#include "samaug/synthetic.hpp"
#include "samaug/toy_classifier.hpp"
#include "test_support.hpp"

using namespace samaug;
using samaug::test::TempDir;
namespace fs = std::filesystem;

namespace {

// Three images, the middle one without masks.
DatasetManifest small_manifest(const fs::path& dir) {
  std::mt19937_64 rng(31);
  DatasetManifest m;
  m.num_classes = 2;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto img = samaug::test::random_image(rng, 10, 12);
    const auto image_path = dir / ("img" + std::to_string(i) + ".f32p");
    write_f32p(img, image_path);
    DatasetRow row{"img" + std::to_string(i), fs::absolute(image_path), std::nullopt, i % 2};
    if (i != 1) {
      auto set = samaug::test::random_mask_set(rng, 10, 12, 3);
      set.image_id = row.id;
      const auto mpath = dir / ("img" + std::to_string(i) + ".json");
      write_mask_manifest(mpath, set);
      row.mask_manifest_path = fs::absolute(mpath);
    }
    m.rows.push_back(row);
  }
  return m;
}

ExperimentConfig small_experiment(const fs::path& out, int workers = 1) {
  ExperimentConfig cfg;
  SyntheticParams p;
  p.n_per_class = 20;
  p.image_size = 32;
  p.disk_radius = 5;
  cfg.synthetic = p;
  cfg.output_dir = out;
  cfg.workers = workers;
  cfg.genmask.min_area = 20;
  return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("f32p examples") {
    TempDir dir;
    const ImageTensor tiny(1, 1, 3, std::vector<float>{0.0f, 1.0f, 2.0f});
    write_f32p(tiny, dir / "t.f32p");
    const auto bytes = samaug::test::read_bytes(dir / "t.f32p");
    REQUIRE(bytes.size() == 28);
    CHECK(std::memcmp(bytes.data(), "F32P", 4) == 0);
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 1);
    CHECK(bytes[12] == 3);
    CHECK(read_f32p(dir / "t.f32p").bit_equal(tiny));

    std::mt19937_64 rng(17);
    const auto img = samaug::test::random_image(rng, 17, 23);
    write_f32p(img, dir / "r.f32p");
    CHECK(read_f32p(dir / "r.f32p").bit_equal(img));

    auto enc = encode_f32p(img);
    enc[3] = 'Q';
    CHECK_ERROR_KIND(decode_f32p(enc), ErrorKind::BadMagic);
    enc = encode_f32p(img);
    enc.pop_back();
    CHECK_ERROR_KIND(decode_f32p(enc), ErrorKind::TruncatedFile);
    enc = encode_f32p(img);
    enc.push_back(0);
    CHECK_ERROR_KIND(decode_f32p(enc), ErrorKind::TruncatedFile);
    enc.resize(10);
    CHECK_ERROR_KIND(decode_f32p(enc), ErrorKind::TruncatedFile);
    std::vector<std::uint8_t> huge = {'F', '3', '2', 'P', 255, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255};
    CHECK_ERROR_KIND(decode_f32p(huge), ErrorKind::DimOverflow);
    std::vector<std::uint8_t> zero = {'F', '3', '2', 'P', 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
    CHECK_ERROR_KIND(decode_f32p(zero), ErrorKind::DimOverflow);

    // Special values survive: NaN payloads, infinities, signed zero.
    const ImageTensor special(1, 4, 1, std::vector<float>{-0.0f, INFINITY, -INFINITY, std::nanf("7")});
    CHECK(decode_f32p(encode_f32p(special)).bit_equal(special));
  }

  TEST_CASE("load_image dispatches on extension") {
    TempDir dir;
    write_png8(dir / "g.png", Image8{2, 2, 1, {0, 255, 128, 1}});
    const auto t = load_image(dir / "g.png");
    CHECK(t.channels() == 3);
    CHECK(t.at(2, 0, 1) == 1.0f);
    write_f32p(t, dir / "g.f32p");
    CHECK(load_image(dir / "g.f32p").bit_equal(t));
  }

  TEST_CASE("csv helpers") {
    CHECK(split_csv_line("a,\"b,c\",,d") == CsvRow{"a", "b,c", "", "d"});
    CHECK(split_csv_line(join_csv_row({"x\"y", "1,2", ""})) == CsvRow{"x\"y", "1,2", ""});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double v = u(rng) / (1.0 + i);
      CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
  }

  TEST_CASE("dataset manifest round trip and errors") {
    TempDir dir;
    const auto m = small_manifest(dir.path());
    write_dataset_manifest(dir / "manifest.csv", m);
    const auto back = load_dataset_manifest(dir / "manifest.csv");
    REQUIRE(back.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.rows[i].id == m.rows[i].id);
      CHECK(fs::equivalent(back.rows[i].image_path, m.rows[i].image_path));
      CHECK(back.rows[i].mask_manifest_path.has_value() == m.rows[i].mask_manifest_path.has_value());
      CHECK(back.rows[i].label == m.rows[i].label);
    }
    CHECK(back.num_classes == 2);

    samaug::test::write_text(dir / "bad_header.csv", "id,image,label\n");
    CHECK_ERROR_KIND(load_dataset_manifest(dir / "bad_header.csv"), ErrorKind::BadManifest);
    samaug::test::write_text(dir / "dup.csv", "id,image_path,mask_manifest_path,label\na,img0.f32p,,0\na,img0.f32p,,1\n");
    CHECK_ERROR_KIND(load_dataset_manifest(dir / "dup.csv"), ErrorKind::BadManifest);
    samaug::test::write_text(dir / "label.csv", "id,image_path,mask_manifest_path,label\na,img0.f32p,,x\n");
    CHECK_ERROR_KIND(load_dataset_manifest(dir / "label.csv"), ErrorKind::BadManifest);
    samaug::test::write_text(dir / "missing.csv", "id,image_path,mask_manifest_path,label\na,nope.f32p,,0\n");
    CHECK_ERROR_KIND(load_dataset_manifest(dir / "missing.csv"), ErrorKind::BadManifest);
    CHECK_NOTHROW(load_dataset_manifest(dir / "missing.csv", false));
  }

  TEST_CASE("augment_dataset on three rows") {
    TempDir dir;
    const auto m = small_manifest(dir.path());
    const auto outcome = augment_dataset(m, AugmentMode::SamAugC, dir / "out", ExportFormat::F32p, 1);
    CHECK(outcome.failures.empty());
    REQUIRE(outcome.manifest.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto in = read_f32p(m.rows[i].image_path);
      const auto out = read_f32p(outcome.manifest.rows[i].image_path);
      if (i == 1) {
        CHECK(out.bit_equal(in));
      } else {
        CHECK(out.bit_equal(samaug_c(in, load_mask_manifest(*m.rows[i].mask_manifest_path))));
      }
    }
    CHECK(fs::exists(dir / "out" / "manifest.csv"));
    CHECK(load_dataset_manifest(dir / "out" / "manifest.csv").rows.size() == 3);
  }

  TEST_CASE("augment_dataset reports per-row failures") {
    TempDir dir;
    auto m = small_manifest(dir.path());
    fs::remove(m.rows[2].image_path);
    const auto outcome = augment_dataset(m, AugmentMode::SamAugC, dir / "out", ExportFormat::F32p, 2);
    REQUIRE(outcome.failures.size() == 1);
    CHECK(outcome.failures[0].row == 2);
    CHECK(outcome.failures[0].id == "img2");
    CHECK(outcome.manifest.rows.size() == 2);
    CHECK(read_csv(dir / "out" / "failures.csv").rows.size() == 1);
  }

  TEST_CASE("augment_dataset is independent of the worker count") {
    TempDir dir;
    std::mt19937_64 rng(5);
    DatasetManifest m;
    for (std::size_t i = 0; i < 12; ++i) {
      const auto img = samaug::test::random_image(rng, 24, 20);
      write_f32p(img, dir / ("i" + std::to_string(i) + ".f32p"));
      auto set = samaug::test::random_mask_set(rng, 24, 20, 4);
      write_mask_manifest(dir / ("i" + std::to_string(i) + ".json"), set);
      m.rows.push_back({"i" + std::to_string(i), fs::absolute(dir / ("i" + std::to_string(i) + ".f32p")),
                        fs::absolute(dir / ("i" + std::to_string(i) + ".json")), i % 2});
    }
    for (auto format : {ExportFormat::F32p, ExportFormat::Png8}) {
      for (auto mode : {AugmentMode::SamAugC, AugmentMode::SamAug}) {
        fs::remove_all(dir / "a");
        fs::remove_all(dir / "b");
        augment_dataset(m, mode, dir / "a", format, 1);
        augment_dataset(m, mode, dir / "b", format, 8);
        CHECK(samaug::test::snapshot_tree(dir / "a") == samaug::test::snapshot_tree(dir / "b"));
      }
    }
  }

  TEST_CASE("png8 export mapping") {
    CHECK(to_png8_value(2.0f) == 255);
    CHECK(to_png8_value(0.0f) == 0);
    CHECK(to_png8_value(1.0f) == 128);
    CHECK(to_png8_value(-1.0f) == 0);
    CHECK(to_png8_value(5.0f) == 255);
    CHECK(parse_export_format("png8") == ExportFormat::Png8);
    CHECK_ERROR_KIND(parse_export_format("jpeg"), ErrorKind::BadConfig);
  }

  TEST_CASE("output_stem") {
    CHECK(output_stem("abc", 3) == "abc");
    CHECK(output_stem("a/b", 3) != output_stem("a_b", 4));
    CHECK(output_stem("", 0) != output_stem("", 1));
  }

  TEST_CASE("toy classifier features") {
    const auto f = extract_features(ImageTensor(4, 4, 3, 0.5f));
    CHECK(f == Features{0.5, 0.0, 0.5, 0.0, 0.5, 0.0});

    ImageTensor half(4, 4, 3, 0.0f);
    for (std::size_t i = 8; i < 16; ++i) half.plane(0)[i] = 1.0f;
    const auto h = extract_features(half);
    CHECK(h[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; ++k) {
      const auto img = samaug::test::random_image(rng, 11, 13);
      const auto fr = extract_features(img);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const auto [mean, sd] = oracle::mean_std(img.plane(ch));
        CHECK(std::abs(fr[2 * ch] - mean) <= 1e-6);
        CHECK(std::abs(fr[2 * ch + 1] - sd) <= 1e-6);
      }
    }
    CHECK_ERROR_KIND(extract_features(ImageTensor(2, 2, 1)), ErrorKind::DimMismatch);
  }

  TEST_CASE("toy classifier training") {
    const Features a{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, b{0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
    const std::vector<Features> two{a, b};
    const std::vector<std::size_t> labels{0, 1};
    auto model = train_toy(two, labels, 2);
    CHECK(model.centroids[0] == a);
    CHECK(model.centroids[1] == b);

    const std::vector<Features> doubled{a, b, a, b};
    const std::vector<std::size_t> labels2{0, 1, 0, 1};
    const auto model2 = train_toy(doubled, labels2, 2);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < 6; ++j)
        CHECK(model2.centroids[k][j] == doctest::Approx(model.centroids[k][j]).epsilon(1e-15));

    const std::vector<std::size_t> only0{0, 0};
    CHECK_ERROR_KIND(train_toy(two, only0, 2), ErrorKind::MissingClass);
  }

  TEST_CASE("toy classifier centroids on a synthetic set match per-class means") {
    TempDir dir;
    SyntheticParams p;
    p.n_per_class = 8;
    p.image_size = 16;
    p.disk_radius = 3;
    const auto manifest = generate_synthetic_dataset(p, dir.path());
    const auto model = train_toy(manifest, AugmentMode::None);
    std::array<Features, 2> sum{};
    std::array<double, 2> n{};
    for (const auto& row : manifest.rows) {
      const auto img = load_image(row.image_path);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const auto [mean, sd] = oracle::mean_std(img.plane(ch));
        sum[row.label][2 * ch] += mean;
        sum[row.label][2 * ch + 1] += sd;
      }
      n[row.label] += 1;
    }
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(model.centroids[k][j] - sum[k][j] / n[k]) <= 1e-9);
  }

  TEST_CASE("toy classifier prediction") {
    ToyClassifierModel model{{Features{0, 0, 0, 0, 0, 0}, Features{1, 1, 1, 1, 1, 1}}, 0.01};
    const auto p = predict_toy(model, Features{1, 1, 1, 1, 1, 1});
    CHECK(p[1] > 0.99);
    CHECK(p.normalized());
    const auto u = predict_toy(model, Features{0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("synthetic data is deterministic") {
    TempDir dir;
    SyntheticParams p;
    p.n_per_class = 6;
    p.image_size = 24;
    p.disk_radius = 4;
    generate_synthetic_dataset(p, dir / "a", 1);
    generate_synthetic_dataset(p, dir / "b", 8);
    CHECK(samaug::test::snapshot_tree(dir / "a") == samaug::test::snapshot_tree(dir / "b"));
    p.seed = 43;
    generate_synthetic_dataset(p, dir / "c", 1);
    CHECK(samaug::test::snapshot_tree(dir / "a") != samaug::test::snapshot_tree(dir / "c"));
  }

  TEST_CASE("synthetic parameter validation") {
    SyntheticParams p;
    p.disk_radius = 40;
    CHECK_ERROR_KIND(p.validate(), ErrorKind::BadGeometry);
    p = {};
    p.n_per_class = 0;
    CHECK_ERROR_KIND(p.validate(), ErrorKind::BadGeometry);
    p = {};
    p.intensity_delta = 1.5;
    CHECK_ERROR_KIND(p.validate(), ErrorKind::BadGeometry);
  }

  TEST_CASE("zero intensity delta leaves classes indistinguishable") {
    TempDir dir;
    SyntheticParams p;
    p.intensity_delta = 0.0;
    p.n_per_class = 100;
    p.image_size = 32;
    p.disk_radius = 5;
    auto manifest = generate_synthetic_dataset(p, dir.path(), 4);
    const auto features = dataset_features(manifest, AugmentMode::None, 4);
    // Train on even rows, evaluate on odd rows.
    std::vector<Features> train;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < features.size(); i += 2) {
      train.push_back(features[i]);
      labels.push_back(manifest.rows[i].label);
    }
    const auto model = train_toy(train, labels, 2);
    double correct = 0, total = 0;
    for (std::size_t i = 1; i < features.size(); i += 2) {
      correct += argmax_label(predict_toy(model, features[i])) == manifest.rows[i].label ? 1 : 0;
      total += 1;
    }
    const double acc = correct / total;
    CHECK(acc >= 0.4);
    CHECK(acc <= 0.6);
  }

  TEST_CASE("genmask recovers a high-contrast disk") {
    SyntheticParams p;
    p.intensity_delta = 0.8;
    p.noise_sigma = 0.02;
    p.n_per_class = 30;
    GenMaskConfig cfg;
    cfg.min_area = 20;
    for (std::size_t i = p.n_per_class; i < 2 * p.n_per_class; ++i) {
      const auto item = synthesize_item(p, i);
      REQUIRE(item.disk.has_value());
      BinaryMask raster(p.image_size, p.image_size);
      for (std::size_t r = 0; r < p.image_size; ++r)
        for (std::size_t c = 0; c < p.image_size; ++c) raster.set(r, c, item.disk->covers(r, c));
      const auto set = generate_masks(to_unit_float(item.image), cfg);
      REQUIRE(set.entries.size() == 1);
      std::size_t inter = 0, uni = 0;
      for (std::size_t k = 0; k < raster.size(); ++k) {
        inter += raster.bits()[k] && set.entries[0].mask.bits()[k];
        uni += raster.bits()[k] || set.entries[0].mask.bits()[k];
      }
      CHECK(static_cast<double>(inter) / static_cast<double>(uni) >= 0.9);
    }
  }

  TEST_CASE("run_experiment structure") {
    TempDir dir;
    auto cfg = small_experiment(dir / "out");
    const auto rep = run_experiment(cfg);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].name == "raw");
    CHECK(rep.rows[1].name == "augmented");
    CHECK(rep.rows[2].name == "ensemble");
    CHECK(rep.train_items + rep.test_items == 40);
    CHECK(rep.test_items == 20);
    for (const char* f : {"predictions_raw.csv", "predictions_aug.csv", "predictions_ensemble.csv", "metrics.csv"}) {
      CHECK(fs::exists(dir / "out" / f));
    }
    CHECK(rep.find("augmented") != nullptr);
    CHECK(rep.find("nope") == nullptr);
    CHECK(format_report(rep).find("augmented") != std::string::npos);
  }

  TEST_CASE("run_experiment sweep") {
    TempDir dir;
    auto cfg = small_experiment(dir / "out");
    cfg.sweep = {EnsembleSpec::parse("vote"), EnsembleSpec::parse("entropy"), EnsembleSpec::parse("avg"),
                 EnsembleSpec::parse("wavg:0.3,0.7")};
    const auto rep = run_experiment(cfg, true);
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.rows[2].name == "ensemble/vote");
    CHECK(rep.rows[3].name == "ensemble/entropy");
    CHECK(rep.rows[4].name == "ensemble/avg");
    CHECK(rep.rows[5].name == "ensemble/wavg[0.3,0.7]");
    CHECK(fs::exists(dir / "out" / "predictions_ensemble_wavg_0.3_0.7.csv"));
  }

  TEST_CASE("prediction CSVs reproduce the in-memory ensemble") {
    TempDir dir;
    auto cfg = small_experiment(dir / "out");
    run_experiment(cfg);
    const auto raw = read_predictions(dir / "out" / "predictions_raw.csv");
    const auto aug = read_predictions(dir / "out" / "predictions_aug.csv");
    const auto ens = read_predictions(dir / "out" / "predictions_ensemble.csv");
    REQUIRE(raw.size() == ens.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(raw[i].id == ens[i].id);
      const auto combined = combine(cfg.ensemble, PredictionVector::probabilities(raw[i].probs),
                                    PredictionVector::probabilities(aug[i].probs));
      CHECK(combined.values() == ens[i].probs);
    }
  }

  TEST_CASE("run_experiment is deterministic across runs and worker counts") {
    TempDir dir;
    run_experiment(small_experiment(dir / "a", 1), true);
    run_experiment(small_experiment(dir / "b", 8), true);
    const char* files[] = {"predictions_raw.csv", "predictions_aug.csv", "metrics.csv",
                           "predictions_ensemble_wavg_0.3_0.7.csv"};
    for (const char* f : files) {
      CAPTURE(f);
      CHECK(samaug::test::read_bytes(dir / "a" / f) == samaug::test::read_bytes(dir / "b" / f));
    }
  }

  TEST_CASE("experiment config loading") {
    TempDir dir;
    samaug::test::write_text(dir / "c.toml", R"(
seed = 7
output_dir = "res"
workers = 3

[dataset]
kind = "synthetic"
n_per_class = 10
image_size = 32
disk_radius = 4.0

[augment]
mode = "samaug"
min_area = 12
connectivity = 4

[ensemble]
scheme = "wavg"
weights = [0.6, 0.4]
sweep = ["vote", "wavg:0.7,0.3"]
)");
    const auto cfg = load_experiment_config(dir / "c.toml");
    REQUIRE(cfg.synthetic.has_value());
    CHECK(cfg.synthetic->n_per_class == 10);
    CHECK(cfg.synthetic->seed == 7);
    CHECK(cfg.mode == AugmentMode::SamAug);
    CHECK(cfg.genmask.min_area == 12);
    CHECK(cfg.genmask.connectivity == 4);
    CHECK(cfg.ensemble.weights.w1 == 0.6);
    CHECK(cfg.sweep.size() == 2);
    CHECK(cfg.workers == 3);
    CHECK(cfg.output_dir == dir / "res");

    samaug::test::write_text(dir / "bad.toml", "[dataset]\nkind = \"folder\"\n");
    CHECK_ERROR_KIND(load_experiment_config(dir / "bad.toml"), ErrorKind::BadConfig);
    samaug::test::write_text(dir / "weights.toml", "[dataset]\nkind = \"synthetic\"\n[ensemble]\nweights = [-1.0, 2.0]\n");
    CHECK_ERROR_KIND(load_experiment_config(dir / "weights.toml"), ErrorKind::BadWeights);
    samaug::test::write_text(dir / "syntax.toml", "seed = = 3\n");
    CHECK_ERROR_KIND(load_experiment_config(dir / "syntax.toml"), ErrorKind::BadConfig);
  }
}
