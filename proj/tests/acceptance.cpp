// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "samaug/augment.hpp"
#include "samaug/ensemble.hpp"
#include "samaug/experiment.hpp"
#include "samaug/f32p.hpp"
#include "samaug/maskio.hpp"
#include "samaug/metrics.hpp"
#include "test_support.hpp"

using namespace samaug;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

PredictionVector random_probs(std::mt19937_64& rng, std::size_t n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return PredictionVector::unnormalized(std::move(v)).renormalized();
}

Outcome ac1() {
  const auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(0xA1000 + seed);
    std::uniform_int_distribution<std::size_t> dim(1, 32), count(0, 20);
    const std::size_t h = dim(rng), w = dim(rng);
    const auto img = test::random_image(rng, h, w);
    const auto set = test::random_mask_set(rng, h, w, count(rng));
    if (!samaug_c(img, set).bit_equal(oracle::samaug_c(img, set))) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0, fmt("%.0f mismatches / 1000, %.2f s (limit 10 s)", double(mismatches), secs)};
}

Outcome ac2() {
  std::size_t failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(0xA2000 + seed);
    std::uniform_int_distribution<std::size_t> dim(1, 48), copies(1, 5);
    const std::size_t h = dim(rng), w = dim(rng);
    const auto img = test::random_image(rng, h, w);
    if (!samaug_c(img, MaskSet{"e", h, w, {}}).bit_equal(img)) ++failures;
    MaskSet full{"f", h, w, {}};
    for (std::size_t k = copies(rng); k > 0; --k) full.entries.push_back({BinaryMask(h, w, true), std::nullopt, ""});
    if (!samaug_c(img, full).bit_equal(img)) ++failures;
  }
  return {failures == 0, fmt("%.0f non-identical outputs / 200", double(failures))};
}

Outcome ac3() {
  std::mt19937_64 rng(0xA3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> classes(2, 10);
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = classes(rng);
    const auto p1 = random_probs(rng, n), p2 = random_probs(rng, n);
    const double w1 = u(rng);
    const EnsembleWeights w{w1, 1.0 - w1};
    std::vector<double> no_half(n);
    for (std::size_t k = 0; k < n; ++k) no_half[k] = w.w1 * p1[k] + w.w2 * p2[k];
    if (argmax_label(ensemble_weighted_average(p1, p2, w)) != argmax_label(PredictionVector::unnormalized(no_half)))
      ++violations;
    if (argmax_label(ensemble_direct_average(p1, p2)) !=
        argmax_label(ensemble_weighted_average(p1, p2, EnsembleWeights{0.5, 0.5})))
      ++violations;
  }
  return {violations == 0, fmt("%.0f violations / 10000 triples", double(violations))};
}

Outcome ac4() {
  std::mt19937_64 rng(0xA4);
  std::uniform_int_distribution<std::size_t> classes(2, 64);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_probs(rng, classes(rng));
    worst = std::max(worst, std::abs(entropy_bits(p) - oracle::entropy_bits(p.values())));
  }
  bool one_hot_ok = true;
  double worst_uniform = 0.0;
  for (std::size_t n = 2; n <= 64; ++n) {
    for (std::size_t hot = 0; hot < n; ++hot) {
      std::vector<double> v(n, 0.0);
      v[hot] = 1.0;
      if (entropy_bits(PredictionVector::probabilities(v)) != 0.0) one_hot_ok = false;
    }
    const std::vector<double> uni(n, 1.0 / static_cast<double>(n));
    worst_uniform = std::max(worst_uniform, std::abs(entropy_bits(PredictionVector::probabilities(uni)) -
                                                     std::log2(static_cast<double>(n))));
  }
  const bool pass = worst <= 1e-12 && one_hot_ok && worst_uniform <= 1e-12;
  return {pass, fmt("max |err| %.3g (random), %.3g (uniform), one-hot exact: ", worst, worst_uniform) +
                    (one_hot_ok ? "yes" : "no")};
}

Outcome ac5() {
  std::mt19937_64 rng(0xA5);
  std::uniform_int_distribution<int> len(2, 200), coarse(0, 20), bit(0, 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int inst = 0; inst < 500; ++inst) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> s(n);
    std::vector<int> y(n);
    const bool ties = inst % 2 == 0;
    for (auto& v : s) v = ties ? coarse(rng) / 20.0 : u(rng);
    for (auto& v : y) v = bit(rng);
    y[0] = 0;
    y[1] = 1;
    std::shuffle(y.begin(), y.end(), rng);
    worst = std::max(worst, std::abs(binary_auc(s, y) - oracle::auc_all_pairs(s, y)));
  }
  const std::vector<double> hs{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> hy{0, 0, 1, 1};
  const double hand = binary_auc(hs, hy);
  return {worst <= 1e-12 && hand == 0.75, fmt("max |err| %.3g over 500 instances, hand case %.17g", worst, hand)};
}

ExperimentConfig ac6_config(const fs::path& out, int workers) {
  ExperimentConfig cfg;
  SyntheticParams p;
  p.seed = 42;
  p.n_per_class = 200;
  p.image_size = 64;
  p.disk_radius = 8;
  p.intensity_delta = 0.12;
  p.noise_sigma = 0.10;
  cfg.synthetic = p;
  cfg.seed = 42;
  cfg.mode = AugmentMode::SamAugC;
  cfg.ensemble = EnsembleSpec::parse("wavg:0.3,0.7");
  cfg.output_dir = out;
  cfg.workers = workers;
  return cfg;
}

Outcome ac6(const fs::path& scratch) {
  const auto t0 = Clock::now();
  const auto rep = run_experiment(ac6_config(scratch / "ac6", 1));
  const double secs = seconds_since(t0);
  const double raw = rep.find("raw")->metrics.acc;
  const double aug = rep.find("augmented")->metrics.acc;
  const double ens = rep.find("ensemble")->metrics.acc;
  const bool pass = aug - raw >= 0.10 && ens >= std::max(raw, aug) - 0.02 && secs < 60.0;
  return {pass, fmt("acc raw %.4f, augmented %.4f, wavg(0.3,0.7) %.4f; %.2f s (limit 60 s)", raw, aug, ens, secs)};
}

std::vector<std::pair<std::string, std::vector<char>>> csv_outputs(const fs::path& dir) {
  std::vector<std::pair<std::string, std::vector<char>>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") out.emplace_back(e.path().filename().string(), test::read_bytes(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome ac7(const fs::path& scratch) {
  const auto run = [&](const std::string& name, int workers) {
    const auto rep = run_experiment(ac6_config(scratch / name, workers), true);
    return std::make_pair(csv_outputs(scratch / name), format_report(rep));
  };
  const auto a = run("ac7_a", 1);
  const auto b = run("ac7_b", 1);
  const auto c = run("ac7_c", 8);
  const bool twice = a == b;
  const bool workers = a == c;
  return {twice && workers && !a.first.empty(),
          fmt("%.0f CSV files compared; repeat run identical: ", double(a.first.size())) + (twice ? "yes" : "no") +
              ", 1 vs 8 workers identical: " + (workers ? "yes" : "no")};
}

Outcome ac8(const fs::path& scratch) {
  std::size_t rle_failures = 0, f32p_failures = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(0xA8000 + seed);
    std::uniform_int_distribution<std::size_t> dim(1, 64), chans(1, 4);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    const std::size_t h = dim(rng), w = dim(rng);
    const auto m = seed % 2 == 0 ? test::random_mask(rng, h, w, density(rng)) : test::random_rect_mask(rng, h, w);
    if (!(decode_rle(encode_rle(m), h, w) == m)) ++rle_failures;

    const auto img = test::random_image(rng, dim(rng), dim(rng), chans(rng));
    const auto path = scratch / "ac8.f32p";
    write_f32p(img, path);
    if (!read_f32p(path).bit_equal(img)) ++f32p_failures;
  }
  return {rle_failures == 0 && f32p_failures == 0,
          fmt("RLE %.0f / 1000 failures, f32p %.0f / 1000 failures", double(rle_failures), double(f32p_failures))};
}

}  // namespace

int main() {
  test::TempDir scratch("samaug_acceptance");
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC-1 samaug_c equals the per-pixel oracle", ac1},
      {"AC-2 passthrough exactness", ac2},
      {"AC-3 ensemble argmax invariance", ac3},
      {"AC-4 entropy correctness", ac4},
      {"AC-5 AUC oracle equivalence", ac5},
      {"AC-6 augmented branch beats raw branch", [&] { return ac6(scratch.path()); }},
      {"AC-7 run-experiment determinism", [&] { return ac7(scratch.path()); }},
      {"AC-8 codec round trips", [&] { return ac8(scratch.path()); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
