#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "report.hpp"
#include "rng.hpp"
#include "stats.hpp"

using namespace qhfmp;

namespace {

TrialConfig small_config(uint32_t trials, std::size_t bits, uint64_t seed) {
  TrialConfig cfg;
  cfg.params = standard_instance("296");
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.source.mode = MessageSource::Mode::synthetic;
  cfg.source.synthetic_bits = bits;
  return cfg;
}

RunInfo info_for(const TrialConfig& cfg) {
  RunInfo info;
  info.params = cfg.params;
  info.trials = cfg.trials;
  info.seed = cfg.seed;
  info.source = cfg.source;
  return info;
}

std::vector<double> random_distribution(SplitMix64& rng, std::size_t size) {
  std::vector<double> p(size);
  double total = 0.0;
  for (double& v : p) {
    v = static_cast<double>(rng.next_below(1000) + 1);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

// log-domain binomial evaluation, independent of the production recurrence
double log_domain_binomial(int g, int w) {
  const double log_choose =
      std::lgamma(g + 1.0) - std::lgamma(w + 1.0) - std::lgamma(g - w + 1.0);
  return std::exp(log_choose + w * std::log(1.0 / 256.0) +
                  (g - w) * std::log(255.0 / 256.0));
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    path_ = (std::filesystem::temp_directory_path() /
             ("qhfmp_test_" + std::to_string(counter_++) + "_" +
              std::to_string(::getpid()) + ".jsonl"))
                .string();
    std::ofstream out(path_, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

}  // namespace

TEST_CASE("perturb") {
  const BitMessage msg{{1, 0, 1}};

  const BitMessage flipped = perturb(msg, ModificationKind::flip_bit, 1);
  CHECK(flipped.bits == std::vector<uint8_t>{1, 1, 1});
  CHECK(msg.bits == std::vector<uint8_t>{1, 0, 1});  // original untouched

  const BitMessage inserted = perturb(BitMessage{{1, 0}}, ModificationKind::insert_bit, 2, 1);
  CHECK(inserted.bits == std::vector<uint8_t>{1, 0, 1});

  const BitMessage deleted = perturb(msg, ModificationKind::delete_bit, 0);
  CHECK(deleted.bits == std::vector<uint8_t>{0, 1});

  CHECK_THROWS_AS(perturb(msg, ModificationKind::flip_bit, 3), Error);
  CHECK_THROWS_AS(perturb(msg, ModificationKind::insert_bit, 4, 0), Error);
  CHECK_THROWS_AS(perturb(msg, ModificationKind::insert_bit, 0, 2), Error);
  CHECK_THROWS_AS(perturb(msg, ModificationKind::delete_bit, 3), Error);
  CHECK_THROWS_AS(perturb(BitMessage{}, ModificationKind::flip_bit, 0), Error);
}

TEST_CASE("hamming distance") {
  const Digest a(2, 8, {0x0F, 0x00});
  const Digest b(2, 8, {0xF0, 0x00});
  CHECK(hamming_distance(a, b) == 8);
  CHECK(hamming_distance(a, a) == 0);

  const Digest complement(2, 8, {0xF0, 0xFF});
  CHECK(hamming_distance(a, complement) == 16);

  const Digest other_layout(4, 4, {0, 0, 0, 0});
  CHECK_THROWS_AS(hamming_distance(a, other_layout), Error);
}

TEST_CASE("byte comparisons") {
  const Digest a(3, 8, {1, 2, 3});
  CHECK(equal_byte_count(a, a) == 3);
  CHECK(mean_abs_byte_diff(a, a) == 0.0);

  const Digest b(3, 8, {1, 2, 7});
  CHECK(equal_byte_count(a, b) == 2);
  CHECK(mean_abs_byte_diff(a, b) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("kl divergence") {
  const std::vector<double> p{1.0, 0.0};
  const std::vector<double> uniform{0.5, 0.5};
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(p, uniform) == doctest::Approx(1.0));

  const std::vector<double> q{0.0, 1.0};
  CHECK_THROWS_AS(kl_divergence(q, p), Error);  // support violation
  CHECK_THROWS_AS(kl_divergence(p, std::vector<double>{1.0}), Error);
}

TEST_CASE("js divergence") {
  const std::vector<double> p{1.0, 0.0};
  const std::vector<double> q{0.0, 1.0};
  CHECK(js_divergence(p, p) == 0.0);
  CHECK(js_divergence(p, q) == doctest::Approx(1.0));  // disjoint supports

  SplitMix64 rng(57);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> a = random_distribution(rng, 1 + rng.next_below(12));
    const std::vector<double> b = random_distribution(rng, a.size());
    CHECK(kl_divergence(a, a) == 0.0);
    const double js_ab = js_divergence(a, b);
    CHECK(js_ab == js_divergence(b, a));
    CHECK(js_ab >= 0.0);
    CHECK(js_ab <= 1.0 + 1e-12);
  }
}

TEST_CASE("binomial hit model") {
  const BinomialHitModel big = binomial_expected(37, 10000);
  CHECK(big.expected_counts[0] == 8652);
  CHECK(big.expected_counts[1] == 1255);
  CHECK(big.expected_counts[2] == 89);
  CHECK(big.expected_counts[3] == 4);
  for (std::size_t w = 4; w < big.expected_counts.size(); ++w)
    CHECK(big.expected_counts[w] == 0);

  const BinomialHitModel small = binomial_expected(33, 10000);
  CHECK(small.expected_counts[0] == 8788);
  CHECK(small.expected_counts[1] == 1137);
  CHECK(small.expected_counts[2] == 71);
  CHECK(small.expected_counts[3] == 3);

  const BinomialHitModel single = binomial_expected(1, 256);
  CHECK(single.expected_counts[0] == 255);
  CHECK(single.expected_counts[1] == 1);

  double total = 0.0;
  for (double p : big.probabilities) total += p;
  CHECK(std::abs(total - 1.0) < 1e-12);

  CHECK_THROWS_AS(binomial_expected(0, 10), Error);
  CHECK_THROWS_AS(binomial_expected(5, 0), Error);
}

TEST_CASE("binomial model agrees with a log-domain oracle") {
  for (int g : {8, 33, 37, 64}) {
    for (uint64_t trials : {1000ull, 10000ull, 123456ull}) {
      const BinomialHitModel model = binomial_expected(g, trials);
      for (int w = 0; w <= g; ++w) {
        const double oracle = log_domain_binomial(g, w);
        CHECK(model.probabilities[w] == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(model.expected_counts[w] ==
              std::llround(static_cast<double>(trials) * oracle));
      }
    }
  }
}

TEST_CASE("mean absolute byte difference, exhaustive oracle") {
  double sum = 0.0;
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) sum += std::abs(i - j);
  const double oracle = sum / (256.0 * 256.0);
  CHECK(oracle == doctest::Approx(85.33203125));
  CHECK(std::round(oracle * 100.0) / 100.0 == kTheoreticalByteDiff);
}

TEST_CASE("sample std") {
  const std::vector<uint32_t> constant{5, 5, 5, 5};
  CHECK(sample_std<uint32_t>(constant) == 0.0);

  const std::vector<uint32_t> one{5};
  CHECK(!sample_std<uint32_t>(one).has_value());

  const std::vector<double> pair{1.0, 3.0};
  CHECK(*sample_std<double>(pair) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("harness determinism") {
  const TrialConfig cfg = small_config(30, 96, 0xDEADBEEF);
  const RunInfo info = info_for(cfg);

  const std::string first = diffusion_report_json(diffusion_confusion(cfg), info);
  const std::string second = diffusion_report_json(diffusion_confusion(cfg), info);
  CHECK(first == second);

  TrialConfig serial = cfg;
  serial.threads = 1;
  TrialConfig parallel = cfg;
  parallel.threads = 3;
  CHECK(diffusion_report_json(diffusion_confusion(serial), info) == first);
  CHECK(diffusion_report_json(diffusion_confusion(parallel), info) == first);

  TrialConfig other_seed = cfg;
  other_seed.seed = 1;
  CHECK(diffusion_report_json(diffusion_confusion(other_seed), info_for(other_seed)) != first);
}

TEST_CASE("joint pair suite is self-consistent") {
  const TrialConfig cfg = small_config(40, 128, 99);
  const PairSuite suite = pair_suite(cfg);

  CHECK(suite.uniform.total_changed_bits == suite.diffusion.total_changed_bits);
  CHECK(suite.uniform.mean_flip_count ==
        doctest::Approx(cfg.trials * suite.diffusion.changed_percent / 100.0).epsilon(1e-12));

  uint64_t histogram_total = 0;
  for (uint64_t w : suite.collision.hits_observed) histogram_total += w;
  CHECK(histogram_total == cfg.trials);

  // separate runs with the same config give the same indicators
  CHECK(diffusion_confusion(cfg).mean_changed_bits == suite.diffusion.mean_changed_bits);
  CHECK(uniform_distribution(cfg).std_flip_count == suite.uniform.std_flip_count);
  CHECK(collision_test(cfg).kl_divergence == suite.collision.kl_divergence);

  // loose sanity on the avalanche magnitude
  CHECK(suite.diffusion.changed_percent > 30.0);
  CHECK(suite.diffusion.changed_percent < 70.0);
}

TEST_CASE("single-trial reports flag undefined deviations") {
  const TrialConfig cfg = small_config(1, 64, 3);
  const DiffusionReport report = diffusion_confusion(cfg);
  CHECK(!report.std_changed_bits.has_value());
  CHECK(!report.std_changed_percent.has_value());
  CHECK(!report.composite_indicator.has_value());
  const std::string json = diffusion_report_json(report, info_for(cfg));
  CHECK(json.find("\"std_changed_bits\": null") != std::string::npos);
}

TEST_CASE("sensitivity suite") {
  const TrialConfig cfg = small_config(25, 96, 11);
  const SensitivityReport report = sensitivity_test(cfg);

  for (int c = 0; c < 3; ++c) {
    CHECK(report.mean_js[c] > 0.0);
    CHECK(report.mean_js[c] <= 1.0);
  }
  for (const auto& js : report.per_trial_js)
    for (double v : js) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-12);
    }
  for (const auto& ex : report.exhibits) {
    CHECK(ex.original_hex.size() == 74);
    CHECK(ex.modified_hex.size() == 74);
    CHECK(!ex.changed_bit_positions.empty());
    for (uint32_t pos : ex.changed_bit_positions) {
      CHECK(pos >= 1);
      CHECK(pos <= 296);
    }
  }
}

TEST_CASE("changed-bit positions cover the whole digest") {
  const TrialConfig cfg = small_config(100, 256, 17);
  const SensitivityReport report = sensitivity_test(cfg);
  const int nm = cfg.params.digest_bits();
  for (int condition = 0; condition < 3; ++condition) {
    for (int quarter = 0; quarter < 4; ++quarter) {
      uint64_t flips = 0;
      for (int j = quarter * nm / 4; j < (quarter + 1) * nm / 4; ++j)
        flips += report.flip_counts[condition][j];
      CHECK(flips > 0);
    }
  }
}

TEST_CASE("dataset message source") {
  const TempFile dataset(
      R"({"abstract": "walks on cycles with memory", "id": 1})"
      "\n"
      R"({"abstract": "avalanche statistics of digests", "id": 2})"
      "\n"
      R"({"abstract": "parity rules and coin registers", "id": 3})"
      "\n");

  TrialConfig cfg = small_config(8, 0, 5);
  cfg.source.mode = MessageSource::Mode::dataset;
  cfg.source.dataset_path = dataset.path();
  cfg.source.dataset_field = "abstract";
  const DiffusionReport report = diffusion_confusion(cfg);
  CHECK(report.trials == 8);
  CHECK(report.mean_changed_bits > 0.0);

  cfg.source.dataset_path = "/nonexistent/qhfmp.jsonl";
  CHECK_THROWS_AS(diffusion_confusion(cfg), Error);

  const TempFile malformed("this is not json\n");
  cfg.source.dataset_path = malformed.path();
  CHECK_THROWS_AS(diffusion_confusion(cfg), Error);

  const TempFile missing_field(R"({"title": "no abstract here"})"
                               "\n");
  cfg.source.dataset_path = missing_field.path();
  CHECK_THROWS_AS(diffusion_confusion(cfg), Error);

  const TempFile empty_field(R"({"abstract": ""})"
                             "\n");
  cfg.source.dataset_path = empty_field.path();
  CHECK_THROWS_AS(diffusion_confusion(cfg), Error);
}

TEST_CASE("sweep grid enumeration") {
  CHECK(sweep_grid_ks(30, 1).size() == 29);
  CHECK(sweep_grid_ks(30, 1).front() == 1);
  CHECK(sweep_grid_ks(30, 1).back() == 29);

  const std::vector<int> coarse = sweep_grid_ks(30, 4);
  CHECK(coarse == std::vector<int>{1, 5, 9, 13, 17, 21, 25, 29});

  const std::vector<int> spot = sweep_grid_ks(30, 7);
  CHECK(spot == std::vector<int>{1, 8, 15, 22, 29});

  CHECK(sweep_angle(15, 30) == std::numbers::pi / 4.0);  // bit-exact
  CHECK(sweep_angle(20, 30) == std::numbers::pi / 3.0);
  CHECK_THROWS_AS(sweep_angle(0, 30), Error);
  CHECK_THROWS_AS(sweep_angle(30, 30), Error);
}

TEST_CASE("single-cell sweep reproduces the standalone suites") {
  SweepConfig sweep;
  sweep.base = small_config(10, 64, 77);
  sweep.single_cell = std::make_pair(15, 20);  // (pi/4, pi/3) = the standard instance

  const StabilityGrid grid = stability_sweep(sweep);
  REQUIRE(grid.cells.size() == 1);
  const StabilityCell& cell = grid.cells[0];
  CHECK(cell.theta0 == sweep.base.params.theta0);
  CHECK(cell.theta1 == sweep.base.params.theta1);

  const PairSuite suite = pair_suite(sweep.base);
  const SensitivityReport sensitivity = sensitivity_test(sweep.base);
  CHECK(cell.changed_percent == suite.diffusion.changed_percent);
  CHECK(cell.std_changed_percent == suite.diffusion.std_changed_percent);
  CHECK(cell.mean_flip_count == suite.uniform.mean_flip_count);
  CHECK(cell.std_flip_count == suite.uniform.std_flip_count);
  CHECK(cell.kl_divergence == suite.collision.kl_divergence);
  for (int c = 0; c < 3; ++c) CHECK(cell.mean_js[c] == sensitivity.mean_js[c]);
}

TEST_CASE("tiny sweep emits a full grid") {
  SweepConfig sweep;
  sweep.base = small_config(4, 48, 9);
  sweep.divisions = 4;  // ks = {1, 2, 3}
  sweep.grid_step = 1;
  int progress_calls = 0;
  sweep.progress = [&progress_calls](int done, int total) {
    CHECK(total == 9);
    CHECK(done >= 1);
    CHECK(done <= total);
    ++progress_calls;
  };
  const StabilityGrid grid = stability_sweep(sweep);
  CHECK(grid.cells.size() == 9);
  CHECK(progress_calls == 9);
  for (const StabilityCell& cell : grid.cells) {
    CHECK(cell.mean_js[0] > 0.0);
    CHECK(cell.changed_percent > 0.0);
  }

  const std::string csv = stability_grid_csv(grid);
  CHECK(csv.find("k0,k1,theta0,theta1") == 0);
}

TEST_CASE("csv quoting follows rfc 4180") {
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("with,comma") == "\"with,comma\"");
  CHECK(csv_quote("with\"quote") == "\"with\"\"quote\"");
  CHECK(csv_quote("line\nbreak") == "\"line\nbreak\"");
}
