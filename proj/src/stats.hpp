#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hash.hpp"

namespace qhfmp {

enum class ModificationKind { flip_bit, insert_bit, delete_bit };

// Returns a modified copy; the original is untouched. `value` is only used
// for insert_bit.
BitMessage perturb(const BitMessage& msg, ModificationKind kind, std::size_t position,
                   uint8_t value = 0);

uint32_t hamming_distance(const Digest& a, const Digest& b);

// Number of positions at which the byte views agree (the hit count).
uint32_t equal_byte_count(const Digest& a, const Digest& b);

// (1/g) * sum_j |t(a_j) - t(b_j)| over the byte views.
double mean_abs_byte_diff(const Digest& a, const Digest& b);

// sum p log2(p/q); terms with p = 0 contribute nothing, p > 0 where q = 0 is
// an error (the divergence is undefined in that direction).
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Symmetric, in [0, 1] with base-2 logs: mean of the KL divergences of p and
// q from their midpoint.
double js_divergence(std::span<const double> p, std::span<const double> q);

// Expected hit-count histogram for independent uniform byte pairs:
// P(w) = C(g,w) (1/256)^w (255/256)^(g-w), counts rounded to nearest.
struct BinomialHitModel {
  std::vector<double> probabilities;    // size g + 1
  std::vector<int64_t> expected_counts;  // round(trials * P(w))
};
BinomialHitModel binomial_expected(int byte_count, uint64_t trials);

// Mean |x - y| over independent uniform bytes, rounded to two decimals.
inline constexpr double kTheoreticalByteDiff = 85.33;

// Sample standard deviation with divisor (count - 1); nullopt when count < 2.
template <class T>
std::optional<double> sample_std(std::span<const T> values) {
  if (values.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (const T& v : values) mean += static_cast<double>(v);
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (const T& v : values) {
    const double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

// Where trial messages come from. Synthetic mode draws uniform random bits;
// dataset mode samples records (with replacement) from a JSON-lines file and
// hashes the UTF-8 text of one field.
struct MessageSource {
  enum class Mode { synthetic, dataset };

  Mode mode = Mode::synthetic;
  std::size_t synthetic_bits = 4096;
  std::string dataset_path;
  std::string dataset_field = "abstract";
};

// A fully specified experiment. Identical configs produce byte-identical
// reports for any thread count: trial i draws everything it needs from a
// stream seeded with derive_seed(seed, i), in this order: message (dataset
// record index, or the message bytes), flip position, then — only when the
// run covers all modification kinds — insert position, inserted bit, delete
// position.
struct TrialConfig {
  HashParams params;
  uint32_t trials = 10000;
  uint64_t seed = 0;
  MessageSource source;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct DiffusionReport {
  uint32_t trials = 0;
  int digest_bits = 0;
  uint64_t total_changed_bits = 0;
  double mean_changed_bits = 0.0;                    // mean Hamming distance
  double changed_percent = 0.0;                      // mean changed probability, in %
  std::optional<double> std_changed_bits;            // sample std of the Hamming distance
  std::optional<double> std_changed_percent;         // same, as a percentage of n*m
  std::optional<double> composite_indicator;         // (std_changed_percent + |P - 50|) / 2
  std::vector<uint32_t> per_trial_changed_bits;
};

struct UniformReport {
  uint32_t trials = 0;
  int digest_bits = 0;
  uint64_t total_changed_bits = 0;
  std::vector<uint32_t> flip_counts;      // per bit position
  double mean_flip_count = 0.0;
  std::optional<double> std_flip_count;
};

struct CollisionReport {
  uint32_t trials = 0;
  int digest_bytes = 0;
  std::vector<uint64_t> hits_observed;    // W^e(w), w = 0..g
  std::vector<int64_t> hits_expected;     // rounded binomial counts
  std::vector<double> prob_observed;
  std::vector<double> prob_expected;
  double kl_divergence = 0.0;             // D(observed || expected), base 2
  double mean_abs_byte_diff = 0.0;
  double theoretical_abs_byte_diff = kTheoreticalByteDiff;
};

struct SensitivityReport {
  struct Exhibit {
    std::string original_hex;
    std::string modified_hex;
    std::vector<uint32_t> changed_bit_positions;  // 1-based
  };

  uint32_t trials = 0;
  int digest_bits = 0;
  // Index 0..2 = flip / insert / delete comparisons against the original.
  std::array<double, 3> mean_js{};
  std::array<std::vector<uint32_t>, 3> flip_counts;
  std::array<Exhibit, 3> exhibits;  // from the first trial
  std::vector<std::array<double, 3>> per_trial_js;
};

DiffusionReport diffusion_confusion(const TrialConfig& cfg);
UniformReport uniform_distribution(const TrialConfig& cfg);
CollisionReport collision_test(const TrialConfig& cfg);
SensitivityReport sensitivity_test(const TrialConfig& cfg);

// All three byte-pair suites computed from one trial stream; cheaper than
// three separate runs and guarantees mean_flip_count == trials * P / 100.
struct PairSuite {
  DiffusionReport diffusion;
  UniformReport uniform;
  CollisionReport collision;
};
PairSuite pair_suite(const TrialConfig& cfg);

// Angle grid for the stability sweep: divide (0, pi/2) into `divisions`
// subintervals and take every `step`-th interior endpoint starting at the
// first, i.e. k in {1, 1 + step, ...} up to divisions - 1.
std::vector<int> sweep_grid_ks(int divisions, int step);
double sweep_angle(int k, int divisions);

struct StabilityCell {
  int k0 = 0;
  int k1 = 0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  std::array<double, 3> mean_js{};
  double changed_percent = 0.0;
  std::optional<double> std_changed_percent;
  double mean_flip_count = 0.0;
  std::optional<double> std_flip_count;
  double kl_divergence = 0.0;
  double abs_byte_diff_gap = 0.0;  // |observed - theoretical| mean byte difference
};

struct StabilityGrid {
  int divisions = 30;
  int grid_step = 1;
  std::vector<int> k0_values;
  std::vector<int> k1_values;
  uint32_t trials_per_cell = 0;
  std::vector<StabilityCell> cells;  // row-major over (k0, k1)
};

// base.params supplies n, m, l and alpha; theta0/theta1 come from the grid.
// All cells reuse the same trial stream (same master seed), so cell results
// differ only through the coin angles and a single-cell sweep at a preset's
// angles reproduces the standalone suites exactly.
struct SweepConfig {
  TrialConfig base;
  int divisions = 30;
  int grid_step = 1;
  std::optional<std::pair<int, int>> single_cell;
  std::function<void(int done, int total)> progress;
};

StabilityGrid stability_sweep(const SweepConfig& cfg);

}  // namespace qhfmp
