#include "stats.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "rng.hpp"

namespace qhfmp {

namespace {

std::span<const uint8_t> as_bytes(const std::string& text) {
  return {reinterpret_cast<const uint8_t*>(text.data()), text.size()};
}

// JSON-lines dataset, loaded once per run. Records are sampled with
// replacement; malformed lines and unusable records are hard errors so a bad
// dataset cannot silently skew the statistics.
class MessagePool {
 public:
  static MessagePool load(const std::string& path, const std::string& field) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io, "cannot open dataset file: " + path);
    MessagePool pool;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        raise(Errc::invalid_argument,
              path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
      }
      if (!record.is_object() || !record.contains(field) || !record[field].is_string())
        raise(Errc::invalid_argument, path + ":" + std::to_string(line_no) +
                                          ": record lacks string field '" + field + "'");
      std::string text = record[field].get<std::string>();
      if (text.empty())
        raise(Errc::invalid_argument,
              path + ":" + std::to_string(line_no) + ": field '" + field + "' is empty");
      pool.texts_.push_back(std::move(text));
    }
    if (pool.texts_.empty()) raise(Errc::invalid_argument, path + ": dataset has no records");
    return pool;
  }

  std::size_t size() const { return texts_.size(); }
  const std::string& text(std::size_t i) const { return texts_[i]; }

 private:
  std::vector<std::string> texts_;
};

BitMessage random_message(SplitMix64& rng, std::size_t bit_count) {
  std::vector<uint8_t> bytes((bit_count + 7) / 8);
  for (uint8_t& b : bytes) b = rng.next_byte();
  BitMessage msg = bits_from_bytes(bytes);
  msg.bits.resize(bit_count);
  return msg;
}

unsigned resolve_threads(unsigned requested, uint32_t trials) {
  unsigned t = requested ? requested : std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  return static_cast<unsigned>(std::min<uint64_t>(t, std::max<uint32_t>(trials, 1)));
}

// Raw per-trial observables; reduced into the public reports afterwards so
// every floating-point aggregate is accumulated in trial order.
struct RawRun {
  uint32_t trials = 0;
  int digest_bits = 0;
  int digest_bytes = 0;
  bool with_sensitivity = false;
  std::vector<uint32_t> changed_bits;
  std::vector<uint16_t> byte_hits;
  std::vector<double> byte_diff;
  std::vector<uint32_t> flip_counts;
  std::vector<std::array<double, 3>> js;
  std::array<std::vector<uint32_t>, 3> condition_flip_counts;
  std::array<SensitivityReport::Exhibit, 3> exhibits;
};

void accumulate_flips(std::vector<uint32_t>& counts, const Digest& a, const Digest& b) {
  const int bits = a.bit_length();
  for (int i = 0; i < bits; ++i)
    if (a.bit(i) != b.bit(i)) ++counts[i];
}

SensitivityReport::Exhibit make_exhibit(const Digest& original, const Digest& modified) {
  SensitivityReport::Exhibit ex;
  ex.original_hex = original.hex();
  ex.modified_hex = modified.hex();
  for (int i = 0; i < original.bit_length(); ++i)
    if (original.bit(i) != modified.bit(i)) ex.changed_bit_positions.push_back(i + 1);
  return ex;
}

RawRun run_pair_trials(const TrialConfig& cfg, bool with_sensitivity) {
  cfg.params.validate();
  if (cfg.trials == 0) raise(Errc::invalid_argument, "trial count must be positive");

  std::optional<MessagePool> pool;
  if (cfg.source.mode == MessageSource::Mode::dataset)
    pool = MessagePool::load(cfg.source.dataset_path, cfg.source.dataset_field);
  else if (cfg.source.synthetic_bits == 0)
    raise(Errc::invalid_argument, "synthetic message length must be positive");

  const uint32_t trials = cfg.trials;
  const int nm = cfg.params.digest_bits();

  RawRun run;
  run.trials = trials;
  run.digest_bits = nm;
  run.digest_bytes = cfg.params.digest_bytes();
  run.with_sensitivity = with_sensitivity;
  run.changed_bits.resize(trials);
  run.byte_hits.resize(trials);
  run.byte_diff.resize(trials);
  run.flip_counts.assign(nm, 0);
  if (with_sensitivity) {
    run.js.resize(trials);
    for (auto& counts : run.condition_flip_counts) counts.assign(nm, 0);
  }

  const unsigned thread_count = resolve_threads(cfg.threads, trials);

  struct WorkerAccum {
    std::vector<uint32_t> flips;
    std::array<std::vector<uint32_t>, 3> condition_flips;
    std::exception_ptr error;
  };
  std::vector<WorkerAccum> accums(thread_count);

  const auto body = [&](uint32_t trial, WorkerAccum& acc) {
    SplitMix64 rng(derive_seed(cfg.seed, trial));
    BitMessage original =
        pool ? bits_from_bytes(as_bytes(pool->text(rng.next_below(pool->size()))))
             : random_message(rng, cfg.source.synthetic_bits);
    if (original.size() == 0) raise(Errc::invalid_argument, "message source produced no bits");

    const std::size_t flip_pos = rng.next_below(original.size());

    struct Walked {
      std::vector<double> dist;
      Digest digest;
    };
    const auto walk = [&cfg](const BitMessage& m) {
      Walked w;
      w.dist = final_distribution(m, cfg.params);
      w.digest = digest_from_distribution(w.dist, cfg.params);
      return w;
    };

    const Walked w0 = walk(original);
    const Walked w1 = walk(perturb(original, ModificationKind::flip_bit, flip_pos));
    run.changed_bits[trial] = hamming_distance(w0.digest, w1.digest);
    run.byte_hits[trial] = static_cast<uint16_t>(equal_byte_count(w0.digest, w1.digest));
    run.byte_diff[trial] = mean_abs_byte_diff(w0.digest, w1.digest);
    accumulate_flips(acc.flips, w0.digest, w1.digest);

    if (with_sensitivity) {
      const std::size_t insert_pos = rng.next_below(original.size() + 1);
      const uint8_t inserted = rng.next_bit();
      const std::size_t delete_pos = rng.next_below(original.size());
      const Walked w2 = walk(perturb(original, ModificationKind::insert_bit, insert_pos, inserted));
      const Walked w3 = walk(perturb(original, ModificationKind::delete_bit, delete_pos));
      run.js[trial] = {js_divergence(w0.dist, w1.dist), js_divergence(w0.dist, w2.dist),
                       js_divergence(w0.dist, w3.dist)};
      accumulate_flips(acc.condition_flips[0], w0.digest, w1.digest);
      accumulate_flips(acc.condition_flips[1], w0.digest, w2.digest);
      accumulate_flips(acc.condition_flips[2], w0.digest, w3.digest);
      if (trial == 0) {
        run.exhibits[0] = make_exhibit(w0.digest, w1.digest);
        run.exhibits[1] = make_exhibit(w0.digest, w2.digest);
        run.exhibits[2] = make_exhibit(w0.digest, w3.digest);
      }
    }
  };

  const auto worker = [&](unsigned index, uint32_t begin, uint32_t end) {
    WorkerAccum& acc = accums[index];
    acc.flips.assign(nm, 0);
    if (with_sensitivity)
      for (auto& counts : acc.condition_flips) counts.assign(nm, 0);
    try {
      for (uint32_t trial = begin; trial < end; ++trial) body(trial, acc);
    } catch (...) {
      acc.error = std::current_exception();
    }
  };

  if (thread_count == 1) {
    worker(0, 0, trials);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(thread_count);
    const uint32_t base = trials / thread_count;
    const uint32_t rem = trials % thread_count;
    uint32_t begin = 0;
    for (unsigned i = 0; i < thread_count; ++i) {
      const uint32_t end = begin + base + (i < rem ? 1 : 0);
      workers.emplace_back(worker, i, begin, end);
      begin = end;
    }
    for (std::thread& w : workers) w.join();
  }

  for (const WorkerAccum& acc : accums)
    if (acc.error) std::rethrow_exception(acc.error);

  for (const WorkerAccum& acc : accums) {
    for (int j = 0; j < nm; ++j) run.flip_counts[j] += acc.flips[j];
    if (with_sensitivity)
      for (int c = 0; c < 3; ++c)
        for (int j = 0; j < nm; ++j) run.condition_flip_counts[c][j] += acc.condition_flips[c][j];
  }
  return run;
}

DiffusionReport reduce_diffusion(const RawRun& run) {
  DiffusionReport r;
  r.trials = run.trials;
  r.digest_bits = run.digest_bits;
  for (uint32_t b : run.changed_bits) r.total_changed_bits += b;
  r.mean_changed_bits = static_cast<double>(r.total_changed_bits) / run.trials;
  r.changed_percent = r.mean_changed_bits / run.digest_bits * 100.0;
  r.std_changed_bits = sample_std<uint32_t>(run.changed_bits);
  if (r.std_changed_bits) {
    r.std_changed_percent = *r.std_changed_bits / run.digest_bits * 100.0;
    r.composite_indicator = (*r.std_changed_percent + std::abs(r.changed_percent - 50.0)) / 2.0;
  }
  r.per_trial_changed_bits = run.changed_bits;
  return r;
}

UniformReport reduce_uniform(const RawRun& run) {
  UniformReport r;
  r.trials = run.trials;
  r.digest_bits = run.digest_bits;
  for (uint32_t c : run.flip_counts) r.total_changed_bits += c;
  r.flip_counts = run.flip_counts;
  r.mean_flip_count = static_cast<double>(r.total_changed_bits) / run.digest_bits;
  r.std_flip_count = sample_std<uint32_t>(run.flip_counts);
  return r;
}

CollisionReport reduce_collision(const RawRun& run) {
  CollisionReport r;
  r.trials = run.trials;
  r.digest_bytes = run.digest_bytes;
  r.hits_observed.assign(run.digest_bytes + 1, 0);
  for (uint16_t h : run.byte_hits) ++r.hits_observed[h];
  const BinomialHitModel model = binomial_expected(run.digest_bytes, run.trials);
  r.hits_expected = model.expected_counts;
  r.prob_expected = model.probabilities;
  r.prob_observed.resize(r.hits_observed.size());
  for (std::size_t w = 0; w < r.hits_observed.size(); ++w)
    r.prob_observed[w] = static_cast<double>(r.hits_observed[w]) / run.trials;
  r.kl_divergence = qhfmp::kl_divergence(r.prob_observed, r.prob_expected);
  double sum = 0.0;
  for (double d : run.byte_diff) sum += d;
  r.mean_abs_byte_diff = sum / run.trials;
  return r;
}

SensitivityReport reduce_sensitivity(const RawRun& run) {
  SensitivityReport r;
  r.trials = run.trials;
  r.digest_bits = run.digest_bits;
  std::array<double, 3> sums{};
  for (const auto& js : run.js)
    for (int c = 0; c < 3; ++c) sums[c] += js[c];
  for (int c = 0; c < 3; ++c) r.mean_js[c] = sums[c] / run.trials;
  r.flip_counts = run.condition_flip_counts;
  r.exhibits = run.exhibits;
  r.per_trial_js = run.js;
  return r;
}

}  // namespace

BitMessage perturb(const BitMessage& msg, ModificationKind kind, std::size_t position,
                   uint8_t value) {
  BitMessage out = msg;
  switch (kind) {
    case ModificationKind::flip_bit:
      if (position >= msg.size()) raise(Errc::invalid_argument, "flip position out of range");
      out.bits[position] ^= 1u;
      break;
    case ModificationKind::insert_bit:
      if (position > msg.size()) raise(Errc::invalid_argument, "insert position out of range");
      if (value > 1) raise(Errc::invalid_argument, "inserted bit must be 0 or 1");
      out.bits.insert(out.bits.begin() + static_cast<std::ptrdiff_t>(position), value);
      break;
    case ModificationKind::delete_bit:
      if (position >= msg.size()) raise(Errc::invalid_argument, "delete position out of range");
      out.bits.erase(out.bits.begin() + static_cast<std::ptrdiff_t>(position));
      break;
  }
  return out;
}

uint32_t hamming_distance(const Digest& a, const Digest& b) {
  if (a.node_count() != b.node_count() || a.block_bits() != b.block_bits())
    raise(Errc::invalid_argument, "digest layouts differ");
  uint32_t count = 0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i)
    count += static_cast<uint32_t>(std::popcount(a.blocks()[i] ^ b.blocks()[i]));
  return count;
}

uint32_t equal_byte_count(const Digest& a, const Digest& b) {
  if (a.node_count() != b.node_count() || a.block_bits() != b.block_bits())
    raise(Errc::invalid_argument, "digest layouts differ");
  const std::vector<uint8_t> ba = a.bytes();
  const std::vector<uint8_t> bb = b.bytes();
  uint32_t hits = 0;
  for (std::size_t i = 0; i < ba.size(); ++i) hits += (ba[i] == bb[i]);
  return hits;
}

double mean_abs_byte_diff(const Digest& a, const Digest& b) {
  if (a.node_count() != b.node_count() || a.block_bits() != b.block_bits())
    raise(Errc::invalid_argument, "digest layouts differ");
  const std::vector<uint8_t> ba = a.bytes();
  const std::vector<uint8_t> bb = b.bytes();
  double sum = 0.0;
  for (std::size_t i = 0; i < ba.size(); ++i)
    sum += std::abs(static_cast<int>(ba[i]) - static_cast<int>(bb[i]));
  return sum / static_cast<double>(ba.size());
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    raise(Errc::invalid_argument, "distributions must share a support size");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      raise(Errc::invalid_argument, "probabilities must be non-negative");
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0)
      raise(Errc::invalid_argument, "KL divergence undefined: p > 0 where q = 0");
    sum += p[i] * std::log2(p[i] / q[i]);
  }
  return sum;
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    raise(Errc::invalid_argument, "distributions must share a support size");
  std::vector<double> mid(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) mid[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * kl_divergence(p, mid) + 0.5 * kl_divergence(q, mid);
}

BinomialHitModel binomial_expected(int byte_count, uint64_t trials) {
  if (byte_count < 1) raise(Errc::invalid_argument, "byte count must be positive");
  if (trials < 1) raise(Errc::invalid_argument, "trial count must be positive");
  BinomialHitModel model;
  model.probabilities.resize(byte_count + 1);
  model.expected_counts.resize(byte_count + 1);
  double p = std::pow(255.0 / 256.0, byte_count);
  for (int w = 0; w <= byte_count; ++w) {
    model.probabilities[w] = p;
    model.expected_counts[w] = std::llround(static_cast<double>(trials) * p);
    p *= static_cast<double>(byte_count - w) / (static_cast<double>(w + 1) * 255.0);
  }
  return model;
}

DiffusionReport diffusion_confusion(const TrialConfig& cfg) {
  return reduce_diffusion(run_pair_trials(cfg, false));
}

UniformReport uniform_distribution(const TrialConfig& cfg) {
  return reduce_uniform(run_pair_trials(cfg, false));
}

CollisionReport collision_test(const TrialConfig& cfg) {
  return reduce_collision(run_pair_trials(cfg, false));
}

SensitivityReport sensitivity_test(const TrialConfig& cfg) {
  return reduce_sensitivity(run_pair_trials(cfg, true));
}

PairSuite pair_suite(const TrialConfig& cfg) {
  const RawRun run = run_pair_trials(cfg, false);
  return PairSuite{reduce_diffusion(run), reduce_uniform(run), reduce_collision(run)};
}

std::vector<int> sweep_grid_ks(int divisions, int step) {
  if (divisions < 2) raise(Errc::invalid_argument, "grid needs at least 2 divisions");
  if (step < 1) raise(Errc::invalid_argument, "grid step must be positive");
  std::vector<int> ks;
  for (int k = 1; k <= divisions - 1; k += step) ks.push_back(k);
  return ks;
}

double sweep_angle(int k, int divisions) {
  if (k < 1 || k > divisions - 1) raise(Errc::invalid_argument, "grid index out of range");
  return angle_from_fraction(k, 2ll * divisions);
}

StabilityGrid stability_sweep(const SweepConfig& cfg) {
  StabilityGrid grid;
  grid.divisions = cfg.divisions;
  grid.grid_step = cfg.grid_step;
  grid.trials_per_cell = cfg.base.trials;
  if (cfg.single_cell) {
    sweep_angle(cfg.single_cell->first, cfg.divisions);   // validates
    sweep_angle(cfg.single_cell->second, cfg.divisions);
    grid.k0_values = {cfg.single_cell->first};
    grid.k1_values = {cfg.single_cell->second};
  } else {
    grid.k0_values = sweep_grid_ks(cfg.divisions, cfg.grid_step);
    grid.k1_values = grid.k0_values;
  }

  const int total = static_cast<int>(grid.k0_values.size() * grid.k1_values.size());
  int done = 0;
  for (int k0 : grid.k0_values)
    for (int k1 : grid.k1_values) {
      TrialConfig cell_cfg = cfg.base;
      cell_cfg.params.theta0 = sweep_angle(k0, cfg.divisions);
      cell_cfg.params.theta1 = sweep_angle(k1, cfg.divisions);
      const RawRun run = run_pair_trials(cell_cfg, true);

      StabilityCell cell;
      cell.k0 = k0;
      cell.k1 = k1;
      cell.theta0 = cell_cfg.params.theta0;
      cell.theta1 = cell_cfg.params.theta1;
      const DiffusionReport diffusion = reduce_diffusion(run);
      const UniformReport uniform = reduce_uniform(run);
      const CollisionReport collision = reduce_collision(run);
      const SensitivityReport sensitivity = reduce_sensitivity(run);
      cell.mean_js = sensitivity.mean_js;
      cell.changed_percent = diffusion.changed_percent;
      cell.std_changed_percent = diffusion.std_changed_percent;
      cell.mean_flip_count = uniform.mean_flip_count;
      cell.std_flip_count = uniform.std_flip_count;
      cell.kl_divergence = collision.kl_divergence;
      cell.abs_byte_diff_gap =
          std::abs(collision.mean_abs_byte_diff - collision.theoretical_abs_byte_diff);
      grid.cells.push_back(std::move(cell));

      ++done;
      if (cfg.progress) cfg.progress(done, total);
    }
  return grid;
}

}  // namespace qhfmp
