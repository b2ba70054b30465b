// qhfmp command-line tool. Everything here goes through the public C API in
// qhfmp.h; the JSON produced by the library is parsed only for presentation.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhfmp.h"

namespace {

using Json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamsDeleter {
  void operator()(qhfmp_params* p) const { qhfmp_params_free(p); }
};
struct ReportDeleter {
  void operator()(qhfmp_report* r) const { qhfmp_report_free(r); }
};
using ParamsPtr = std::unique_ptr<qhfmp_params, ParamsDeleter>;
using ReportPtr = std::unique_ptr<qhfmp_report, ReportDeleter>;

std::string api_error() {
  const char* detail = qhfmp_last_error();
  return detail && detail[0] ? detail : "unknown library error";
}

// User-supplied values map onto exit code 2, runtime faults onto 1.
void check_usage(qhfmp_status rc) {
  if (rc == QHFMP_OK) return;
  if (rc == QHFMP_ERROR_INVALID_ARGUMENT) throw UsageError(api_error());
  throw RunError(api_error());
}

void check_run(qhfmp_status rc) {
  if (rc != QHFMP_OK) throw RunError(api_error());
}

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

std::vector<uint8_t> read_input_bytes(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    if (std::cin.bad()) throw RunError("failed to read standard input");
    const std::string& data = buffer.str();
    return {data.begin(), data.end()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunError("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw RunError("failed to read input file: " + path);
  const std::string& data = buffer.str();
  return {data.begin(), data.end()};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw RunError("failed to read file: " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RunError("cannot open output file: " + path);
  out << contents;
  if (!out) throw RunError("failed to write file: " + path);
}

struct InstanceOptions {
  std::string instance = "QHFM-P-296";
  std::string params_file;
  std::optional<int> n, m, l;
  std::string theta0, theta1, alpha;

  bool has_overrides() const {
    return n || m || l || !theta0.empty() || !theta1.empty() || !alpha.empty();
  }
};

void add_instance_options(CLI::App* cmd, InstanceOptions& opt) {
  cmd->add_option("-i,--instance", opt.instance,
                  "Standard instance: QHFM-P-296 / QHFM-P-264 (or just 296 / 264)")
      ->envname("QHFMP_INSTANCE")
      ->capture_default_str();
  cmd->add_option("--params", opt.params_file,
                  "Load a parameter descriptor JSON file instead of an instance preset");
  cmd->add_option("--n", opt.n, "Override the node count (odd)");
  cmd->add_option("--m", opt.m, "Override bits per block");
  cmd->add_option("--l", opt.l, "Override probability digits");
  cmd->add_option("--theta0", opt.theta0, "Override theta0 (radians or e.g. pi/4)");
  cmd->add_option("--theta1", opt.theta1, "Override theta1 (radians or e.g. pi/3)");
  cmd->add_option("--alpha", opt.alpha, "Override alpha (radians or e.g. pi/4)");
}

ParamsPtr build_params(const InstanceOptions& opt) {
  qhfmp_params* raw = nullptr;
  if (!opt.params_file.empty()) {
    const std::string text = read_text_file(opt.params_file);
    check_usage(qhfmp_params_from_json(text.c_str(), &raw));
  } else {
    check_usage(qhfmp_params_standard(opt.instance.c_str(), &raw));
  }
  ParamsPtr params(raw);

  if (opt.has_overrides()) {
    char* json = nullptr;
    check_run(qhfmp_params_to_json(params.get(), &json));
    Json j = Json::parse(json);
    qhfmp_string_free(json);
    j.erase("name");
    if (opt.n) j["n"] = *opt.n;
    if (opt.m) j["m"] = *opt.m;
    if (opt.l) j["l"] = *opt.l;
    if (!opt.theta0.empty()) j["theta0"] = opt.theta0;
    if (!opt.theta1.empty()) j["theta1"] = opt.theta1;
    if (!opt.alpha.empty()) j["alpha"] = opt.alpha;
    qhfmp_params* patched = nullptr;
    check_usage(qhfmp_params_from_json(j.dump().c_str(), &patched));
    params.reset(patched);
  }

  const char* warnings = qhfmp_params_warnings(params.get());
  if (warnings && warnings[0]) {
    std::istringstream lines(warnings);
    std::string line;
    while (std::getline(lines, line)) std::cerr << "warning: " << line << "\n";
  }
  return params;
}

struct TrialOptions {
  uint32_t trials = 10000;
  std::optional<uint64_t> seed;
  uint32_t message_bits = 4096;
  std::string dataset_path;
  std::string dataset_field = "abstract";
  uint32_t threads = 0;
  std::string json_path;
  std::string csv_path;
  bool assert_thresholds = false;
};

void add_trial_options(CLI::App* cmd, TrialOptions& opt, uint32_t default_trials) {
  opt.trials = default_trials;
  cmd->add_option("--trials", opt.trials, "Number of independent trials")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed,
                  "Master seed (64-bit); omitted = drawn from system entropy and printed");
  cmd->add_option("--message-bits", opt.message_bits,
                  "Synthetic message length in bits")
      ->capture_default_str();
  cmd->add_option("--dataset", opt.dataset_path,
                  "JSON-lines dataset; each trial hashes the text of one record");
  cmd->add_option("--field", opt.dataset_field, "Dataset text field")
      ->capture_default_str();
  cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--json", opt.json_path, "Write the JSON report here");
  cmd->add_option("--csv", opt.csv_path, "Write the CSV report here");
  cmd->add_flag("--assert", opt.assert_thresholds,
                "Apply the documented statistical tolerances; nonzero exit on violation");
}

uint64_t resolve_seed(TrialOptions& opt) {
  if (!opt.seed) {
    std::random_device entropy;
    opt.seed = (static_cast<uint64_t>(entropy()) << 32) ^ entropy();
    std::printf("seed: 0x%016llX (drawn from system entropy; pass --seed to replay)\n",
                static_cast<unsigned long long>(*opt.seed));
  }
  return *opt.seed;
}

qhfmp_trial_config make_config(const TrialOptions& opt, uint64_t seed) {
  qhfmp_trial_config config{};
  config.seed = seed;
  config.trials = opt.trials;
  config.synthetic_bits = opt.message_bits;
  config.dataset_path = opt.dataset_path.empty() ? nullptr : opt.dataset_path.c_str();
  config.dataset_field = opt.dataset_field.c_str();
  config.threads = opt.threads;
  return config;
}

void emit_report_files(const qhfmp_report* report, const TrialOptions& opt) {
  if (!opt.json_path.empty()) write_text_file(opt.json_path, qhfmp_report_json(report));
  if (!opt.csv_path.empty()) write_text_file(opt.csv_path, qhfmp_report_csv(report));
}

void print_run_header(const Json& report) {
  const Json& params = report.at("params");
  const Json& run = report.at("run");
  std::string name = params.contains("name") ? params["name"].get<std::string>() : "custom";
  std::cout << name << "  n=" << params["n"] << " m=" << params["m"] << " l=" << params["l"]
            << "  trials=" << run["trials"] << "  seed=" << run["seed"].get<std::string>();
  const Json& source = run.at("source");
  if (source["mode"] == "dataset")
    std::cout << "  source=dataset:" << source["path"].get<std::string>() << "#"
              << source["field"].get<std::string>();
  else
    std::cout << "  source=synthetic:" << source["bits"] << "b";
  std::cout << "\n";
}

class Asserter {
 public:
  explicit Asserter(bool enabled) : enabled_(enabled) {}

  void require(const std::string& label, bool ok, const std::string& measured) {
    if (!enabled_) return;
    std::cout << "assert: " << label << ": " << (ok ? "PASS" : "FAIL") << " (" << measured
              << ")\n";
    if (!ok) failed_ = true;
  }

  void finish() const {
    if (enabled_ && failed_) throw RunError("statistical tolerances violated (--assert)");
  }

 private:
  bool enabled_;
  bool failed_ = false;
};

// ---------------------------------------------------------------- hash

struct HashOptions {
  InstanceOptions instance;
  std::string input;
  bool pretty = false;
  std::string emit_params;
};

int cmd_hash(const HashOptions& opt) {
  const ParamsPtr params = build_params(opt.instance);
  if (!opt.emit_params.empty()) {
    char* json = nullptr;
    check_run(qhfmp_params_to_json(params.get(), &json));
    write_text_file(opt.emit_params, json);
    qhfmp_string_free(json);
  }
  const std::vector<uint8_t> data = read_input_bytes(opt.input);
  char* hex = nullptr;
  check_run(qhfmp_hash_hex(params.get(), data.data(), data.size(), opt.pretty ? 1 : 0, &hex));
  std::cout << hex << "\n";
  qhfmp_string_free(hex);
  return 0;
}

// ---------------------------------------------------------------- suites

enum class Suite { diffusion, uniform, collision, sensitivity };

int cmd_suite(Suite suite, const InstanceOptions& instance, TrialOptions& opt) {
  const ParamsPtr params = build_params(instance);
  const uint64_t seed = resolve_seed(opt);
  const qhfmp_trial_config config = make_config(opt, seed);

  qhfmp_report* raw = nullptr;
  switch (suite) {
    case Suite::diffusion:
      check_run(qhfmp_run_diffusion(params.get(), &config, &raw));
      break;
    case Suite::uniform:
      check_run(qhfmp_run_uniform(params.get(), &config, &raw));
      break;
    case Suite::collision:
      check_run(qhfmp_run_collision(params.get(), &config, &raw));
      break;
    case Suite::sensitivity:
      check_run(qhfmp_run_sensitivity(params.get(), &config, &raw));
      break;
  }
  const ReportPtr report(raw);
  emit_report_files(report.get(), opt);

  const Json j = Json::parse(qhfmp_report_json(report.get()));
  const Json& results = j.at("results");
  print_run_header(j);
  Asserter asserts(opt.assert_thresholds);
  const double trials = static_cast<double>(opt.trials);

  switch (suite) {
    case Suite::diffusion: {
      const double mean_bits = results["mean_changed_bits"].get<double>();
      const double percent = results["changed_percent"].get<double>();
      const bool has_std = !results["std_changed_bits"].is_null();
      std::cout << "  B\xCC\x84         P(%)      \xCE\x94"
                << "B        \xCE\x94P(%)     I_DC(%)\n";
      std::cout << "  " << fixed(mean_bits, 4) << "  " << fixed(percent, 4) << "  "
                << (has_std ? fixed(results["std_changed_bits"].get<double>(), 4) : "n/a")
                << "  "
                << (has_std ? fixed(results["std_changed_percent"].get<double>(), 4) : "n/a")
                << "  "
                << (has_std ? fixed(results["composite_indicator"].get<double>(), 4) : "n/a")
                << "\n";
      if (has_std) {
        const double dp = results["std_changed_percent"].get<double>();
        asserts.require("P within [49, 51]%", percent >= 49.0 && percent <= 51.0,
                        fixed(percent, 4));
        asserts.require("\xCE\x94P within [2.4, 3.4]%", dp >= 2.4 && dp <= 3.4, fixed(dp, 4));
      } else {
        std::cout << "  (standard deviations undefined for a single trial)\n";
      }
      break;
    }
    case Suite::uniform: {
      const double mean = results["mean_flip_count"].get<double>();
      const double gap = std::abs(mean - trials / 2.0);
      const bool has_std = !results["std_flip_count"].is_null();
      std::cout << "  T\xCC\x84          |T\xCC\x84-N/2|   \xCE\x94T\n";
      std::cout << "  " << fixed(mean, 2) << "    " << fixed(gap, 2) << "    "
                << (has_std ? fixed(results["std_flip_count"].get<double>(), 4) : "n/a")
                << "\n";
      asserts.require("|T\xCC\x84-N/2| < 3*sqrt(N)/2", gap < 1.5 * std::sqrt(trials),
                      fixed(gap, 2));
      if (has_std) {
        const double dt = results["std_flip_count"].get<double>();
        asserts.require("\xCE\x94T within [0.4, 0.9]*sqrt(N)",
                        dt >= 0.4 * std::sqrt(trials) && dt <= 0.9 * std::sqrt(trials),
                        fixed(dt, 4));
      }
      break;
    }
    case Suite::collision: {
      const auto observed = results["hits_observed"].get<std::vector<uint64_t>>();
      const auto expected = results["hits_expected"].get<std::vector<int64_t>>();
      uint64_t observed_tail = 0;
      int64_t expected_tail = 0;
      for (std::size_t w = 4; w < observed.size(); ++w) {
        observed_tail += observed[w];
        expected_tail += expected[w];
      }
      const double kl = results["kl_divergence"].get<double>();
      const double mean_diff = results["mean_abs_byte_diff"].get<double>();
      const double gap = results["abs_byte_diff_gap"].get<double>();
      std::cout << "  {W_N(\xCF\x89)|\xCF\x89=0,1,2,3,4+}  experimental: ";
      for (int w = 0; w < 4; ++w) std::cout << observed[w] << ",";
      std::cout << observed_tail << "  theoretical: ";
      for (int w = 0; w < 4; ++w) std::cout << expected[w] << ",";
      std::cout << expected_tail << "\n";
      std::cout << "  D_KL(P^e||P^t) = " << fixed(kl, 7) << "   d\xCC\x84^e_byte = "
                << fixed(mean_diff, 2) << "   |d\xCC\x84^e-d\xCC\x84^t| = " << fixed(gap, 2)
                << "\n";
      asserts.require("D_KL < 0.01", kl < 0.01, fixed(kl, 7));
      asserts.require("|d\xCC\x84^e-d\xCC\x84^t| < 1.5", gap < 1.5, fixed(gap, 2));
      break;
    }
    case Suite::sensitivity: {
      const Json& js = results.at("mean_js");
      std::cout << "  mean JS divergence vs original distribution\n";
      std::cout << "    bit flip:    " << fixed(js["flip"].get<double>(), 6) << "\n";
      std::cout << "    bit insert:  " << fixed(js["insert"].get<double>(), 6) << "\n";
      std::cout << "    bit delete:  " << fixed(js["delete"].get<double>(), 6) << "\n";
      for (const char* key : {"flip", "insert", "delete"}) {
        const Json& ex = results["exhibits"][key];
        std::cout << "  " << key << " exhibit: "
                  << ex["changed_bit_positions"].size() << " changed bits\n";
      }
      for (const char* key : {"flip", "insert", "delete"})
        asserts.require(std::string("mean JS (") + key + ") > 0",
                        js[key].get<double>() > 0.0, fixed(js[key].get<double>(), 6));
      break;
    }
  }
  asserts.finish();
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  InstanceOptions instance;
  TrialOptions trials;
  uint32_t divisions = 30;
  uint32_t grid_step = 1;
  std::vector<int> cell;  // empty or {k0, k1}
};

int cmd_sweep(SweepOptions& opt) {
  const ParamsPtr params = build_params(opt.instance);
  const uint64_t seed = resolve_seed(opt.trials);
  const qhfmp_trial_config config = make_config(opt.trials, seed);

  int k0 = 0, k1 = 0;
  if (!opt.cell.empty()) {
    if (opt.cell.size() != 2) throw UsageError("--cell needs exactly two grid indices");
    k0 = opt.cell[0];
    k1 = opt.cell[1];
  }

  const auto progress = [](uint32_t done, uint32_t total, void*) {
    std::fprintf(stderr, "\rsweep: %u/%u cells", done, total);
    if (done == total) std::fprintf(stderr, "\n");
  };

  qhfmp_report* raw = nullptr;
  check_run(qhfmp_run_sweep(params.get(), &config, opt.divisions, opt.grid_step, k0, k1,
                            progress, nullptr, &raw));
  const ReportPtr report(raw);
  emit_report_files(report.get(), opt.trials);

  const Json j = Json::parse(qhfmp_report_json(report.get()));
  const Json& results = j.at("results");
  print_run_header(j);

  Asserter asserts(opt.trials.assert_thresholds);
  double min_p = 1e9, max_p = -1e9, max_kl = 0.0, min_js = 1e9, max_gap = 0.0;
  for (const Json& cell : results.at("cells")) {
    const double p = cell["changed_percent"].get<double>();
    const double kl = cell["kl_divergence"].get<double>();
    const double js = cell["mean_js"][0].get<double>();
    min_p = std::min(min_p, p);
    max_p = std::max(max_p, p);
    max_kl = std::max(max_kl, kl);
    min_js = std::min(min_js, js);
    max_gap = std::max(max_gap, cell["abs_byte_diff_gap"].get<double>());
    std::cout << "  cell k0=" << cell["k0"] << " k1=" << cell["k1"]
              << "  theta0=" << cell["theta0"].get<std::string>()
              << " theta1=" << cell["theta1"].get<std::string>() << "  P=" << fixed(p, 3)
              << "%  KL=" << fixed(kl, 6) << "  JS=" << fixed(js, 4)
              << "  |d\xCC\x84^e-d\xCC\x84^t|=" << fixed(cell["abs_byte_diff_gap"].get<double>(), 2)
              << "\n";
  }
  std::cout << "  summary: P in [" << fixed(min_p, 3) << ", " << fixed(max_p, 3)
            << "]%  max KL = " << fixed(max_kl, 6) << "  min JS = " << fixed(min_js, 4)
            << "  max |d\xCC\x84^e-d\xCC\x84^t| = " << fixed(max_gap, 2) << "\n";
  asserts.require("every cell P within [47, 53]%", min_p >= 47.0 && max_p <= 53.0,
                  fixed(min_p, 3) + " .. " + fixed(max_p, 3));
  asserts.require("every cell D_KL < 0.05", max_kl < 0.05, fixed(max_kl, 6));
  asserts.require("every cell mean JS (flip) > 0", min_js > 0.0, fixed(min_js, 6));
  asserts.finish();
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  InstanceOptions instance;
  std::vector<uint64_t> lengths{10000, 20000, 40000};
  uint32_t repeats = 5;
  uint64_t seed = 1;
  std::string csv_path;
  bool compare_instances = false;
};

long read_vm_hwm_kib() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line))
    if (line.rfind("VmHWM:", 0) == 0) return std::strtol(line.c_str() + 6, nullptr, 10);
  return -1;
}

double time_hash_seconds(const qhfmp_params* params, const std::vector<uint8_t>& data,
                         uint32_t repeats) {
  std::vector<uint8_t> digest(static_cast<std::size_t>(qhfmp_params_digest_bytes(params)));
  double best = 1e100;
  for (uint32_t r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    size_t written = 0;
    check_run(qhfmp_hash(params, data.data(), data.size(), digest.data(), digest.size(),
                         &written));
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(stop - start).count());
  }
  return best;
}

int cmd_bench(const BenchOptions& opt) {
  const ParamsPtr params = build_params(opt.instance);
  std::mt19937_64 rng(opt.seed);

  std::vector<double> seconds;
  std::vector<long> hwm;
  std::cout << "  bits       best ms    ns/(step*node)  ratio     VmHWM KiB\n";
  for (uint64_t bits : opt.lengths) {
    if (bits == 0 || bits % 8 != 0)
      throw UsageError("--lengths entries must be positive multiples of 8 bits");
    std::vector<uint8_t> data(bits / 8);
    for (uint8_t& b : data) b = static_cast<uint8_t>(rng());
    // warm-up, untimed
    time_hash_seconds(params.get(), data, 1);
    const double best = time_hash_seconds(params.get(), data, opt.repeats);
    seconds.push_back(best);
    hwm.push_back(read_vm_hwm_kib());
    const double per_step_node =
        best * 1e9 /
        (static_cast<double>(bits) * static_cast<double>(qhfmp_params_digest_bits(params.get()) / 8));
    std::cout << "  " << bits << "   " << fixed(best * 1e3, 3) << "      "
              << fixed(per_step_node, 2) << "            "
              << fixed(best / seconds.front(), 2) << "      " << hwm.back() << "\n";
  }

  // least-squares fit time = a + b * M
  const std::size_t count = opt.lengths.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = static_cast<double>(opt.lengths[i]);
    sx += x;
    sy += seconds[i];
    sxx += x * x;
    sxy += x * seconds[i];
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  std::cout << "  fit: time ~= " << fixed(intercept * 1e3, 4) << " ms + "
            << fixed(slope * 1e9, 3) << " ns/bit\n";

  bool linear = true;
  for (std::size_t i = 1; i < count; ++i) {
    const double expected =
        static_cast<double>(opt.lengths[i]) / static_cast<double>(opt.lengths[0]);
    const double ratio = seconds[i] / seconds[0];
    if (std::abs(ratio / expected - 1.0) > 0.25) linear = false;
  }
  std::cout << "  linearity (ratios within 25% of message-length ratios): "
            << (linear ? "PASS" : "FAIL") << "\n";
  if (hwm.front() > 0)
    std::cout << "  VmHWM growth across lengths: " << (hwm.back() - hwm.front()) << " KiB\n";

  if (opt.compare_instances) {
    const uint64_t bits = 20000;
    std::vector<uint8_t> data(bits / 8);
    for (uint8_t& b : data) b = static_cast<uint8_t>(rng());
    double cost[2];
    const char* names[2] = {"QHFM-P-264", "QHFM-P-296"};
    for (int i = 0; i < 2; ++i) {
      qhfmp_params* raw = nullptr;
      check_usage(qhfmp_params_standard(names[i], &raw));
      const ParamsPtr p(raw);
      time_hash_seconds(p.get(), data, 1);
      cost[i] = time_hash_seconds(p.get(), data, opt.repeats);
    }
    std::cout << "  fixed M=" << bits << ": t(n=33)/t(n=37) = " << fixed(cost[0] / cost[1], 3)
              << " (node-count ratio 33/37 = " << fixed(33.0 / 37.0, 3) << ")\n";
  }

  if (!opt.csv_path.empty()) {
    std::string csv = "length_bits,best_seconds,vm_hwm_kib\n";
    for (std::size_t i = 0; i < count; ++i)
      csv += std::to_string(opt.lengths[i]) + "," + fixed(seconds[i], 9) + "," +
             std::to_string(hwm[i]) + "\n";
    write_text_file(opt.csv_path, csv);
  }
  return 0;
}

// ---------------------------------------------------------------- vectors

struct VectorsOptions {
  std::string out_path;
  std::string check_path;
};

int cmd_vectors(const VectorsOptions& opt) {
  char* raw = nullptr;
  check_run(qhfmp_vectors_json(&raw));
  std::string vectors(raw);
  qhfmp_string_free(raw);

  if (!opt.check_path.empty()) {
    const std::string golden = read_text_file(opt.check_path);
    if (golden != vectors)
      throw RunError("regenerated vectors do not match " + opt.check_path);
    std::cout << "vectors match " << opt.check_path << "\n";
    return 0;
  }
  if (!opt.out_path.empty()) {
    write_text_file(opt.out_path, vectors);
    return 0;
  }
  std::cout << vectors;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-inspired hashing with parity-dependent walks with memory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qhfmp ") + qhfmp_version());

  HashOptions hash_opt;
  CLI::App* hash_cmd = app.add_subcommand("hash", "Hash a file or standard input");
  add_instance_options(hash_cmd, hash_opt.instance);
  hash_cmd->add_option("input", hash_opt.input, "Input file ('-' or empty = stdin)");
  hash_cmd->add_flag("--pretty", hash_opt.pretty, "Space-separated uppercase byte pairs");
  hash_cmd->add_option("--emit-params", hash_opt.emit_params,
                       "Also write the parameter descriptor JSON here");

  InstanceOptions diffusion_instance, uniform_instance, collision_instance,
      sensitivity_instance;
  TrialOptions diffusion_opt, uniform_opt, collision_opt, sensitivity_opt;
  CLI::App* diffusion_cmd =
      app.add_subcommand("test-diffusion", "Diffusion and confusion statistics");
  add_instance_options(diffusion_cmd, diffusion_instance);
  add_trial_options(diffusion_cmd, diffusion_opt, 10000);
  CLI::App* uniform_cmd =
      app.add_subcommand("test-uniform", "Uniform-distribution statistics");
  add_instance_options(uniform_cmd, uniform_instance);
  add_trial_options(uniform_cmd, uniform_opt, 10000);
  CLI::App* collision_cmd =
      app.add_subcommand("test-collision", "Collision-resistance statistics");
  add_instance_options(collision_cmd, collision_instance);
  add_trial_options(collision_cmd, collision_opt, 10000);
  CLI::App* sensitivity_cmd = app.add_subcommand(
      "test-sensitivity", "Distribution sensitivity under flip/insert/delete");
  add_instance_options(sensitivity_cmd, sensitivity_instance);
  add_trial_options(sensitivity_cmd, sensitivity_opt, 10000);

  SweepOptions sweep_opt;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Coin-angle stability sweep over (0, pi/2)^2");
  add_instance_options(sweep_cmd, sweep_opt.instance);
  add_trial_options(sweep_cmd, sweep_opt.trials, 2048);
  sweep_cmd->add_option("--divisions", sweep_opt.divisions,
                        "Number of subintervals of (0, pi/2)")
      ->capture_default_str();
  sweep_cmd->add_option("--grid-step", sweep_opt.grid_step,
                        "Stride over interior grid points")
      ->capture_default_str();
  sweep_cmd->add_option("--cell", sweep_opt.cell,
                        "Evaluate a single grid cell: two indices k0 k1")
      ->expected(2);

  BenchOptions bench_opt;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Timing and memory scaling");
  add_instance_options(bench_cmd, bench_opt.instance);
  bench_cmd->add_option("--lengths", bench_opt.lengths,
                        "Message lengths in bits (multiples of 8)")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench_opt.repeats, "Timing repeats per length")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_opt.seed, "Seed for benchmark messages")
      ->capture_default_str();
  bench_cmd->add_option("--csv", bench_opt.csv_path, "Write timing CSV here");
  bench_cmd->add_flag("--compare-instances", bench_opt.compare_instances,
                      "Also compare the two standard instances at fixed length");

  VectorsOptions vectors_opt;
  CLI::App* vectors_cmd =
      app.add_subcommand("vectors", "Canonical published test vectors");
  vectors_cmd->add_option("--out", vectors_opt.out_path, "Write the vector file here");
  vectors_cmd->add_option("--check", vectors_opt.check_path,
                          "Regenerate and compare against this golden file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, any parse failure is a usage error
  }

  try {
    if (app.got_subcommand(hash_cmd)) return cmd_hash(hash_opt);
    if (app.got_subcommand(diffusion_cmd))
      return cmd_suite(Suite::diffusion, diffusion_instance, diffusion_opt);
    if (app.got_subcommand(uniform_cmd))
      return cmd_suite(Suite::uniform, uniform_instance, uniform_opt);
    if (app.got_subcommand(collision_cmd))
      return cmd_suite(Suite::collision, collision_instance, collision_opt);
    if (app.got_subcommand(sensitivity_cmd))
      return cmd_suite(Suite::sensitivity, sensitivity_instance, sensitivity_opt);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(sweep_opt);
    if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_opt);
    if (app.got_subcommand(vectors_cmd)) return cmd_vectors(vectors_opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
