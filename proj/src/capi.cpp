#include "qhfmp.h"

#include <cstring>
#include <new>
#include <string>

#include "error.hpp"
#include "hash.hpp"
#include "report.hpp"
#include "stats.hpp"
#include "vectors.hpp"

struct qhfmp_params {
  qhfmp::HashParams value;
  std::string name;      // instance name when created from a preset
  std::string warnings;  // newline-separated validation warnings
};

struct qhfmp_report {
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

qhfmp_status map_code(qhfmp::Errc code) {
  switch (code) {
    case qhfmp::Errc::invalid_argument:
      return QHFMP_ERROR_INVALID_ARGUMENT;
    case qhfmp::Errc::io:
      return QHFMP_ERROR_IO;
    case qhfmp::Errc::numeric:
      return QHFMP_ERROR_NUMERIC;
    case qhfmp::Errc::internal:
      return QHFMP_ERROR_INTERNAL;
  }
  return QHFMP_ERROR_INTERNAL;
}

template <class Fn>
qhfmp_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return QHFMP_OK;
  } catch (const qhfmp::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QHFMP_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QHFMP_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QHFMP_ERROR_INTERNAL;
  }
}

void require(bool condition, const char* message) {
  if (!condition) qhfmp::raise(qhfmp::Errc::invalid_argument, message);
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

std::string join_warnings(const std::vector<std::string>& warnings) {
  std::string out;
  for (const std::string& w : warnings) {
    if (!out.empty()) out.push_back('\n');
    out += w;
  }
  return out;
}

qhfmp_params* make_params(qhfmp::HashParams value, std::string name) {
  auto* handle = new qhfmp_params;
  handle->value = value;
  handle->name = std::move(name);
  handle->warnings = join_warnings(value.validate());
  return handle;
}

qhfmp::TrialConfig make_trial_config(const qhfmp_params* params,
                                     const qhfmp_trial_config* config) {
  require(params != nullptr, "params must not be null");
  require(config != nullptr, "config must not be null");
  qhfmp::TrialConfig cfg;
  cfg.params = params->value;
  cfg.trials = config->trials;
  cfg.seed = config->seed;
  cfg.threads = config->threads;
  if (config->dataset_path != nullptr) {
    cfg.source.mode = qhfmp::MessageSource::Mode::dataset;
    cfg.source.dataset_path = config->dataset_path;
    if (config->dataset_field != nullptr && config->dataset_field[0] != '\0')
      cfg.source.dataset_field = config->dataset_field;
  } else {
    cfg.source.mode = qhfmp::MessageSource::Mode::synthetic;
    cfg.source.synthetic_bits = config->synthetic_bits;
  }
  return cfg;
}

qhfmp::RunInfo make_run_info(const qhfmp_params* params, const qhfmp::TrialConfig& cfg) {
  qhfmp::RunInfo info;
  info.params = cfg.params;
  info.instance_name = params->name;
  info.trials = cfg.trials;
  info.seed = cfg.seed;
  info.source = cfg.source;
  return info;
}

}  // namespace

extern "C" {

const char* qhfmp_version(void) { return "1.0.0"; }

const char* qhfmp_status_name(qhfmp_status status) {
  switch (status) {
    case QHFMP_OK:
      return "ok";
    case QHFMP_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case QHFMP_ERROR_IO:
      return "i/o error";
    case QHFMP_ERROR_NUMERIC:
      return "numeric error";
    case QHFMP_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* qhfmp_last_error(void) { return g_last_error.c_str(); }

void qhfmp_string_free(char* text) { delete[] text; }

qhfmp_status qhfmp_params_standard(const char* name, qhfmp_params** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "name and out must not be null");
    qhfmp::HashParams value = qhfmp::standard_instance(name);
    const std::string canonical =
        value.node_count == 37 ? "QHFM-P-296" : "QHFM-P-264";
    *out = make_params(value, canonical);
  });
}

qhfmp_status qhfmp_params_create(int n, int m, int l, double theta0, double theta1, double alpha,
                                 qhfmp_params** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    qhfmp::HashParams value;
    value.node_count = n;
    value.block_bits = m;
    value.prob_digits = l;
    value.theta0 = theta0;
    value.theta1 = theta1;
    value.alpha = alpha;
    value.validate();
    *out = make_params(value, {});
  });
}

qhfmp_status qhfmp_params_from_json(const char* json_text, qhfmp_params** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "json and out must not be null");
    *out = make_params(qhfmp::params_from_json(json_text), {});
  });
}

void qhfmp_params_free(qhfmp_params* params) { delete params; }

qhfmp_status qhfmp_params_to_json(const qhfmp_params* params, char** out_json) {
  return guarded([&] {
    require(params != nullptr && out_json != nullptr, "params and out must not be null");
    *out_json = copy_string(qhfmp::params_to_json(params->value, params->name));
  });
}

const char* qhfmp_params_warnings(const qhfmp_params* params) {
  return params ? params->warnings.c_str() : "";
}

int qhfmp_params_digest_bits(const qhfmp_params* params) {
  return params ? params->value.digest_bits() : 0;
}

int qhfmp_params_digest_bytes(const qhfmp_params* params) {
  return params ? params->value.digest_bytes() : 0;
}

qhfmp_status qhfmp_parse_angle(const char* text, double* out_radians) {
  return guarded([&] {
    require(text != nullptr && out_radians != nullptr, "text and out must not be null");
    *out_radians = qhfmp::parse_angle(text);
  });
}

qhfmp_status qhfmp_hash(const qhfmp_params* params, const uint8_t* data, size_t size,
                        uint8_t* digest, size_t digest_capacity, size_t* digest_size) {
  return guarded([&] {
    require(params != nullptr && digest != nullptr, "params and digest must not be null");
    require(data != nullptr || size == 0, "data must not be null when size > 0");
    const std::vector<uint8_t> bytes =
        qhfmp::hash_bytes({data, size}, params->value).bytes();
    require(digest_capacity >= bytes.size(), "digest buffer too small");
    std::memcpy(digest, bytes.data(), bytes.size());
    if (digest_size != nullptr) *digest_size = bytes.size();
  });
}

qhfmp_status qhfmp_hash_hex(const qhfmp_params* params, const uint8_t* data, size_t size,
                            int pretty, char** out_hex) {
  return guarded([&] {
    require(params != nullptr && out_hex != nullptr, "params and out must not be null");
    require(data != nullptr || size == 0, "data must not be null when size > 0");
    *out_hex = copy_string(qhfmp::hash_bytes({data, size}, params->value).hex(pretty != 0));
  });
}

qhfmp_status qhfmp_distribution(const qhfmp_params* params, const uint8_t* data, size_t size,
                                double* probs, size_t probs_capacity) {
  return guarded([&] {
    require(params != nullptr && probs != nullptr, "params and probs must not be null");
    require(data != nullptr || size == 0, "data must not be null when size > 0");
    const std::vector<double> dist =
        qhfmp::final_distribution(qhfmp::bits_from_bytes({data, size}), params->value);
    require(probs_capacity >= dist.size(), "probability buffer too small");
    std::memcpy(probs, dist.data(), dist.size() * sizeof(double));
  });
}

qhfmp_status qhfmp_run_diffusion(const qhfmp_params* params, const qhfmp_trial_config* config,
                                 qhfmp_report** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const qhfmp::TrialConfig cfg = make_trial_config(params, config);
    const qhfmp::DiffusionReport report = qhfmp::diffusion_confusion(cfg);
    const qhfmp::RunInfo info = make_run_info(params, cfg);
    *out = new qhfmp_report{qhfmp::diffusion_report_json(report, info),
                            qhfmp::diffusion_report_csv(report)};
  });
}

qhfmp_status qhfmp_run_uniform(const qhfmp_params* params, const qhfmp_trial_config* config,
                               qhfmp_report** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const qhfmp::TrialConfig cfg = make_trial_config(params, config);
    const qhfmp::UniformReport report = qhfmp::uniform_distribution(cfg);
    const qhfmp::RunInfo info = make_run_info(params, cfg);
    *out = new qhfmp_report{qhfmp::uniform_report_json(report, info),
                            qhfmp::uniform_report_csv(report)};
  });
}

qhfmp_status qhfmp_run_collision(const qhfmp_params* params, const qhfmp_trial_config* config,
                                 qhfmp_report** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const qhfmp::TrialConfig cfg = make_trial_config(params, config);
    const qhfmp::CollisionReport report = qhfmp::collision_test(cfg);
    const qhfmp::RunInfo info = make_run_info(params, cfg);
    *out = new qhfmp_report{qhfmp::collision_report_json(report, info),
                            qhfmp::collision_report_csv(report)};
  });
}

qhfmp_status qhfmp_run_sensitivity(const qhfmp_params* params, const qhfmp_trial_config* config,
                                   qhfmp_report** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const qhfmp::TrialConfig cfg = make_trial_config(params, config);
    const qhfmp::SensitivityReport report = qhfmp::sensitivity_test(cfg);
    const qhfmp::RunInfo info = make_run_info(params, cfg);
    *out = new qhfmp_report{qhfmp::sensitivity_report_json(report, info),
                            qhfmp::sensitivity_report_csv(report)};
  });
}

qhfmp_status qhfmp_run_sweep(const qhfmp_params* params, const qhfmp_trial_config* config,
                             uint32_t divisions, uint32_t grid_step, int k0, int k1,
                             qhfmp_progress_fn progress, void* user, qhfmp_report** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    qhfmp::SweepConfig sweep;
    sweep.base = make_trial_config(params, config);
    sweep.divisions = static_cast<int>(divisions);
    sweep.grid_step = static_cast<int>(grid_step);
    if (k0 != 0 || k1 != 0) {
      require(k0 > 0 && k1 > 0, "single-cell indices must both be positive");
      sweep.single_cell = std::make_pair(k0, k1);
    }
    if (progress != nullptr)
      sweep.progress = [progress, user](int done, int total) {
        progress(static_cast<uint32_t>(done), static_cast<uint32_t>(total), user);
      };
    const qhfmp::StabilityGrid grid = qhfmp::stability_sweep(sweep);
    const qhfmp::RunInfo info = make_run_info(params, sweep.base);
    *out = new qhfmp_report{qhfmp::stability_grid_json(grid, info),
                            qhfmp::stability_grid_csv(grid)};
  });
}

const char* qhfmp_report_json(const qhfmp_report* report) {
  return report ? report->json.c_str() : "";
}

const char* qhfmp_report_csv(const qhfmp_report* report) {
  return report ? report->csv.c_str() : "";
}

void qhfmp_report_free(qhfmp_report* report) { delete report; }

qhfmp_status qhfmp_vectors_json(char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "out must not be null");
    *out_json = copy_string(qhfmp::canonical_vectors_json());
  });
}

}  // extern "C"
