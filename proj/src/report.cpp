#include "report.hpp"

#include <cstdio>

#include "json.hpp"

namespace qhfmp {

namespace {

using Json = nlohmann::ordered_json;

std::string seed_hex(uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llX", static_cast<unsigned long long>(seed));
  return buf;
}

Json optional_number(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

Json make_envelope(const char* kind, const RunInfo& info) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = kind;
  j["params"] = Json::parse(params_to_json(info.params, info.instance_name));
  Json run;
  run["trials"] = info.trials;
  run["seed"] = seed_hex(info.seed);
  Json source;
  if (info.source.mode == MessageSource::Mode::dataset) {
    source["mode"] = "dataset";
    source["path"] = info.source.dataset_path;
    source["field"] = info.source.dataset_field;
  } else {
    source["mode"] = "synthetic";
    source["bits"] = info.source.synthetic_bits;
  }
  run["source"] = source;
  j["run"] = run;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json exhibit_json(const SensitivityReport::Exhibit& ex) {
  Json j;
  j["original_hex"] = ex.original_hex;
  j["modified_hex"] = ex.modified_hex;
  j["changed_bit_positions"] = ex.changed_bit_positions;  // 1-based
  return j;
}

}  // namespace

std::string csv_quote(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string diffusion_report_json(const DiffusionReport& report, const RunInfo& info) {
  Json j = make_envelope("diffusion_confusion", info);
  Json r;
  r["digest_bits"] = report.digest_bits;
  r["total_changed_bits"] = report.total_changed_bits;
  r["mean_changed_bits"] = report.mean_changed_bits;
  r["changed_percent"] = report.changed_percent;
  r["std_changed_bits"] = optional_number(report.std_changed_bits);
  r["std_changed_percent"] = optional_number(report.std_changed_percent);
  r["composite_indicator"] = optional_number(report.composite_indicator);
  r["per_trial_changed_bits"] = report.per_trial_changed_bits;
  j["results"] = r;
  return dump(j);
}

std::string diffusion_report_csv(const DiffusionReport& report) {
  std::string out = "trial,changed_bits,changed_fraction\n";
  for (std::size_t i = 0; i < report.per_trial_changed_bits.size(); ++i) {
    const double fraction =
        static_cast<double>(report.per_trial_changed_bits[i]) / report.digest_bits;
    out += std::to_string(i) + "," + std::to_string(report.per_trial_changed_bits[i]) + "," +
           format_double(fraction) + "\n";
  }
  return out;
}

std::string uniform_report_json(const UniformReport& report, const RunInfo& info) {
  Json j = make_envelope("uniform_distribution", info);
  Json r;
  r["digest_bits"] = report.digest_bits;
  r["total_changed_bits"] = report.total_changed_bits;
  r["mean_flip_count"] = report.mean_flip_count;
  r["std_flip_count"] = optional_number(report.std_flip_count);
  r["flip_counts"] = report.flip_counts;
  j["results"] = r;
  return dump(j);
}

std::string uniform_report_csv(const UniformReport& report) {
  std::string out = "bit_position,flip_count\n";
  for (std::size_t j = 0; j < report.flip_counts.size(); ++j)
    out += std::to_string(j + 1) + "," + std::to_string(report.flip_counts[j]) + "\n";
  return out;
}

std::string collision_report_json(const CollisionReport& report, const RunInfo& info) {
  Json j = make_envelope("collision", info);
  Json r;
  r["digest_bytes"] = report.digest_bytes;
  r["hits_observed"] = report.hits_observed;
  r["hits_expected"] = report.hits_expected;
  r["prob_observed"] = report.prob_observed;
  r["prob_expected"] = report.prob_expected;
  r["kl_divergence"] = report.kl_divergence;
  r["mean_abs_byte_diff"] = report.mean_abs_byte_diff;
  r["theoretical_abs_byte_diff"] = report.theoretical_abs_byte_diff;
  r["abs_byte_diff_gap"] =
      std::abs(report.mean_abs_byte_diff - report.theoretical_abs_byte_diff);
  j["results"] = r;
  return dump(j);
}

std::string collision_report_csv(const CollisionReport& report) {
  std::string out = "hits,observed_count,expected_count,observed_prob,expected_prob\n";
  for (std::size_t w = 0; w < report.hits_observed.size(); ++w) {
    out += std::to_string(w) + "," + std::to_string(report.hits_observed[w]) + "," +
           std::to_string(report.hits_expected[w]) + "," +
           format_double(report.prob_observed[w]) + "," +
           format_double(report.prob_expected[w]) + "\n";
  }
  return out;
}

std::string sensitivity_report_json(const SensitivityReport& report, const RunInfo& info) {
  Json j = make_envelope("sensitivity", info);
  Json r;
  r["digest_bits"] = report.digest_bits;
  Json mean_js;
  mean_js["flip"] = report.mean_js[0];
  mean_js["insert"] = report.mean_js[1];
  mean_js["delete"] = report.mean_js[2];
  r["mean_js"] = mean_js;
  Json flip_counts;
  flip_counts["flip"] = report.flip_counts[0];
  flip_counts["insert"] = report.flip_counts[1];
  flip_counts["delete"] = report.flip_counts[2];
  r["flip_counts"] = flip_counts;
  Json exhibits;
  exhibits["flip"] = exhibit_json(report.exhibits[0]);
  exhibits["insert"] = exhibit_json(report.exhibits[1]);
  exhibits["delete"] = exhibit_json(report.exhibits[2]);
  r["exhibits"] = exhibits;
  Json per_trial = Json::array();
  for (const auto& js : report.per_trial_js) per_trial.push_back({js[0], js[1], js[2]});
  r["per_trial_js"] = per_trial;
  j["results"] = r;
  return dump(j);
}

std::string sensitivity_report_csv(const SensitivityReport& report) {
  std::string out = "trial,js_flip,js_insert,js_delete\n";
  for (std::size_t i = 0; i < report.per_trial_js.size(); ++i) {
    const auto& js = report.per_trial_js[i];
    out += std::to_string(i) + "," + format_double(js[0]) + "," + format_double(js[1]) + "," +
           format_double(js[2]) + "\n";
  }
  return out;
}

std::string stability_grid_json(const StabilityGrid& grid, const RunInfo& info) {
  Json j = make_envelope("stability_sweep", info);
  Json r;
  r["divisions"] = grid.divisions;
  r["grid_step"] = grid.grid_step;
  r["k0_values"] = grid.k0_values;
  r["k1_values"] = grid.k1_values;
  r["trials_per_cell"] = grid.trials_per_cell;
  Json cells = Json::array();
  for (const StabilityCell& cell : grid.cells) {
    Json c;
    c["k0"] = cell.k0;
    c["k1"] = cell.k1;
    c["theta0"] = format_angle(cell.theta0);
    c["theta1"] = format_angle(cell.theta1);
    c["mean_js"] = {cell.mean_js[0], cell.mean_js[1], cell.mean_js[2]};
    c["changed_percent"] = cell.changed_percent;
    c["std_changed_percent"] = optional_number(cell.std_changed_percent);
    c["mean_flip_count"] = cell.mean_flip_count;
    c["std_flip_count"] = optional_number(cell.std_flip_count);
    c["kl_divergence"] = cell.kl_divergence;
    c["abs_byte_diff_gap"] = cell.abs_byte_diff_gap;
    cells.push_back(c);
  }
  r["cells"] = cells;
  j["results"] = r;
  return dump(j);
}

std::string stability_grid_csv(const StabilityGrid& grid) {
  std::string out =
      "k0,k1,theta0,theta1,mean_js_flip,mean_js_insert,mean_js_delete,changed_percent,"
      "std_changed_percent,mean_flip_count,std_flip_count,kl_divergence,abs_byte_diff_gap\n";
  for (const StabilityCell& cell : grid.cells) {
    out += std::to_string(cell.k0) + "," + std::to_string(cell.k1) + "," +
           format_double(cell.theta0) + "," + format_double(cell.theta1) + "," +
           format_double(cell.mean_js[0]) + "," + format_double(cell.mean_js[1]) + "," +
           format_double(cell.mean_js[2]) + "," + format_double(cell.changed_percent) + "," +
           (cell.std_changed_percent ? format_double(*cell.std_changed_percent) : "") + "," +
           format_double(cell.mean_flip_count) + "," +
           (cell.std_flip_count ? format_double(*cell.std_flip_count) : "") + "," +
           format_double(cell.kl_divergence) + "," + format_double(cell.abs_byte_diff_gap) +
           "\n";
  }
  return out;
}

}  // namespace qhfmp
