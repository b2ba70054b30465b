#pragma once

#include <string>
#include <string_view>

#include "stats.hpp"

namespace qhfmp {

// Run metadata stamped into every report envelope. Reports carry no wall
// times or thread counts, so identical configurations render byte-identical
// files.
struct RunInfo {
  HashParams params;
  std::string instance_name;  // optional
  uint32_t trials = 0;
  uint64_t seed = 0;
  MessageSource source;
};

std::string csv_quote(std::string_view field);
std::string format_double(double value);

std::string diffusion_report_json(const DiffusionReport& report, const RunInfo& info);
std::string diffusion_report_csv(const DiffusionReport& report);

std::string uniform_report_json(const UniformReport& report, const RunInfo& info);
std::string uniform_report_csv(const UniformReport& report);

std::string collision_report_json(const CollisionReport& report, const RunInfo& info);
std::string collision_report_csv(const CollisionReport& report);

std::string sensitivity_report_json(const SensitivityReport& report, const RunInfo& info);
std::string sensitivity_report_csv(const SensitivityReport& report);

std::string stability_grid_json(const StabilityGrid& grid, const RunInfo& info);
std::string stability_grid_csv(const StabilityGrid& grid);

}  // namespace qhfmp
