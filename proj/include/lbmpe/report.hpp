#pragma once

// Run reports: the JSON performance record of a cavity run and the
// per-sample summary CSV.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "lbmpe/perfmodel.hpp"
#include "lbmpe/validation.hpp"

namespace lbmpe {

/// Million fluid lattice cell updates per second.
inline double mlups(std::size_t fluid_cells, std::size_t steps, double seconds) {
  if (!(seconds > 0)) throw std::invalid_argument("elapsed time must be positive");
  return static_cast<double>(fluid_cells) * static_cast<double>(steps) / seconds / 1e6;
}

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct RunReport {
  nlohmann::json config;             // echo of the run configuration
  std::size_t fluid_cells = 0;
  std::size_t steps = 0;             // timed steps
  double elapsed_seconds = 0;        // kernel time of the timed steps
  double wall_seconds = 0;           // whole run including setup and sampling
  double measured_mflups = 0;
  TrafficModel traffic;
  std::string bandwidth_source;
  PerfCeiling ceiling;
  Efficiency efficiency;
  double achieved_gbs = 0;
  std::uint64_t checksum = 0;
};

inline RunReport make_report(nlohmann::json config, std::size_t fluid_cells, std::size_t steps,
                             double elapsed_seconds, double wall_seconds, const TrafficModel& tm,
                             double bandwidth_gbs, std::string bandwidth_source, std::uint64_t checksum) {
  RunReport r;
  r.config = std::move(config);
  r.fluid_cells = fluid_cells;
  r.steps = steps;
  r.elapsed_seconds = elapsed_seconds;
  r.wall_seconds = wall_seconds;
  r.measured_mflups = mlups(fluid_cells, steps, elapsed_seconds);
  r.traffic = tm;
  r.bandwidth_source = std::move(bandwidth_source);
  r.ceiling = PerfCeiling::make(bandwidth_gbs, tm);
  r.efficiency = lbmpe::efficiency(r.measured_mflups, r.ceiling);
  r.achieved_gbs = achieved_bandwidth(r.measured_mflups, tm);
  r.checksum = checksum;
  return r;
}

inline nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["config"] = r.config;
  j["bytes_per_update"] = r.ceiling.bytes_per_update;
  j["bandwidth_source"] = r.bandwidth_source;
  j["bandwidth_gbs"] = r.ceiling.bandwidth_gbs;
  j["ceiling_mflups"] = round_significant(r.ceiling.ceiling_mflups, 3);
  j["measured_mflups"] = r.measured_mflups;
  j["efficiency"] = r.efficiency.value;
  j["achieved_gbs"] = r.achieved_gbs;
  j["write_allocate"] = r.traffic.write_allocate;
  j["fluid_cells"] = r.fluid_cells;
  j["steps"] = r.steps;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["wall_seconds"] = r.wall_seconds;
  j["checksum"] = hex64(r.checksum);
  if (r.efficiency.exceeds_model) {
    j["warning"] = "measured rate exceeds the model ceiling; the bandwidth input is probably too low";
  }
  return j;
}

inline constexpr const char* kSummaryCsvHeader = "step,mass,residual,mlups";

/// One row per sample; the residual column is empty where r(t) is undefined.
inline void write_summary_csv(std::ostream& os, const CavityResult& r) {
  os << kSummaryCsvHeader << '\n';
  os.precision(17);
  for (std::size_t k = 0; k < r.sample_steps.size(); ++k) {
    os << r.sample_steps[k] << ',' << r.mass[k] << ',';
    if (k >= 1 && k - 1 < r.residual.size()) os << r.residual[k - 1];
    os << ',' << (k < r.sample_mlups.size() ? r.sample_mlups[k] : 0.0) << '\n';
  }
}

/// Model table as JSON, one object per bandwidth source.
inline nlohmann::json to_json(const std::vector<ModelRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["name"] = r.name;
    j["bandwidth_gbs"] = r.bandwidth_gbs;
    j["sp_mflups"] = r.sp_rounded;
    j["sp_mflups_exact"] = r.sp_mflups;
    if (r.dp_rounded >= 0) {
      j["dp_mflups"] = r.dp_rounded;
      j["dp_mflups_exact"] = r.dp_mflups;
    } else {
      j["dp_mflups"] = nullptr;
    }
    out.push_back(j);
  }
  return out;
}

}  // namespace lbmpe
