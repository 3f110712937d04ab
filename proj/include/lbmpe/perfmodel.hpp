#pragma once

// Bandwidth-based performance model for the lattice cell update.
//
// A cell update moves n_stencil values in and n_stencil values out; on
// cache-based machines the store misses additionally pull the target line
// in first (write allocate). The sustainable update rate is the STREAM
// copy bandwidth divided by the bytes per update.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbmpe/lattice.hpp"
#include "lbmpe/membench.hpp"

namespace lbmpe {

struct TrafficModel {
  int n_stencil = kQ;
  int n_loads = 1;
  int n_stores = 1;
  bool write_allocate = true;
  int s_pdf = 8;

  void validate() const {
    if (n_stencil < 1) throw std::invalid_argument("stencil size must be >= 1");
    if (n_loads < 0 || n_stores < 0) throw std::invalid_argument("load/store counts must be >= 0");
    if (s_pdf != 4 && s_pdf != 8) throw std::invalid_argument("PDF size must be 4 or 8 bytes");
  }

  int transfers() const { return n_loads + n_stores + (write_allocate ? 1 : 0); }

  /// Two-lattice D3Q19 update on a cache-based CPU (write allocate on).
  static TrafficModel cpu(Precision p) { return {kQ, 1, 1, true, static_cast<int>(value_bytes(p))}; }
  /// Same update without write-allocate traffic (GPU, or streaming stores).
  static TrafficModel streaming(Precision p) { return {kQ, 1, 1, false, static_cast<int>(value_bytes(p))}; }
};

inline double bytes_per_update(const TrafficModel& tm) {
  tm.validate();
  return static_cast<double>(tm.n_stencil) * tm.transfers() * tm.s_pdf;
}

/// Million lattice updates per second sustainable at `bandwidth_gbs`.
inline double ceiling_mflups(double bandwidth_gbs, double bytes_per_cell_update) {
  if (!(bandwidth_gbs > 0) || !(bytes_per_cell_update > 0)) {
    throw std::invalid_argument("bandwidth and bytes per update must be positive");
  }
  return bandwidth_gbs * 1e9 / bytes_per_cell_update / 1e6;
}

/// Round to `digits` significant figures.
inline double round_significant(double v, int digits = 3) {
  if (v == 0 || !std::isfinite(v)) return v;
  const double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
  return std::round(v * mag) / mag;
}

struct PerfCeiling {
  double bandwidth_gbs = 0;
  double bytes_per_update = 0;
  double ceiling_mflups = 0;

  static PerfCeiling make(double bandwidth_gbs, const TrafficModel& tm) {
    const double b = lbmpe::bytes_per_update(tm);
    return {bandwidth_gbs, b, lbmpe::ceiling_mflups(bandwidth_gbs, b)};
  }
};

struct Efficiency {
  double value = 0;
  bool exceeds_model = false;  // measured above the ceiling: bandwidth input is off
};

inline Efficiency efficiency(double measured_mflups, const PerfCeiling& ceiling) {
  if (!(measured_mflups > 0)) throw std::invalid_argument("measured MFLUP/s must be positive");
  if (!(ceiling.ceiling_mflups > 0)) throw std::invalid_argument("model ceiling must be positive");
  Efficiency e;
  e.value = measured_mflups / ceiling.ceiling_mflups;
  e.exceeds_model = e.value > 1.0;
  return e;
}

/// Memory bandwidth implied by an update rate under the traffic model.
inline double achieved_bandwidth(double mflups, const TrafficModel& tm) {
  return mflups * 1e6 * bytes_per_update(tm) / 1e9;
}

/// DP bytes per FLOP of the implemented kernel, counting the intrinsic
/// two-lattice traffic (no write allocate).
inline double computational_balance(Precision p = Precision::DP) {
  return bytes_per_update(TrafficModel::streaming(p)) / kFlopsPerCellUpdate;
}

/// A bandwidth figure from the historical measurements the model was
/// originally evaluated against. `write_allocate` selects the CPU or the
/// GPU traffic model.
struct HistoricalBandwidth {
  const char* name;
  double gbs;
  bool write_allocate;
  bool has_dp;
  bool approximate;  // read off a chart rather than from a table
};

/// STREAM copy on a dual-socket Xeon X5650 node: 1 core, 1 NUMA domain,
/// full node (user-visible GB/s). Actual traffic is 1.5x with write allocate.
inline constexpr double kX5650MeasuredGbs[3] = {10.01, 14.08, 26.8};
inline constexpr double kX5650NodeMeasuredGbs = 26.8;
inline constexpr double kCopyWriteAllocateFactor = 1.5;

inline std::vector<HistoricalBandwidth> historical_bandwidths() {
  return {
      {"Intel X5650 node", actual_bandwidth(kX5650NodeMeasuredGbs, kCopyWriteAllocateFactor), true, true, false},
      {"C2070", 119.8, false, true, true},
      {"C2070 ECC", 94.85, false, true, true},
      {"C1060", 77.8, false, true, true},
      {"G80", 74.8, false, false, true},
  };
}

struct ModelRow {
  std::string name;
  double bandwidth_gbs;
  double sp_mflups;
  double dp_mflups;  // NaN when the device has no DP
  long sp_rounded;
  long dp_rounded;   // -1 when the device has no DP
};

inline std::vector<ModelRow> model_table(const std::vector<HistoricalBandwidth>& sources) {
  std::vector<ModelRow> rows;
  for (const auto& s : sources) {
    auto traffic = [&](Precision p) {
      return s.write_allocate ? TrafficModel::cpu(p) : TrafficModel::streaming(p);
    };
    ModelRow r;
    r.name = s.name;
    r.bandwidth_gbs = s.gbs;
    r.sp_mflups = ceiling_mflups(s.gbs, bytes_per_update(traffic(Precision::SP)));
    r.dp_mflups = s.has_dp ? ceiling_mflups(s.gbs, bytes_per_update(traffic(Precision::DP))) : NAN;
    r.sp_rounded = std::lround(r.sp_mflups);
    r.dp_rounded = s.has_dp ? std::lround(r.dp_mflups) : -1;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace lbmpe
