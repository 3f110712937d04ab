#pragma once

// End-to-end physics cases: the lid-driven cavity, a uniform periodic flow,
// and the domain-size sweep harness.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbmpe/simulation.hpp"

namespace lbmpe {

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CavityConfig {
  std::size_t n = 32;
  Vec3<double> u_lid{0.05, 0.0, 0.0};
  double tau = 0.6;
  std::size_t steps = 1000;
  std::size_t warmup_steps = 0;  // run before the first sample, untimed
  Scheme scheme = Scheme::SoA;
  std::size_t alignment_bytes = 0;
  int workers = 1;
  std::size_t residual_interval = 100;  // Delta in r(t) = max |u(t) - u(t - Delta)|
  double stop_residual = 0.0;          // > 0: stop once r(t) drops below it
  bool poison_padding = false;
};

struct CavityResult {
  MacroFields fields;
  std::vector<std::size_t> sample_steps;  // step index of every sample, 0 first
  std::vector<double> mass;               // total fluid mass at each sample
  std::vector<double> residual;           // r(t) at each sample after the first
  std::vector<double> sample_mlups;       // update rate over each interval, 0 at the first sample
  std::size_t steps_run = 0;
  std::size_t fluid_cells = 0;
  double kernel_seconds = 0.0;
  std::uint64_t checksum = 0;
  std::size_t stride_x = 0;
  std::size_t bytes_allocated = 0;
  bool padding_intact = true;  // only meaningful with poison_padding
  bool nan_free = true;

  double mass_drift() const {
    if (mass.empty() || mass.front() == 0) return 0.0;
    double worst = 0;
    for (double m : mass) worst = std::max(worst, std::abs(m - mass.front()) / mass.front());
    return worst;
  }
  double mlups() const {
    return kernel_seconds > 0 ? static_cast<double>(fluid_cells) * steps_run / kernel_seconds / 1e6 : 0.0;
  }
};

inline double norm(const Vec3<double>& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

namespace detail {

inline void check_state(const MacroFields& m, const FlagField& flags, std::size_t step) {
  const Dims d = m.dims;
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        if (!flags.is_fluid(x, y, z)) continue;
        const std::size_t k = m.linear(x, y, z);
        const double rho = m.rho[k];
        const bool bad = std::isnan(rho) || std::isnan(m.ux[k]) || std::isnan(m.uy[k]) ||
                         std::isnan(m.uz[k]) || rho < 0.5 || rho > 2.0;
        if (bad) {
          std::ostringstream os;
          os << "simulation diverged at step " << step << ", cell (" << x << ',' << y << ',' << z
             << "): rho=" << rho << " u=(" << m.ux[k] << ',' << m.uy[k] << ',' << m.uz[k] << ')';
          throw DivergenceError(os.str());
        }
      }
}

inline double max_velocity_change(const MacroFields& a, const MacroFields& b) {
  double r = 0;
  for (std::size_t k = 0; k < a.rho.size(); ++k) {
    const double dx = a.ux[k] - b.ux[k];
    const double dy = a.uy[k] - b.uy[k];
    const double dz = a.uz[k] - b.uz[k];
    r = std::max(r, std::sqrt(dx * dx + dy * dy + dz * dz));
  }
  return r;
}

inline double total(const MacroFields& m) {
  long double s = 0;
  for (double v : m.rho) s += v;
  return static_cast<double>(s);
}

}  // namespace detail

/// `on_finish(sim)` sees the final simulation state before it is released.
template <typename T, typename OnFinish>
CavityResult lid_driven_cavity(const CavityConfig& cfg, OnFinish&& on_finish) {
  if (cfg.n < 8) throw std::invalid_argument("cavity edge must be >= 8 cells");
  if (norm(cfg.u_lid) > 0.1) throw std::invalid_argument("lid speed must not exceed 0.1");
  if (cfg.residual_interval < 1) throw std::invalid_argument("residual interval must be >= 1");
  const RelaxationParams params(cfg.tau);
  const Dims dims{cfg.n, cfg.n, cfg.n};
  const Layout layout{cfg.scheme, cfg.alignment_bytes, sizeof(T)};

  Simulation<T> sim(dims, layout, FlagField::cavity(dims, cfg.u_lid), params, cfg.workers);
  if (cfg.poison_padding) sim.field().poison_padding();
  sim.initialize_equilibrium();
  sim.run(cfg.warmup_steps);

  CavityResult out;
  out.fluid_cells = sim.fluid_cells();
  out.stride_x = sim.field().stride_x();
  out.bytes_allocated = sim.field().bytes_allocated();

  MacroFields prev = sim.macroscopic_fields();
  out.sample_steps.push_back(0);
  out.mass.push_back(detail::total(prev));
  out.sample_mlups.push_back(0.0);

  std::size_t step = 0;
  while (step < cfg.steps) {
    const std::size_t chunk = std::min(cfg.residual_interval, cfg.steps - step);
    const StepStats st = sim.run(chunk);
    out.kernel_seconds += st.seconds;
    step += chunk;
    MacroFields now = sim.macroscopic_fields();
    detail::check_state(now, sim.flags(), step);
    out.sample_steps.push_back(step);
    out.mass.push_back(detail::total(now));
    out.sample_mlups.push_back(st.seconds > 0 ? static_cast<double>(st.cells_updated) / st.seconds / 1e6 : 0.0);
    if (chunk == cfg.residual_interval) {
      out.residual.push_back(detail::max_velocity_change(now, prev));
    }
    prev = std::move(now);
    if (cfg.stop_residual > 0 && !out.residual.empty() && out.residual.back() < cfg.stop_residual) break;
  }

  out.steps_run = step;
  out.fields = std::move(prev);
  out.checksum = sim.checksum();
  out.nan_free = !has_nan(sim.field());
  if (cfg.poison_padding) out.padding_intact = sim.field().padding_poisoned();
  on_finish(static_cast<const Simulation<T>&>(sim));
  return out;
}

template <typename T>
CavityResult lid_driven_cavity(const CavityConfig& cfg) {
  return lid_driven_cavity<T>(cfg, [](const Simulation<T>&) {});
}

struct UniformFlowConfig {
  std::size_t n = 16;
  Vec3<double> u0{};
  double tau = 0.6;
  std::size_t steps = 100;
  Scheme scheme = Scheme::SoA;
  std::size_t alignment_bytes = 0;
  int workers = 1;
};

/// Fully periodic domain started at equilibrium(1, u0); returns the largest
/// per-PDF deviation from that state after the configured steps.
template <typename T>
double periodic_uniform_flow(const UniformFlowConfig& cfg) {
  if (norm(cfg.u0) > 0.1) throw std::invalid_argument("uniform flow speed must not exceed 0.1");
  if (cfg.n < 1) throw std::invalid_argument("domain edge must be >= 1");
  const Dims dims{cfg.n, cfg.n, cfg.n};
  const Vec3<T> u{static_cast<T>(cfg.u0.x), static_cast<T>(cfg.u0.y), static_cast<T>(cfg.u0.z)};
  Simulation<T> sim(dims, Layout{cfg.scheme, cfg.alignment_bytes, sizeof(T)}, FlagField::all_fluid(dims),
                    RelaxationParams(cfg.tau), cfg.workers);
  sim.initialize_equilibrium(T(1), u);
  sim.run(cfg.steps);
  detail::check_state(sim.macroscopic_fields(), sim.flags(), cfg.steps);

  const Pdfs<T> feq = equilibrium(T(1), u);
  double dev = 0;
  const auto& f = sim.field();
  for (int i = 0; i < kQ; ++i)
    for (std::size_t z = 0; z < dims.nz; ++z)
      for (std::size_t y = 0; y < dims.ny; ++y)
        for (std::size_t x = 0; x < dims.nx; ++x) {
          const double v = f.src()[f.index(i, x, y, z)];
          dev = std::max(dev, std::abs(v - static_cast<double>(feq[i])));
        }
  return dev;
}

inline std::vector<std::size_t> default_sweep_sizes() {
  std::vector<std::size_t> s;
  for (std::size_t n = 16; n <= 200; n += 8) s.push_back(n);
  return s;
}

struct SweepConfig {
  std::vector<std::size_t> sizes = default_sweep_sizes();
  std::size_t steps = 3;
  std::size_t warmup = 1;
  std::size_t alignment_bytes = 128;
  Vec3<double> u_lid{0.05, 0.0, 0.0};
  double tau = 0.6;
  int workers = 1;
};

struct SweepRow {
  std::size_t n = 0;
  std::size_t fluid_cells = 0;
  double mlups_unpadded = 0;
  double mlups_padded = 0;
  std::size_t stride_unpadded = 0;
  std::size_t stride_padded = 0;
  std::size_t bytes_unpadded = 0;
  std::size_t bytes_padded = 0;
  bool checksums_equal = false;
  double max_physics_diff = 0;  // max over fluid cells of |rho| and |u| differences
};

namespace detail {

template <typename T>
struct TimedCavity {
  MacroFields fields;
  std::uint64_t checksum;
  double mlups;
  std::size_t stride, bytes, fluid;
};

template <typename T>
TimedCavity<T> timed_cavity(std::size_t n, std::size_t alignment, const SweepConfig& cfg) {
  const Dims dims{n, n, n};
  Simulation<T> sim(dims, Layout::soa(sizeof(T), alignment), FlagField::cavity(dims, cfg.u_lid),
                    RelaxationParams(cfg.tau), cfg.workers);
  sim.initialize_equilibrium();
  sim.run(cfg.warmup);
  const StepStats st = sim.run(cfg.steps);
  const double mlups = st.seconds > 0 ? static_cast<double>(st.cells_updated) / st.seconds / 1e6 : 0.0;
  return {sim.macroscopic_fields(), sim.checksum(), mlups, sim.field().stride_x(),
          sim.field().bytes_allocated(), sim.fluid_cells()};
}

inline double max_field_diff(const MacroFields& a, const MacroFields& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.rho.size(); ++k) {
    m = std::max({m, std::abs(a.rho[k] - b.rho[k]), std::abs(a.ux[k] - b.ux[k]), std::abs(a.uy[k] - b.uy[k]),
                  std::abs(a.uz[k] - b.uz[k])});
  }
  return m;
}

}  // namespace detail

/// Cavity runs over cube edges, each once unpadded and once padded. The two
/// runs of one edge are sequential so only one grid is alive at a time.
template <typename T, typename OnRow>
std::vector<SweepRow> domain_sweep(const SweepConfig& cfg, OnRow&& on_row) {
  std::vector<SweepRow> rows;
  for (std::size_t n : cfg.sizes) {
    if (n < 3) throw std::invalid_argument("sweep edge must be >= 3");
    SweepRow row;
    row.n = n;
    MacroFields plain_fields;
    std::uint64_t plain_sum = 0;
    {
      auto plain = detail::timed_cavity<T>(n, 0, cfg);
      row.mlups_unpadded = plain.mlups;
      row.stride_unpadded = plain.stride;
      row.bytes_unpadded = plain.bytes;
      row.fluid_cells = plain.fluid;
      plain_sum = plain.checksum;
      plain_fields = std::move(plain.fields);
    }
    {
      auto padded = detail::timed_cavity<T>(n, cfg.alignment_bytes, cfg);
      row.mlups_padded = padded.mlups;
      row.stride_padded = padded.stride;
      row.bytes_padded = padded.bytes;
      row.checksums_equal = padded.checksum == plain_sum;
      row.max_physics_diff = detail::max_field_diff(plain_fields, padded.fields);
    }
    on_row(row);
    rows.push_back(row);
  }
  return rows;
}

template <typename T>
std::vector<SweepRow> domain_sweep(const SweepConfig& cfg) {
  return domain_sweep<T>(cfg, [](const SweepRow&) {});
}

}  // namespace lbmpe
