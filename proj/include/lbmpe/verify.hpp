#pragma once

// Self-check suite behind `lbmpe verify` and the acceptance runner. Every
// check reports a stable name, the measured quantity and its limit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lbmpe/reference.hpp"
#include "lbmpe/simulation.hpp"
#include "lbmpe/validation.hpp"

namespace lbmpe {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0;  // measured quantity (deviation, drift, ...)
  double limit = 0;
  std::string detail;
};

struct VerifyOptions {
  LatticeModel model = d3q19();
  int patterns = 20;            // random obstacle layouts for the oracle check
  std::size_t max_edge = 8;
  int oracle_steps = 10;
  int workers = 2;
  std::uint64_t seed = 2024;
  std::size_t layout_edge = 32;
  std::size_t layout_steps = 100;
  std::size_t box_edge = 16;
  std::size_t box_steps = 1000;
};

/// Copy of `model` with weight i replaced, for fault injection.
inline LatticeModel with_weight(LatticeModel model, int i, Rational w) {
  model.weights.at(static_cast<std::size_t>(i)) = w;
  return model;
}

/// Random obstacles and moving walls; roughly `solid` of all cells are non-fluid.
inline FlagField random_obstacles(const Dims& d, std::mt19937_64& rng, double solid = 0.2) {
  std::uniform_real_distribution<double> p(0.0, 1.0), u(-0.057, 0.057);
  FlagField f(d);
  const Vec3<double> lid{u(rng), u(rng), u(rng)};
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        const double r = p(rng);
        if (r < 0.7 * solid) {
          f.set_no_slip(x, y, z);
        } else if (r < solid) {
          f.set_moving_lid(x, y, z, lid);
        }
      }
  return f;
}

inline std::vector<CheckResult> check_stencil(const LatticeModel& model) {
  const auto bad = stencil_violations(model);
  if (bad.empty()) return {{"stencil", true, 0, 0, "all D3Q19 invariants hold"}};
  std::vector<CheckResult> out;
  for (const auto& name : bad) out.push_back({"stencil:" + name, false, 1, 0, "invariant violated"});
  return out;
}

/// Zeroth and first moments of the equilibrium built from `model`.
inline CheckResult check_equilibrium_moments(const LatticeModel& model) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rho_d(0.8, 1.2), u_d(-0.057, 0.057);
  double worst = 0;
  for (int s = 0; s < 200; ++s) {
    const double rho = rho_d(rng);
    const Vec3<double> u{u_d(rng), u_d(rng), u_d(rng)};
    const auto feq = equilibrium_reference(model, rho, u);
    double m0 = 0, mx = 0, my = 0, mz = 0;
    for (int i = 0; i < kQ; ++i) {
      m0 += feq[i];
      mx += feq[i] * model.velocities[i][0];
      my += feq[i] * model.velocities[i][1];
      mz += feq[i] * model.velocities[i][2];
    }
    worst = std::max({worst, std::abs(m0 - rho) / rho, std::abs(mx - rho * u.x) / rho,
                      std::abs(my - rho * u.y) / rho, std::abs(mz - rho * u.z) / rho});
  }
  const double limit = 1e-14;
  return {"equilibrium_moments", worst <= limit, worst, limit, "max relative moment error of f_eq"};
}

namespace detail {

template <typename T>
void fill_near_equilibrium(PdfField<T>& f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rho_d(0.9, 1.1), u_d(-0.05, 0.05), n_d(-0.05, 0.05);
  const Dims d = f.dims();
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        Pdfs<T> c = equilibrium(static_cast<T>(rho_d(rng)),
                                Vec3<T>{static_cast<T>(u_d(rng)), static_cast<T>(u_d(rng)), static_cast<T>(u_d(rng))});
        for (auto& v : c) v *= static_cast<T>(1 + n_d(rng));
        f.set_cell(x, y, z, c);
      }
}

}  // namespace detail

struct OracleStats {
  int patterns = 0;
  int comparisons = 0;
  double max_rel = 0;
  std::size_t mismatched = 0;
};

/// Optimized kernels (three layouts, `workers` threads) against the
/// reference solver on random geometries of edge <= max_edge.
inline OracleStats oracle_equivalence(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> edge(2, std::max<std::size_t>(2, o.max_edge));
  std::uniform_real_distribution<double> tau_d(0.52, 1.5);
  OracleStats st;
  for (int p = 0; p < o.patterns; ++p) {
    const Dims d{edge(rng), edge(rng), edge(rng)};
    const FlagField flags = random_obstacles(d, rng);
    const RelaxationParams params(tau_d(rng));
    PdfField<double> base(d, Layout::soa(8));
    detail::fill_near_equilibrium(base, rng);
    prepare_boundaries(base, flags);
    ReferenceState<double> ref = to_reference(base);
    for (int s = 0; s < o.oracle_steps; ++s) ref = reference_pull_step(flags, ref, params.omega<double>());
    for (const Layout& l : {Layout::soa(8), Layout::aos(8), Layout::soa(8, 128)}) {
      PdfField<double> f = layout_transcode(base, l);
      for (int s = 0; s < o.oracle_steps; ++s) timestep(f, flags, params, o.workers);
      const auto diff = compare_fluid(f, flags, ref);
      st.max_rel = std::max(st.max_rel, diff.max_rel);
      st.mismatched += diff.mismatched;
      ++st.comparisons;
    }
    ++st.patterns;
  }
  return st;
}

inline CheckResult check_oracle_equivalence(const VerifyOptions& o) {
  const OracleStats st = oracle_equivalence(o);
  std::ostringstream os;
  os << st.patterns << " patterns, " << st.comparisons << " runs, " << st.mismatched << " values not bit-identical";
  const double limit = 1e-13;
  return {"oracle_equivalence", st.max_rel <= limit && st.patterns >= 1, st.max_rel, limit, os.str()};
}

/// Largest relative per-PDF difference between SoA, AoS and padded SoA
/// cavity runs.
inline double layout_spread(std::size_t n, std::size_t steps, int workers) {
  const Dims d{n, n, n};
  const FlagField flags = FlagField::cavity(d, {0.05, 0, 0});
  std::vector<ReferenceState<double>> states;
  for (const Layout& l : {Layout::soa(8), Layout::aos(8), Layout::soa(8, 128)}) {
    Simulation<double> sim(d, l, flags, RelaxationParams(0.6), workers);
    sim.initialize_equilibrium();
    sim.run(steps);
    states.push_back(to_reference(sim.field()));
  }
  double worst = 0;
  for (std::size_t k = 1; k < states.size(); ++k)
    for (std::size_t c = 0; c < d.cells(); ++c) {
      const std::size_t x = c % n, y = c / n % n, z = c / (n * n);
      if (!flags.is_fluid(x, y, z)) continue;
      for (int i = 0; i < kQ; ++i) {
        const double a = states[0][c * kQ + i], b = states[k][c * kQ + i];
        worst = std::max(worst, a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), 1e-300));
      }
    }
  return worst;
}

inline CheckResult check_layout_invariance(const VerifyOptions& o) {
  const double v = layout_spread(o.layout_edge, o.layout_steps, o.workers);
  const double limit = 1e-13;
  std::ostringstream os;
  os << "cavity " << o.layout_edge << "^3, " << o.layout_steps << " steps, soa / aos / soa+128";
  return {"layout_invariance", v <= limit, v, limit, os.str()};
}

inline CheckResult check_mass_conservation(const VerifyOptions& o) {
  CavityConfig c;
  c.n = o.box_edge;
  c.u_lid = {0, 0, 0};
  c.steps = o.box_steps;
  c.workers = o.workers;
  const double drift = lid_driven_cavity<double>(c).mass_drift();
  const double limit = 1e-12;
  std::ostringstream os;
  os << "closed box " << o.box_edge << "^3 at rest, " << o.box_steps << " steps";
  return {"mass_conservation", drift <= limit, drift, limit, os.str()};
}

inline CheckResult check_uniform_flow(const VerifyOptions& o) {
  UniformFlowConfig c;
  c.u0 = {0.05, 0, 0};
  c.workers = o.workers;
  const double dev = periodic_uniform_flow<double>(c);
  const double limit = 1e-13;
  return {"uniform_flow_fixed_point", dev <= limit, dev, limit, "periodic 16^3, u0 = (0.05, 0, 0), 100 steps"};
}

/// Poisoned padding must still be intact after a padded cavity run.
inline CheckResult check_padding(const VerifyOptions& o, std::size_t steps = 20) {
  const Dims d{50, 56, 56};
  Simulation<double> sim(d, Layout::soa(8, 128), FlagField::cavity(d, {0.05, 0, 0}), RelaxationParams(0.6),
                         o.workers);
  sim.field().poison_padding();
  sim.initialize_equilibrium();
  sim.run(steps);
  const bool intact = sim.field().padding_poisoned();
  const bool clean = !has_nan(sim.field());
  std::ostringstream os;
  os << "50x56x56, stride " << sim.field().stride_x() << ", padding " << (intact ? "intact" : "touched")
     << ", field " << (clean ? "NaN-free" : "contains NaN");
  return {"padding_untouched", intact && clean, intact && clean ? 0.0 : 1.0, 0, os.str()};
}

inline std::vector<CheckResult> run_verification(const VerifyOptions& o) {
  std::vector<CheckResult> out = check_stencil(o.model);
  out.push_back(check_equilibrium_moments(o.model));
  out.push_back(check_oracle_equivalence(o));
  out.push_back(check_layout_invariance(o));
  out.push_back(check_mass_conservation(o));
  out.push_back(check_uniform_flow(o));
  out.push_back(check_padding(o));
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace lbmpe
