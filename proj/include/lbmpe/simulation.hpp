#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "lbmpe/kernels.hpp"
#include "lbmpe/lattice.hpp"
#include "lbmpe/storage.hpp"

namespace lbmpe {

/// Macroscopic fields of a whole grid, x fastest. Non-fluid cells hold zeros.
struct MacroFields {
  Dims dims;
  std::vector<double> rho, ux, uy, uz;

  std::size_t linear(std::size_t x, std::size_t y, std::size_t z) const {
    return (z * dims.ny + y) * dims.nx + x;
  }
};

/// A PDF field bound to its flags and relaxation parameters.
template <typename T>
class Simulation {
 public:
  Simulation(Dims dims, Layout layout, FlagField flags, RelaxationParams params, int workers = 1)
      : field_(dims, layout),
        flags_(std::move(flags)),
        params_(params),
        workers_(workers),
        fluid_cells_(flags_.fluid_cells()) {
    detail::check_shapes(field_.dims(), flags_.dims());
  }

  /// Every cell (solid ones included) at equilibrium(rho, u), then the
  /// solid cells bordering fluid prepared for the first pull.
  void initialize_equilibrium(T rho = T(1), Vec3<T> u = {}) {
    const Pdfs<T> feq = equilibrium(rho, u);
    const Dims d = field_.dims();
    for (auto buf : {field_.src(), field_.dst()}) {
      for (int i = 0; i < kQ; ++i)
        for (std::size_t z = 0; z < d.nz; ++z)
          for (std::size_t y = 0; y < d.ny; ++y)
            for (std::size_t x = 0; x < d.nx; ++x) buf[field_.index(i, x, y, z)] = feq[i];
    }
    prepare_boundaries(field_, flags_, workers_);
  }

  StepStats step() {
    ++steps_;
    return timestep(field_, flags_, params_, workers_, fluid_cells_);
  }

  StepStats run(std::size_t steps) {
    StepStats total;
    for (std::size_t s = 0; s < steps; ++s) {
      const StepStats st = step();
      total.seconds += st.seconds;
      total.cells_updated += st.cells_updated;
    }
    return total;
  }

  PdfField<T>& field() { return field_; }
  const PdfField<T>& field() const { return field_; }
  const FlagField& flags() const { return flags_; }
  const RelaxationParams& params() const { return params_; }
  int workers() const { return workers_; }
  std::size_t fluid_cells() const { return fluid_cells_; }
  std::size_t steps_done() const { return steps_; }

  Macroscopics<T> cell_moments(std::size_t x, std::size_t y, std::size_t z) const {
    return moments(field_.cell(x, y, z));
  }

  /// Sum of rho over fluid cells, accumulated in long double.
  double total_mass() const {
    long double m = 0;
    const Dims d = field_.dims();
    for (std::size_t z = 0; z < d.nz; ++z)
      for (std::size_t y = 0; y < d.ny; ++y)
        for (std::size_t x = 0; x < d.nx; ++x)
          if (flags_.is_fluid(x, y, z)) m += static_cast<long double>(cell_moments(x, y, z).rho);
    return static_cast<double>(m);
  }

  MacroFields macroscopic_fields() const {
    const Dims d = field_.dims();
    MacroFields out{d, std::vector<double>(d.cells()), std::vector<double>(d.cells()),
                    std::vector<double>(d.cells()), std::vector<double>(d.cells())};
    for (std::size_t z = 0; z < d.nz; ++z)
      for (std::size_t y = 0; y < d.ny; ++y)
        for (std::size_t x = 0; x < d.nx; ++x) {
          if (!flags_.is_fluid(x, y, z)) continue;
          const auto m = cell_moments(x, y, z);
          const std::size_t k = out.linear(x, y, z);
          out.rho[k] = m.rho;
          out.ux[k] = m.u.x;
          out.uy[k] = m.u.y;
          out.uz[k] = m.u.z;
        }
    return out;
  }

  std::uint64_t checksum() const { return field_checksum(field_); }

 private:
  PdfField<T> field_;
  FlagField flags_;
  RelaxationParams params_;
  int workers_;
  std::size_t fluid_cells_;
  std::size_t steps_ = 0;
};

}  // namespace lbmpe
