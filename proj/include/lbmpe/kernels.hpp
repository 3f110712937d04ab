#pragma once

// Full-grid update kernels.
//
// The fused pull kernel gathers f_i(x - e_i) from src, collides, and stores
// the 19 post-collision values at x in dst. It never looks at cell kinds of
// neighbors: solid neighbors are prepared beforehand by the boundary kernel,
// which writes into every solid cell s, for each direction i whose target
// s + e_i is fluid, the value that fluid cell must receive (half-way
// bounce-back plus the moving-wall correction). Pulling from s then yields
// the bounced population without any branches in the fluid kernel.
//
// Neighbor lookups wrap around periodically; closed domains put solid
// cells on their boundary so the wrap is never taken by a fluid cell.
//
// Both kernels partition cells into contiguous z-slabs across workers and
// write disjoint sets of cells, so a pass needs no synchronization.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "lbmpe/lattice.hpp"
#include "lbmpe/storage.hpp"

namespace lbmpe {

struct StepStats {
  double seconds = 0.0;
  std::size_t cells_updated = 0;
};

/// Momentum correction for a population entering the fluid with direction
/// i from a wall moving at `u`: 6 w_i rho (e_i . u).
template <typename T>
inline T lid_correction(int i, T rho, const Vec3<double>& u) {
  const Velocity& e = velocity(i);
  const T eu = static_cast<T>(e[0] * u.x + e[1] * u.y + e[2] * u.z);
  return T(6) * weight<T>(i) * rho * eu;
}

namespace detail {

// (v + shift) mod n for shift in {-1, 0, 1}
inline std::size_t wrap(std::size_t v, int shift, std::size_t n) {
  if (shift < 0) return v == 0 ? n - 1 : v - 1;
  if (shift > 0) return v + 1 == n ? 0 : v + 1;
  return v;
}

inline void check_shapes(const Dims& field, const Dims& flags) {
  if (!(field == flags)) throw std::invalid_argument("PDF field and flag field shapes differ");
}

template <typename F>
void for_each_slab(std::size_t nz, int workers, F&& body) {
  const long n = static_cast<long>(nz);
#pragma omp parallel for num_threads(workers > 0 ? workers : 1) schedule(static)
  for (long z = 0; z < n; ++z) body(static_cast<std::size_t>(z));
}

template <typename T, Scheme S>
void pull_slab(std::span<const T> src, std::span<T> dst, const Addressing& a, const Dims& d,
               const FlagField& flags, T omega, std::size_t z) {
  constexpr bool soa = S == Scheme::SoA;
  const std::size_t dir = soa ? a.dir : 1;
  constexpr std::size_t xs = soa ? 1 : kQ;
  const T* in = src.data();
  T* out = dst.data();

  for (std::size_t y = 0; y < d.ny; ++y) {
    const std::uint8_t* kinds = flags.row(y, z);
    std::size_t row[kQ];
    for (int i = 0; i < kQ; ++i) {
      const Velocity& e = velocity(i);
      row[i] = a(i, 0, wrap(y, -e[1], d.ny), wrap(z, -e[2], d.nz));
    }
    const std::size_t out_row = a(0, 0, y, z);

    for (std::size_t x = 0; x < d.nx; ++x) {
      if (kinds[x] != FlagField::kFluid) continue;
      const std::size_t xm = x == 0 ? d.nx - 1 : x - 1;
      const std::size_t xp = x + 1 == d.nx ? 0 : x + 1;
      Pdfs<T> f;
      for (int i = 0; i < kQ; ++i) {
        const int ex = velocity(i)[0];
        const std::size_t xsrc = ex > 0 ? xm : (ex < 0 ? xp : x);
        f[i] = in[row[i] + xsrc * xs];
      }
      const Pdfs<T> post = bgk_collide(f, omega);
      T* cell = out + out_row + x * xs;
      for (int i = 0; i < kQ; ++i) cell[i * dir] = post[i];
    }
  }
}

template <typename T>
void bounce_back_slab(std::span<T> buf, const Addressing& a, const Dims& d, const FlagField& flags,
                      std::size_t z) {
  T* p = buf.data();
  for (std::size_t y = 0; y < d.ny; ++y) {
    const std::uint8_t* kinds = flags.row(y, z);
    for (std::size_t x = 0; x < d.nx; ++x) {
      const std::uint8_t kind = kinds[x];
      if (kind == FlagField::kFluid) continue;
      for (int i = 1; i < kQ; ++i) {
        const Velocity& e = velocity(i);
        const std::size_t nx = wrap(x, e[0], d.nx);
        const std::size_t ny = wrap(y, e[1], d.ny);
        const std::size_t nz = wrap(z, e[2], d.nz);
        if (!flags.is_fluid(nx, ny, nz)) continue;
        T v = p[a(opposite(i), nx, ny, nz)];
        if (kind >= FlagField::kLidBase) {
          T rho = p[a(0, nx, ny, nz)];
          for (int k = 1; k < kQ; ++k) rho += p[a(k, nx, ny, nz)];
          v += lid_correction<T>(i, rho, flags.lid_velocity(kind));
        }
        p[a(i, x, y, z)] = v;
      }
    }
  }
}

template <typename T>
void bounce_back(std::span<T> buf, const PdfField<T>& field, const FlagField& flags, int workers) {
  check_shapes(field.dims(), flags.dims());
  const Dims d = field.dims();
  const Addressing a = field.addressing();
  for_each_slab(d.nz, workers, [&](std::size_t z) { bounce_back_slab(buf, a, d, flags, z); });
}

}  // namespace detail

/// Fused stream-collide over fluid cells, src -> dst. Non-fluid cells of
/// dst are not touched.
template <typename T>
void stream_collide_pull(PdfField<T>& field, const FlagField& flags, const RelaxationParams& p,
                         int workers = 1) {
  detail::check_shapes(field.dims(), flags.dims());
  const Dims d = field.dims();
  const Addressing a = field.addressing();
  const T omega = p.template omega<T>();
  std::span<const T> src = field.src();
  std::span<T> dst = field.dst();
  if (field.layout().scheme == Scheme::SoA) {
    detail::for_each_slab(d.nz, workers, [&](std::size_t z) {
      detail::pull_slab<T, Scheme::SoA>(src, dst, a, d, flags, omega, z);
    });
  } else {
    detail::for_each_slab(d.nz, workers, [&](std::size_t z) {
      detail::pull_slab<T, Scheme::AoS>(src, dst, a, d, flags, omega, z);
    });
  }
}

/// Writes the bounce-back values into the solid cells of dst, reading the
/// post-collision values of their fluid neighbors in dst.
template <typename T>
void boundary_kernel(PdfField<T>& field, const FlagField& flags, int workers = 1) {
  detail::bounce_back(field.dst(), field, flags, workers);
}

/// Same as `boundary_kernel` but on src; needed once after initialization.
template <typename T>
void prepare_boundaries(PdfField<T>& field, const FlagField& flags, int workers = 1) {
  detail::bounce_back(field.src(), field, flags, workers);
}

/// stream_collide_pull, boundary_kernel, swap_buffers. `fluid_cells` is
/// reported as the number of cells updated.
template <typename T>
StepStats timestep(PdfField<T>& field, const FlagField& flags, const RelaxationParams& p,
                   int workers, std::size_t fluid_cells) {
  const auto t0 = std::chrono::steady_clock::now();
  stream_collide_pull(field, flags, p, workers);
  boundary_kernel(field, flags, workers);
  field.swap_buffers();
  const auto t1 = std::chrono::steady_clock::now();
  StepStats s;
  s.seconds = std::chrono::duration<double>(t1 - t0).count();
  s.cells_updated = fluid_cells;
  return s;
}

template <typename T>
StepStats timestep(PdfField<T>& field, const FlagField& flags, const RelaxationParams& p,
                   int workers = 1) {
  return timestep(field, flags, p, workers, flags.fluid_cells());
}

}  // namespace lbmpe
