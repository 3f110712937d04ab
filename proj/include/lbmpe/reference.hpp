#pragma once

// Straightforward single-threaded reference solver used as an oracle for
// the optimized kernels. State is a plain AoS vector (cell-major, x
// fastest, 19 values per cell) without padding. Boundaries are handled
// inline while streaming instead of through a separate kernel.
//
// Pull-scheme state holds post-collision values; push-scheme state holds
// post-streaming (pre-collision) values. The two are related by
// push_state = reference_stream(pull_state).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lbmpe/kernels.hpp"
#include "lbmpe/lattice.hpp"
#include "lbmpe/storage.hpp"

namespace lbmpe {

template <typename T>
using ReferenceState = std::vector<T>;

namespace reference_detail {

inline std::size_t cell_index(const Dims& d, std::size_t x, std::size_t y, std::size_t z) {
  return (z * d.ny + y) * d.nx + x;
}

inline std::size_t shifted(std::size_t v, int e, std::size_t n) {
  // (v + e) mod n, written without the kernel's helpers
  return static_cast<std::size_t>((static_cast<long long>(v) + e + static_cast<long long>(n)) %
                                  static_cast<long long>(n));
}

template <typename T>
Pdfs<T> load(const ReferenceState<T>& s, std::size_t cell) {
  Pdfs<T> f;
  std::copy_n(s.begin() + static_cast<std::ptrdiff_t>(cell * kQ), kQ, f.begin());
  return f;
}

template <typename T>
void store(ReferenceState<T>& s, std::size_t cell, const Pdfs<T>& f) {
  std::copy(f.begin(), f.end(), s.begin() + static_cast<std::ptrdiff_t>(cell * kQ));
}

// Value streaming into direction i of fluid cell (x,y,z) from post-collision
// state `post`, bounce-back included.
template <typename T>
T pulled(const FlagField& flags, const ReferenceState<T>& post, std::size_t x, std::size_t y,
         std::size_t z, int i) {
  const Dims& d = flags.dims();
  const Velocity& e = velocity(i);
  const std::size_t sx = shifted(x, -e[0], d.nx);
  const std::size_t sy = shifted(y, -e[1], d.ny);
  const std::size_t sz = shifted(z, -e[2], d.nz);
  const std::uint8_t kind = flags.raw(sx, sy, sz);
  if (kind == FlagField::kFluid) return post[cell_index(d, sx, sy, sz) * kQ + i];
  const std::size_t here = cell_index(d, x, y, z);
  T v = post[here * kQ + opposite(i)];
  if (kind >= FlagField::kLidBase) {
    const T rho = moments(load(post, here)).rho;
    v += lid_correction<T>(i, rho, flags.lid_velocity(kind));
  }
  return v;
}

}  // namespace reference_detail

/// Streaming step alone: pre-collision values of every fluid cell.
template <typename T>
ReferenceState<T> reference_stream(const FlagField& flags, const ReferenceState<T>& post) {
  const Dims& d = flags.dims();
  ReferenceState<T> pre(post.size(), T(0));
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        if (!flags.is_fluid(x, y, z)) continue;
        const std::size_t c = reference_detail::cell_index(d, x, y, z);
        for (int i = 0; i < kQ; ++i) pre[c * kQ + i] = reference_detail::pulled(flags, post, x, y, z, i);
      }
  return pre;
}

/// Collision step alone on every fluid cell.
template <typename T>
ReferenceState<T> reference_collide(const FlagField& flags, const ReferenceState<T>& pre, T omega) {
  const Dims& d = flags.dims();
  ReferenceState<T> post(pre.size(), T(0));
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        if (!flags.is_fluid(x, y, z)) continue;
        const std::size_t c = reference_detail::cell_index(d, x, y, z);
        reference_detail::store(post, c, bgk_collide(reference_detail::load(pre, c), omega));
      }
  return post;
}

/// Fused pull step: gather, collide, store locally.
template <typename T>
ReferenceState<T> reference_pull_step(const FlagField& flags, const ReferenceState<T>& post, T omega) {
  const Dims& d = flags.dims();
  ReferenceState<T> next(post.size(), T(0));
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        if (!flags.is_fluid(x, y, z)) continue;
        Pdfs<T> f;
        for (int i = 0; i < kQ; ++i) f[i] = reference_detail::pulled(flags, post, x, y, z, i);
        reference_detail::store(next, reference_detail::cell_index(d, x, y, z), bgk_collide(f, omega));
      }
  return next;
}

/// Split variant: a full streaming pass followed by a full collision pass.
template <typename T>
ReferenceState<T> reference_split_step(const FlagField& flags, const ReferenceState<T>& post, T omega) {
  return reference_collide(flags, reference_stream(flags, post), omega);
}

/// Push step on pre-collision state: collide locally, scatter to neighbors;
/// populations heading into a wall come back to the sender reversed.
template <typename T>
ReferenceState<T> reference_push_step(const FlagField& flags, const ReferenceState<T>& pre, T omega) {
  using namespace reference_detail;
  const Dims& d = flags.dims();
  ReferenceState<T> next(pre.size(), T(0));
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        if (!flags.is_fluid(x, y, z)) continue;
        const std::size_t c = cell_index(d, x, y, z);
        const Pdfs<T> post = bgk_collide(load(pre, c), omega);
        for (int i = 0; i < kQ; ++i) {
          const Velocity& e = velocity(i);
          const std::size_t tx = shifted(x, e[0], d.nx);
          const std::size_t ty = shifted(y, e[1], d.ny);
          const std::size_t tz = shifted(z, e[2], d.nz);
          const std::uint8_t kind = flags.raw(tx, ty, tz);
          if (kind == FlagField::kFluid) {
            next[cell_index(d, tx, ty, tz) * kQ + i] = post[i];
            continue;
          }
          const int back = opposite(i);
          T v = post[i];
          if (kind >= FlagField::kLidBase) {
            v += lid_correction<T>(back, moments(post).rho, flags.lid_velocity(kind));
          }
          next[c * kQ + back] = v;
        }
      }
  return next;
}

/// src values of `field`, all cells, in reference order.
template <typename T>
ReferenceState<T> to_reference(const PdfField<T>& field) {
  const Dims d = field.dims();
  ReferenceState<T> out(d.cells() * kQ);
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        const Pdfs<T> f = field.cell(x, y, z);
        reference_detail::store(out, reference_detail::cell_index(d, x, y, z), f);
      }
  return out;
}

struct FieldDifference {
  double max_abs = 0.0;
  double max_rel = 0.0;
  std::size_t mismatched = 0;  // values that are not bit-identical
};

/// Compare fluid-cell values of `field` (src) against a reference state.
template <typename T>
FieldDifference compare_fluid(const PdfField<T>& field, const FlagField& flags,
                              const ReferenceState<T>& ref) {
  FieldDifference out;
  const Dims d = field.dims();
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        if (!flags.is_fluid(x, y, z)) continue;
        const Pdfs<T> f = field.cell(x, y, z);
        const std::size_t c = reference_detail::cell_index(d, x, y, z);
        for (int i = 0; i < kQ; ++i) {
          const double a = f[i];
          const double b = ref[c * kQ + i];
          const double diff = std::abs(a - b);
          if (!(a == b)) ++out.mismatched;
          out.max_abs = std::max(out.max_abs, diff);
          const double scale = std::max(std::abs(b), 1e-300);
          out.max_rel = std::max(out.max_rel, std::isnan(diff) ? INFINITY : diff / scale);
        }
      }
  return out;
}

}  // namespace lbmpe
