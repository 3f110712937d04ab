#pragma once

// PDF and flag grids, memory layouts and the fused affine index operator.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lbmpe/lattice.hpp"

namespace lbmpe {

enum class Scheme : std::uint8_t { SoA = 0, AoS = 1 };

inline const char* to_string(Scheme s) { return s == Scheme::SoA ? "soa" : "aos"; }

inline Scheme parse_scheme(const std::string& s) {
  if (s == "soa" || s == "SoA") return Scheme::SoA;
  if (s == "aos" || s == "AoS") return Scheme::AoS;
  throw std::invalid_argument("unknown layout scheme '" + s + "' (expected soa or aos)");
}

struct Dims {
  std::size_t nx = 0, ny = 0, nz = 0;

  std::size_t cells() const { return nx * ny * nz; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct Layout {
  Scheme scheme = Scheme::SoA;
  std::size_t alignment_bytes = 0;  // start of every x-stripe; 0 = unpadded
  std::size_t value_bytes = 8;

  friend bool operator==(const Layout&, const Layout&) = default;

  void validate() const {
    if (value_bytes != 4 && value_bytes != 8) {
      throw std::invalid_argument("value_bytes must be 4 or 8, got " + std::to_string(value_bytes));
    }
    switch (alignment_bytes) {
      case 0: case 16: case 32: case 64: case 128: break;
      default:
        throw std::invalid_argument("alignment must be one of 0, 16, 32, 64, 128 bytes, got " +
                                    std::to_string(alignment_bytes));
    }
    if (scheme == Scheme::AoS && alignment_bytes != 0) {
      throw std::invalid_argument("stripe padding is only defined for the SoA layout");
    }
  }

  static Layout soa(std::size_t value_bytes, std::size_t alignment = 0) {
    return {Scheme::SoA, alignment, value_bytes};
  }
  static Layout aos(std::size_t value_bytes) { return {Scheme::AoS, 0, value_bytes}; }
};

/// Smallest stride s >= nx with s * value_bytes a multiple of the alignment.
inline std::size_t padded_stride(std::size_t nx, std::size_t value_bytes, std::size_t alignment) {
  if (alignment == 0) return nx;
  const std::size_t bytes = (nx * value_bytes + alignment - 1) / alignment * alignment;
  return bytes / value_bytes;
}

/// Affine index strides: offset = i*dir + x*xs + y*ys + z*zs.
struct Addressing {
  std::size_t dir = 0, xs = 0, ys = 0, zs = 0;

  std::size_t operator()(int i, std::size_t x, std::size_t y, std::size_t z) const {
    return static_cast<std::size_t>(i) * dir + x * xs + y * ys + z * zs;
  }

  static Addressing make(Scheme scheme, const Dims& d, std::size_t stride_x) {
    if (scheme == Scheme::SoA) {
      // ((i*nz + z)*ny + y)*stride_x + x
      return {d.nz * d.ny * stride_x, 1, stride_x, d.ny * stride_x};
    }
    // (((z*ny + y)*stride_x) + x)*19 + i
    return {1, kQ, kQ * stride_x, kQ * stride_x * d.ny};
  }
};

/// Owning, aligned, non-copyable array of trivially copyable values.
template <typename T>
class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  AlignedBuffer(std::size_t n, std::size_t alignment)
      : size_(n), align_(std::max<std::size_t>(alignment, alignof(T))) {
    if (n == 0) return;
    data_ = static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{align_}));
    std::uninitialized_fill_n(data_, n, T{});
  }
  AlignedBuffer(AlignedBuffer&& o) noexcept
      : data_(std::exchange(o.data_, nullptr)), size_(std::exchange(o.size_, 0)), align_(o.align_) {}
  AlignedBuffer& operator=(AlignedBuffer&& o) noexcept {
    if (this != &o) {
      release();
      data_ = std::exchange(o.data_, nullptr);
      size_ = std::exchange(o.size_, 0);
      align_ = o.align_;
    }
    return *this;
  }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  ~AlignedBuffer() { release(); }

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  std::size_t alignment() const { return align_; }
  std::span<T> span() { return {data_, size_}; }
  std::span<const T> span() const { return {data_, size_}; }

 private:
  void release() {
    if (data_) ::operator delete(data_, std::align_val_t{align_});
    data_ = nullptr;
  }

  T* data_ = nullptr;
  std::size_t size_ = 0;
  std::size_t align_ = alignof(T);
};

/// Double-buffered PDF storage. `src()` holds the current state, `dst()` is
/// written by the kernels; `swap_buffers()` exchanges the roles.
template <typename T>
class PdfField {
  static_assert(std::is_floating_point_v<T>, "PDF values are float or double");

 public:
  using value_type = T;

  PdfField(Dims dims, Layout layout) : dims_(dims), layout_(layout) {
    layout_.validate();
    if (layout_.value_bytes != sizeof(T)) {
      throw std::invalid_argument("layout value_bytes " + std::to_string(layout_.value_bytes) +
                                  " does not match the field precision");
    }
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
      throw std::invalid_argument("field dimensions must all be >= 1");
    }
    stride_x_ = padded_stride(dims.nx, sizeof(T), layout_.alignment_bytes);
    addr_ = Addressing::make(layout_.scheme, dims_, stride_x_);
    const std::size_t n = static_cast<std::size_t>(kQ) * stride_x_ * dims.ny * dims.nz;
    const std::size_t align = std::max<std::size_t>(layout_.alignment_bytes, 64);
    buffers_[0] = AlignedBuffer<T>(n, align);
    buffers_[1] = AlignedBuffer<T>(n, align);
    if (bytes_allocated() != 2 * kQ * stride_x_ * dims.ny * dims.nz * sizeof(T)) {
      throw std::logic_error("PDF field footprint mismatch");
    }
#ifndef NDEBUG
    poison_padding();
#endif
  }

  const Dims& dims() const { return dims_; }
  const Layout& layout() const { return layout_; }
  std::size_t stride_x() const { return stride_x_; }
  const Addressing& addressing() const { return addr_; }

  /// Elements per buffer, padding included.
  std::size_t size() const { return buffers_[0].size(); }
  std::size_t bytes_allocated() const { return 2 * size() * sizeof(T); }

  std::size_t index(int i, std::size_t x, std::size_t y, std::size_t z) const {
    assert(i >= 0 && i < kQ);
    assert(x < dims_.nx && y < dims_.ny && z < dims_.nz);
    return addr_(i, x, y, z);
  }

  std::span<T> src() { return buffers_[current_].span(); }
  std::span<const T> src() const { return buffers_[current_].span(); }
  std::span<T> dst() { return buffers_[current_ ^ 1u].span(); }
  std::span<const T> dst() const { return buffers_[current_ ^ 1u].span(); }

  void swap_buffers() noexcept { current_ ^= 1u; }

  /// Padding elements in x-stripes, i.e. x in [nx, stride_x).
  bool has_padding() const { return stride_x_ > dims_.nx; }

  /// Fill every padding element of both buffers with a quiet NaN.
  void poison_padding() {
    if (!has_padding()) return;
    for (auto& b : buffers_) {
      for_each_padding([&](std::size_t off) { b.data()[off] = std::numeric_limits<T>::quiet_NaN(); });
    }
  }

  /// True when every padding element of both buffers is still NaN.
  bool padding_poisoned() const {
    bool ok = true;
    for (const auto& b : buffers_) {
      for_each_padding([&](std::size_t off) { ok = ok && std::isnan(b.data()[off]); });
    }
    return ok;
  }

  template <typename F>
  void for_each_padding(F&& f) const {
    for (int i = 0; i < kQ; ++i)
      for (std::size_t z = 0; z < dims_.nz; ++z)
        for (std::size_t y = 0; y < dims_.ny; ++y)
          for (std::size_t x = dims_.nx; x < stride_x_; ++x) f(addr_(i, x, y, z));
  }

  Pdfs<T> cell(std::size_t x, std::size_t y, std::size_t z) const {
    Pdfs<T> f;
    const auto s = src();
    for (int i = 0; i < kQ; ++i) f[i] = s[addr_(i, x, y, z)];
    return f;
  }

  void set_cell(std::size_t x, std::size_t y, std::size_t z, const Pdfs<T>& f) {
    auto s = src();
    for (int i = 0; i < kQ; ++i) s[addr_(i, x, y, z)] = f[i];
  }

 private:
  Dims dims_;
  Layout layout_;
  std::size_t stride_x_ = 0;
  Addressing addr_;
  AlignedBuffer<T> buffers_[2];
  unsigned current_ = 0;
};

template <typename T>
PdfField<T> make_field(Dims dims, Layout layout) {
  return PdfField<T>(dims, layout);
}

/// Copy `field` into a new field with `target` layout; both buffers are
/// transcoded and the src/dst roles are preserved. Padding is never copied.
template <typename T>
PdfField<T> layout_transcode(const PdfField<T>& field, Layout target) {
  PdfField<T> out(field.dims(), target);
  const Dims d = field.dims();
  const Addressing& a = field.addressing();
  const Addressing& b = out.addressing();
  auto copy = [&](std::span<const T> from, std::span<T> to) {
    for (int i = 0; i < kQ; ++i)
      for (std::size_t z = 0; z < d.nz; ++z)
        for (std::size_t y = 0; y < d.ny; ++y)
          for (std::size_t x = 0; x < d.nx; ++x) to[b(i, x, y, z)] = from[a(i, x, y, z)];
  };
  copy(field.src(), out.src());
  copy(field.dst(), out.dst());
  return out;
}

/// Visit src values in canonical unpadded SoA order (direction slowest).
template <typename T, typename F>
void for_each_value(const PdfField<T>& field, F&& f) {
  const Dims d = field.dims();
  const auto& a = field.addressing();
  const auto s = field.src();
  for (int i = 0; i < kQ; ++i)
    for (std::size_t z = 0; z < d.nz; ++z)
      for (std::size_t y = 0; y < d.ny; ++y)
        for (std::size_t x = 0; x < d.nx; ++x) f(s[a(i, x, y, z)]);
}

/// FNV-1a over the src values in canonical order; independent of layout.
template <typename T>
std::uint64_t field_checksum(const PdfField<T>& field) {
  std::uint64_t h = 1469598103934665603ull;
  for_each_value(field, [&](T v) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ull;
    }
  });
  return h;
}

template <typename T>
bool has_nan(const PdfField<T>& field) {
  bool found = false;
  for_each_value(field, [&](T v) { found = found || std::isnan(v); });
  return found;
}

enum class CellKind : std::uint8_t { Fluid = 0, NoSlip = 1, MovingLid = 2 };

/// Per-cell kinds in a dense byte array, x fastest. Moving-lid cells carry
/// a wall velocity, stored once per distinct value.
class FlagField {
 public:
  static constexpr std::uint8_t kFluid = 0;
  static constexpr std::uint8_t kNoSlip = 1;
  static constexpr std::uint8_t kLidBase = 2;  // kLidBase + k -> lid_velocities()[k]

  FlagField() = default;
  explicit FlagField(Dims dims) : dims_(dims), cells_(dims.cells(), kFluid) {
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
      throw std::invalid_argument("flag field dimensions must all be >= 1");
    }
  }

  const Dims& dims() const { return dims_; }

  std::size_t linear(std::size_t x, std::size_t y, std::size_t z) const {
    return (z * dims_.ny + y) * dims_.nx + x;
  }

  std::uint8_t raw(std::size_t x, std::size_t y, std::size_t z) const { return cells_[linear(x, y, z)]; }
  const std::uint8_t* row(std::size_t y, std::size_t z) const { return cells_.data() + linear(0, y, z); }

  CellKind kind(std::size_t x, std::size_t y, std::size_t z) const {
    const std::uint8_t v = raw(x, y, z);
    return v == kFluid ? CellKind::Fluid : v == kNoSlip ? CellKind::NoSlip : CellKind::MovingLid;
  }
  bool is_fluid(std::size_t x, std::size_t y, std::size_t z) const { return raw(x, y, z) == kFluid; }

  void set_fluid(std::size_t x, std::size_t y, std::size_t z) { cells_[linear(x, y, z)] = kFluid; }
  void set_no_slip(std::size_t x, std::size_t y, std::size_t z) { cells_[linear(x, y, z)] = kNoSlip; }
  void set_moving_lid(std::size_t x, std::size_t y, std::size_t z, Vec3<double> u) {
    std::size_t k = 0;
    while (k < lids_.size() && !(lids_[k].x == u.x && lids_[k].y == u.y && lids_[k].z == u.z)) ++k;
    if (k == lids_.size()) {
      if (lids_.size() + kLidBase > 255) throw std::length_error("too many distinct lid velocities");
      lids_.push_back(u);
    }
    cells_[linear(x, y, z)] = static_cast<std::uint8_t>(kLidBase + k);
  }

  const Vec3<double>& lid_velocity(std::uint8_t raw_flag) const { return lids_[raw_flag - kLidBase]; }
  const std::vector<Vec3<double>>& lid_velocities() const { return lids_; }

  std::size_t fluid_cells() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kFluid));
  }

  /// Every cell on the domain boundary is non-fluid.
  bool closed() const {
    for (std::size_t z = 0; z < dims_.nz; ++z)
      for (std::size_t y = 0; y < dims_.ny; ++y)
        for (std::size_t x = 0; x < dims_.nx; ++x) {
          const bool edge = x == 0 || y == 0 || z == 0 || x + 1 == dims_.nx || y + 1 == dims_.ny ||
                            z + 1 == dims_.nz;
          if (edge && is_fluid(x, y, z)) return false;
        }
    return true;
  }

  static FlagField all_fluid(Dims dims) { return FlagField(dims); }

  /// Cube cavity: no-slip on five faces, the top face (z = nz-1) moves with
  /// `lid`. Edges shared between the lid and a side wall are no-slip.
  static FlagField cavity(Dims dims, Vec3<double> lid) {
    FlagField f(dims);
    for (std::size_t z = 0; z < dims.nz; ++z)
      for (std::size_t y = 0; y < dims.ny; ++y)
        for (std::size_t x = 0; x < dims.nx; ++x) {
          const bool side = x == 0 || y == 0 || x + 1 == dims.nx || y + 1 == dims.ny || z == 0;
          if (side) {
            f.set_no_slip(x, y, z);
          } else if (z + 1 == dims.nz) {
            f.set_moving_lid(x, y, z, lid);
          }
        }
    return f;
  }

 private:
  Dims dims_;
  std::vector<std::uint8_t> cells_;
  std::vector<Vec3<double>> lids_;
};

}  // namespace lbmpe
