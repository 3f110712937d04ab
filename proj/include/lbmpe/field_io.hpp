#pragma once

// Binary field dumps.
//
//   offset  size  content
//   0       4     magic "LBMF"
//   4       4     version (u32, currently 1)
//   8       12    nx, ny, nz (u32 each)
//   20      4     number of directions (u32, 19)
//   24      4     value_bytes (u32, 4 or 8)
//   28      4     layout tag (u32): scheme (0 = SoA, 1 = AoS) | alignment_bytes << 8
//   32      ...   src values, unpadded SoA order (direction slowest, x fastest)
//
// All integers and values are little-endian.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lbmpe/storage.hpp"

namespace lbmpe {

inline constexpr std::array<char, 4> kFieldMagic{'L', 'B', 'M', 'F'};
inline constexpr std::uint32_t kFieldVersion = 1;

struct FieldHeader {
  Dims dims;
  std::uint32_t directions = kQ;
  Layout layout;
};

namespace detail {

template <typename U>
void put_le(std::ostream& os, U value) {
  unsigned char bytes[sizeof(U)];
  std::memcpy(bytes, &value, sizeof(U));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < sizeof(U) / 2; ++k) std::swap(bytes[k], bytes[sizeof(U) - 1 - k]);
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

template <typename U>
U get_le(std::istream& is) {
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
    throw std::runtime_error("truncated field dump");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < sizeof(U) / 2; ++k) std::swap(bytes[k], bytes[sizeof(U) - 1 - k]);
  }
  U value;
  std::memcpy(&value, bytes, sizeof(U));
  return value;
}

}  // namespace detail

inline std::uint32_t layout_tag(const Layout& l) {
  return static_cast<std::uint32_t>(l.scheme) | static_cast<std::uint32_t>(l.alignment_bytes << 8);
}

template <typename T>
void write_field(std::ostream& os, const PdfField<T>& field) {
  os.write(kFieldMagic.data(), kFieldMagic.size());
  detail::put_le<std::uint32_t>(os, kFieldVersion);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.dims().nx));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.dims().ny));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.dims().nz));
  detail::put_le<std::uint32_t>(os, kQ);
  detail::put_le<std::uint32_t>(os, sizeof(T));
  detail::put_le<std::uint32_t>(os, layout_tag(field.layout()));
  for_each_value(field, [&](T v) { detail::put_le<T>(os, v); });
  if (!os) throw std::runtime_error("failed to write field dump");
}

inline FieldHeader read_field_header(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kFieldMagic) {
    throw std::runtime_error("not a field dump (bad magic)");
  }
  const auto version = detail::get_le<std::uint32_t>(is);
  if (version != kFieldVersion) {
    throw std::runtime_error("unsupported field dump version " + std::to_string(version));
  }
  FieldHeader h;
  h.dims.nx = detail::get_le<std::uint32_t>(is);
  h.dims.ny = detail::get_le<std::uint32_t>(is);
  h.dims.nz = detail::get_le<std::uint32_t>(is);
  h.directions = detail::get_le<std::uint32_t>(is);
  h.layout.value_bytes = detail::get_le<std::uint32_t>(is);
  const auto tag = detail::get_le<std::uint32_t>(is);
  h.layout.scheme = static_cast<Scheme>(tag & 0xffu);
  h.layout.alignment_bytes = tag >> 8;
  if (h.directions != kQ) throw std::runtime_error("field dump is not a D3Q19 field");
  if ((tag & 0xffu) > 1u) throw std::runtime_error("unknown layout tag in field dump");
  h.layout.validate();
  return h;
}

/// Reads a dump into a field with the layout recorded in the header, or
/// `target` when given. The values land in src().
template <typename T>
PdfField<T> read_field(std::istream& is, const Layout* target = nullptr) {
  const FieldHeader h = read_field_header(is);
  if (h.layout.value_bytes != sizeof(T)) {
    throw std::runtime_error("field dump precision does not match the requested type");
  }
  PdfField<T> field(h.dims, target ? *target : h.layout);
  const auto& a = field.addressing();
  auto s = field.src();
  for (int i = 0; i < kQ; ++i)
    for (std::size_t z = 0; z < h.dims.nz; ++z)
      for (std::size_t y = 0; y < h.dims.ny; ++y)
        for (std::size_t x = 0; x < h.dims.nx; ++x) s[a(i, x, y, z)] = detail::get_le<T>(is);
  return field;
}

template <typename T>
void save_field(const std::string& path, const PdfField<T>& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(os, field);
}

template <typename T>
PdfField<T> load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_field<T>(is);
}

}  // namespace lbmpe
