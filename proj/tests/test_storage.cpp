#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include "lbmpe/field_io.hpp"
#include "lbmpe/storage.hpp"

using namespace lbmpe;

namespace {

template <typename T>
void fill_random(PdfField<T>& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  const Dims n = f.dims();
  for (auto buf : {f.src(), f.dst()})
    for (int i = 0; i < kQ; ++i)
      for (std::size_t z = 0; z < n.nz; ++z)
        for (std::size_t y = 0; y < n.ny; ++y)
          for (std::size_t x = 0; x < n.nx; ++x) buf[f.index(i, x, y, z)] = static_cast<T>(d(rng));
}

}  // namespace

TEST(Layout, PaddedStride) {
  EXPECT_EQ(padded_stride(200, 4, 128), 224u);  // ceil(800/128)*128/4
  EXPECT_EQ(padded_stride(128, 8, 128), 128u);
  EXPECT_EQ(padded_stride(200, 8, 0), 200u);
  EXPECT_EQ(padded_stride(50, 8, 128), 64u);
  EXPECT_EQ(padded_stride(50, 4, 16), 52u);
}

TEST(Layout, RejectsInvalidCombinations) {
  EXPECT_NO_THROW(Layout::aos(8).validate());
  EXPECT_THROW((Layout{Scheme::AoS, 128, 8}.validate()), std::invalid_argument);
  EXPECT_THROW((Layout{Scheme::SoA, 48, 8}.validate()), std::invalid_argument);
  EXPECT_THROW((Layout{Scheme::SoA, 0, 2}.validate()), std::invalid_argument);
  for (std::size_t a : {0, 16, 32, 64, 128}) EXPECT_NO_THROW((Layout{Scheme::SoA, a, 4}.validate()));
  EXPECT_THROW((PdfField<float>({4, 4, 4}, Layout::soa(8))), std::invalid_argument);
  EXPECT_THROW((PdfField<double>({0, 4, 4}, Layout::soa(8))), std::invalid_argument);
}

TEST(Field, StrideAndFootprint) {
  PdfField<float> sp({200, 3, 2}, Layout::soa(4, 128));
  EXPECT_EQ(sp.stride_x(), 224u);
  EXPECT_EQ(sp.bytes_allocated(), 2u * 19 * 224 * 3 * 2 * 4);

  PdfField<double> dp({128, 2, 2}, Layout::soa(8, 128));
  EXPECT_EQ(dp.stride_x(), 128u);
  EXPECT_FALSE(dp.has_padding());

  PdfField<double> plain({200, 2, 2}, Layout::soa(8));
  EXPECT_EQ(plain.stride_x(), 200u);
}

TEST(Field, BufferAndStripeAlignment) {
  for (std::size_t align : {16, 32, 64, 128}) {
    PdfField<double> f({50, 3, 3}, Layout::soa(8, align));
    for (auto buf : {f.src(), f.dst()}) {
      EXPECT_EQ(reinterpret_cast<std::uintptr_t>(buf.data()) % align, 0u);
      for (int i = 0; i < kQ; ++i)
        for (std::size_t z = 0; z < 3; ++z)
          for (std::size_t y = 0; y < 3; ++y) {
            const auto* stripe = buf.data() + f.index(i, 0, y, z);
            EXPECT_EQ(reinterpret_cast<std::uintptr_t>(stripe) % align, 0u);
          }
    }
  }
}

TEST(Index, AffineFormulas) {
  PdfField<double> soa({4, 4, 4}, Layout::soa(8));
  EXPECT_EQ(soa.index(0, 0, 0, 0), 0u);
  EXPECT_EQ(soa.index(1, 0, 0, 0), 64u);  // ((1*4 + 0)*4 + 0)*4 + 0
  EXPECT_EQ(soa.index(0, 0, 1, 0), 4u);
  EXPECT_EQ(soa.index(2, 3, 2, 1), ((2u * 4 + 1) * 4 + 2) * 4 + 3);

  PdfField<double> aos({4, 4, 4}, Layout::aos(8));
  EXPECT_EQ(aos.index(1, 0, 0, 0), 1u);
  EXPECT_EQ(aos.index(0, 1, 0, 0), 19u);
  EXPECT_EQ(aos.index(5, 3, 2, 1), (((1u * 4 + 2) * 4) + 3) * 19 + 5);

  PdfField<float> padded({5, 4, 4}, Layout::soa(4, 32));
  EXPECT_EQ(padded.stride_x(), 8u);
  EXPECT_EQ(padded.index(1, 0, 0, 0), 4u * 4 * 8);
}

TEST(Index, InjectiveOnSmallGrids) {
  for (const Layout& l : {Layout::soa(8), Layout::aos(8), Layout::soa(8, 128), Layout::soa(8, 16)}) {
    for (std::size_t n : {1u, 3u, 5u, 8u}) {
      PdfField<double> f({n, n, n}, l);
      std::set<std::size_t> seen;
      for (int i = 0; i < kQ; ++i)
        for (std::size_t z = 0; z < n; ++z)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x) {
              const std::size_t off = f.index(i, x, y, z);
              ASSERT_LT(off, f.size());
              seen.insert(off);
            }
      EXPECT_EQ(seen.size(), static_cast<std::size_t>(kQ) * n * n * n);
    }
  }
}

TEST(Buffers, SwapExchangesRolesWithoutCopying) {
  PdfField<double> f({3, 3, 3}, Layout::soa(8));
  const double* a = f.src().data();
  const double* b = f.dst().data();
  f.swap_buffers();
  EXPECT_EQ(f.src().data(), b);
  EXPECT_EQ(f.dst().data(), a);
  f.swap_buffers();
  EXPECT_EQ(f.src().data(), a);

  f.dst()[f.index(4, 1, 2, 0)] = 42.5;
  f.swap_buffers();
  EXPECT_EQ(f.src()[f.index(4, 1, 2, 0)], 42.5);
}

TEST(Padding, DefaultsToZeroAndPoisonIsDetectable) {
  PdfField<double> f({5, 2, 2}, Layout::soa(8, 64));
  ASSERT_TRUE(f.has_padding());
#ifdef NDEBUG
  EXPECT_EQ(f.src()[5], 0.0);
#else
  EXPECT_TRUE(std::isnan(f.src()[5]));
#endif
  f.poison_padding();
  EXPECT_TRUE(f.padding_poisoned());
  EXPECT_FALSE(has_nan(f));
  f.dst()[f.index(3, 4, 1, 1) + 1] = 1.0;  // first padding slot of a stripe
  EXPECT_FALSE(f.padding_poisoned());
}

TEST(Transcode, RoundTripIsBitIdentical) {
  PdfField<double> soa({5, 4, 3}, Layout::soa(8));
  fill_random(soa, 1);
  const auto aos = layout_transcode(soa, Layout::aos(8));
  const auto back = layout_transcode(aos, Layout::soa(8));
  for (std::size_t k = 0; k < soa.size(); ++k) {
    EXPECT_EQ(back.src()[k], soa.src()[k]);
    EXPECT_EQ(back.dst()[k], soa.dst()[k]);
  }
  EXPECT_EQ(field_checksum(aos), field_checksum(soa));
}

TEST(Transcode, EveryValueSurvivesEveryLayout) {
  PdfField<float> src({7, 5, 4}, Layout::soa(4, 128));
  fill_random(src, 2);
  for (const Layout& l : {Layout::soa(4), Layout::aos(4), Layout::soa(4, 32)}) {
    const auto out = layout_transcode(src, l);
    for (int i = 0; i < kQ; ++i)
      for (std::size_t z = 0; z < 4; ++z)
        for (std::size_t y = 0; y < 5; ++y)
          for (std::size_t x = 0; x < 7; ++x) {
            ASSERT_EQ(out.src()[out.index(i, x, y, z)], src.src()[src.index(i, x, y, z)]);
            ASSERT_EQ(out.dst()[out.index(i, x, y, z)], src.dst()[src.index(i, x, y, z)]);
          }
  }
}

TEST(Transcode, DroppingPaddingShrinksOnlyThePadding) {
  PdfField<double> padded({50, 3, 3}, Layout::soa(8, 128));
  fill_random(padded, 3);
  const auto plain = layout_transcode(padded, Layout::soa(8));
  EXPECT_EQ(plain.size(), static_cast<std::size_t>(kQ) * 50 * 3 * 3);
  EXPECT_EQ(padded.size(), static_cast<std::size_t>(kQ) * 64 * 3 * 3);
  EXPECT_EQ(field_checksum(plain), field_checksum(padded));
}

TEST(Flags, CavityGeometry) {
  const Dims d{8, 8, 8};
  const auto f = FlagField::cavity(d, {0.05, 0, 0});
  EXPECT_TRUE(f.closed());
  EXPECT_EQ(f.fluid_cells(), 6u * 6 * 6);
  EXPECT_EQ(f.kind(3, 3, 7), CellKind::MovingLid);
  EXPECT_EQ(f.kind(0, 3, 7), CellKind::NoSlip);
  EXPECT_EQ(f.kind(3, 3, 0), CellKind::NoSlip);
  EXPECT_EQ(f.kind(3, 3, 3), CellKind::Fluid);
  EXPECT_EQ(f.lid_velocity(f.raw(3, 3, 7)).x, 0.05);
  EXPECT_FALSE(FlagField::all_fluid(d).closed());
}

TEST(Dump, RoundTripPreservesValuesAndLayout) {
  PdfField<float> f({6, 3, 2}, Layout::soa(4, 64));
  fill_random(f, 4);
  std::stringstream ss;
  write_field(ss, f);
  EXPECT_EQ(ss.str().size(), 32u + 19u * 6 * 3 * 2 * 4);
  const auto g = read_field<float>(ss);
  EXPECT_EQ(g.layout(), f.layout());
  EXPECT_EQ(field_checksum(g), field_checksum(f));
}

TEST(Dump, HeaderIsLittleEndianAndBitExact) {
  PdfField<double> f({2, 1, 1}, Layout::aos(8));
  for (int i = 0; i < kQ; ++i) {
    f.src()[f.index(i, 0, 0, 0)] = i;
    f.src()[f.index(i, 1, 0, 0)] = 100 + i;
  }
  std::stringstream ss;
  write_field(ss, f);
  const std::string s = ss.str();
  const unsigned char expected[32] = {'L', 'B', 'M', 'F', 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0,
                                      1,   0,   0,   0,   19, 0, 0, 0, 8, 0, 0, 0, 1, 0, 0, 0};
  for (int k = 0; k < 32; ++k) EXPECT_EQ(static_cast<unsigned char>(s[k]), expected[k]) << "byte " << k;
  // first payload value is direction 0 at x=0, the second is x=1
  double v0, v1;
  std::memcpy(&v0, s.data() + 32, 8);
  std::memcpy(&v1, s.data() + 40, 8);
  EXPECT_EQ(v0, 0.0);
  EXPECT_EQ(v1, 100.0);
}

TEST(Dump, RejectsCorruptInput) {
  std::stringstream bad("XXXX");
  EXPECT_THROW(read_field_header(bad), std::runtime_error);

  PdfField<double> f({2, 2, 2}, Layout::soa(8));
  std::stringstream ss;
  write_field(ss, f);
  std::stringstream truncated(ss.str().substr(0, 40));
  EXPECT_THROW(read_field<double>(truncated), std::runtime_error);
  std::stringstream full(ss.str());
  EXPECT_THROW(read_field<float>(full), std::runtime_error);
}
