#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "lbmpe/membench.hpp"

using namespace lbmpe;

TEST(Chunks, PlanCoversTheVectorOnce) {
  for (std::size_t n : {1u, 255u, 256u, 1000u, 65536u, 100003u}) {
    for (std::size_t chunks : {1u, 2u, 7u, 64u, 256u, 1024u}) {
      const ChunkPlan p = plan_chunks(n, chunks, 256);
      EXPECT_EQ(p.chunk_len % 256, 0u);
      std::size_t covered = 0;
      for (std::size_t c = 0; c < p.chunks; ++c) {
        EXPECT_EQ(p.begin(c), std::min(c * p.chunk_len, n));
        covered += p.end(c) - p.begin(c);
      }
      EXPECT_EQ(covered, n) << n << '/' << chunks;
    }
  }
}

TEST(Chunks, KneeAtVectorOverQuantum) {
  const std::size_t n = 1 << 16;  // knee at 256 chunks
  EXPECT_EQ(plan_chunks(n, 256, 256).nonempty_chunks, 256u);
  EXPECT_EQ(plan_chunks(n, 256, 256).chunk_len, 256u);
  EXPECT_EQ(plan_chunks(n, 512, 256).nonempty_chunks, 256u);
  EXPECT_EQ(plan_chunks(n, 4096, 256).nonempty_chunks, 256u);
  EXPECT_EQ(plan_chunks(n, 64, 256).chunk_len, 1024u);

  // 8 workers keep busy up to the knee, then the trailing ones idle
  EXPECT_EQ(active_workers(plan_chunks(n, 128, 256), 8), 8);
  EXPECT_EQ(active_workers(plan_chunks(n, 256, 256), 8), 8);
  EXPECT_EQ(active_workers(plan_chunks(n, 512, 256), 8), 4);
  EXPECT_EQ(active_workers(plan_chunks(n, 2048, 256), 8), 1);
  EXPECT_EQ(active_workers(plan_chunks(n, 4, 256), 8), 4);
}

TEST(Chunks, RejectsZero) {
  EXPECT_THROW(plan_chunks(0, 4, 256), std::invalid_argument);
  EXPECT_THROW(plan_chunks(10, 0, 256), std::invalid_argument);
  EXPECT_THROW(plan_chunks(10, 4, 0), std::invalid_argument);
}

TEST(Copy, VerifiesAndReportsBothBandwidths) {
  CopyOptions opt;
  opt.min_seconds = 0.01;
  const auto s = stream_copy<double>(1 << 18, 1, 16, opt);
  EXPECT_TRUE(s.verified);
  EXPECT_GT(s.measured_gbs, 0.0);
  EXPECT_DOUBLE_EQ(s.actual_gbs, s.measured_gbs * 1.5);
  EXPECT_EQ(s.repetitions, 5u);
  EXPECT_GE(s.copies_per_rep, 1u);
  EXPECT_GE(s.worst_seconds, s.best_seconds);
  EXPECT_GE(s.best_seconds * s.copies_per_rep, 0.0);

  const auto f = stream_copy(1000, 4, 2, 3, opt);
  EXPECT_EQ(f.precision, Precision::SP);
  EXPECT_TRUE(f.verified);
}

TEST(Copy, RejectsBadArguments) {
  EXPECT_THROW(stream_copy<double>(1024, 0, 1), std::invalid_argument);
  EXPECT_THROW(stream_copy(1024, 2, 1, 1), std::invalid_argument);
  CopyOptions opt;
  opt.repetitions = 0;
  EXPECT_THROW(stream_copy<float>(1024, 1, 1, opt), std::invalid_argument);
  EXPECT_THROW(granularity_sweep(1024, 8, 1, {}), std::invalid_argument);
}

TEST(Sweep, OneSamplePerGranularity) {
  CopyOptions opt;
  opt.min_seconds = 0.002;
  const auto counts = power_of_two_range(1, 64);
  ASSERT_EQ(counts.size(), 7u);
  EXPECT_EQ(counts.back(), 64u);
  const auto samples = granularity_sweep(1 << 14, 8, 2, counts, opt);
  ASSERT_EQ(samples.size(), counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    EXPECT_EQ(samples[k].granularity, counts[k]);
    EXPECT_TRUE(samples[k].verified);
  }
}

TEST(Csv, HeaderAndRow) {
  EXPECT_STREQ(kBandwidthCsvHeader, "run_id,n,value_bytes,workers,chunks,measured_gbs,actual_gbs,reps");
  BandwidthSample s;
  s.vector_elements = 1024;
  s.granularity = 8;
  s.workers = 2;
  s.precision = Precision::SP;
  s.measured_gbs = 10;
  s.actual_gbs = 15;
  s.repetitions = 5;
  std::ostringstream os;
  write_csv_row(os, "r1", s);
  EXPECT_EQ(os.str(), "r1,1024,4,2,8,10,15,5\n");
}

TEST(Precision, Parsing) {
  EXPECT_EQ(parse_precision("sp"), Precision::SP);
  EXPECT_EQ(parse_precision("double"), Precision::DP);
  EXPECT_THROW(parse_precision("half"), std::invalid_argument);
  EXPECT_EQ(value_bytes(Precision::DP), 8u);
}
