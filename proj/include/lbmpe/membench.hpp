#pragma once

// STREAM-style copy benchmark (C = A) with a configurable chunk count.
//
// The vector is cut into `chunks` contiguous pieces of
//   chunk_len = max(quantum, round_up(ceil(n / chunks), quantum))
// elements, and each worker owns a contiguous block of chunks, mirroring
// how thread blocks map onto multiprocessors. Once chunks * quantum
// exceeds n the trailing chunks are empty, so the trailing workers idle
// and throughput drops; the knee sits at chunks = n / quantum.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbmpe/storage.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbmpe {

enum class Precision { SP, DP };

inline std::size_t value_bytes(Precision p) { return p == Precision::SP ? 4 : 8; }
inline const char* to_string(Precision p) { return p == Precision::SP ? "sp" : "dp"; }
inline Precision parse_precision(const std::string& s) {
  if (s == "sp" || s == "SP" || s == "float" || s == "single") return Precision::SP;
  if (s == "dp" || s == "DP" || s == "double") return Precision::DP;
  throw std::invalid_argument("unknown precision '" + s + "' (expected sp or dp)");
}
inline Precision precision_for_bytes(std::size_t bytes) {
  if (bytes == 4) return Precision::SP;
  if (bytes == 8) return Precision::DP;
  throw std::invalid_argument("value_bytes must be 4 or 8");
}

struct CopyOptions {
  std::size_t repetitions = 5;          // best-of-k, k >= 5
  double min_seconds = 0.05;            // per timed repetition
  double write_allocate_factor = 1.5;   // actual / measured traffic
  std::size_t quantum = 256;            // elements per chunk granule
};

struct BandwidthSample {
  std::size_t vector_elements = 0;
  std::size_t granularity = 0;  // chunks
  int workers = 1;
  Precision precision = Precision::DP;
  double measured_gbs = 0.0;    // 2 n s / t, user-visible traffic
  double actual_gbs = 0.0;      // measured_gbs * write_allocate_factor
  std::size_t repetitions = 0;
  std::size_t copies_per_rep = 0;
  double best_seconds = 0.0;    // per copy
  double worst_seconds = 0.0;   // per copy
  bool verified = false;

  /// max/min bandwidth over the timed repetitions.
  double spread() const { return best_seconds > 0 ? worst_seconds / best_seconds : 0.0; }
};

/// Actual (write-allocate inclusive) bandwidth from user-visible bandwidth.
inline double actual_bandwidth(double measured_gbs, double write_allocate_factor = 1.5) {
  return measured_gbs * write_allocate_factor;
}

struct ChunkPlan {
  std::size_t chunk_len = 0;
  std::size_t chunks = 0;
  std::size_t nonempty_chunks = 0;

  std::size_t n = 0;

  std::size_t begin(std::size_t c) const { return std::min(c * chunk_len, n); }
  std::size_t end(std::size_t c) const { return std::min((c + 1) * chunk_len, n); }
};

inline ChunkPlan plan_chunks(std::size_t n, std::size_t chunks, std::size_t quantum) {
  if (n == 0) throw std::invalid_argument("vector length must be >= 1");
  if (chunks == 0) throw std::invalid_argument("chunk count must be >= 1");
  if (quantum == 0) throw std::invalid_argument("chunk quantum must be >= 1");
  ChunkPlan p;
  p.chunks = chunks;
  p.n = n;
  const std::size_t per = (n + chunks - 1) / chunks;
  p.chunk_len = std::max(quantum, (per + quantum - 1) / quantum * quantum);
  p.nonempty_chunks = std::min(chunks, (n + p.chunk_len - 1) / p.chunk_len);
  return p;
}

/// Number of workers that receive at least one non-empty chunk.
inline int active_workers(const ChunkPlan& plan, int workers) {
  int active = 0;
  for (int w = 0; w < workers; ++w) {
    const std::size_t first = plan.chunks * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
    const std::size_t last = plan.chunks * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
    if (first < last && first < plan.nonempty_chunks) ++active;
  }
  return active;
}

namespace detail {

template <typename T>
void chunked_copy(const T* __restrict a, T* __restrict c, const ChunkPlan& plan, int workers) {
#pragma omp parallel num_threads(workers)
  {
#ifdef _OPENMP
    const int w = omp_get_thread_num();
    const int nw = omp_get_num_threads();
#else
    const int w = 0;
    const int nw = 1;
#endif
    const std::size_t first = plan.chunks * static_cast<std::size_t>(w) / static_cast<std::size_t>(nw);
    const std::size_t last = plan.chunks * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(nw);
    for (std::size_t ch = first; ch < last; ++ch) {
      const std::size_t b = plan.begin(ch);
      const std::size_t e = plan.end(ch);
      for (std::size_t i = b; i < e; ++i) c[i] = a[i];
    }
  }
}

template <typename T>
void first_touch(T* a, T* c, const ChunkPlan& plan, int workers) {
#pragma omp parallel num_threads(workers)
  {
#ifdef _OPENMP
    const int w = omp_get_thread_num();
    const int nw = omp_get_num_threads();
#else
    const int w = 0;
    const int nw = 1;
#endif
    const std::size_t first = plan.chunks * static_cast<std::size_t>(w) / static_cast<std::size_t>(nw);
    const std::size_t last = plan.chunks * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(nw);
    for (std::size_t ch = first; ch < last; ++ch) {
      for (std::size_t i = plan.begin(ch); i < plan.end(ch); ++i) {
        a[i] = static_cast<T>(i % 4093) * T(0.25) + T(1);
        c[i] = T(-1);
      }
    }
  }
}

}  // namespace detail

template <typename T>
BandwidthSample stream_copy(std::size_t n, int workers, std::size_t chunks, const CopyOptions& opt = {}) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  if (opt.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  const ChunkPlan plan = plan_chunks(n, chunks, opt.quantum);

  AlignedBuffer<T> a(n, 64);
  AlignedBuffer<T> c(n, 64);
  detail::first_touch(a.data(), c.data(), plan, workers);

  using clock = std::chrono::steady_clock;
  auto time_copies = [&](std::size_t copies) {
    const auto t0 = clock::now();
    for (std::size_t k = 0; k < copies; ++k) detail::chunked_copy(a.data(), c.data(), plan, workers);
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  // warm up, then size the inner repetition count to reach min_seconds
  const double once = std::max(time_copies(1), 1e-9);
  const std::size_t copies = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opt.min_seconds / once)));

  BandwidthSample s;
  s.vector_elements = n;
  s.granularity = chunks;
  s.workers = workers;
  s.precision = sizeof(T) == 4 ? Precision::SP : Precision::DP;
  s.repetitions = opt.repetitions;
  s.copies_per_rep = copies;
  s.best_seconds = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < opt.repetitions; ++r) {
    const double per_copy = time_copies(copies) / static_cast<double>(copies);
    s.best_seconds = std::min(s.best_seconds, per_copy);
    s.worst_seconds = std::max(s.worst_seconds, per_copy);
  }

  s.verified = std::equal(a.data(), a.data() + n, c.data());
  if (!s.verified) throw std::runtime_error("stream copy produced a wrong result");

  const double bytes = 2.0 * static_cast<double>(n) * sizeof(T);
  s.measured_gbs = bytes / s.best_seconds / 1e9;
  s.actual_gbs = actual_bandwidth(s.measured_gbs, opt.write_allocate_factor);
  return s;
}

inline BandwidthSample stream_copy(std::size_t n, std::size_t value_bytes, int workers, std::size_t chunks,
                                   const CopyOptions& opt = {}) {
  return precision_for_bytes(value_bytes) == Precision::SP ? stream_copy<float>(n, workers, chunks, opt)
                                                           : stream_copy<double>(n, workers, chunks, opt);
}

inline std::vector<BandwidthSample> granularity_sweep(std::size_t n, std::size_t value_bytes, int workers,
                                                      const std::vector<std::size_t>& chunk_counts,
                                                      const CopyOptions& opt = {}) {
  if (chunk_counts.empty()) throw std::invalid_argument("granularity sweep needs at least one chunk count");
  std::vector<BandwidthSample> out;
  out.reserve(chunk_counts.size());
  for (std::size_t chunks : chunk_counts) out.push_back(stream_copy(n, value_bytes, workers, chunks, opt));
  return out;
}

/// Powers of two from `lo` to `hi` inclusive.
inline std::vector<std::size_t> power_of_two_range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi && v != 0; v *= 2) out.push_back(v);
  return out;
}

inline constexpr const char* kBandwidthCsvHeader = "run_id,n,value_bytes,workers,chunks,measured_gbs,actual_gbs,reps";

inline void write_csv_row(std::ostream& os, const std::string& run_id, const BandwidthSample& s) {
  os << run_id << ',' << s.vector_elements << ',' << value_bytes(s.precision) << ',' << s.workers << ','
     << s.granularity << ',' << s.measured_gbs << ',' << s.actual_gbs << ',' << s.repetitions << '\n';
}

}  // namespace lbmpe
