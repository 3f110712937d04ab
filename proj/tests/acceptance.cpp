// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lbmpe/membench.hpp"
#include "lbmpe/perfmodel.hpp"
#include "lbmpe/validation.hpp"
#include "lbmpe/verify.hpp"

using namespace lbmpe;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %d  %-34s %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), s);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

int workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int main() {
  criterion(1, "model arithmetic", [] {
    const double sp = bytes_per_update(TrafficModel::cpu(Precision::SP));
    const double dp = bytes_per_update(TrafficModel::cpu(Precision::DP));
    const double sp_s = bytes_per_update(TrafficModel::streaming(Precision::SP));
    const double dp_s = bytes_per_update(TrafficModel::streaming(Precision::DP));
    const long c_sp = std::lround(ceiling_mflups(40.2, sp));
    const long c_dp = std::lround(ceiling_mflups(40.2, dp));
    std::ostringstream os;
    os << "bytes " << sp << '/' << dp << '/' << sp_s << '/' << dp_s << ", ceilings at 40.2 GB/s " << c_sp << '/'
       << c_dp << " (expect 228/456/152/304, 176/88)";
    return Outcome{sp == 228 && dp == 456 && sp_s == 152 && dp_s == 304 && c_sp == 176 && c_dp == 88, os.str()};
  });

  criterion(2, "write-allocate identity", [] {
    const double stored = actual_bandwidth(kX5650NodeMeasuredGbs, kCopyWriteAllocateFactor);
    const double table = historical_bandwidths().front().gbs;
    CopyOptions opt;
    opt.min_seconds = 0.01;
    const auto s = stream_copy<double>(1 << 20, 1, 4, opt);
    const bool pipeline = s.actual_gbs == s.measured_gbs * 1.5;
    std::ostringstream os;
    os.precision(17);
    os << "26.8 x 1.5 = " << stored << ", table input " << table << ", live sample actual == 1.5 x measured: "
       << (pipeline ? "yes" : "no");
    return Outcome{stored == 40.2 && table == 40.2 && pipeline, os.str()};
  });

  criterion(3, "oracle equivalence", [] {
    VerifyOptions v;
    v.patterns = 24;
    v.max_edge = 8;
    v.oracle_steps = 10;
    v.workers = std::max(2, workers());
    const OracleStats st = oracle_equivalence(v);
    std::ostringstream os;
    os << st.patterns << " patterns <= 8^3, " << st.comparisons << " layout runs, 10 steps, max rel " << st.max_rel
       << " (<= 1e-13), " << st.mismatched << " values not bit-identical";
    return Outcome{st.patterns >= 20 && st.max_rel <= 1e-13, os.str()};
  });

  criterion(4, "layout invariance", [] {
    const double d = layout_spread(32, 100, workers());
    std::ostringstream os;
    os << "soa / aos / soa+128 cavity 32^3, 100 DP steps, max rel " << d << " (<= 1e-13)";
    return Outcome{d <= 1e-13, os.str()};
  });

  criterion(5, "conservation", [] {
    VerifyOptions v;
    v.box_edge = 32;
    v.box_steps = 1000;
    v.workers = workers();
    const CheckResult mass = check_mass_conservation(v);
    const CheckResult flow = check_uniform_flow(v);
    std::ostringstream os;
    os << "closed box 32^3 1000 DP steps drift " << mass.value << " (<= 1e-12), uniform flow deviation "
       << flow.value << " (<= 1e-13)";
    return Outcome{mass.passed && flow.passed, os.str()};
  });

  criterion(6, "model dominance", [] {
    CopyOptions opt;
    opt.repetitions = 5;
    const auto bw = stream_copy<double>(std::size_t{1} << 25, workers(), static_cast<std::size_t>(workers()), opt);
    bool ok = true;
    std::ostringstream os;
    os.precision(3);
    os << "copy " << bw.actual_gbs << " GB/s actual;";
    auto run = [&](auto tag, Scheme scheme, std::size_t align) {
      using T = decltype(tag);
      const Precision p = sizeof(T) == 4 ? Precision::SP : Precision::DP;
      CavityConfig c;
      c.n = 128;
      c.steps = 6;
      c.warmup_steps = 1;
      c.residual_interval = c.steps;
      c.scheme = scheme;
      c.alignment_bytes = align;
      c.workers = workers();
      const auto r = lid_driven_cavity<T>(c);
      const auto ceil = PerfCeiling::make(bw.actual_gbs, TrafficModel::cpu(p));
      const auto e = efficiency(r.mlups(), ceil);
      ok = ok && !e.exceeds_model;
      os << ' ' << to_string(p) << '/' << to_string(scheme) << (align ? "+128" : "") << ' ' << r.mlups() << '/'
         << ceil.ceiling_mflups << '=' << e.value << (e.exceeds_model ? "(!)" : "");
    };
    for (Precision p : {Precision::SP, Precision::DP}) {
      for (auto [scheme, align] : {std::pair{Scheme::SoA, 0u}, std::pair{Scheme::AoS, 0u}, std::pair{Scheme::SoA, 128u}}) {
        if (p == Precision::SP) {
          run(float{}, scheme, align);
        } else {
          run(double{}, scheme, align);
        }
      }
    }
    os << " (MFLUP/s measured/ceiling=efficiency, 128^3)";
    return Outcome{ok, os.str()};
  });

  criterion(7, "historical GPU rows", [] {
    const auto rows = model_table(historical_bandwidths());
    const long expect[5][2] = {{176, 88}, {788, 394}, {624, 312}, {512, 256}, {492, -1}};
    bool ok = rows.size() == 5;
    std::ostringstream os;
    for (std::size_t k = 0; ok && k < rows.size(); ++k) {
      ok = ok && rows[k].sp_rounded == expect[k][0] && rows[k].dp_rounded == expect[k][1];
      os << rows[k].name << ' ' << rows[k].sp_rounded << '/' << (rows[k].dp_rounded < 0 ? std::string("-") : std::to_string(rows[k].dp_rounded))
         << (k + 1 < rows.size() ? ", " : "");
    }
    return Outcome{ok, os.str()};
  });

  criterion(8, "padding untouched", [] {
    VerifyOptions v;
    v.workers = workers();
    const CheckResult dp = check_padding(v, 20);
    const Dims d{50, 56, 56};
    Simulation<float> sim(d, Layout::soa(4, 128), FlagField::cavity(d, {0.05, 0, 0}), RelaxationParams(0.6),
                          v.workers);
    sim.field().poison_padding();
    sim.initialize_equilibrium();
    sim.run(20);
    const bool sp_ok = sim.field().padding_poisoned() && !has_nan(sim.field());
    std::ostringstream os;
    os << "dp: " << dp.detail << "; sp stride " << sim.field().stride_x() << ' '
       << (sp_ok ? "intact" : "touched");
    return Outcome{dp.passed && sp_ok, os.str()};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
