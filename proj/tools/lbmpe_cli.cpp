// lbmpe: command-line driver for the stream benchmark, cavity runs, the
// performance model, self-verification and plotting.
//
// Exit codes: 0 success, 1 verification or runtime failure, 2 bad configuration.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lbmpe/field_io.hpp"
#include "lbmpe/membench.hpp"
#include "lbmpe/perfmodel.hpp"
#include "lbmpe/report.hpp"
#include "lbmpe/svg_plot.hpp"
#include "lbmpe/validation.hpp"
#include "lbmpe/verify.hpp"

using namespace lbmpe;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfigError = 2 };

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  int workers = 1;
};

std::string default_run_id() {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  std::mt19937_64 rng(std::random_device{}());
  char buf[48];
  std::snprintf(buf, sizeof buf, "run-%lld-%04x",
                static_cast<long long>(std::chrono::duration_cast<std::chrono::seconds>(now).count()),
                static_cast<unsigned>(rng() & 0xffff));
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

// Appends rows to `path`, writing the header first when the file is new or empty.
std::ofstream open_csv_append(const std::string& path, const char* header) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot open " + path + " for appending");
  if (fresh) f << header << '\n';
  return f;
}

Vec3<double> to_vec3(const std::vector<double>& v) {
  if (v.size() != 3) throw std::invalid_argument("velocity needs exactly 3 components");
  return {v[0], v[1], v[2]};
}

// ---- bench-stream ---------------------------------------------------------

struct BenchStreamOpts {
  std::vector<std::size_t> n{std::size_t{1} << 24};
  std::vector<std::size_t> chunks{256};
  std::vector<std::size_t> chunk_range;
  std::string precision = "dp";
  std::size_t reps = 5;
  double min_seconds = 0.05;
  double wa_factor = 1.5;
  std::size_t quantum = 256;
  std::string csv;
  std::string run_id;
};

int cmd_bench_stream(const Global& g, const BenchStreamOpts& o) {
  CopyOptions opt;
  opt.repetitions = o.reps;
  opt.min_seconds = o.min_seconds;
  opt.write_allocate_factor = o.wa_factor;
  opt.quantum = o.quantum;
  if (o.reps < 5) throw std::invalid_argument("--reps must be >= 5 (best-of-k timing)");
  if (!(o.wa_factor >= 1.0)) throw std::invalid_argument("--wa-factor must be >= 1");

  std::vector<std::size_t> chunks = o.chunks;
  if (!o.chunk_range.empty()) {
    if (o.chunk_range.size() != 2 || o.chunk_range[0] < 1 || o.chunk_range[0] > o.chunk_range[1]) {
      throw std::invalid_argument("--chunk-range takes LO HI with 1 <= LO <= HI");
    }
    chunks = power_of_two_range(o.chunk_range[0], o.chunk_range[1]);
  }
  const std::size_t vb = value_bytes(parse_precision(o.precision));
  const std::string run_id = o.run_id.empty() ? default_run_id() : o.run_id;

  std::optional<std::ofstream> csv;
  if (!o.csv.empty()) csv = open_csv_append(o.csv, kBandwidthCsvHeader);
  std::cout << kBandwidthCsvHeader << '\n';
  for (std::size_t n : o.n) {
    for (std::size_t c : chunks) {
      BandwidthSample s;
      try {
        s = stream_copy(n, vb, g.workers, c, opt);
      } catch (const std::runtime_error& e) {
        if (dynamic_cast<const std::invalid_argument*>(&e)) throw;
        throw VerificationFailure(e.what());
      }
      write_csv_row(std::cout, run_id, s);
      if (csv) write_csv_row(*csv, run_id, s);
    }
  }
  return kOk;
}

// ---- run-cavity -----------------------------------------------------------

struct CavityOpts {
  std::size_t n = 32;
  std::string scheme = "soa";
  std::size_t align = 0;
  std::string precision = "dp";
  double tau = 0.6;
  std::vector<double> u_lid{0.05, 0.0, 0.0};
  std::size_t steps = 100;
  std::size_t warmup = 10;
  std::size_t sample_interval = 10;
  double bandwidth = 0;  // 0: measure with the stream benchmark
  std::size_t stream_n = std::size_t{1} << 24;
  bool no_write_allocate = false;
  bool poison_padding = false;
  std::string json_out;
  std::string dump;
  std::string summary;
  bool sweep = false;
  std::vector<std::size_t> sizes;
  std::size_t sweep_steps = 3;
  std::string sweep_csv;
};

struct Bandwidth {
  double gbs;
  std::string source;
};

Bandwidth resolve_bandwidth(double given, std::size_t stream_n, int workers) {
  if (given > 0) return {given, "given"};
  if (given < 0) throw std::invalid_argument("--bandwidth must be positive");
  const auto s = stream_copy<double>(stream_n, workers, static_cast<std::size_t>(workers));
  std::ostringstream os;
  os << "stream_copy n=" << stream_n << " workers=" << workers << " measured=" << s.measured_gbs
     << " GB/s x1.5 write allocate";
  return {s.actual_gbs, os.str()};
}

template <typename T>
int run_cavity(const Global& g, const CavityOpts& o) {
  const auto wall0 = std::chrono::steady_clock::now();
  CavityConfig c;
  c.n = o.n;
  c.u_lid = to_vec3(o.u_lid);
  c.tau = o.tau;
  c.steps = o.steps;
  c.warmup_steps = o.warmup;
  c.scheme = parse_scheme(o.scheme);
  c.alignment_bytes = o.align;
  c.workers = g.workers;
  c.residual_interval = o.sample_interval;
  c.poison_padding = o.poison_padding;
  if (o.steps < 1) throw std::invalid_argument("--steps must be >= 1");
  Layout{c.scheme, c.alignment_bytes, sizeof(T)}.validate();
  RelaxationParams{o.tau};

  const Bandwidth bw = resolve_bandwidth(o.bandwidth, o.stream_n, g.workers);

  const CavityResult r = lid_driven_cavity<T>(c, [&](const Simulation<T>& sim) {
    if (!o.dump.empty()) save_field(o.dump, sim.field());
  });
  if (!o.summary.empty()) {
    std::ostringstream os;
    write_summary_csv(os, r);
    write_file(o.summary, os.str());
  }

  const json config = {{"n", o.n},          {"scheme", o.scheme},   {"alignment_bytes", o.align},
                       {"precision", o.precision}, {"tau", o.tau}, {"u_lid", o.u_lid},
                       {"steps", o.steps},  {"warmup_steps", o.warmup}, {"workers", g.workers}};
  const TrafficModel tm = o.no_write_allocate ? TrafficModel::streaming(precision_for_bytes(sizeof(T)))
                                              : TrafficModel::cpu(precision_for_bytes(sizeof(T)));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  const RunReport rep = make_report(config, r.fluid_cells, r.steps_run, r.kernel_seconds, wall, tm, bw.gbs,
                                    bw.source, r.checksum);
  json j = to_json(rep);
  j["stride_x"] = r.stride_x;
  j["bytes_allocated"] = r.bytes_allocated;
  j["mass_drift"] = r.mass_drift();
  j["final_residual"] = r.residual.empty() ? json(nullptr) : json(r.residual.back());
  if (o.poison_padding) j["padding_intact"] = r.padding_intact;
  if (rep.efficiency.exceeds_model) {
    std::cerr << "warning: efficiency " << rep.efficiency.value << " > 1, check the bandwidth input\n";
  }
  const std::string text = j.dump(2) + "\n";
  if (!o.json_out.empty()) write_file(o.json_out, text);
  std::cout << text;
  if (o.poison_padding && !r.padding_intact) throw VerificationFailure("padding elements were written");
  return kOk;
}

template <typename T>
int run_sweep(const Global& g, const CavityOpts& o) {
  SweepConfig c;
  if (!o.sizes.empty()) c.sizes = o.sizes;
  c.steps = o.sweep_steps;
  c.warmup = o.warmup;
  c.alignment_bytes = o.align == 0 ? 128 : o.align;
  c.u_lid = to_vec3(o.u_lid);
  c.tau = o.tau;
  c.workers = g.workers;
  RelaxationParams{o.tau};
  Layout::soa(sizeof(T), c.alignment_bytes).validate();

  static constexpr const char* kHeader =
      "n,precision,fluid_cells,stride_unpadded,stride_padded,bytes_unpadded,bytes_padded,mlups_unpadded,"
      "mlups_padded,checksums_equal,max_physics_diff";
  std::optional<std::ofstream> csv;
  if (!o.sweep_csv.empty()) csv = open_csv_append(o.sweep_csv, kHeader);
  std::cout << kHeader << '\n';
  bool physics_ok = true;
  domain_sweep<T>(c, [&](const SweepRow& r) {
    std::ostringstream os;
    os << r.n << ',' << to_string(precision_for_bytes(sizeof(T))) << ',' << r.fluid_cells << ','
       << r.stride_unpadded << ',' << r.stride_padded << ',' << r.bytes_unpadded << ',' << r.bytes_padded << ','
       << r.mlups_unpadded << ',' << r.mlups_padded << ',' << (r.checksums_equal ? 1 : 0) << ','
       << r.max_physics_diff << '\n';
    std::cout << os.str() << std::flush;
    if (csv) *csv << os.str() << std::flush;
    physics_ok = physics_ok && r.max_physics_diff <= 1e-13;
  });
  if (!physics_ok) throw VerificationFailure("padding changed the physics by more than 1e-13");
  return kOk;
}

int cmd_run_cavity(const Global& g, const CavityOpts& o) {
  const Precision p = parse_precision(o.precision);
  if (o.sweep) return p == Precision::SP ? run_sweep<float>(g, o) : run_sweep<double>(g, o);
  return p == Precision::SP ? run_cavity<float>(g, o) : run_cavity<double>(g, o);
}

// ---- model ----------------------------------------------------------------

struct ModelOpts {
  std::string mode = "paper";
  std::string json_out;
  double bandwidth = 0;
  std::size_t stream_n = std::size_t{1} << 24;
  std::size_t cavity_n = 0;
  std::size_t cavity_steps = 20;
};

int cmd_model(const Global& g, const ModelOpts& o) {
  json out;
  out["mode"] = o.mode;
  out["computational_balance_dp"] = computational_balance();
  out["flops_per_update"] = kFlopsPerCellUpdate;
  out["bytes_per_update"] = {
      {"sp_write_allocate", bytes_per_update(TrafficModel::cpu(Precision::SP))},
      {"dp_write_allocate", bytes_per_update(TrafficModel::cpu(Precision::DP))},
      {"sp_streaming", bytes_per_update(TrafficModel::streaming(Precision::SP))},
      {"dp_streaming", bytes_per_update(TrafficModel::streaming(Precision::DP))},
  };

  if (o.mode == "paper") {
    const auto rows = model_table(historical_bandwidths());
    out["rows"] = to_json(rows);
    std::cerr << "device                 GB/s     SP    DP\n";
    for (const auto& r : rows) {
      char line[96];
      std::snprintf(line, sizeof line, "%-20s %7.2f %6ld %5s\n", r.name.c_str(), r.bandwidth_gbs, r.sp_rounded,
                    r.dp_rounded < 0 ? "-" : std::to_string(r.dp_rounded).c_str());
      std::cerr << line;
    }
  } else if (o.mode == "local") {
    const Bandwidth bw = resolve_bandwidth(o.bandwidth, o.stream_n, g.workers);
    out["bandwidth_gbs"] = bw.gbs;
    out["bandwidth_source"] = bw.source;
    const auto sp = PerfCeiling::make(bw.gbs, TrafficModel::cpu(Precision::SP));
    const auto dp = PerfCeiling::make(bw.gbs, TrafficModel::cpu(Precision::DP));
    out["ceiling_mflups"] = {{"sp", round_significant(sp.ceiling_mflups)}, {"dp", round_significant(dp.ceiling_mflups)}};
    if (o.cavity_n > 0) {
      json runs = json::array();
      auto run = [&](auto tag, Layout l, const PerfCeiling& ceil) {
        using T = decltype(tag);
        CavityConfig c;
        c.n = o.cavity_n;
        c.steps = o.cavity_steps;
        c.warmup_steps = 2;
        c.residual_interval = o.cavity_steps;
        c.scheme = l.scheme;
        c.alignment_bytes = l.alignment_bytes;
        c.workers = g.workers;
        const auto r = lid_driven_cavity<T>(c);
        const auto e = efficiency(r.mlups(), ceil);
        if (e.exceeds_model) std::cerr << "warning: measured cavity rate exceeds the model ceiling\n";
        runs.push_back({{"precision", sizeof(T) == 4 ? "sp" : "dp"},
                        {"scheme", to_string(l.scheme)},
                        {"alignment_bytes", l.alignment_bytes},
                        {"measured_mflups", r.mlups()},
                        {"ceiling_mflups", ceil.ceiling_mflups},
                        {"efficiency", e.value},
                        {"within_model", !e.exceeds_model}});
      };
      for (const Layout& l : {Layout::soa(4), Layout::aos(4), Layout::soa(4, 128)}) run(float{}, l, sp);
      for (const Layout& l : {Layout::soa(8), Layout::aos(8), Layout::soa(8, 128)}) run(double{}, l, dp);
      out["cavity_runs"] = runs;
    }
  } else {
    throw std::invalid_argument("--mode must be paper or local");
  }
  const std::string text = out.dump(2) + "\n";
  if (!o.json_out.empty()) write_file(o.json_out, text);
  std::cout << text;
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyCliOpts {
  std::string inject_fault;
  int patterns = 20;
  bool quick = false;
};

int cmd_verify(const Global& g, const VerifyCliOpts& o) {
  VerifyOptions v;
  v.workers = g.workers;
  v.patterns = o.patterns;
  if (o.patterns < 1) throw std::invalid_argument("--patterns must be >= 1");
  if (o.quick) {
    v.layout_edge = 12;
    v.layout_steps = 20;
    v.box_steps = 200;
  }
  if (o.inject_fault == "weight") {
    v.model = with_weight(v.model, 1, {1, 17});
  } else if (!o.inject_fault.empty()) {
    throw std::invalid_argument("unknown fault '" + o.inject_fault + "' (supported: weight)");
  }
  const auto results = run_verification(v);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    std::printf("%s %-34s value=%-11.3g limit=%-9.3g %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.value,
                r.limit, r.detail.c_str());
    if (!r.passed) failed.push_back(r.name);
  }
  if (!failed.empty()) {
    std::string names;
    for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
    throw VerificationFailure("failed invariants: " + names);
  }
  return kOk;
}

// ---- plot -----------------------------------------------------------------

struct PlotOpts {
  std::string sweep_csv;
  std::string stream_csv;
  std::string out_dir = ".";
};

using CsvTable = std::vector<std::map<std::string, std::string>>;

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  std::string line;
  std::vector<std::string> header;
  CsvTable rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (header.empty() || cells == header) {
      header = cells;
      continue;
    }
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

double field_of(const std::map<std::string, std::string>& row, const std::string& key) {
  const auto it = row.find(key);
  if (it == row.end()) throw std::invalid_argument("CSV lacks column '" + key + "'");
  return std::stod(it->second);
}

int cmd_plot(const PlotOpts& o) {
  if (o.sweep_csv.empty() && o.stream_csv.empty()) {
    throw std::invalid_argument("plot needs --sweep-csv and/or --stream-csv");
  }
  std::filesystem::create_directories(o.out_dir);
  if (!o.sweep_csv.empty()) {
    std::map<std::string, PlotSeries> series;
    for (const auto& row : read_csv(o.sweep_csv)) {
      const std::string p = row.count("precision") ? row.at("precision") : "dp";
      auto& plain = series[p + " unpadded"];
      auto& padded = series[p + " padded"];
      plain.name = p + " unpadded";
      padded.name = p + " padded";
      const double n = field_of(row, "n");
      plain.x.push_back(n);
      plain.y.push_back(field_of(row, "mlups_unpadded"));
      padded.x.push_back(n);
      padded.y.push_back(field_of(row, "mlups_padded"));
    }
    std::vector<PlotSeries> s;
    for (auto& [k, v] : series) s.push_back(v);
    const std::string path = (std::filesystem::path(o.out_dir) / "perf_vs_domain.svg").string();
    write_svg(path, {"Cavity performance vs domain size", "cube edge n", "MFLUP/s"}, s);
    std::cout << path << '\n';
  }
  if (!o.stream_csv.empty()) {
    std::map<std::string, PlotSeries> series;
    for (const auto& row : read_csv(o.stream_csv)) {
      std::ostringstream key;
      key << "n=" << row.at("n") << " " << (row.at("value_bytes") == "4" ? "sp" : "dp") << " w=" << row.at("workers");
      auto& s = series[key.str()];
      s.name = key.str();
      s.x.push_back(field_of(row, "chunks"));
      s.y.push_back(field_of(row, "actual_gbs"));
    }
    std::vector<PlotSeries> s;
    for (auto& [k, v] : series) s.push_back(v);
    PlotSpec spec{"Copy bandwidth vs granularity", "chunks", "actual GB/s"};
    spec.log2_x = true;
    const std::string path = (std::filesystem::path(o.out_dir) / "bandwidth_vs_granularity.svg").string();
    write_svg(path, spec, s);
    std::cout << path << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Boltzmann D3Q19 performance toolkit"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("-w,--workers", g.workers, "worker threads")
      ->envname("LBMPE_WORKERS")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();

  BenchStreamOpts bs;
  auto* bench = app.add_subcommand("bench-stream", "STREAM-style copy bandwidth vs chunk granularity");
  bench->add_option("--n", bs.n, "vector lengths in elements")->capture_default_str();
  bench->add_option("--chunks", bs.chunks, "chunk counts")->capture_default_str();
  bench->add_option("--chunk-range", bs.chunk_range, "LO HI: powers of two between LO and HI")->expected(2);
  bench->add_option("--precision", bs.precision, "sp or dp")->capture_default_str();
  bench->add_option("--reps", bs.reps, "timed repetitions, best is kept")->capture_default_str();
  bench->add_option("--min-seconds", bs.min_seconds, "minimum duration of one repetition")->capture_default_str();
  bench->add_option("--wa-factor", bs.wa_factor, "actual / measured traffic")->capture_default_str();
  bench->add_option("--quantum", bs.quantum, "chunk length granule in elements")->capture_default_str();
  bench->add_option("--csv", bs.csv, "append rows to this CSV file");
  bench->add_option("--run-id", bs.run_id, "tag for the rows of this invocation");

  CavityOpts co;
  auto* cavity = app.add_subcommand("run-cavity", "lid-driven cavity run with a performance report");
  cavity->add_option("--n", co.n, "cube edge")->capture_default_str();
  cavity->add_option("--scheme", co.scheme, "soa or aos")->capture_default_str();
  cavity->add_option("--align", co.align, "stripe alignment in bytes (0, 16, 32, 64, 128)")->capture_default_str();
  cavity->add_option("--precision", co.precision, "sp or dp")->capture_default_str();
  cavity->add_option("--tau", co.tau, "relaxation time")->capture_default_str();
  cavity->add_option("--u-lid", co.u_lid, "lid velocity ux uy uz")->expected(3)->capture_default_str();
  cavity->add_option("--steps", co.steps, "timed steps")->capture_default_str();
  cavity->add_option("--warmup", co.warmup, "untimed steps before the timed region")->capture_default_str();
  cavity->add_option("--sample-interval", co.sample_interval, "steps between samples")->capture_default_str();
  cavity->add_option("--bandwidth", co.bandwidth, "GB/s for the model ceiling; measured when omitted");
  cavity->add_option("--stream-n", co.stream_n, "copy length for the bandwidth measurement")->capture_default_str();
  cavity->add_flag("--no-write-allocate", co.no_write_allocate, "model without write-allocate traffic");
  cavity->add_flag("--poison-padding", co.poison_padding, "fill padding with NaN and check it afterwards");
  cavity->add_option("--json", co.json_out, "write the report here");
  cavity->add_option("--dump", co.dump, "write the final PDF field here");
  cavity->add_option("--summary", co.summary, "write the per-sample CSV here");
  cavity->add_flag("--sweep", co.sweep, "domain-size sweep, each size unpadded and padded");
  cavity->add_option("--sizes", co.sizes, "sweep edges (default 16..200 step 8)");
  cavity->add_option("--sweep-steps", co.sweep_steps, "timed steps per sweep point")->capture_default_str();
  cavity->add_option("--sweep-csv", co.sweep_csv, "append sweep rows to this CSV file");

  ModelOpts mo;
  auto* model = app.add_subcommand("model", "bandwidth-based performance ceilings");
  model->add_option("--mode", mo.mode, "paper: historical bandwidths; local: this machine")
      ->check(CLI::IsMember({"paper", "local"}))
      ->capture_default_str();
  model->add_option("--json", mo.json_out, "write the result here");
  model->add_option("--bandwidth", mo.bandwidth, "local mode: GB/s instead of measuring");
  model->add_option("--stream-n", mo.stream_n, "copy length for the bandwidth measurement")->capture_default_str();
  model->add_option("--cavity-n", mo.cavity_n, "local mode: also run cavities of this edge");
  model->add_option("--cavity-steps", mo.cavity_steps, "timed steps per cavity run")->capture_default_str();

  VerifyCliOpts vo;
  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  verify->add_option("--inject-fault", vo.inject_fault, "deliberately break an input (weight)");
  verify->add_option("--patterns", vo.patterns, "random geometries for the oracle comparison")->capture_default_str();
  verify->add_flag("--quick", vo.quick, "smaller layout and conservation runs");

  PlotOpts po;
  auto* plot = app.add_subcommand("plot", "SVG charts from sweep and stream CSV files");
  plot->add_option("--sweep-csv", po.sweep_csv, "run-cavity --sweep output");
  plot->add_option("--stream-csv", po.stream_csv, "bench-stream output");
  plot->add_option("--out-dir", po.out_dir, "directory for the SVG files")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*bench) return cmd_bench_stream(g, bs);
    if (*cavity) return cmd_run_cavity(g, co);
    if (*model) return cmd_model(g, mo);
    if (*verify) return cmd_verify(g, vo);
    if (*plot) return cmd_plot(po);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}
