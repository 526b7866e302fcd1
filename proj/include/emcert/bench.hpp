#ifndef EMCERT_BENCH_HPP
#define EMCERT_BENCH_HPP

// Benchmark harness: generate -> certify under a fixed I/O configuration,
// reporting logical block counts. Wall-clock columns are informational;
// the normative outputs are the I/O counters and completion under the
// memory budget.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "emcert/certify.hpp"
#include "emcert/generate.hpp"

namespace emcert::bench {

struct RunSpec {
  GraphClass gen_cls = GraphClass::split;      // instance family
  GraphClass certify_cls = GraphClass::split;  // recognizer to run
  std::uint64_t vertices = 0;
  std::uint64_t seed = 1;
  Engine engine = Engine::em;
  IOConfig io{1024, 1u << 16};
  bool perturb = false;
  std::uint64_t extra_edges = 3;
  bool shuffle = false;
  std::uint64_t oracle_cap = oracle::kDefaultCap;
};

struct RunResult {
  RunSpec spec;
  std::uint64_t n = 0, m = 0;
  std::uint64_t elements = 0;  // n + 2m
  std::string verdict;         // yes | no | error
  double wall_ms = 0.0;
  IOStats io;
  std::size_t memory_high_water = 0;
  bool oracle_over_budget = false;
  std::uint64_t peo_messages = 0, uco_messages = 0;
};

inline MemGraph make_instance(const RunSpec& s) {
  MemGraph g = s.gen_cls == GraphClass::split
                   ? gen::gen_split_yes(s.vertices, s.seed)
                   : gen::gen_threshold_yes(s.vertices, s.seed);
  if (s.perturb) g = gen::perturb_no(g, s.extra_edges, s.seed + 0x9e3779b9ull);
  if (s.shuffle) g = gen::shuffle_labels(g, s.seed + 0x7f4a7c15ull);
  return g;
}

inline RunResult run_one(const fs::path& workdir, const RunSpec& s) {
  RunResult r;
  r.spec = s;
  MemGraph g = make_instance(s);
  r.n = g.n;
  r.m = g.m();
  r.elements = r.n + 2 * r.m;

  if (s.engine == Engine::oracle) {
    try {
      CertifyOutcome out = certify_oracle(g, s.certify_cls, s.oracle_cap);
      r.verdict = out.cert.yes() ? "yes" : "no";
      r.wall_ms = out.wall_ms;
    } catch (const oracle_cap_error&) {
      r.verdict = "error";
    }
    r.oracle_over_budget =
        reference::memory_records_estimate(g) > s.io.memory_records;
    return r;
  }

  Kernel k(s.io, workdir / ("bench_" + std::string(to_string(s.gen_cls)) + "_" +
                            std::to_string(s.vertices) + "_" +
                            std::to_string(s.seed)));
  Graph gd = store_graph(g, k.dir() / "instance.arg");
  CertifyOutcome out = certify_em(k, gd, s.certify_cls);
  r.verdict = out.cert.yes() ? "yes" : "no";
  r.wall_ms = out.wall_ms;
  r.io = out.io;
  r.memory_high_water = out.memory_high_water;
  r.peo_messages = out.peo_messages;
  r.uco_messages = out.uco_messages;
  return r;
}

inline constexpr const char* kCsvSchema = "# emcert-bench-v1";

inline void write_csv_header(std::ostream& out) {
  out << kCsvSchema << "\n";
  out << "class,n,m,engine,verdict,wall_ms,blocks_read,blocks_written,M,B\n";
}

inline void write_csv_row(std::ostream& out, const RunResult& r) {
  out << to_string(r.spec.certify_cls) << "," << r.n << "," << r.m << ","
      << to_string(r.spec.engine) << "," << r.verdict << "," << r.wall_ms << ","
      << r.io.blocks_read << "," << r.io.blocks_written << ","
      << r.spec.io.memory_records << "," << r.spec.io.block_records << "\n";
  if (r.spec.engine == Engine::oracle && r.oracle_over_budget)
    out << "# note: oracle engine resident set exceeds the memory budget ("
        << to_string(r.spec.certify_cls) << ", n=" << r.n << ")\n";
}

/// Normalizer for the flatness check: sort(x) = (x/B) * max(1, log_{M/B}(x/B)).
inline double sort_bound(double elements, double block, double memory) {
  double blocks = elements / block;
  double base = memory / block;
  double lg = std::log(blocks) / std::log(base);
  return blocks * std::max(1.0, lg);
}

}  // namespace emcert::bench

#endif  // EMCERT_BENCH_HPP
