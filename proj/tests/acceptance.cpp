// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria.
//
//   1 oracle equivalence      5000 random graphs (n <= 8) plus the fixed
//                             exemplars, all five recognizers vs the
//                             brute-force oracle, zero mismatches
//   2 certificate soundness   every YES authenticates, every NO witness
//                             checks; >= 20 semantically invalid mutations
//                             per class are all rejected
//   3 I/O scaling             generated YES instances at target sizes
//                             2^14..2^20 records, B=1024, M=2^16; measured
//                             I/Os divided by sort(n+2m) flat within 2x
//   4 memory budget           criterion-3 runs stay within the budget
//                             while instances exceed it by >= 16x
//   5 generator statistics    |K| = n/10 exactly; cross-edge mean within
//                             3 sigma of the binomial expectation
//   6 odd-cycle extraction    C3->C3, C5->C5, C7/C9/C11 -> authenticated
//                             induced 2K2
//   7 message bounds          peo <= m and uco <= 2m messages everywhere

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "emcert/authenticate.hpp"
#include "emcert/bench.hpp"
#include "emcert/certify.hpp"
#include "emcert/generate.hpp"
#include "emcert/oracle.hpp"

using namespace emcert;

namespace {

const GraphClass kAllClasses[] = {GraphClass::bipartite, GraphClass::split,
                                  GraphClass::threshold,
                                  GraphClass::trivially_perfect,
                                  GraphClass::chain};

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = true;
  std::string detail;

  Criterion(int i, std::string n) : id(i), name(std::move(n)) {}
};

MemGraph random_graph(std::uint64_t n, double p, std::mt19937_64& rng) {
  MemGraph g(n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::uint64_t u = 1; u <= n; ++u)
    for (std::uint64_t v = u + 1; v <= n; ++v)
      if (coin(rng) < p) g.add_edge(u, v);
  g.normalize();
  return g;
}

std::vector<MemGraph> exemplars() {
  auto from_edges = [](std::uint64_t n,
                       std::vector<std::pair<std::uint64_t, std::uint64_t>> es) {
    MemGraph g(n);
    for (auto [u, v] : es) g.add_edge(u, v);
    g.normalize();
    return g;
  };
  std::vector<MemGraph> out;
  out.push_back(MemGraph(1));
  out.push_back(MemGraph(4));
  for (std::uint64_t n : {2, 3, 4, 5}) {  // complete graphs
    MemGraph g(n);
    for (std::uint64_t u = 1; u <= n; ++u)
      for (std::uint64_t v = u + 1; v <= n; ++v) g.add_edge(u, v);
    g.normalize();
    out.push_back(g);
  }
  for (std::uint64_t leaves : {3, 5}) {  // stars
    MemGraph g(leaves + 1);
    for (std::uint64_t v = 2; v <= leaves + 1; ++v) g.add_edge(1, v);
    g.normalize();
    out.push_back(g);
  }
  for (std::uint64_t n : {3, 4, 5, 6}) {  // paths P3..P6
    MemGraph g(n);
    for (std::uint64_t v = 1; v + 1 <= n; ++v) g.add_edge(v, v + 1);
    g.normalize();
    out.push_back(g);
  }
  for (std::uint64_t n : {3, 4, 5, 6, 7, 8}) {  // cycles C3..C8
    MemGraph g(n);
    for (std::uint64_t v = 1; v + 1 <= n; ++v) g.add_edge(v, v + 1);
    g.add_edge(1, n);
    g.normalize();
    out.push_back(g);
  }
  out.push_back(from_edges(4, {{1, 2}, {3, 4}}));                    // 2K2
  out.push_back(from_edges(4, {{1, 2}, {1, 3}, {2, 3}, {1, 4}}));    // tri+pendant
  {
    MemGraph q3(8);
    for (std::uint64_t a = 0; a < 8; ++a)
      for (int bit = 0; bit < 3; ++bit) {
        std::uint64_t b = a ^ (1u << bit);
        if (a < b) q3.add_edge(a + 1, b + 1);
      }
    q3.normalize();
    out.push_back(q3);
  }
  return out;
}

// Shared state of the corpus pass (criteria 1, 2, 7).
struct CorpusRun {
  std::uint64_t graphs = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t auth_failures = 0;
  std::uint64_t message_violations = 0;
  std::vector<std::pair<MemGraph, Certificate>> yes_certs;  // per class mix
  std::vector<std::pair<MemGraph, Certificate>> no_certs;
  std::string first_problem;
};

CorpusRun run_corpus(const fs::path& dir) {
  CorpusRun cr;
  std::mt19937_64 rng(20250808);
  std::vector<MemGraph> graphs = exemplars();
  const double probs[] = {0.15, 0.3, 0.45, 0.6, 0.75};
  for (int i = 0; i < 5000; ++i)
    graphs.push_back(random_graph(1 + rng() % 8, probs[i % 5], rng));

  Kernel k({8, 64}, dir / "corpus_kernel");
  std::uint64_t idx = 0;
  for (const MemGraph& g : graphs) {
    ++cr.graphs;
    ++idx;
    Graph gd = store_graph(g, k.dir() / "g.arg");
    for (GraphClass cls : kAllClasses) {
      CertifyOutcome out = certify_em(k, gd, cls);
      bool expected = oracle::forbidden_free_member(g, cls);
      if (out.cert.yes() != expected) {
        ++cr.mismatches;
        if (cr.first_problem.empty())
          cr.first_problem = "verdict mismatch, class " +
                             std::string(to_string(cls)) + ", graph " +
                             std::to_string(idx);
        continue;
      }
      if (auto bad = auth_certificate(k, gd, out.cert)) {
        ++cr.auth_failures;
        if (cr.first_problem.empty())
          cr.first_problem = "authentication failure, class " +
                             std::string(to_string(cls)) + ": " + *bad;
      }
      if (out.peo_messages > g.m() || out.uco_messages > 2 * g.m()) {
        ++cr.message_violations;
        if (cr.first_problem.empty())
          cr.first_problem = "message bound violated, class " +
                             std::string(to_string(cls));
      }
      // stash a bounded sample of certificates for the mutation harness
      auto& bucket = out.cert.yes() ? cr.yes_certs : cr.no_certs;
      if (bucket.size() < 4000) bucket.push_back({g, out.cert});
    }
  }
  return cr;
}

// --------------------------------------------------------------------------
// criterion 2: mutation harness

std::vector<Certificate> mutants_of(const Certificate& c, std::uint64_t n) {
  std::vector<Certificate> out;
  auto move_between = [&](const std::vector<std::uint64_t>& a,
                          const std::vector<std::uint64_t>& b,
                          auto rebuild) {
    for (std::size_t i = 0; i < a.size() && out.size() < 60; ++i) {
      std::vector<std::uint64_t> na(a), nb(b);
      nb.push_back(na[i]);
      na.erase(na.begin() + static_cast<std::ptrdiff_t>(i));
      std::sort(na.begin(), na.end());
      std::sort(nb.begin(), nb.end());
      out.push_back(rebuild(na, nb));
    }
  };
  auto transpositions = [&](const std::vector<std::uint64_t>& ord, auto rebuild) {
    for (std::size_t i = 0; i + 1 < ord.size() && out.size() < 60; ++i) {
      std::vector<std::uint64_t> no(ord);
      std::swap(no[i], no[i + 1]);
      out.push_back(rebuild(no));
    }
  };

  if (!c.yes()) {
    const Witness& w = c.witness();
    for (std::size_t i = 0; i < w.vertices.size(); ++i)
      for (std::uint64_t sub = 1; sub <= n && out.size() < 60; ++sub) {
        Witness mw = w;
        mw.vertices[i] = sub;
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = NoCertificate{mw};
        out.push_back(mc);
      }
    return out;
  }

  switch (c.cls) {
    case GraphClass::split: {
      const auto& p = std::get<SplitYes>(c.payload);
      auto rebuild_ki = [&](std::vector<std::uint64_t> K,
                            std::vector<std::uint64_t> I) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = SplitYes{std::move(K), std::move(I)};
        return mc;
      };
      move_between(p.K, p.I, rebuild_ki);
      move_between(p.I, p.K,
                   [&](auto I, auto K) { return rebuild_ki(K, I); });
      break;
    }
    case GraphClass::threshold: {
      const auto& p = std::get<ThresholdYes>(c.payload);
      transpositions(p.beta, [&](std::vector<std::uint64_t> nb) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = ThresholdYes{p.K, p.I, std::move(nb)};
        return mc;
      });
      move_between(p.K, p.I, [&](std::vector<std::uint64_t> K,
                                 std::vector<std::uint64_t> I) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = ThresholdYes{K, I, I};
        return mc;
      });
      break;
    }
    case GraphClass::trivially_perfect: {
      const auto& p = std::get<TPYes>(c.payload);
      transpositions(p.gamma, [&](std::vector<std::uint64_t> ng) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = TPYes{std::move(ng)};
        return mc;
      });
      break;
    }
    case GraphClass::bipartite: {
      const auto& p = std::get<BipartiteYes>(c.payload);
      auto rebuild = [&](std::vector<std::uint64_t> U,
                         std::vector<std::uint64_t> W) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = BipartiteYes{std::move(U), std::move(W)};
        return mc;
      };
      move_between(p.U, p.W, rebuild);
      move_between(p.W, p.U, [&](auto W, auto U) { return rebuild(U, W); });
      break;
    }
    case GraphClass::chain: {
      const auto& p = std::get<ChainYes>(c.payload);
      move_between(p.U, p.W, [&](std::vector<std::uint64_t> U,
                                 std::vector<std::uint64_t> W) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = ChainYes{U, W, U, W};
        return mc;
      });
      transpositions(p.nno_u, [&](std::vector<std::uint64_t> nu) {
        Certificate mc;
        mc.cls = c.cls;
        mc.payload = ChainYes{p.U, p.W, std::move(nu), p.nno_w};
        return mc;
      });
      break;
    }
  }
  return out;
}

struct MutationStats {
  std::uint64_t tried[5] = {0, 0, 0, 0, 0};
  std::uint64_t accepted_invalid = 0;  // must stay zero
  std::string first_problem;
};

MutationStats run_mutations(const fs::path& dir, const CorpusRun& cr) {
  MutationStats ms;
  Kernel k({8, 64}, dir / "mut_kernel");
  auto class_index = [](GraphClass c) {
    switch (c) {
      case GraphClass::bipartite: return 0;
      case GraphClass::split: return 1;
      case GraphClass::threshold: return 2;
      case GraphClass::trivially_perfect: return 3;
      case GraphClass::chain: return 4;
    }
    return 0;
  };
  auto process = [&](const std::vector<std::pair<MemGraph, Certificate>>& bucket) {
    for (const auto& [g, cert] : bucket) {
      int ci = class_index(cert.cls);
      if (ms.tried[ci] >= 25) continue;
      Graph gd = store_graph(g, k.dir() / "g.arg");
      for (const Certificate& mut : mutants_of(cert, g.n)) {
        if (ms.tried[ci] >= 25) break;
        if (oracle::certificate_valid_mem(g, mut)) continue;  // still valid
        ++ms.tried[ci];
        if (!auth_certificate(k, gd, mut).has_value()) {
          ++ms.accepted_invalid;
          if (ms.first_problem.empty())
            ms.first_problem = std::string("invalid mutant accepted, class ") +
                               to_string(mut.cls);
        }
      }
    }
  };
  process(cr.yes_certs);
  process(cr.no_certs);
  return ms;
}

// --------------------------------------------------------------------------
// criteria 3 and 4: scaling under the memory budget

struct ScalingData {
  bool flat = true;
  double worst_band = 0.0;
  bool budget_ok = true;
  double max_overshoot = 0.0;  // max elements / M
  std::string table;
  std::string first_problem;
};

ScalingData run_scaling(const fs::path& dir) {
  ScalingData sd;
  const std::size_t B = 1024, M = 1u << 16;
  struct Family {
    GraphClass gen, cert;
  };
  const Family families[] = {
      {GraphClass::split, GraphClass::split},
      {GraphClass::threshold, GraphClass::threshold},
      {GraphClass::threshold, GraphClass::trivially_perfect},
  };
  const std::uint64_t targets[] = {1u << 14, 1u << 16, 1u << 18, 1u << 20};

  for (const Family& fam : families) {
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t t : targets) {
      bench::RunSpec spec;
      spec.gen_cls = fam.gen;
      spec.certify_cls = fam.cert;
      spec.vertices = gen::vertices_for_elements(fam.gen, static_cast<double>(t));
      spec.seed = 7;
      spec.engine = Engine::em;
      spec.io = IOConfig{B, M};
      bench::RunResult r = bench::run_one(dir, spec);
      if (r.verdict != "yes") {
        sd.flat = false;
        sd.first_problem = "generated instance did not certify YES";
        continue;
      }
      double ios = static_cast<double>(r.io.blocks_read + r.io.blocks_written);
      double ratio = ios / bench::sort_bound(static_cast<double>(r.elements),
                                             static_cast<double>(B),
                                             static_cast<double>(M));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (r.memory_high_water > M) {
        sd.budget_ok = false;
        sd.first_problem = "memory high-water above budget";
      }
      sd.max_overshoot = std::max(
          sd.max_overshoot, static_cast<double>(r.elements) / static_cast<double>(M));
      char line[256];
      std::snprintf(line, sizeof line,
                    "      %-17s n=%-6llu elements=%-8llu ios=%-8.0f "
                    "ratio=%.2f hw=%zu\n",
                    to_string(fam.cert), (unsigned long long)r.n,
                    (unsigned long long)r.elements, ios, ratio,
                    r.memory_high_water);
      sd.table += line;
    }
    double band = hi / lo;
    sd.worst_band = std::max(sd.worst_band, band);
    if (band > 2.0) {
      sd.flat = false;
      if (sd.first_problem.empty())
        sd.first_problem = std::string("flatness band ") + to_string(fam.cert);
    }
  }
  return sd;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  fs::path dir =
      fs::temp_directory_path() / ("emcert_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<Criterion> results;
  auto want = [&](int id) { return only == 0 || only == id; };

  CorpusRun corpus;
  bool corpus_ran = false;
  auto ensure_corpus = [&] {
    if (!corpus_ran) {
      corpus = run_corpus(dir);
      corpus_ran = true;
    }
  };

  if (want(1)) {
    auto t0 = std::chrono::steady_clock::now();
    ensure_corpus();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    Criterion c{1, "oracle equivalence"};
    c.pass = corpus.mismatches == 0 && secs < 300.0;
    c.detail = std::to_string(corpus.graphs) + " graphs x 5 classes, " +
               std::to_string(corpus.mismatches) + " mismatches, " +
               std::to_string(secs) + "s";
    if (!c.pass && !corpus.first_problem.empty())
      c.detail += " [" + corpus.first_problem + "]";
    results.push_back(c);
  }

  if (want(2)) {
    ensure_corpus();
    MutationStats ms = run_mutations(dir, corpus);
    Criterion c{2, "certificate soundness"};
    bool enough = true;
    std::string counts;
    for (int i = 0; i < 5; ++i) {
      if (ms.tried[i] < 20) enough = false;
      counts += (i ? "/" : "") + std::to_string(ms.tried[i]);
    }
    c.pass = corpus.auth_failures == 0 && ms.accepted_invalid == 0 && enough;
    c.detail = "0 emitted-certificate failures expected, got " +
               std::to_string(corpus.auth_failures) + "; mutants rejected " +
               counts + " (bipartite/split/threshold/tp/chain), " +
               std::to_string(ms.accepted_invalid) + " wrongly accepted";
    if (!c.pass && !ms.first_problem.empty())
      c.detail += " [" + ms.first_problem + "]";
    results.push_back(c);
  }

  ScalingData scaling;
  bool scaling_ran = false;
  auto ensure_scaling = [&] {
    if (!scaling_ran) {
      scaling = run_scaling(dir);
      scaling_ran = true;
    }
  };

  if (want(3)) {
    ensure_scaling();
    Criterion c{3, "I/O scaling flat within 2x of sort(n+2m)"};
    c.pass = scaling.flat;
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst band %.2fx", scaling.worst_band);
    c.detail = std::string(buf) + "\n" + scaling.table;
    if (!c.pass && !scaling.first_problem.empty())
      c.detail += " [" + scaling.first_problem + "]";
    results.push_back(c);
  }

  if (want(4)) {
    ensure_scaling();
    Criterion c{4, "memory budget respected at >= 16x instance size"};
    c.pass = scaling.budget_ok && scaling.max_overshoot >= 16.0;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "high-water <= M on every run, largest instance %.1fx M",
                  scaling.max_overshoot);
    c.detail = buf;
    results.push_back(c);
  }

  if (want(5)) {
    Criterion c{5, "generator statistics"};
    std::uint64_t bad_k = 0;
    double cross_total = 0;
    const int seeds = 200;
    for (int s = 1; s <= seeds; ++s) {
      MemGraph g = gen::gen_split_yes(1000, static_cast<std::uint64_t>(s));
      // the clique side is the first 100 ids: complete inside, and the
      // rest independent
      bool k_ok = true;
      for (std::uint64_t u = 1; u <= 100 && k_ok; ++u)
        for (std::uint64_t v = u + 1; v <= 100 && k_ok; ++v)
          if (!g.has_edge(u, v)) k_ok = false;
      for (std::uint64_t v = 101; v <= 1000 && k_ok; ++v)
        for (std::uint64_t w : g.adj[v])
          if (w > 100) k_ok = false;
      if (!k_ok) ++bad_k;
      cross_total += static_cast<double>(g.m()) - 4950.0;
    }
    double mean = cross_total / seeds;
    double sigma_mean = std::sqrt(90000.0 * 0.25 * 0.75 / seeds);
    double dev = std::abs(mean - 22500.0);
    c.pass = bad_k == 0 && dev <= 3.0 * sigma_mean;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "|K|=100 in %d/%d seeds; cross-edge mean %.1f vs 22500 "
                  "(|dev| %.1f <= 3 sigma %.1f)",
                  seeds - static_cast<int>(bad_k), seeds, mean, dev,
                  3.0 * sigma_mean);
    c.detail = buf;
    results.push_back(c);
  }

  if (want(6)) {
    Criterion c{6, "odd-cycle extraction exemplars"};
    Kernel k({8, 64}, dir / "corol_kernel");
    std::string iters;
    for (std::uint64_t len : {3, 5, 7, 9, 11}) {
      MemGraph cyc(len);
      for (std::uint64_t v = 1; v + 1 <= len; ++v) cyc.add_edge(v, v + 1);
      cyc.add_edge(1, len);
      cyc.normalize();
      Graph gd = store_graph(cyc, k.dir() / "c.arg");
      SpanningForest f = spanning_forest(k, gd);
      BipartiteOutcome bo = certify_bipartite(k, gd, f);
      if (bo.member) {
        c.pass = false;
        continue;
      }
      try {
        ShrunkWitness sw = extract_c3_c5_2k2(k, gd, bo.min_odd_cycle);
        WitnessKind expect = len == 3   ? WitnessKind::c3
                             : len == 5 ? WitnessKind::c5
                                        : WitnessKind::two_k2;
        if (sw.witness.kind != expect) c.pass = false;
        if (auth_no(k, gd, GraphClass::chain, sw.witness)) c.pass = false;
        iters += "C" + std::to_string(len) + ":" +
                 std::to_string(sw.iterations) + " ";
      } catch (const em_error& e) {
        c.pass = false;
        c.detail = e.what();
      }
    }
    c.detail = "shrink iterations " + iters + "- all witnesses authenticated";
    results.push_back(c);
  }

  if (want(7)) {
    ensure_corpus();
    Criterion c{7, "message bounds (peo <= m, uco <= 2m)"};
    c.pass = corpus.message_violations == 0;
    c.detail = std::to_string(corpus.message_violations) + " violations over " +
               std::to_string(corpus.graphs) + " graphs";
    results.push_back(c);
  }

  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failures;
    std::printf("[%s] criterion %d: %s — %s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.detail.c_str());
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return failures;
}
