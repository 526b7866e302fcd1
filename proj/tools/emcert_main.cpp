// Command-line front end: generate instances, certify graph-class
// membership with machine-checkable certificates, authenticate
// certificates independently, convert between graph formats, and run the
// scaling bench.
//
// certify exit codes: 0 member, 1 non-member, 2 error.
// authenticate exit codes: 0 accepted, 3 rejected, 2 error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "emcert/authenticate.hpp"
#include "emcert/bench.hpp"
#include "emcert/certify.hpp"
#include "emcert/generate.hpp"

using namespace emcert;

namespace {

fs::path default_workdir() {
  if (const char* env = std::getenv("EMCERT_WORKDIR")) return fs::path(env);
  return fs::temp_directory_path() / "emcert_work";
}

GraphClass parse_class_or_throw(const std::string& s) {
  auto c = parse_graph_class(s);
  if (!c) throw CLI::ValidationError("--class", "unknown graph class: " + s);
  return *c;
}

struct WorkdirGuard {
  fs::path path;
  bool keep;
  WorkdirGuard(fs::path p, bool keep_files) : path(std::move(p)), keep(keep_files) {
    fs::create_directories(path);
  }
  ~WorkdirGuard() {
    if (!keep) {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  }
};

int cmd_generate(const std::string& cls_name, std::uint64_t n,
                 std::uint64_t seed, bool no_instance, std::uint64_t extra,
                 bool shuffle, const std::string& out) {
  GraphClass cls = parse_class_or_throw(cls_name);
  if (cls != GraphClass::split && cls != GraphClass::threshold)
    throw CLI::ValidationError("--class",
                               "generators exist for split and threshold");
  MemGraph g = cls == GraphClass::split ? gen::gen_split_yes(n, seed)
                                        : gen::gen_threshold_yes(n, seed);
  if (no_instance) g = gen::perturb_no(g, extra, seed + 0x9e3779b9ull);
  if (shuffle) g = gen::shuffle_labels(g, seed + 0x7f4a7c15ull);
  Graph stored = store_graph(g, out);
  std::cout << "wrote " << out << " (n=" << stored.n << ", m=" << stored.m
            << ")\n";
  return 0;
}

int cmd_certify(const std::string& cls_name, const std::string& in,
                const std::string& engine_name, std::size_t block,
                std::size_t memory, const std::string& cert_out, bool io_stats,
                const std::string& workdir, std::uint64_t oracle_cap) {
  GraphClass cls = parse_class_or_throw(cls_name);
  Certificate cert;
  IOStats io{};
  std::size_t high_water = 0;

  if (engine_name == "oracle") {
    MemGraph g = load_mem_graph(in);
    cert = certify_oracle(g, cls, oracle_cap).cert;
  } else if (engine_name == "em") {
    WorkdirGuard wd(workdir.empty() ? default_workdir() : fs::path(workdir),
                    !workdir.empty());
    Kernel k({block, memory}, wd.path / "kernel");
    Graph g = Graph::load(in);
    if (auto bad = validate_graph(k, g)) {
      std::cerr << "error: invalid graph: " << *bad << "\n";
      return 2;
    }
    CertifyOutcome out = certify_em(k, g, cls);
    cert = std::move(out.cert);
    io = out.io;
    high_water = out.memory_high_water;
  } else {
    throw CLI::ValidationError("--engine", "must be em or oracle");
  }

  if (!cert_out.empty()) {
    std::ofstream f(cert_out);
    write_certificate(cert, f);
  } else {
    write_certificate(cert, std::cout);
  }
  if (io_stats) {
    std::cerr << "blocks_read=" << io.blocks_read
              << " blocks_written=" << io.blocks_written
              << " elements_streamed=" << io.elements_streamed
              << " memory_high_water=" << high_water << "\n";
  }
  return cert.yes() ? 0 : 1;
}

int cmd_authenticate(const std::string& graph_in, const std::string& cert_in,
                     const std::string& cls_name, std::size_t block,
                     std::size_t memory, const std::string& workdir) {
  std::ifstream cf(cert_in);
  if (!cf) {
    std::cerr << "error: cannot open " << cert_in << "\n";
    return 2;
  }
  Certificate cert = parse_certificate(cf);
  if (!cls_name.empty() && parse_class_or_throw(cls_name) != cert.cls) {
    std::cerr << "rejected: certificate is for class " << to_string(cert.cls)
              << ", not " << cls_name << "\n";
    return 3;
  }
  WorkdirGuard wd(workdir.empty() ? default_workdir() : fs::path(workdir),
                  !workdir.empty());
  Kernel k({block, memory}, wd.path / "kernel");
  Graph g = Graph::load(graph_in);
  if (auto bad = auth_certificate(k, g, cert)) {
    std::cerr << "rejected: " << *bad << "\n";
    return 3;
  }
  std::cout << "authenticated\n";
  return 0;
}

int cmd_convert(const std::string& to_binary, const std::string& to_text,
                const std::string& out, std::uint64_t n_override) {
  if (!to_binary.empty()) {
    std::ifstream in(to_binary);
    if (!in) {
      std::cerr << "error: cannot open " << to_binary << "\n";
      return 2;
    }
    EdgeListResult res = parse_edge_list(in, n_override);
    if (res.duplicates > 0)
      std::cerr << "warning: removed " << res.duplicates
                << " duplicate edge(s)\n";
    Graph g = store_graph(res.graph, out);
    std::cout << "wrote " << out << " (n=" << g.n << ", m=" << g.m << ")\n";
    return 0;
  }
  MemGraph g = load_mem_graph(to_text);
  std::ofstream f(out);
  write_edge_list(g, f);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_bench(const std::string& classes, const std::string& engines,
              std::vector<std::uint64_t> elements,
              std::vector<std::uint64_t> vertices, std::uint64_t seed,
              std::size_t block, std::size_t memory, bool no_instance,
              bool shuffle, const std::string& out,
              const std::string& workdir) {
  std::ostringstream csv;
  bench::write_csv_header(csv);

  std::vector<GraphClass> cls_list;
  {
    std::istringstream ss(classes);
    std::string tok;
    while (std::getline(ss, tok, ',')) cls_list.push_back(parse_class_or_throw(tok));
  }
  std::vector<Engine> engine_list;
  {
    std::istringstream ss(engines);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "em")
        engine_list.push_back(Engine::em);
      else if (tok == "oracle")
        engine_list.push_back(Engine::oracle);
      else
        throw CLI::ValidationError("--engines", "must list em and/or oracle");
    }
  }

  WorkdirGuard wd(workdir.empty() ? default_workdir() : fs::path(workdir),
                  !workdir.empty());
  for (GraphClass cls : cls_list) {
    std::vector<std::uint64_t> ns = vertices;
    for (std::uint64_t e : elements)
      ns.push_back(gen::vertices_for_elements(cls, static_cast<double>(e)));
    for (std::uint64_t n : ns) {
      for (Engine eng : engine_list) {
        bench::RunSpec spec;
        spec.gen_cls = cls;
        spec.certify_cls = cls;
        spec.vertices = n;
        spec.seed = seed;
        spec.engine = eng;
        spec.io = IOConfig{block, memory};
        spec.perturb = no_instance;
        spec.shuffle = shuffle;
        spec.oracle_cap = ~0ull;  // bench relies on verdicts, not witnesses
        bench::RunResult r = bench::run_one(wd.path, spec);
        bench::write_csv_row(csv, r);
      }
    }
  }

  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    f << csv.str();
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certifying graph-class recognition in external memory"};
  app.require_subcommand(1);

  // generate
  std::string gen_class, gen_out;
  std::uint64_t gen_n = 1000, gen_seed = 1, gen_extra = 3;
  bool gen_no = false, gen_shuffle = false;
  auto* sg = app.add_subcommand("generate", "write a seeded instance");
  sg->add_option("--class", gen_class, "split | threshold")->required();
  sg->add_option("--n", gen_n, "vertex count")->required();
  sg->add_option("--seed", gen_seed, "PRNG seed");
  sg->add_flag("--no-instance", gen_no, "perturb with random extra edges");
  sg->add_option("--extra-edges", gen_extra, "edges added by --no-instance");
  sg->add_flag("--shuffle", gen_shuffle, "randomize vertex ids");
  sg->add_option("--out", gen_out, "output graph file")->required();

  // certify
  std::string cert_class, cert_in, cert_engine = "em", cert_out, cert_workdir;
  std::size_t cert_block = 1024, cert_memory = 1u << 16;
  std::uint64_t cert_cap = oracle::kDefaultCap;
  bool cert_io = false;
  auto* sc = app.add_subcommand("certify", "decide membership with a certificate");
  sc->add_option("--class", cert_class,
                 "bipartite | split | threshold | trivially_perfect | chain")
      ->required();
  sc->add_option("--in", cert_in, "graph file (ARG1)")->required();
  sc->add_option("--engine", cert_engine, "em | oracle");
  sc->add_option("--block-size", cert_block, "records per block (B)");
  sc->add_option("--memory", cert_memory, "records of budget (M)");
  sc->add_option("--cert", cert_out, "certificate output file");
  sc->add_flag("--io-stats", cert_io, "print I/O counters to stderr");
  sc->add_option("--workdir", cert_workdir, "kernel working directory (kept)");
  sc->add_option("--oracle-cap", cert_cap, "oracle witness-extraction cap");

  // authenticate
  std::string auth_graph, auth_cert, auth_class, auth_workdir;
  std::size_t auth_block = 1024, auth_memory = 1u << 16;
  auto* sa = app.add_subcommand("authenticate", "verify a certificate");
  sa->add_option("--in", auth_graph, "graph file")->required();
  sa->add_option("--cert", auth_cert, "certificate file")->required();
  sa->add_option("--class", auth_class, "expected class (cross-check)");
  sa->add_option("--block-size", auth_block, "records per block (B)");
  sa->add_option("--memory", auth_memory, "records of budget (M)");
  sa->add_option("--workdir", auth_workdir, "kernel working directory (kept)");

  // convert
  std::string conv_bin, conv_text, conv_out;
  std::uint64_t conv_n = 0;
  auto* sv = app.add_subcommand("convert", "edge-list text <-> binary");
  sv->add_option("--to-binary", conv_bin, "edge-list input to convert");
  sv->add_option("--to-text", conv_text, "ARG1 input to convert");
  sv->add_option("--out", conv_out, "output file")->required();
  sv->add_option("--n", conv_n, "vertex count override (isolated tail)");

  // bench
  std::string bench_classes = "split,threshold", bench_engines = "em";
  std::string bench_out, bench_workdir;
  std::vector<std::uint64_t> bench_elements, bench_vertices;
  std::uint64_t bench_seed = 1;
  std::size_t bench_block = 1024, bench_memory = 1u << 16;
  bool bench_no = false, bench_shuffle = false;
  auto* sb = app.add_subcommand("bench", "generate-certify scaling runs, CSV out");
  sb->add_option("--classes", bench_classes, "comma list: split,threshold");
  sb->add_option("--engines", bench_engines, "comma list: em,oracle");
  sb->add_option("--elements", bench_elements,
                 "target instance sizes in records (n + 2m)");
  sb->add_option("--vertices", bench_vertices, "explicit vertex counts");
  sb->add_option("--seed", bench_seed, "PRNG seed");
  sb->add_option("--block-size", bench_block, "records per block (B)");
  sb->add_option("--memory", bench_memory, "records of budget (M)");
  sb->add_flag("--no-instance", bench_no, "perturb instances");
  sb->add_flag("--shuffle", bench_shuffle, "randomize vertex ids");
  sb->add_option("--out", bench_out, "CSV output file (default stdout)");
  sb->add_option("--workdir", bench_workdir, "kernel working directory (kept)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sg->parsed())
      return cmd_generate(gen_class, gen_n, gen_seed, gen_no, gen_extra,
                          gen_shuffle, gen_out);
    if (sc->parsed())
      return cmd_certify(cert_class, cert_in, cert_engine, cert_block,
                         cert_memory, cert_out, cert_io, cert_workdir, cert_cap);
    if (sa->parsed())
      return cmd_authenticate(auth_graph, auth_cert, auth_class, auth_block,
                              auth_memory, auth_workdir);
    if (sv->parsed()) {
      if (conv_bin.empty() == conv_text.empty()) {
        std::cerr << "error: pass exactly one of --to-binary / --to-text\n";
        return 2;
      }
      return cmd_convert(conv_bin, conv_text, conv_out, conv_n);
    }
    if (sb->parsed())
      return cmd_bench(bench_classes, bench_engines, bench_elements,
                       bench_vertices, bench_seed, bench_block, bench_memory,
                       bench_no, bench_shuffle, bench_out, bench_workdir);
  } catch (const oracle_cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const em_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
