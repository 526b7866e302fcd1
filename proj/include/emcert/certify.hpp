#ifndef EMCERT_CERTIFY_HPP
#define EMCERT_CERTIFY_HPP

// Engine dispatch: the external-memory pipelines against the in-memory
// reference recognizers, with per-run I/O and message accounting.

#include <chrono>
#include <cstdint>
#include <string>

#include "emcert/authenticate.hpp"
#include "emcert/bipartite.hpp"
#include "emcert/chain.hpp"
#include "emcert/reference.hpp"
#include "emcert/split.hpp"
#include "emcert/threshold.hpp"
#include "emcert/trivially_perfect.hpp"

namespace emcert {

enum class Engine { em, oracle };

inline const char* to_string(Engine e) {
  return e == Engine::em ? "em" : "oracle";
}

struct CertifyOutcome {
  Certificate cert;
  IOStats io;                      // kernel counters for this run
  std::size_t memory_high_water = 0;
  std::uint64_t peo_messages = 0;
  std::uint64_t uco_messages = 0;
  std::uint64_t extract_iterations = 0;
  double wall_ms = 0.0;
};

inline CertifyOutcome certify_em(Kernel& k, const Graph& g, GraphClass cls) {
  CertifyOutcome out;
  k.reset_stats();
  k.reset_high_water();
  auto t0 = std::chrono::steady_clock::now();
  switch (cls) {
    case GraphClass::split: {
      SplitPipeline pl = run_split_pipeline(k, g);
      out.cert = std::move(pl.cert);
      out.peo_messages = pl.peo_messages;
      break;
    }
    case GraphClass::threshold: {
      ThresholdPipeline pl = run_threshold_pipeline(k, g);
      out.cert = std::move(pl.cert);
      out.peo_messages = pl.peo_messages;
      break;
    }
    case GraphClass::trivially_perfect: {
      TpPipeline pl = run_tp_pipeline(k, g);
      out.cert = std::move(pl.cert);
      out.uco_messages = pl.uco_messages;
      break;
    }
    case GraphClass::bipartite: {
      out.cert = certify_bipartite(k, g);
      break;
    }
    case GraphClass::chain: {
      ChainPipeline pl = run_chain_pipeline(k, g);
      out.cert = std::move(pl.cert);
      out.peo_messages = pl.view_peo_messages;
      out.extract_iterations = pl.extract_iterations;
      break;
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  out.io = k.io_report();
  out.memory_high_water = k.memory_high_water();
  return out;
}

inline CertifyOutcome certify_oracle(const MemGraph& g, GraphClass cls,
                                     std::uint64_t cap = oracle::kDefaultCap) {
  CertifyOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  out.cert = reference::certify(g, cls, cap);
  auto t1 = std::chrono::steady_clock::now();
  out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace emcert

#endif  // EMCERT_CERTIFY_HPP
