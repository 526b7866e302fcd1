#ifndef EMCERT_TEST_UTIL_HPP
#define EMCERT_TEST_UTIL_HPP

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "emcert/graph.hpp"
#include "emcert/kernel.hpp"

namespace emtest {

/// Fresh kernel working directory per test scope, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned long> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("emcert_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline emcert::MemGraph from_edges(
    std::uint64_t n,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges) {
  emcert::MemGraph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  g.normalize();
  return g;
}

inline emcert::MemGraph path_graph(std::uint64_t n) {
  emcert::MemGraph g(n);
  for (std::uint64_t v = 1; v + 1 <= n; ++v) g.add_edge(v, v + 1);
  g.normalize();
  return g;
}

inline emcert::MemGraph cycle_graph(std::uint64_t n) {
  emcert::MemGraph g = path_graph(n);
  if (n >= 3) {
    g.add_edge(1, n);
    g.normalize();
  }
  return g;
}

inline emcert::MemGraph star_graph(std::uint64_t leaves) {
  emcert::MemGraph g(leaves + 1);
  for (std::uint64_t v = 2; v <= leaves + 1; ++v) g.add_edge(1, v);
  g.normalize();
  return g;
}

inline emcert::MemGraph complete_graph(std::uint64_t n) {
  emcert::MemGraph g(n);
  for (std::uint64_t u = 1; u <= n; ++u)
    for (std::uint64_t v = u + 1; v <= n; ++v) g.add_edge(u, v);
  g.normalize();
  return g;
}

inline emcert::MemGraph edgeless_graph(std::uint64_t n) {
  return emcert::MemGraph(n);
}

// 2K2: edges {1,2} and {3,4}
inline emcert::MemGraph two_k2_graph() { return from_edges(4, {{1, 2}, {3, 4}}); }

// triangle {1,2,3} plus pendant 4 attached to 1
inline emcert::MemGraph triangle_pendant_graph() {
  return from_edges(4, {{1, 2}, {1, 3}, {2, 3}, {1, 4}});
}

// 3-dimensional hypercube; vertex ids are bit patterns plus one
inline emcert::MemGraph q3_graph() {
  emcert::MemGraph g(8);
  for (std::uint64_t a = 0; a < 8; ++a)
    for (int bit = 0; bit < 3; ++bit) {
      std::uint64_t b = a ^ (1u << bit);
      if (a < b) g.add_edge(a + 1, b + 1);
    }
  g.normalize();
  return g;
}

inline emcert::MemGraph random_graph(std::uint64_t n, double p,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  emcert::MemGraph g(n);
  for (std::uint64_t u = 1; u <= n; ++u)
    for (std::uint64_t v = u + 1; v <= n; ++v)
      if (coin(rng) < p) g.add_edge(u, v);
  g.normalize();
  return g;
}

}  // namespace emtest

#endif
