#ifndef EMCERT_GENERATE_HPP
#define EMCERT_GENERATE_HPP

// Seeded instance generators. All randomness comes from std::mt19937_64
// (whose output sequence the standard pins down) combined with rejection
// sampling for bounded draws, so the same (n, seed) produces a
// byte-identical graph file on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/graph.hpp"

namespace emcert::gen {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  /// Uniform in [0, bound), rejection sampled.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = ~0ull - ~0ull % bound;
    for (;;) {
      std::uint64_t x = eng_();
      if (x < limit) return x % bound;
    }
  }

  /// Probability exactly 1/4.
  bool coin_quarter() { return eng_() < (1ull << 62); }

  /// Probability 1/10 up to the dyadic rounding of floor(2^64 / 10).
  bool coin_tenth() { return eng_() < 1844674407370955161ull; }

private:
  std::mt19937_64 eng_;
};

/// Clique on the first floor(n/10) vertices; every clique-independent pair
/// becomes an edge with probability 1/4.
inline MemGraph gen_split_yes(std::uint64_t n, std::uint64_t seed) {
  if (n < 10) throw em_error("gen_split_yes requires n >= 10");
  Rng rng(seed);
  std::uint64_t k = n / 10;
  MemGraph g(n);
  for (std::uint64_t u = 1; u <= k; ++u)
    for (std::uint64_t v = u + 1; v <= k; ++v) g.add_edge(u, v);
  for (std::uint64_t u = 1; u <= k; ++u)
    for (std::uint64_t w = k + 1; w <= n; ++w)
      if (rng.coin_quarter()) g.add_edge(u, w);
  g.normalize();
  return g;
}

/// n additions, each universal with probability ~1/10, isolated otherwise.
inline MemGraph build_threshold(const std::vector<bool>& universal) {
  MemGraph g(universal.size());
  for (std::uint64_t i = 1; i <= g.n; ++i)
    if (universal[i - 1])
      for (std::uint64_t j = 1; j < i; ++j) g.add_edge(j, i);
  g.normalize();
  return g;
}

inline MemGraph gen_threshold_yes(std::uint64_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<bool> universal(n);
  for (std::uint64_t i = 0; i < n; ++i) universal[i] = rng.coin_tenth();
  return build_threshold(universal);
}

/// Adds `extra_edges` uniformly random non-existing edges. The result is
/// only probably outside the class; callers must not assume the verdict.
inline MemGraph perturb_no(const MemGraph& g, std::uint64_t extra_edges,
                           std::uint64_t seed) {
  std::uint64_t free_pairs = g.n * (g.n - 1) / 2 - g.m();
  if (extra_edges > free_pairs)
    throw em_error("perturb_no: no free vertex pair left");
  Rng rng(seed);
  MemGraph out = g;
  std::uint64_t added = 0;
  while (added < extra_edges) {
    std::uint64_t u = rng.below(out.n) + 1;
    std::uint64_t v = rng.below(out.n) + 1;
    if (u == v || out.has_edge(u, v)) continue;
    out.add_edge(u, v);
    out.normalize();
    ++added;
  }
  return out;
}

inline MemGraph apply_permutation(const MemGraph& g,
                                  const std::vector<std::uint64_t>& new_id) {
  MemGraph out(g.n);
  for (std::uint64_t v = 1; v <= g.n; ++v)
    for (std::uint64_t w : g.adj[v])
      if (v < w) out.add_edge(new_id[v - 1], new_id[w - 1]);
  out.normalize();
  return out;
}

/// Uniform relabeling via a Fisher-Yates shuffle of the identity.
inline MemGraph shuffle_labels(const MemGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> perm(g.n);
  for (std::uint64_t i = 0; i < g.n; ++i) perm[i] = i + 1;
  for (std::uint64_t i = g.n; i >= 2; --i) {
    std::uint64_t j = rng.below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return apply_permutation(g, perm);
}

/// Expected record volume n + 2m of a generated instance, used to pick
/// vertex counts for element-count targets.
inline double expected_elements(GraphClass cls, std::uint64_t n) {
  if (cls == GraphClass::split) {
    double k = static_cast<double>(n / 10);
    double m = k * (k - 1) / 2 + k * (static_cast<double>(n) - k) / 4.0;
    return static_cast<double>(n) + 2 * m;
  }
  // threshold: each addition is universal with p = 1/10
  double m = static_cast<double>(n) * (static_cast<double>(n) - 1) / 20.0;
  return static_cast<double>(n) + 2 * m;
}

/// Smallest vertex count whose expected instance size reaches the target.
inline std::uint64_t vertices_for_elements(GraphClass cls, double target) {
  std::uint64_t lo = 10, hi = 1;
  while (expected_elements(cls, hi) < target) hi *= 2;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (expected_elements(cls, mid) >= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace emcert::gen

#endif  // EMCERT_GENERATE_HPP
