#ifndef EMCERT_REFERENCE_HPP
#define EMCERT_REFERENCE_HPP

// Internal-memory recognizers, the comparison baseline for the external
// algorithms. Verdicts are produced by direct linear-ish algorithms;
// NO-witnesses other than odd cycles fall back to the capped exhaustive
// scan.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/oracle.hpp"

namespace emcert::reference {

namespace detail {

inline std::vector<std::uint64_t> order_by_degree(const MemGraph& g,
                                                  bool nonincreasing) {
  std::vector<std::uint64_t> ord(g.n);
  std::iota(ord.begin(), ord.end(), 1);
  std::sort(ord.begin(), ord.end(), [&](std::uint64_t a, std::uint64_t b) {
    if (g.degree(a) != g.degree(b))
      return nonincreasing ? g.degree(a) > g.degree(b)
                           : g.degree(a) < g.degree(b);
    return a < b;
  });
  return ord;
}

inline Witness forbidden_or_throw(const MemGraph& g, GraphClass c,
                                  std::uint64_t cap) {
  auto w = oracle::find_forbidden(g, oracle::forbidden_family(c), cap);
  if (!w) throw em_error("reference: verdict NO but no forbidden subgraph");
  return *w;
}

}  // namespace detail

inline Certificate certify_split(const MemGraph& g,
                                 std::uint64_t cap = oracle::kDefaultCap) {
  Certificate cert;
  cert.cls = GraphClass::split;
  if (g.m() == 0) {
    std::vector<std::uint64_t> all(g.n);
    std::iota(all.begin(), all.end(), 1);
    cert.payload = SplitYes{{}, all};
    return cert;
  }
  auto ord = detail::order_by_degree(g, false);
  std::vector<std::uint64_t> rank(g.n + 1, 0);
  for (std::uint64_t i = 0; i < g.n; ++i) rank[ord[i]] = i + 1;

  bool peo = true;
  std::uint64_t max_h = 0;
  for (std::uint64_t v = 1; v <= g.n && peo; ++v) {
    std::uint64_t u = 0, hcnt = 0;
    for (std::uint64_t w : g.adj[v])
      if (rank[w] > rank[v]) {
        ++hcnt;
        if (u == 0 || rank[w] < rank[u]) u = w;
      }
    max_h = std::max(max_h, hcnt);
    if (hcnt < 2) continue;
    for (std::uint64_t w : g.adj[v])
      if (rank[w] > rank[v] && w != u && !g.has_edge(u, w)) {
        peo = false;
        break;
      }
  }

  bool member = peo;
  std::uint64_t kclq = 1 + max_h;
  if (member) {
    for (std::uint64_t v = 1; v <= g.n && member; ++v) {
      if (rank[v] > g.n - kclq) {
        // clique side: every higher-ranked vertex must be a neighbor
        std::uint64_t higher = 0;
        for (std::uint64_t w : g.adj[v])
          if (rank[w] > rank[v]) ++higher;
        if (higher != g.n - rank[v]) member = false;
      } else {
        for (std::uint64_t w : g.adj[v])
          if (rank[w] <= g.n - kclq) member = false;  // edge inside I
      }
    }
  }
  if (!member) {
    cert.payload = NoCertificate{detail::forbidden_or_throw(g, cert.cls, cap)};
    return cert;
  }
  SplitYes yes;
  for (std::uint64_t v = 1; v <= g.n; ++v)
    (rank[v] > g.n - kclq ? yes.K : yes.I).push_back(v);
  cert.payload = std::move(yes);
  return cert;
}

inline Certificate certify_threshold(const MemGraph& g,
                                     std::uint64_t cap = oracle::kDefaultCap) {
  Certificate cert;
  cert.cls = GraphClass::threshold;
  Certificate split = certify_split(g, cap);
  if (!split.yes() || !oracle::is_threshold_definitional(g)) {
    cert.payload = NoCertificate{detail::forbidden_or_throw(g, cert.cls, cap)};
    return cert;
  }
  const auto& sy = std::get<SplitYes>(split.payload);
  ThresholdYes yes;
  yes.K = sy.K;
  yes.I = sy.I;
  yes.beta = sy.I;
  std::sort(yes.beta.begin(), yes.beta.end(),
            [&](std::uint64_t a, std::uint64_t b) {
              return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b)
                                                : a < b;
            });
  cert.payload = std::move(yes);
  return cert;
}

inline Certificate certify_trivially_perfect(
    const MemGraph& g, std::uint64_t cap = oracle::kDefaultCap) {
  Certificate cert;
  cert.cls = GraphClass::trivially_perfect;
  auto gamma = detail::order_by_degree(g, true);
  std::vector<std::uint64_t> rank(g.n + 1, 0);
  for (std::uint64_t i = 0; i < g.n; ++i) rank[gamma[i]] = i + 1;

  // label replay: processing v requires all later-ranked neighbors to carry
  // v's current label, then stamps them with v's rank
  std::vector<std::uint64_t> label(g.n + 1, 0);
  bool member = true;
  for (std::uint64_t i = 0; i < g.n && member; ++i) {
    std::uint64_t v = gamma[i];
    for (std::uint64_t w : g.adj[v]) {
      if (rank[w] < rank[v]) continue;
      if (label[w] != label[v]) {
        member = false;
        break;
      }
    }
    for (std::uint64_t w : g.adj[v])
      if (rank[w] > rank[v]) label[w] = i + 1;
  }
  if (!member) {
    cert.payload = NoCertificate{detail::forbidden_or_throw(g, cert.cls, cap)};
    return cert;
  }
  cert.payload = TPYes{gamma};
  return cert;
}

inline Certificate certify_bipartite(const MemGraph& g) {
  Certificate cert;
  cert.cls = GraphClass::bipartite;
  std::vector<std::uint64_t> s0, s1;
  Witness odd;
  if (oracle::is_bipartite(g, &s0, &s1, &odd)) {
    cert.payload = BipartiteYes{s0, s1};
  } else {
    cert.payload = NoCertificate{odd};
  }
  return cert;
}

inline Certificate certify_chain(const MemGraph& g,
                                 std::uint64_t cap = oracle::kDefaultCap) {
  Certificate cert;
  cert.cls = GraphClass::chain;

  // two edge-bearing components give a 2K2 directly
  std::vector<std::uint64_t> comp(g.n + 1, 0);
  std::uint64_t ncomp = 0;
  {
    std::vector<bool> seen(g.n + 1, false);
    std::vector<bool> removed(g.n + 1, false);
    std::vector<std::uint64_t> verts;
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      if (seen[v]) continue;
      oracle::detail::component_of(g, v, removed, verts, seen);
      ++ncomp;
      for (std::uint64_t u : verts) comp[u] = ncomp;
    }
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> first_edge(ncomp + 1,
                                                                  {0, 0});
  std::vector<std::uint64_t> edge_comps;
  for (std::uint64_t v = 1; v <= g.n; ++v)
    for (std::uint64_t w : g.adj[v])
      if (v < w && first_edge[comp[v]] == std::pair<std::uint64_t, std::uint64_t>{0, 0}) {
        first_edge[comp[v]] = {v, w};
        edge_comps.push_back(comp[v]);
      }
  if (edge_comps.size() >= 2) {
    auto [a, b] = first_edge[edge_comps[0]];
    auto [c, d] = first_edge[edge_comps[1]];
    cert.payload = NoCertificate{Witness{WitnessKind::two_k2, {a, b, c, d}}};
    return cert;
  }

  std::vector<std::uint64_t> s0, s1;
  if (!oracle::is_bipartite(g, &s0, &s1)) {
    cert.payload = NoCertificate{detail::forbidden_or_throw(g, cert.cls, cap)};
    return cert;
  }
  if (!oracle::is_chain_definitional(g)) {
    cert.payload = NoCertificate{detail::forbidden_or_throw(g, cert.cls, cap)};
    return cert;
  }

  // sides of the edge-bearing component; isolated vertices join the larger
  std::vector<std::uint64_t> u_side, w_side, isolated;
  std::uint64_t ec = edge_comps.empty() ? 0 : edge_comps[0];
  for (std::uint64_t v : s0)
    (g.degree(v) == 0 || comp[v] != ec ? isolated : u_side).push_back(v);
  for (std::uint64_t v : s1)
    (g.degree(v) == 0 || comp[v] != ec ? isolated : w_side).push_back(v);
  if (w_side.size() > u_side.size()) std::swap(u_side, w_side);
  for (std::uint64_t v : isolated) u_side.push_back(v);
  std::sort(u_side.begin(), u_side.end());
  std::sort(w_side.begin(), w_side.end());

  auto nno_of = [&](std::vector<std::uint64_t> side) {
    std::sort(side.begin(), side.end(), [&](std::uint64_t a, std::uint64_t b) {
      return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
    });
    return side;
  };
  cert.payload =
      ChainYes{u_side, w_side, nno_of(u_side), nno_of(w_side)};
  return cert;
}

inline Certificate certify(const MemGraph& g, GraphClass c,
                           std::uint64_t cap = oracle::kDefaultCap) {
  switch (c) {
    case GraphClass::split: return certify_split(g, cap);
    case GraphClass::threshold: return certify_threshold(g, cap);
    case GraphClass::trivially_perfect: return certify_trivially_perfect(g, cap);
    case GraphClass::bipartite: return certify_bipartite(g);
    case GraphClass::chain: return certify_chain(g, cap);
  }
  throw em_error("unknown class");
}

/// Rough resident-set estimate in records, for the bench's budget flag.
inline std::uint64_t memory_records_estimate(const MemGraph& g) {
  return g.n + 2 * g.m();
}

}  // namespace emcert::reference

#endif  // EMCERT_REFERENCE_HPP
