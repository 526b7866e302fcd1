#ifndef EMCERT_AUTHENTICATE_HPP
#define EMCERT_AUTHENTICATE_HPP

// Certificate authentication, independent of the certifier pipelines.
// YES-certificates are verified by relabeling the graph so the claimed
// structure becomes a rank property (independent sets are rank prefixes,
// cliques rank suffixes, orderings consecutive ranks) and then scanning.
// NO-certificates reduce to the constant-size witness check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/graph_ops.hpp"
#include "emcert/orderings.hpp"

namespace emcert {

namespace detail {

inline std::optional<std::string> check_partition(
    std::uint64_t n, std::vector<std::uint64_t> a, std::vector<std::uint64_t> b,
    const char* aname, const char* bname) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::uint64_t> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  if (merged.size() != n)
    return std::string(aname) + " and " + bname + " do not cover " +
           std::to_string(n) + " vertices";
  for (std::uint64_t i = 0; i < n; ++i)
    if (merged[i] != i + 1)
      return std::string("vertex ") + std::to_string(i + 1) + " missing or " +
             "duplicated across " + aname + "/" + bname;
  return std::nullopt;
}

/// Relabels g so that `front` occupies ranks 1..|front| in the given order
/// and `back` the remaining ranks. Caller guarantees a valid partition.
inline Graph relabel_for_auth(Kernel& k, const Graph& g,
                              const std::vector<std::uint64_t>& front,
                              const std::vector<std::uint64_t>& back) {
  std::vector<std::uint64_t> perm;
  perm.reserve(g.n);
  perm.insert(perm.end(), front.begin(), front.end());
  perm.insert(perm.end(), back.begin(), back.end());
  return relabel(k, g, Ordering::from_vector(k, perm, OrderingRole::peo));
}

/// First edge with both endpoints of rank <= bound, if any. Rank space.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> edge_within_prefix(
    Kernel& k, const Graph& g_rel, std::uint64_t bound) {
  AdjacencyScanner sc(k, g_rel);
  while (sc.next_vertex()) {
    std::uint64_t v = sc.vertex();
    if (v > bound) break;
    std::uint64_t w = 0;
    while (sc.next_neighbor(w))
      if (w > v && w <= bound) return std::make_pair(v, w);
  }
  return std::nullopt;
}

/// First missing pair inside the rank suffix (bound, n], if any.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> gap_within_suffix(
    Kernel& k, const Graph& g_rel, std::uint64_t bound) {
  AdjacencyScanner sc(k, g_rel);
  while (sc.next_vertex()) {
    std::uint64_t v = sc.vertex();
    if (v <= bound) continue;
    std::uint64_t expect = v + 1, w = 0;
    while (sc.next_neighbor(w)) {
      if (w <= v) continue;
      if (w > expect) break;
      ++expect;
    }
    if (expect <= g_rel.n) return std::make_pair(v, expect);
  }
  return std::nullopt;
}

/// Consecutive neighborhood inclusions over ranks [lo, hi], neighborhoods
/// restricted by `keep`. Returns (rank, missing neighbor rank) on failure.
template <typename Keep>
std::optional<std::pair<std::uint64_t, std::uint64_t>> nested_over_ranks(
    Kernel& k, const Graph& g_rel, std::uint64_t lo, std::uint64_t hi,
    Keep keep) {
  for (std::uint64_t t = lo; t + 1 <= hi; ++t) {
    AdjacencyCursor small(k, g_rel, t), big(k, g_rel, t + 1);
    while (!small.done()) {
      std::uint64_t w = small.next();
      if (!keep(w) || w == t + 1) continue;
      if (!big.contains_from_here(w)) return std::make_pair(t, w);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// K must induce a clique and I an independent set, together covering V.
inline std::optional<std::string> auth_split(Kernel& k, const Graph& g,
                                             const std::vector<std::uint64_t>& K,
                                             const std::vector<std::uint64_t>& I) {
  if (auto bad = detail::check_partition(g.n, K, I, "K", "I")) return bad;
  std::vector<std::uint64_t> i_sorted(I), k_sorted(K);
  std::sort(i_sorted.begin(), i_sorted.end());
  std::sort(k_sorted.begin(), k_sorted.end());
  Graph rel = detail::relabel_for_auth(k, g, i_sorted, k_sorted);
  if (auto e = detail::edge_within_prefix(k, rel, I.size()))
    return "edge {" + std::to_string(i_sorted[e->first - 1]) + "," +
           std::to_string(i_sorted[e->second - 1]) + "} inside I";
  if (auto gap = detail::gap_within_suffix(k, rel, I.size()))
    return "missing clique edge {" +
           std::to_string(k_sorted[gap->first - I.size() - 1]) + "," +
           std::to_string(k_sorted[gap->second - I.size() - 1]) + "} in K";
  return std::nullopt;
}

/// Split authentication plus the nested neighborhood ordering of I.
inline std::optional<std::string> auth_threshold(
    Kernel& k, const Graph& g, const std::vector<std::uint64_t>& K,
    const std::vector<std::uint64_t>& I, const std::vector<std::uint64_t>& beta) {
  if (auto bad = auth_split(k, g, K, I)) return bad;
  std::vector<std::uint64_t> bs(beta), is(I);
  std::sort(bs.begin(), bs.end());
  std::sort(is.begin(), is.end());
  if (bs != is) return "beta is not an ordering of I";
  std::vector<std::uint64_t> k_sorted(K);
  std::sort(k_sorted.begin(), k_sorted.end());
  Graph rel = detail::relabel_for_auth(k, g, beta, k_sorted);
  auto in_k = [&](std::uint64_t w) { return w > beta.size(); };
  if (auto bad = detail::nested_over_ranks(k, rel, 1, beta.size(), in_k))
    return "beta not nested at position " + std::to_string(bad->first) +
           " (vertex " + std::to_string(beta[bad->first - 1]) + ")";
  return std::nullopt;
}

/// The ordering itself is the certificate: rerun the label replay on it.
inline std::optional<std::string> auth_tp(Kernel& k, const Graph& g,
                                          const std::vector<std::uint64_t>& gamma) {
  Ordering ord = Ordering::from_vector(k, gamma, OrderingRole::uco);
  if (!is_permutation(k, ord, g.n))
    return "gamma is not a permutation of the vertices";
  Graph rel = relabel(k, g, ord);
  CheckUcoResult res = check_uco(k, rel);
  if (!res.ok())
    return "gamma is not a universal-in-a-component ordering (labels " +
           std::to_string(res.anomaly->expected_label) + " vs " +
           std::to_string(res.anomaly->found_label) + " at ranks " +
           std::to_string(res.anomaly->at) + "," +
           std::to_string(res.anomaly->neighbor) + ")";
  return std::nullopt;
}

/// Both sides independent and both orderings nested.
inline std::optional<std::string> auth_chain(
    Kernel& k, const Graph& g, const std::vector<std::uint64_t>& U,
    const std::vector<std::uint64_t>& W, const std::vector<std::uint64_t>& nno_u,
    const std::vector<std::uint64_t>& nno_w) {
  if (auto bad = detail::check_partition(g.n, U, W, "U", "W")) return bad;
  {
    std::vector<std::uint64_t> a(nno_u), b(U);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return "nno_U is not an ordering of U";
    a = nno_w;
    b = W;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return "nno_W is not an ordering of W";
  }
  Graph rel = detail::relabel_for_auth(k, g, nno_u, nno_w);
  if (auto e = detail::edge_within_prefix(k, rel, nno_u.size()))
    return "edge {" + std::to_string(nno_u[e->first - 1]) + "," +
           std::to_string(nno_u[e->second - 1]) + "} inside U";
  // an edge within the W ranks, scanned as a prefix of the reversed order
  {
    AdjacencyScanner sc(k, rel);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex(), w = 0;
      if (v <= nno_u.size()) {
        continue;
      }
      while (sc.next_neighbor(w))
        if (w > v)
          return "edge {" + std::to_string(nno_w[v - nno_u.size() - 1]) + "," +
                 std::to_string(nno_w[w - nno_u.size() - 1]) + "} inside W";
    }
  }
  auto in_w = [&](std::uint64_t x) { return x > nno_u.size(); };
  auto in_u = [&](std::uint64_t x) { return x <= nno_u.size(); };
  if (auto bad = detail::nested_over_ranks(k, rel, 1, nno_u.size(), in_w))
    return "nno_U not nested at position " + std::to_string(bad->first);
  if (auto bad = detail::nested_over_ranks(k, rel, nno_u.size() + 1, g.n, in_u))
    return "nno_W not nested at position " +
           std::to_string(bad->first - nno_u.size());
  return std::nullopt;
}

/// Every edge must straddle the claimed bipartition.
inline std::optional<std::string> auth_bipartition(
    Kernel& k, const Graph& g, const std::vector<std::uint64_t>& U,
    const std::vector<std::uint64_t>& W) {
  if (auto bad = detail::check_partition(g.n, U, W, "U", "W")) return bad;
  std::vector<std::uint64_t> us(U), ws(W);
  std::sort(us.begin(), us.end());
  std::sort(ws.begin(), ws.end());
  Graph rel = detail::relabel_for_auth(k, g, us, ws);
  AdjacencyScanner sc(k, rel);
  std::uint64_t bound = U.size();
  while (sc.next_vertex()) {
    std::uint64_t v = sc.vertex(), w = 0;
    while (sc.next_neighbor(w)) {
      if (w < v) continue;
      bool va = v <= bound, wa = w <= bound;
      if (va == wa) {
        auto orig = [&](std::uint64_t r) {
          return r <= bound ? us[r - 1] : ws[r - bound - 1];
        };
        return "edge {" + std::to_string(orig(v)) + "," +
               std::to_string(orig(w)) + "} does not straddle the bipartition";
      }
    }
  }
  return std::nullopt;
}

/// Witness-kind legality for the class plus the induced-pattern check.
inline std::optional<std::string> auth_no(Kernel& k, const Graph& g,
                                          GraphClass cls, const Witness& w) {
  if (!witness_kind_legal(cls, w.kind))
    return std::string("witness kind ") + to_string(w.kind) +
           " not legal for class " + to_string(cls);
  return check_witness(k, g, w);
}

inline std::optional<std::string> auth_certificate(Kernel& k, const Graph& g,
                                                   const Certificate& c) {
  if (!c.yes()) return auth_no(k, g, c.cls, c.witness());
  switch (c.cls) {
    case GraphClass::split: {
      const auto& p = std::get<SplitYes>(c.payload);
      return auth_split(k, g, p.K, p.I);
    }
    case GraphClass::threshold: {
      const auto& p = std::get<ThresholdYes>(c.payload);
      return auth_threshold(k, g, p.K, p.I, p.beta);
    }
    case GraphClass::trivially_perfect: {
      const auto& p = std::get<TPYes>(c.payload);
      return auth_tp(k, g, p.gamma);
    }
    case GraphClass::bipartite: {
      const auto& p = std::get<BipartiteYes>(c.payload);
      return auth_bipartition(k, g, p.U, p.W);
    }
    case GraphClass::chain: {
      const auto& p = std::get<ChainYes>(c.payload);
      return auth_chain(k, g, p.U, p.W, p.nno_u, p.nno_w);
    }
  }
  return "unknown certificate class";
}

}  // namespace emcert

#endif  // EMCERT_AUTHENTICATE_HPP
