#ifndef EMCERT_ORACLE_HPP
#define EMCERT_ORACLE_HPP

// In-memory brute-force reference. Exhaustive forbidden-subgraph scans are
// capped (they are oracles, not algorithms); the reference recognizers are
// linear-ish in-memory recognizers used as the bench comparator and by the
// `--engine oracle` path.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/graph.hpp"

namespace emcert {

class oracle_cap_error : public em_error {
public:
  using em_error::em_error;
};

namespace oracle {

inline constexpr std::uint64_t kDefaultCap = 16;

namespace detail {

/// Induced-pattern test on a subset, returning the witness in normative
/// vertex order when it matches.
inline std::optional<Witness> match_subset(const MemGraph& g,
                                           const std::vector<std::uint64_t>& s,
                                           WitnessKind kind) {
  std::size_t n = s.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::size_t edges = 0;
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.has_edge(s[i], s[j])) {
        adj[i][j] = adj[j][i] = true;
        ++edges;
        ++deg[i];
        ++deg[j];
      }

  auto walk_cycle = [&]() {
    // start at s[0]'s position of the minimum id, toward its smaller
    // neighbor; all degrees are 2 here
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (s[i] < s[start]) start = i;
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < n; ++j)
      if (adj[start][j]) nb.push_back(j);
    std::size_t next = s[nb[0]] < s[nb[1]] ? nb[0] : nb[1];
    std::vector<std::uint64_t> order{s[start], s[next]};
    std::size_t prev = start, cur = next;
    while (order.size() < n) {
      for (std::size_t j = 0; j < n; ++j)
        if (adj[cur][j] && j != prev) {
          prev = cur;
          cur = j;
          break;
        }
      order.push_back(s[cur]);
    }
    return order;
  };

  switch (kind) {
    case WitnessKind::c3:
      if (n == 3 && edges == 3) return Witness{kind, {s[0], s[1], s[2]}};
      return std::nullopt;
    case WitnessKind::c4:
      if (n == 4 && edges == 4 && deg[0] == 2 && deg[1] == 2 && deg[2] == 2 &&
          deg[3] == 2)
        return Witness{kind, walk_cycle()};
      return std::nullopt;
    case WitnessKind::c5:
      if (n == 5 && edges == 5 &&
          std::all_of(deg.begin(), deg.end(), [](auto d) { return d == 2; }))
        return Witness{kind, walk_cycle()};
      return std::nullopt;
    case WitnessKind::p4: {
      if (n != 4 || edges != 3) return std::nullopt;
      std::vector<std::size_t> ends;
      for (std::size_t i = 0; i < n; ++i) {
        if (deg[i] == 0 || deg[i] > 2) return std::nullopt;
        if (deg[i] == 1) ends.push_back(i);
      }
      if (ends.size() != 2) return std::nullopt;
      std::size_t start = s[ends[0]] < s[ends[1]] ? ends[0] : ends[1];
      std::vector<std::uint64_t> order{s[start]};
      std::size_t prev = start, cur = start;
      while (order.size() < 4) {
        for (std::size_t j = 0; j < n; ++j)
          if (adj[cur][j] && j != prev) {
            prev = cur;
            cur = j;
            break;
          }
        order.push_back(s[cur]);
      }
      return Witness{kind, order};
    }
    case WitnessKind::two_k2: {
      if (n != 4 || edges != 2) return std::nullopt;
      if (std::any_of(deg.begin(), deg.end(), [](auto d) { return d != 1; }))
        return std::nullopt;
      std::size_t a = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (s[i] < s[a]) a = i;
      std::size_t b = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (adj[a][j]) b = j;
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < n; ++j)
        if (j != a && j != b) rest.push_back(j);
      if (s[rest[0]] > s[rest[1]]) std::swap(rest[0], rest[1]);
      return Witness{kind, {s[a], s[b], s[rest[0]], s[rest[1]]}};
    }
    case WitnessKind::odd_cycle:
      return std::nullopt;  // handled by the bipartite oracle
  }
  return std::nullopt;
}

template <typename Fn>
bool for_each_subset(std::uint64_t n, std::size_t k, Fn&& fn) {
  std::vector<std::uint64_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i + 1;
  if (k > n) return false;
  for (;;) {
    if (fn(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - (k - i)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Exhaustively searches for an induced member of `family`. Returns the
/// first witness found in subset enumeration order, or nullopt when the
/// graph is family-free.
inline std::optional<Witness> find_forbidden(
    const MemGraph& g, const std::vector<WitnessKind>& family,
    std::uint64_t cap = kDefaultCap) {
  if (g.n > cap)
    throw oracle_cap_error("oracle: n=" + std::to_string(g.n) +
                           " exceeds cap " + std::to_string(cap));
  std::optional<Witness> found;
  for (WitnessKind kind : family) {
    std::size_t arity = emcert::detail::witness_arity(kind);
    detail::for_each_subset(g.n, arity, [&](const std::vector<std::uint64_t>& s) {
      found = detail::match_subset(g, s, kind);
      return found.has_value();
    });
    if (found) return found;
  }
  return std::nullopt;
}

inline std::vector<WitnessKind> forbidden_family(GraphClass c) {
  switch (c) {
    case GraphClass::split:
      return {WitnessKind::two_k2, WitnessKind::c4, WitnessKind::c5};
    case GraphClass::threshold:
      return {WitnessKind::two_k2, WitnessKind::p4, WitnessKind::c4};
    case GraphClass::trivially_perfect:
      return {WitnessKind::p4, WitnessKind::c4};
    case GraphClass::chain:
      return {WitnessKind::two_k2, WitnessKind::c3, WitnessKind::c5};
    case GraphClass::bipartite:
      return {};  // odd cycles of any length; see is_bipartite
  }
  return {};
}

// ---------------------------------------------------------------------------
// Definitional checks (small n), independent of the forbidden-subgraph
// characterizations; the two views are cross-checked in tests.

inline bool is_split_definitional(const MemGraph& g) {
  if (g.n > 20) throw oracle_cap_error("definitional split check capped at 20");
  for (std::uint64_t mask = 0; mask < (1ull << g.n); ++mask) {
    bool ok = true;
    for (std::uint64_t u = 1; u <= g.n && ok; ++u)
      for (std::uint64_t v = u + 1; v <= g.n && ok; ++v) {
        bool ku = mask & (1ull << (u - 1)), kv = mask & (1ull << (v - 1));
        bool e = g.has_edge(u, v);
        if (ku && kv && !e) ok = false;    // clique side
        if (!ku && !kv && e) ok = false;   // independent side
      }
    if (ok) return true;
  }
  return false;
}

inline bool is_threshold_definitional(const MemGraph& g) {
  std::vector<bool> removed(g.n + 1, false);
  std::vector<std::uint64_t> rdeg(g.n + 1, 0);
  for (std::uint64_t v = 1; v <= g.n; ++v) rdeg[v] = g.degree(v);
  std::uint64_t remaining = g.n;
  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      if (removed[v]) continue;
      if (rdeg[v] == 0 || rdeg[v] == remaining - 1) {
        removed[v] = true;
        --remaining;
        for (std::uint64_t w : g.adj[v])
          if (!removed[w]) --rdeg[w];
        progress = true;
      }
    }
  }
  return remaining == 0;
}

namespace detail {

inline void component_of(const MemGraph& g, std::uint64_t start,
                         const std::vector<bool>& removed,
                         std::vector<std::uint64_t>& comp,
                         std::vector<bool>& seen) {
  comp.clear();
  std::deque<std::uint64_t> q{start};
  seen[start] = true;
  while (!q.empty()) {
    std::uint64_t v = q.front();
    q.pop_front();
    comp.push_back(v);
    for (std::uint64_t w : g.adj[v])
      if (!removed[w] && !seen[w]) {
        seen[w] = true;
        q.push_back(w);
      }
  }
}

}  // namespace detail

/// Trivially perfect iff every induced "suffix" component has a universal
/// vertex; checked by greedily peeling universal-in-component vertices.
inline bool is_trivially_perfect_definitional(const MemGraph& g) {
  std::vector<bool> removed(g.n + 1, false);
  std::vector<std::uint64_t> live_deg(g.n + 1, 0);
  for (std::uint64_t v = 1; v <= g.n; ++v) live_deg[v] = g.degree(v);
  std::uint64_t remaining = g.n;
  while (remaining > 0) {
    std::vector<bool> seen(g.n + 1, false);
    bool progress = false;
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      if (removed[v] || seen[v]) continue;
      std::vector<std::uint64_t> comp;
      detail::component_of(g, v, removed, comp, seen);
      for (std::uint64_t u : comp) {
        if (live_deg[u] == comp.size() - 1) {
          removed[u] = true;
          --remaining;
          for (std::uint64_t w : g.adj[u])
            if (!removed[w]) --live_deg[w];
          progress = true;
          break;  // one removal per component per round is enough
        }
      }
    }
    if (!progress) return false;
  }
  return true;
}

/// 2-coloring by BFS. On success fills sides; on failure returns an odd
/// closed walk contracted to an odd cycle witness.
inline bool is_bipartite(const MemGraph& g,
                         std::vector<std::uint64_t>* side0 = nullptr,
                         std::vector<std::uint64_t>* side1 = nullptr,
                         Witness* odd_cycle = nullptr) {
  std::vector<int> color(g.n + 1, -1);
  std::vector<std::uint64_t> parent(g.n + 1, 0);
  for (std::uint64_t s = 1; s <= g.n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<std::uint64_t> q{s};
    while (!q.empty()) {
      std::uint64_t v = q.front();
      q.pop_front();
      for (std::uint64_t w : g.adj[v]) {
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          parent[w] = v;
          q.push_back(w);
        } else if (color[w] == color[v]) {
          if (odd_cycle) {
            // walk both endpoints to the root, trim the common prefix
            std::vector<std::uint64_t> pv{v}, pw{w};
            for (std::uint64_t x = v; x != s; x = parent[x]) pv.push_back(parent[x]);
            for (std::uint64_t x = w; x != s; x = parent[x]) pw.push_back(parent[x]);
            while (pv.size() > 1 && pw.size() > 1 &&
                   pv[pv.size() - 2] == pw[pw.size() - 2]) {
              pv.pop_back();
              pw.pop_back();
            }
            std::vector<std::uint64_t> cyc(pv.begin(), pv.end());
            for (auto it = pw.rbegin() + 1; it != pw.rend(); ++it)
              cyc.push_back(*it);
            *odd_cycle = Witness{WitnessKind::odd_cycle, cyc};
          }
          return false;
        }
      }
    }
  }
  if (side0 && side1) {
    side0->clear();
    side1->clear();
    for (std::uint64_t v = 1; v <= g.n; ++v)
      (color[v] == 0 ? *side0 : *side1).push_back(v);
  }
  return true;
}

inline bool odd_cycle_free(const MemGraph& g) { return is_bipartite(g); }

inline bool is_chain_definitional(const MemGraph& g) {
  std::vector<std::uint64_t> s0, s1;
  if (!is_bipartite(g, &s0, &s1)) return false;
  // more than one edge-bearing component -> 2K2
  std::vector<bool> removed(g.n + 1, false), seen(g.n + 1, false);
  std::vector<std::uint64_t> comp;
  int edge_comps = 0;
  for (std::uint64_t v = 1; v <= g.n; ++v) {
    if (seen[v]) continue;
    detail::component_of(g, v, removed, comp, seen);
    bool has_edge = false;
    for (std::uint64_t u : comp) has_edge |= g.degree(u) > 0;
    if (has_edge) ++edge_comps;
  }
  if (edge_comps > 1) return false;
  // nested neighborhoods on one side: every opposite vertex's neighborhood
  // must be a prefix of the side ordered by non-increasing degree
  auto nested = [&](const std::vector<std::uint64_t>& side) {
    std::vector<std::uint64_t> ord(side);
    std::sort(ord.begin(), ord.end(), [&](std::uint64_t a, std::uint64_t b) {
      return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
    });
    std::vector<std::uint64_t> rank(g.n + 1, 0);
    for (std::size_t i = 0; i < ord.size(); ++i) rank[ord[i]] = i + 1;
    // equal degree vertices must have equal neighborhoods for prefix logic;
    // verify directly instead of assuming
    for (std::uint64_t w = 1; w <= g.n; ++w) {
      if (rank[w] != 0) continue;  // w on the other side
      std::uint64_t maxr = 0;
      for (std::uint64_t u : g.adj[w]) maxr = std::max(maxr, rank[u]);
      if (maxr != g.degree(w)) return false;
    }
    return true;
  };
  return nested(s0) && nested(s1);
}

inline bool definitional_member(const MemGraph& g, GraphClass c) {
  switch (c) {
    case GraphClass::split: return is_split_definitional(g);
    case GraphClass::threshold: return is_threshold_definitional(g);
    case GraphClass::trivially_perfect:
      return is_trivially_perfect_definitional(g);
    case GraphClass::bipartite: return is_bipartite(g);
    case GraphClass::chain: return is_chain_definitional(g);
  }
  return false;
}

/// Forbidden-subgraph membership test (the per-class characterization).
inline bool forbidden_free_member(const MemGraph& g, GraphClass c,
                                  std::uint64_t cap = kDefaultCap) {
  if (c == GraphClass::bipartite) return is_bipartite(g);
  return !find_forbidden(g, forbidden_family(c), cap).has_value();
}

// ---------------------------------------------------------------------------
// In-memory certificate validity, used by the mutation harness to decide
// which mutants a sound authenticator must reject.

inline bool witness_valid_mem(const MemGraph& g, const Witness& w) {
  std::size_t cnt = w.vertices.size();
  std::size_t need = emcert::detail::witness_arity(w.kind);
  if (w.kind == WitnessKind::odd_cycle) {
    if (cnt < 3 || cnt % 2 == 0) return false;
  } else if (cnt != need) {
    return false;
  }
  for (std::size_t i = 0; i < cnt; ++i) {
    if (w.vertices[i] == 0 || w.vertices[i] > g.n) return false;
    for (std::size_t j = i + 1; j < cnt; ++j)
      if (w.vertices[i] == w.vertices[j]) return false;
  }
  std::vector<std::pair<std::size_t, std::size_t>> required;
  bool check_non_edges = false;
  emcert::detail::witness_pattern(w, required, check_non_edges);
  std::vector<std::vector<bool>> req(cnt, std::vector<bool>(cnt, false));
  for (auto [i, j] : required) req[i][j] = req[j][i] = true;
  for (std::size_t i = 0; i < cnt; ++i)
    for (std::size_t j = i + 1; j < cnt; ++j) {
      bool e = g.has_edge(w.vertices[i], w.vertices[j]);
      if (req[i][j] && !e) return false;
      if (!req[i][j] && e && check_non_edges) return false;
    }
  return true;
}

namespace detail {

inline bool partition_valid(std::uint64_t n, std::vector<std::uint64_t> a,
                            std::vector<std::uint64_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::uint64_t> merged;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  if (merged.size() != n) return false;
  for (std::uint64_t i = 0; i < n; ++i)
    if (merged[i] != i + 1) return false;
  return true;
}

inline bool split_parts_valid(const MemGraph& g,
                              const std::vector<std::uint64_t>& K,
                              const std::vector<std::uint64_t>& I) {
  if (!partition_valid(g.n, K, I)) return false;
  for (std::size_t i = 0; i < K.size(); ++i)
    for (std::size_t j = i + 1; j < K.size(); ++j)
      if (!g.has_edge(K[i], K[j])) return false;
  for (std::size_t i = 0; i < I.size(); ++i)
    for (std::size_t j = i + 1; j < I.size(); ++j)
      if (g.has_edge(I[i], I[j])) return false;
  return true;
}

inline bool is_ordering_of(std::vector<std::uint64_t> ord,
                           std::vector<std::uint64_t> set) {
  std::sort(ord.begin(), ord.end());
  std::sort(set.begin(), set.end());
  return ord == set;
}

inline bool nested_outside(const MemGraph& g,
                           const std::vector<std::uint64_t>& order,
                           const std::vector<std::uint64_t>& excluded) {
  std::vector<bool> ex(g.n + 1, false);
  for (std::uint64_t v : excluded) ex[v] = true;
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    for (std::uint64_t w : g.adj[order[t]]) {
      if (ex[w] || w == order[t + 1]) continue;
      if (!g.has_edge(order[t + 1], w)) return false;
    }
  }
  return true;
}

inline bool uco_valid(const MemGraph& g, const std::vector<std::uint64_t>& gamma) {
  if (!is_ordering_of(gamma, [&] {
        std::vector<std::uint64_t> all(g.n);
        for (std::uint64_t v = 1; v <= g.n; ++v) all[v - 1] = v;
        return all;
      }()))
    return false;
  std::vector<bool> removed(g.n + 1, false);
  std::vector<bool> seen(g.n + 1);
  std::vector<std::uint64_t> comp;
  for (std::uint64_t v : gamma) {
    std::fill(seen.begin(), seen.end(), false);
    component_of(g, v, removed, comp, seen);
    std::uint64_t live = 0;
    for (std::uint64_t w : g.adj[v])
      if (!removed[w]) ++live;
    if (live != comp.size() - 1) return false;
    removed[v] = true;
  }
  return true;
}

}  // namespace detail

/// Semantic validity of a certificate against the graph, by definition.
inline bool certificate_valid_mem(const MemGraph& g, const Certificate& c) {
  if (!c.yes())
    return witness_kind_legal(c.cls, c.witness().kind) &&
           witness_valid_mem(g, c.witness());
  switch (c.cls) {
    case GraphClass::split: {
      const auto& p = std::get<SplitYes>(c.payload);
      return detail::split_parts_valid(g, p.K, p.I);
    }
    case GraphClass::threshold: {
      const auto& p = std::get<ThresholdYes>(c.payload);
      return detail::split_parts_valid(g, p.K, p.I) &&
             detail::is_ordering_of(p.beta, p.I) &&
             detail::nested_outside(g, p.beta, p.I);
    }
    case GraphClass::trivially_perfect: {
      const auto& p = std::get<TPYes>(c.payload);
      return detail::uco_valid(g, p.gamma);
    }
    case GraphClass::bipartite: {
      const auto& p = std::get<BipartiteYes>(c.payload);
      if (!detail::partition_valid(g.n, p.U, p.W)) return false;
      std::vector<bool> in_u(g.n + 1, false);
      for (std::uint64_t v : p.U) in_u[v] = true;
      for (std::uint64_t v = 1; v <= g.n; ++v)
        for (std::uint64_t w : g.adj[v])
          if (v < w && in_u[v] == in_u[w]) return false;
      return true;
    }
    case GraphClass::chain: {
      const auto& p = std::get<ChainYes>(c.payload);
      if (!detail::partition_valid(g.n, p.U, p.W)) return false;
      auto independent = [&](const std::vector<std::uint64_t>& side) {
        for (std::size_t i = 0; i < side.size(); ++i)
          for (std::size_t j = i + 1; j < side.size(); ++j)
            if (g.has_edge(side[i], side[j])) return false;
        return true;
      };
      return independent(p.U) && independent(p.W) &&
             detail::is_ordering_of(p.nno_u, p.U) &&
             detail::is_ordering_of(p.nno_w, p.W) &&
             detail::nested_outside(g, p.nno_u, p.U) &&
             detail::nested_outside(g, p.nno_w, p.W);
    }
  }
  return false;
}

}  // namespace oracle
}  // namespace emcert

#endif  // EMCERT_ORACLE_HPP
