#ifndef EMCERT_BIPARTITE_HPP
#define EMCERT_BIPARTITE_HPP

// Bipartiteness via a spanning forest: a graph is bipartite iff every
// non-tree edge closes an even tree path. The forest is built
// semi-externally (vertex state in memory, one streamed edge scan); tree
// distances come from depths and batched lowest common ancestors over an
// Euler tour. Non-bipartite graphs yield the minimum fundamental odd
// cycle, which is shrunk along chords until it authenticates as a C3, C5
// or 2K2.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/graph_ops.hpp"
#include "emcert/split.hpp"

namespace emcert {

/// Rooted spanning forest; roots are the smallest ids of their components.
/// Vertex arrays are semi-external (held in memory), non-tree edges are a
/// stream.
struct SpanningForest {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> parent;     // parent[v], parent[root] == root
  std::vector<std::uint64_t> depth;      // depth[root] == 0
  std::vector<std::uint64_t> component;  // root id
  fs::path nontree_edges;                // detail::Pair{u, v} with u < v
  std::uint64_t nontree_count = 0;

  bool is_tree_edge(std::uint64_t u, std::uint64_t v) const {
    return parent[u] == v || parent[v] == u;
  }
};

/// Semi-external union-find over one pass of the edge stream, then a BFS
/// per component from its smallest vertex.
inline SpanningForest spanning_forest(Kernel& k, const Graph& g) {
  SpanningForest f;
  f.n = g.n;
  std::vector<std::uint64_t> dsu(g.n + 1);
  std::iota(dsu.begin(), dsu.end(), 0);
  std::vector<std::uint64_t> dsu_size(g.n + 1, 1);
  auto find = [&](std::uint64_t v) {
    while (dsu[v] != v) {
      dsu[v] = dsu[dsu[v]];
      v = dsu[v];
    }
    return v;
  };

  std::vector<std::vector<std::uint64_t>> tree(g.n + 1);
  f.nontree_edges = k.make_temp_path("nontree");
  {
    AdjacencyScanner sc(k, g);
    StreamWriter<detail::Pair> nt(k, f.nontree_edges);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex(), w = 0;
      while (sc.next_neighbor(w)) {
        if (w < v) continue;  // one direction per edge
        std::uint64_t a = find(v), b = find(w);
        if (a == b) {
          nt.push({v, w});
          ++f.nontree_count;
          continue;
        }
        if (dsu_size[a] < dsu_size[b]) std::swap(a, b);
        dsu[b] = a;
        dsu_size[a] += dsu_size[b];
        tree[v].push_back(w);
        tree[w].push_back(v);
      }
    }
    nt.close();
  }

  f.parent.assign(g.n + 1, 0);
  f.depth.assign(g.n + 1, 0);
  f.component.assign(g.n + 1, 0);
  std::vector<std::uint64_t> queue;
  for (std::uint64_t v = 1; v <= g.n; ++v) {
    if (f.component[v] != 0) continue;
    // v is the smallest id of its component: everything smaller is assigned
    f.component[v] = v;
    f.parent[v] = v;
    queue.assign(1, v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint64_t x = queue[head];
      for (std::uint64_t y : tree[x]) {
        if (f.component[y] != 0) continue;
        f.component[y] = v;
        f.parent[y] = x;
        f.depth[y] = f.depth[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return f;
}

/// Euler tour plus sparse-table range minimum for O(1) LCA queries.
class ForestIndex {
public:
  explicit ForestIndex(const SpanningForest& f) : f_(&f) {
    std::uint64_t n = f.n;
    std::vector<std::vector<std::uint64_t>> children(n + 1);
    for (std::uint64_t v = 1; v <= n; ++v)
      if (f.parent[v] != v) children[f.parent[v]].push_back(v);
    first_.assign(n + 1, 0);
    tour_.reserve(2 * n);
    tour_depth_.reserve(2 * n);
    std::vector<std::pair<std::uint64_t, std::size_t>> stack;
    for (std::uint64_t r = 1; r <= n; ++r) {
      if (f.parent[r] != r) continue;
      stack.assign(1, {r, 0});
      while (!stack.empty()) {
        auto& [v, ci] = stack.back();
        if (ci == 0) {
          first_[v] = tour_.size();
          tour_.push_back(v);
          tour_depth_.push_back(f.depth[v]);
        }
        if (ci < children[v].size()) {
          std::uint64_t c = children[v][ci++];
          stack.push_back({c, 0});
        } else {
          stack.pop_back();
          if (!stack.empty()) {
            tour_.push_back(stack.back().first);
            tour_depth_.push_back(f.depth[stack.back().first]);
          }
        }
      }
    }
    build_sparse();
  }

  /// Lowest common ancestor; both vertices must share a component.
  std::uint64_t lca(std::uint64_t u, std::uint64_t v) const {
    std::size_t a = first_[u], b = first_[v];
    if (a > b) std::swap(a, b);
    return tour_[argmin_range(a, b + 1)];
  }

  std::uint64_t tree_distance(std::uint64_t u, std::uint64_t v) const {
    std::uint64_t a = lca(u, v);
    return f_->depth[u] + f_->depth[v] - 2 * f_->depth[a];
  }

  bool same_component(std::uint64_t u, std::uint64_t v) const {
    return f_->component[u] == f_->component[v];
  }

private:
  void build_sparse() {
    std::size_t m = tour_.size();
    log_.assign(m + 1, 0);
    for (std::size_t i = 2; i <= m; ++i) log_[i] = log_[i / 2] + 1;
    if (m == 0) return;
    std::size_t levels = log_[m] + 1;
    table_.assign(levels, std::vector<std::size_t>(m));
    for (std::size_t i = 0; i < m; ++i) table_[0][i] = i;
    for (std::size_t l = 1; l < levels; ++l) {
      std::size_t span = 1ull << l;
      for (std::size_t i = 0; i + span <= m; ++i) {
        std::size_t x = table_[l - 1][i], y = table_[l - 1][i + span / 2];
        table_[l][i] = tour_depth_[x] <= tour_depth_[y] ? x : y;
      }
    }
  }

  std::size_t argmin_range(std::size_t lo, std::size_t hi) const {
    std::size_t l = log_[hi - lo];
    std::size_t x = table_[l][lo], y = table_[l][hi - (1ull << l)];
    return tour_depth_[x] <= tour_depth_[y] ? x : y;
  }

  const SpanningForest* f_;
  std::vector<std::uint64_t> tour_, tour_depth_;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> log_;
  std::vector<std::vector<std::size_t>> table_;
};

struct LcaAnswer {
  std::uint64_t u = 0, v = 0;
  std::uint64_t lca = 0;
  std::uint64_t tree_distance = 0;
  bool cross_component = false;
};

/// Answers one LcaAnswer per query edge, streaming.
template <typename Fn>
void batched_lca(Kernel& k, const ForestIndex& idx, const fs::path& queries,
                 Fn&& fn) {
  StreamReader<detail::Pair> r(k, queries);
  while (!r.done()) {
    detail::Pair q = r.next();
    LcaAnswer a;
    a.u = q.a;
    a.v = q.b;
    if (!idx.same_component(q.a, q.b)) {
      a.cross_component = true;
    } else {
      a.lca = idx.lca(q.a, q.b);
      a.tree_distance = idx.tree_distance(q.a, q.b);
    }
    fn(a);
  }
}

inline std::vector<LcaAnswer> batched_lca_collect(Kernel& k,
                                                  const ForestIndex& idx,
                                                  const fs::path& queries) {
  std::vector<LcaAnswer> out;
  batched_lca(k, idx, queries, [&](const LcaAnswer& a) { out.push_back(a); });
  return out;
}

namespace detail {

/// Tree path u .. lca .. v as an explicit vertex sequence.
inline std::vector<std::uint64_t> tree_path(const SpanningForest& f,
                                            std::uint64_t u, std::uint64_t v,
                                            std::uint64_t lca) {
  std::vector<std::uint64_t> left, right;
  for (std::uint64_t x = u; x != lca; x = f.parent[x]) left.push_back(x);
  left.push_back(lca);
  for (std::uint64_t x = v; x != lca; x = f.parent[x]) right.push_back(x);
  for (auto it = right.rbegin(); it != right.rend(); ++it) left.push_back(*it);
  return left;
}

}  // namespace detail

struct BipartiteOutcome {
  Certificate cert;
  bool member = false;
  /// Minimum fundamental odd cycle (cycle order; the closing edge joins
  /// back() to front()); only set on NO.
  std::vector<std::uint64_t> min_odd_cycle;
};

/// Streams the non-tree edges, keeping the non-tree edge whose fundamental
/// cycle is the shortest odd one (ties by edge). Even tree distance means
/// an odd cycle.
inline BipartiteOutcome certify_bipartite(Kernel& k, const Graph& g,
                                          const SpanningForest& f) {
  BipartiteOutcome out;
  out.cert.cls = GraphClass::bipartite;
  ForestIndex idx(f);

  std::optional<LcaAnswer> best;
  batched_lca(k, idx, f.nontree_edges, [&](const LcaAnswer& a) {
    if (a.cross_component)
      throw em_error("bipartite: non-tree edge crosses components");
    if (a.tree_distance % 2 != 0) return;  // even cycle, fine
    if (!best || a.tree_distance < best->tree_distance ||
        (a.tree_distance == best->tree_distance &&
         (a.u < best->u || (a.u == best->u && a.v < best->v))))
      best = a;
  });

  if (!best) {
    BipartiteYes yes;
    for (std::uint64_t v = 1; v <= g.n; ++v)
      (f.depth[v] % 2 == 0 ? yes.U : yes.W).push_back(v);
    out.cert.payload = std::move(yes);
    out.member = true;
    return out;
  }

  out.min_odd_cycle = detail::tree_path(f, best->u, best->v, best->lca);
  Witness w{WitnessKind::odd_cycle, out.min_odd_cycle};
  if (auto bad = check_witness(k, g, w))
    throw extraction_error("odd cycle failed authentication: " + *bad);
  out.cert.payload = NoCertificate{std::move(w)};
  return out;
}

struct ShrunkWitness {
  Witness witness;
  std::uint64_t iterations = 1;  // shrink rounds, 1 when no chord was hit
};

/// Turns an odd cycle into a C3, C5 or 2K2. A chord splits the cycle into
/// an odd and an even one; replacing the cycle by the odd part strictly
/// shrinks it, so the loop terminates with a chordless odd cycle. For
/// length >= 7 the 2K2 takes the closing edge and the opposite middle
/// edge.
inline ShrunkWitness extract_c3_c5_2k2(Kernel& k, const Graph& g,
                                       std::vector<std::uint64_t> cycle) {
  ShrunkWitness out;
  out.iterations = 0;
  for (;;) {
    ++out.iterations;
    const std::size_t len = cycle.size();

    // find a chord: scan each cycle vertex's list against cycle positions
    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cycle[a] < cycle[b];
    });
    auto position_of = [&](std::uint64_t v) -> std::optional<std::size_t> {
      auto it = std::partition_point(order.begin(), order.end(),
                                     [&](std::size_t i) { return cycle[i] < v; });
      if (it == order.end() || cycle[*it] != v) return std::nullopt;
      return *it;
    };

    std::optional<std::pair<std::size_t, std::size_t>> chord;
    for (std::size_t p = 0; p < len && !chord; ++p) {
      scan_adjacency(k, g, cycle[p], [&](std::uint64_t x) {
        if (chord) return;
        auto q = position_of(x);
        if (!q) return;
        std::size_t d = *q > p ? *q - p : p - *q;
        if (d == 1 || d == len - 1) return;  // cycle edge
        chord = std::make_pair(std::min(p, *q), std::max(p, *q));
      });
    }

    if (chord) {
      auto [p, q] = *chord;
      std::vector<std::uint64_t> inner(cycle.begin() + p, cycle.begin() + q + 1);
      if (inner.size() % 2 == 1) {
        cycle = std::move(inner);
      } else {
        std::vector<std::uint64_t> outer(cycle.begin() + q, cycle.end());
        outer.insert(outer.end(), cycle.begin(), cycle.begin() + p + 1);
        cycle = std::move(outer);
      }
      continue;
    }

    Witness w;
    if (len == 3) {
      w = Witness{WitnessKind::c3, cycle};
    } else if (len == 5) {
      w = Witness{WitnessKind::c5, cycle};
    } else {
      std::size_t ell = (len - 1) / 2;
      w = Witness{WitnessKind::two_k2,
                  {cycle.front(), cycle.back(), cycle[ell - 1], cycle[ell]}};
    }
    if (auto bad = check_witness(k, g, w))
      throw extraction_error("corollary witness failed authentication: " + *bad);
    out.witness = std::move(w);
    return out;
  }
}

inline Certificate certify_bipartite(Kernel& k, const Graph& g) {
  SpanningForest f = spanning_forest(k, g);
  return certify_bipartite(k, g, f).cert;
}

}  // namespace emcert

#endif  // EMCERT_BIPARTITE_HPP
