#ifndef EMCERT_GRAPH_OPS_HPP
#define EMCERT_GRAPH_OPS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "emcert/graph.hpp"
#include "emcert/kernel.hpp"

namespace emcert {

enum class OrderingRole { nondecreasing_degree, nonincreasing_degree, nno, peo, uco };

/// A permutation rank -> vertex id, stored as a file of n u64 records
/// (record r-1 holds the vertex of rank r).
struct Ordering {
  fs::path perm_path;
  std::uint64_t n = 0;
  OrderingRole role = OrderingRole::peo;

  std::uint64_t vertex_at(Kernel& k, std::uint64_t rank) const {
    return read_record_at<std::uint64_t>(k, perm_path, 0, rank - 1);
  }

  std::vector<std::uint64_t> to_vector(Kernel& k) const {
    std::vector<std::uint64_t> out;
    out.reserve(n);
    StreamReader<std::uint64_t> r(k, perm_path);
    while (!r.done()) out.push_back(r.next());
    return out;
  }

  static Ordering from_vector(Kernel& k, const std::vector<std::uint64_t>& perm,
                              OrderingRole role) {
    fs::path p = k.make_temp_path("perm");
    StreamWriter<std::uint64_t> w(k, p);
    for (auto v : perm) w.push(v);
    w.close();
    return Ordering{p, perm.size(), role};
  }
};

namespace detail {

struct DegId {
  std::uint64_t deg, id;
};

}  // namespace detail

/// Sorts vertices by degree in the requested direction; ties always break
/// by ascending vertex id. Costs one scan of P plus sort(n).
inline Ordering degree_ordering(Kernel& k, const Graph& g, OrderingRole dir) {
  fs::path degs = k.make_temp_path("degid");
  {
    StreamReader<std::uint64_t> p(k, g.path, g.p_offset(), g.n + 1);
    StreamWriter<detail::DegId> w(k, degs);
    std::uint64_t prev = p.next();
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      std::uint64_t cur = p.next();
      w.push({cur - prev, v});
      prev = cur;
    }
    w.close();
  }
  fs::path sorted = k.make_temp_path("degsorted");
  if (dir == OrderingRole::nondecreasing_degree) {
    em_sort<detail::DegId>(k, degs, sorted,
                           [](const detail::DegId& x, const detail::DegId& y) {
                             return x.deg != y.deg ? x.deg < y.deg : x.id < y.id;
                           });
  } else {
    em_sort<detail::DegId>(k, degs, sorted,
                           [](const detail::DegId& x, const detail::DegId& y) {
                             return x.deg != y.deg ? x.deg > y.deg : x.id < y.id;
                           });
  }
  fs::remove(degs);
  fs::path perm = k.make_temp_path("perm");
  {
    StreamReader<detail::DegId> r(k, sorted);
    StreamWriter<std::uint64_t> w(k, perm);
    while (!r.done()) w.push(r.next().id);
    w.close();
  }
  fs::remove(sorted);
  return Ordering{perm, g.n, dir};
}

namespace detail {

struct Pair {
  std::uint64_t a, b;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

inline void write_graph_from_sorted_arcs(Kernel& k, const fs::path& arcs,
                                         std::uint64_t n, std::uint64_t m,
                                         const fs::path& out) {
  // First the offset array from a degree-counting pass, then the header and
  // both arrays are emitted block-wise.
  fs::path poff = k.make_temp_path("poff");
  {
    StreamReader<Pair> r(k, arcs);
    StreamWriter<std::uint64_t> w(k, poff);
    w.push(0);
    std::uint64_t off = 0;
    std::uint64_t v = 1;
    while (!r.done()) {
      Pair a = r.next();
      while (v < a.a) {
        w.push(off);
        ++v;
      }
      ++off;
    }
    while (v <= n) {
      w.push(off);
      ++v;
    }
    w.close();
  }

  auto f = detail::open_file(out, "wb");
  if (std::fwrite("ARG1", 1, 4, f.get()) != 4)
    throw capacity_error("short write in graph header");
  put_u64_le(f.get(), n);
  put_u64_le(f.get(), m);
  k.count_block_write();

  auto copy_u64 = [&](const fs::path& src, bool second_of_pair) {
    if (second_of_pair) {
      StreamReader<Pair> r(k, src);
      std::vector<std::uint64_t> block;
      block.reserve(k.block_records());
      k.mem_acquire(k.block_records());
      while (!r.done()) {
        block.clear();
        while (!r.done() && block.size() < k.block_records())
          block.push_back(r.next().b);
        if (std::fwrite(block.data(), 8, block.size(), f.get()) != block.size())
          throw capacity_error("short write in graph body");
        k.count_block_write();
        k.count_elements(block.size());
      }
      k.mem_release(k.block_records());
    } else {
      StreamReader<std::uint64_t> r(k, src);
      std::vector<std::uint64_t> block;
      block.reserve(k.block_records());
      k.mem_acquire(k.block_records());
      while (!r.done()) {
        block.clear();
        while (!r.done() && block.size() < k.block_records())
          block.push_back(r.next());
        if (std::fwrite(block.data(), 8, block.size(), f.get()) != block.size())
          throw capacity_error("short write in graph body");
        k.count_block_write();
        k.count_elements(block.size());
      }
      k.mem_release(k.block_records());
    }
  };
  copy_u64(poff, false);
  copy_u64(arcs, true);
  fs::remove(poff);
}

}  // namespace detail

/// Renames the vertex of rank r to id r and rewrites the graph with sorted
/// lists. Three sorts over the arc stream plus scans; sort(n + m) I/Os.
inline Graph relabel(Kernel& k, const Graph& g, const Ordering& ord) {
  if (ord.n != g.n) throw em_error("relabel: ordering size mismatch");

  // old id -> rank map, sorted by old id
  fs::path map = k.make_temp_path("rankmap");
  {
    StreamReader<std::uint64_t> r(k, ord.perm_path);
    StreamWriter<detail::Pair> w(k, map);
    std::uint64_t rank = 0;
    while (!r.done()) w.push({r.next(), ++rank});
    w.close();
  }
  fs::path map_sorted = k.make_temp_path("rankmap_s");
  em_sort<detail::Pair>(k, map, map_sorted);
  fs::remove(map);

  // arcs (u, w) are produced sorted by u; join against the map twice
  fs::path t1 = k.make_temp_path("arcs_t1");
  {
    AdjacencyScanner sc(k, g);
    StreamReader<detail::Pair> mr(k, map_sorted);
    StreamWriter<detail::Pair> w(k, t1);
    detail::Pair cur{0, 0};
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex();
      std::uint64_t x;
      if (sc.degree() > 0) {
        while (cur.a < v) cur = mr.next();
        if (cur.a != v) throw em_error("relabel: ordering is not a permutation");
      }
      while (sc.next_neighbor(x)) w.push({x, cur.b});  // (old w, rank_u)
    }
    w.close();
  }
  fs::path t1s = k.make_temp_path("arcs_t1s");
  em_sort<detail::Pair>(k, t1, t1s);
  fs::remove(t1);

  fs::path t2 = k.make_temp_path("arcs_t2");
  {
    StreamReader<detail::Pair> r(k, t1s);
    StreamReader<detail::Pair> mr(k, map_sorted);
    StreamWriter<detail::Pair> w(k, t2);
    detail::Pair cur{0, 0};
    while (!r.done()) {
      detail::Pair a = r.next();  // (old w, rank_u)
      while (cur.a < a.a) cur = mr.next();
      if (cur.a != a.a) throw em_error("relabel: ordering is not a permutation");
      w.push({a.b, cur.b});  // (rank_u, rank_w)
    }
    w.close();
  }
  fs::remove(t1s);
  fs::remove(map_sorted);

  fs::path t2s = k.make_temp_path("arcs_t2s");
  em_sort<detail::Pair>(k, t2, t2s);
  fs::remove(t2);

  fs::path out = k.make_temp_path("relabeled");
  detail::write_graph_from_sorted_arcs(k, t2s, g.n, g.m, out);
  fs::remove(t2s);
  return Graph::load(out);
}

/// Lower/higher-ranked neighbors of a single vertex of a relabeled graph.
struct NeighborSplit {
  std::vector<std::uint64_t> lower;
  std::vector<std::uint64_t> higher;
};

inline NeighborSplit neighbor_split(Kernel& k, const Graph& g_relabeled,
                                    std::uint64_t v) {
  NeighborSplit s;
  scan_adjacency(k, g_relabeled, v, [&](std::uint64_t w) {
    (w < v ? s.lower : s.higher).push_back(w);
  });
  return s;
}

/// Implicit clique augmentation: the graph plus all edges with both
/// endpoints in `members`. Nothing quadratic is materialized. Assumes the
/// member set is independent in the base graph.
struct AugmentedView {
  const Graph* base = nullptr;
  std::vector<std::uint64_t> members;  // sorted original ids

  bool in_clique(std::uint64_t v) const {
    return std::binary_search(members.begin(), members.end(), v);
  }

  std::uint64_t degree(Kernel& k, std::uint64_t v) const {
    std::uint64_t lo = read_record_at<std::uint64_t>(k, base->path,
                                                     base->p_offset(), v - 1);
    std::uint64_t hi = read_record_at<std::uint64_t>(k, base->path,
                                                     base->p_offset(), v);
    std::uint64_t d = hi - lo;
    if (in_clique(v)) d += members.size() - 1;
    return d;
  }
};

inline bool view_is_edge_clique(const AugmentedView& view, std::uint64_t u,
                                std::uint64_t v) {
  return u != v && view.in_clique(u) && view.in_clique(v);
}

/// Original ids of a contiguous rank range [lo, hi], sorted ascending.
inline std::vector<std::uint64_t> ranks_to_ids_sorted(Kernel& k,
                                                      const Ordering& ord,
                                                      std::uint64_t lo,
                                                      std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (lo > hi) return out;
  StreamReader<std::uint64_t> r(k, ord.perm_path, 8 * (lo - 1), hi - lo + 1);
  while (!r.done()) out.push_back(r.next());
  std::sort(out.begin(), out.end());
  return out;
}

/// Original ids of a rank range in rank order (no re-sorting).
inline std::vector<std::uint64_t> ranks_to_ids(Kernel& k, const Ordering& ord,
                                               std::uint64_t lo,
                                               std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (lo > hi) return out;
  StreamReader<std::uint64_t> r(k, ord.perm_path, 8 * (lo - 1), hi - lo + 1);
  while (!r.done()) out.push_back(r.next());
  return out;
}

/// True iff the ordering file holds each of 1..n exactly once.
inline bool is_permutation(Kernel& k, const Ordering& ord, std::uint64_t n) {
  if (ord.n != n) return false;
  fs::path sorted = k.make_temp_path("permcheck");
  em_sort<std::uint64_t>(k, ord.perm_path, sorted);
  StreamReader<std::uint64_t> r(k, sorted);
  std::uint64_t expect = 1;
  while (!r.done()) {
    if (r.next() != expect) {
      r.close();
      fs::remove(sorted);
      return false;
    }
    ++expect;
  }
  r.close();
  fs::remove(sorted);
  return expect == n + 1;
}

/// Merged adjacency of the view, deduplicated, ascending.
inline std::vector<std::uint64_t> view_neighbors(Kernel& k,
                                                 const AugmentedView& view,
                                                 std::uint64_t u) {
  std::vector<std::uint64_t> base = adjacency_list(k, *view.base, u);
  if (!view.in_clique(u)) return base;
  std::vector<std::uint64_t> out;
  out.reserve(base.size() + view.members.size());
  auto bi = base.begin();
  for (std::uint64_t c : view.members) {
    if (c == u) continue;
    while (bi != base.end() && *bi < c) out.push_back(*bi++);
    if (bi != base.end() && *bi == c) ++bi;
    out.push_back(c);
  }
  while (bi != base.end()) out.push_back(*bi++);
  return out;
}

}  // namespace emcert

#endif  // EMCERT_GRAPH_OPS_HPP
