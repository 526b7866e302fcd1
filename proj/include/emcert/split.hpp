#ifndef EMCERT_SPLIT_HPP
#define EMCERT_SPLIT_HPP

// Split-graph certification: non-decreasing degree ordering, perfect
// elimination check, maximum clique size, and verification of the top-k
// clique side and the remaining independent side. NO-certificates are a
// C4, C5 or 2K2 completed from the first violation; every witness is
// authenticated against the input before it is returned.

#include <cstdint>
#include <optional>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/graph_ops.hpp"
#include "emcert/orderings.hpp"

namespace emcert {

/// A witness failed its own authentication before being emitted; this
/// signals a transcription bug, never a property of the input.
class extraction_error : public em_error {
public:
  using em_error::em_error;
};

namespace detail {

/// Smallest value of cursor A not present in any `minus` cursor and not in
/// `forbidden`. All cursors are consumed monotonically.
inline std::optional<std::uint64_t> first_not_covered(
    AdjacencyCursor& a, std::vector<AdjacencyCursor*> minus,
    std::vector<std::uint64_t> forbidden) {
  while (!a.done()) {
    std::uint64_t cand = a.next();
    bool bad = false;
    for (auto* c : minus)
      if (c->contains_from_here(cand)) bad = true;
    for (auto f : forbidden)
      if (cand == f) bad = true;
    if (!bad) return cand;
  }
  return std::nullopt;
}

}  // namespace detail

/// Completes the P3 (v_j, v_i, v_k) of a peo failure into a forbidden
/// substructure: a C4 through a common neighbor of v_j and v_k, else a C5
/// or 2K2 through private neighbors x of v_j and y of v_k. Rank space.
inline Witness witness_from_peo_failure(Kernel& k, const Graph& g_rel,
                                        const PeoFailure& f) {
  const std::uint64_t vi = f.i, vj = f.j, vk = f.k;

  // z in N(v_k) ∩ N(v_j) with z != v_i nonadjacent to v_i -> C4
  {
    AdjacencyCursor ck(k, g_rel, vk), cj(k, g_rel, vj), ci(k, g_rel, vi);
    while (!ck.done()) {
      std::uint64_t z = ck.next();
      if (z == vi) continue;
      if (!cj.contains_from_here(z)) continue;
      if (ci.contains_from_here(z)) continue;
      return Witness{WitnessKind::c4, {vj, vi, vk, z}};
    }
  }

  std::optional<std::uint64_t> x, y;
  {
    AdjacencyCursor cj(k, g_rel, vj), ck(k, g_rel, vk), ci(k, g_rel, vi);
    x = detail::first_not_covered(cj, {&ck, &ci}, {vi});
  }
  {
    AdjacencyCursor ck(k, g_rel, vk), cj(k, g_rel, vj), ci(k, g_rel, vi);
    y = detail::first_not_covered(ck, {&cj, &ci}, {vi});
  }
  if (!x || !y)
    throw extraction_error("peo-failure completion: x or y not found");
  if (has_edge(k, g_rel, *x, *y))
    return Witness{WitnessKind::c5, {vj, vi, vk, *y, *x}};
  return Witness{WitnessKind::two_k2, {vj, *x, vk, *y}};
}

/// Checks that the k highest ranks form a clique. On a missing pair
/// {v_i, v_j} completes a 2K2 with edges {v_i, x}, {v_j, z}. Rank space.
inline std::optional<Witness> verify_clique_side(Kernel& k, const Graph& g_rel,
                                                 std::uint64_t clique_size) {
  std::uint64_t n = g_rel.n;
  std::uint64_t missing_i = 0, missing_j = 0;
  {
    AdjacencyScanner sc(k, g_rel);
    while (sc.next_vertex() && missing_i == 0) {
      std::uint64_t v = sc.vertex();
      if (v <= n - clique_size) {
        continue;  // scanner skips the unread neighbors
      }
      std::uint64_t expect = v + 1, w = 0;
      while (sc.next_neighbor(w)) {
        if (w <= v) continue;
        if (w > expect) break;
        ++expect;
      }
      if (expect <= n) {
        missing_i = v;
        missing_j = expect;
        break;
      }
    }
  }
  if (missing_i == 0) return std::nullopt;

  const std::uint64_t vi = missing_i, vj = missing_j;
  // x in L(v_i) nonadjacent to v_j
  std::optional<std::uint64_t> x;
  {
    AdjacencyCursor ci(k, g_rel, vi), cj(k, g_rel, vj);
    while (!ci.done()) {
      std::uint64_t cand = ci.peek();
      if (cand >= vi) break;
      ci.next();
      if (!cj.contains_from_here(cand)) {
        x = cand;
        break;
      }
    }
  }
  if (!x) throw extraction_error("clique-side 2K2: x not found");
  // z in L(v_j) nonadjacent to both x and v_i, z != x
  std::optional<std::uint64_t> z;
  {
    AdjacencyCursor cj(k, g_rel, vj), cx(k, g_rel, *x), ci(k, g_rel, vi);
    while (!cj.done()) {
      std::uint64_t cand = cj.peek();
      if (cand >= vj) break;
      cj.next();
      if (cand == *x || cand == vi) continue;
      if (cx.contains_from_here(cand)) continue;
      if (ci.contains_from_here(cand)) continue;
      z = cand;
      break;
    }
  }
  if (!z) throw extraction_error("clique-side 2K2: z not found");
  return Witness{WitnessKind::two_k2, {vi, *x, vj, *z}};
}

/// Checks that ranks 1..n-k are independent. On an edge {v_i, v_j} inside
/// the candidate independent set (v_i chosen as the highest-ranked lower
/// endpoint), completes a 2K2 with edges {v_i, v_j}, {y, z}. Rank space.
inline std::optional<Witness> verify_independent_side(Kernel& k,
                                                      const Graph& g_rel,
                                                      std::uint64_t clique_size) {
  std::uint64_t n = g_rel.n;
  std::uint64_t bound = n - clique_size;
  std::uint64_t vi = 0, vj = 0;
  {
    AdjacencyScanner sc(k, g_rel);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex();
      if (v > bound) break;
      std::uint64_t w = 0;
      while (sc.next_neighbor(w)) {
        if (w > v && w <= bound) {
          vi = v;  // keep the largest such v; its smallest inner neighbor
          vj = w;
          break;
        }
      }
    }
  }
  if (vi == 0) return std::nullopt;

  // y in K nonadjacent to both v_i and v_j
  std::optional<std::uint64_t> y;
  {
    AdjacencyCursor ci(k, g_rel, vi), cj(k, g_rel, vj);
    for (std::uint64_t cand = bound + 1; cand <= n; ++cand) {
      if (ci.contains_from_here(cand)) continue;
      if (cj.contains_from_here(cand)) continue;
      y = cand;
      break;
    }
  }
  if (!y) throw extraction_error("independent-side 2K2: y not found");
  // z in N(y) away from v_i, v_j and their neighborhoods
  std::optional<std::uint64_t> z;
  {
    AdjacencyCursor cy(k, g_rel, *y), ci(k, g_rel, vi), cj(k, g_rel, vj);
    z = detail::first_not_covered(cy, {&ci, &cj}, {vi, vj});
  }
  if (!z) throw extraction_error("independent-side 2K2: z not found");
  return Witness{WitnessKind::two_k2, {vi, vj, *y, *z}};
}

/// Pipeline state shared with the threshold certifier.
struct SplitPipeline {
  Certificate cert;
  bool member = false;
  // artifacts below are only populated when the non-trivial pipeline ran
  std::optional<Ordering> alpha;
  std::optional<Graph> relabeled;
  std::uint64_t clique_size = 0;
  std::uint64_t peo_messages = 0;
};

namespace detail {

inline Witness authenticated_original(Kernel& k, const Graph& g,
                                      const Ordering& alpha, Witness w) {
  for (auto& v : w.vertices) v = alpha.vertex_at(k, v);
  if (auto bad = check_witness(k, g, w))
    throw extraction_error("witness failed authentication: " + *bad);
  return w;
}

}  // namespace detail

inline SplitPipeline run_split_pipeline(Kernel& k, const Graph& g) {
  SplitPipeline pl;
  pl.cert.cls = GraphClass::split;

  if (g.m == 0) {
    std::vector<std::uint64_t> all(g.n);
    for (std::uint64_t v = 1; v <= g.n; ++v) all[v - 1] = v;
    pl.cert.payload = SplitYes{{}, all};
    pl.member = true;
    return pl;
  }

  pl.alpha = degree_ordering(k, g, OrderingRole::nondecreasing_degree);
  pl.relabeled = relabel(k, g, *pl.alpha);

  CheckPeoResult peo = check_peo(k, *pl.relabeled);
  pl.peo_messages = peo.messages_sent;
  if (!peo.ok()) {
    Witness w = witness_from_peo_failure(k, *pl.relabeled, *peo.failure);
    pl.cert.payload =
        NoCertificate{detail::authenticated_original(k, g, *pl.alpha, w)};
    return pl;
  }

  pl.clique_size = max_clique_size(k, *pl.relabeled, true);

  if (auto w = verify_clique_side(k, *pl.relabeled, pl.clique_size)) {
    pl.cert.payload =
        NoCertificate{detail::authenticated_original(k, g, *pl.alpha, *w)};
    return pl;
  }
  if (auto w = verify_independent_side(k, *pl.relabeled, pl.clique_size)) {
    pl.cert.payload =
        NoCertificate{detail::authenticated_original(k, g, *pl.alpha, *w)};
    return pl;
  }

  SplitYes yes;
  yes.K = ranks_to_ids_sorted(k, *pl.alpha, g.n - pl.clique_size + 1, g.n);
  yes.I = ranks_to_ids_sorted(k, *pl.alpha, 1, g.n - pl.clique_size);
  pl.cert.payload = std::move(yes);
  pl.member = true;
  return pl;
}

inline Certificate certify_split(Kernel& k, const Graph& g) {
  return run_split_pipeline(k, g).cert;
}

}  // namespace emcert

#endif  // EMCERT_SPLIT_HPP
