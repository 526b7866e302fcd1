#ifndef EMCERT_CHAIN_HPP
#define EMCERT_CHAIN_HPP

// Bipartite chain certification: two edge-bearing components give a 2K2
// immediately; otherwise bipartiteness is certified, the larger side U is
// implicitly completed to a clique, and the threshold machinery runs on
// that view without materializing any U x U edge. A stuck elimination is
// completed to a 2K2 by the two-sided deletion loop of the underlying
// internal-memory algorithm, driven by degree cursors and counters.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "emcert/bipartite.hpp"
#include "emcert/certificates.hpp"
#include "emcert/graph_ops.hpp"
#include "emcert/orderings.hpp"
#include "emcert/split.hpp"
#include "emcert/threshold.hpp"

namespace emcert {

/// Streaming adjacency of the clique-augmented view in rank space: the
/// base graph is relabeled by the view degrees and the member set is held
/// as a sorted rank vector. Assumes members are pairwise non-adjacent in
/// the base graph.
class ViewScanner {
public:
  ViewScanner(Kernel& k, const Graph& g_rel,
              const std::vector<std::uint64_t>* member_ranks)
      : base_(k, g_rel), members_(member_ranks) {}

  bool next_vertex() {
    if (!base_.next_vertex()) return false;
    v_ = base_.vertex();
    in_clique_ =
        std::binary_search(members_->begin(), members_->end(), v_);
    mpos_ = 0;
    have_base_ = base_.next_neighbor(base_pending_);
    deg_ = base_.degree() + (in_clique_ ? members_->size() - 1 : 0);
    return true;
  }

  std::uint64_t vertex() const { return v_; }
  std::uint64_t degree() const { return deg_; }

  bool next_neighbor(std::uint64_t& w) {
    std::uint64_t cm = kNone;
    if (in_clique_) {
      while (mpos_ < members_->size() && (*members_)[mpos_] == v_) ++mpos_;
      if (mpos_ < members_->size()) cm = (*members_)[mpos_];
    }
    if (have_base_ && base_pending_ <= cm) {
      if (base_pending_ == cm)
        throw em_error("view: clique members must be independent in the base");
      w = base_pending_;
      have_base_ = base_.next_neighbor(base_pending_);
      return true;
    }
    if (cm != kNone) {
      w = cm;
      ++mpos_;
      return true;
    }
    return false;
  }

private:
  static constexpr std::uint64_t kNone = ~0ull;
  AdjacencyScanner base_;
  const std::vector<std::uint64_t>* members_;
  std::uint64_t v_ = 0, deg_ = 0, base_pending_ = 0;
  bool in_clique_ = false, have_base_ = false;
  std::size_t mpos_ = 0;
};

/// Deletion loop of the chain NO-case: repeatedly removes vertices
/// adjacent to the whole remaining opposite side, and vertices whose
/// remaining degree reached zero; then completes a 2K2 around the
/// highest-degree survivor. Vertex-proportional state in memory, adjacency
/// accesses streamed.
inline Witness extract_chain_2k2(Kernel& k, const Graph& g,
                                 const std::vector<std::uint64_t>& side_a,
                                 const std::vector<std::uint64_t>& side_b,
                                 const std::vector<std::uint64_t>& deg) {
  struct Side {
    std::vector<std::uint64_t> order;  // (degree desc, id asc)
    std::size_t univ = 0;              // deleted prefix (side-universal)
    std::size_t iso = 0;               // deleted suffix (isolated)
    std::size_t remaining() const { return order.size() - univ - iso; }
    std::uint64_t head() const { return order[univ]; }
    std::uint64_t tail() const { return order[order.size() - 1 - iso]; }
  };
  auto make_side = [&](const std::vector<std::uint64_t>& ids) {
    Side s;
    s.order = ids;
    std::sort(s.order.begin(), s.order.end(),
              [&](std::uint64_t x, std::uint64_t y) {
                return deg[x] != deg[y] ? deg[x] > deg[y] : x < y;
              });
    return s;
  };
  Side A = make_side(side_a), B = make_side(side_b);
  std::uint64_t del_univ_a = 0, del_univ_b = 0;

  bool progress = true;
  while (progress) {
    progress = false;
    while (A.remaining() > 0 && deg[A.head()] == B.remaining() + del_univ_b) {
      ++A.univ;
      ++del_univ_a;
      progress = true;
    }
    while (B.remaining() > 0 && deg[B.head()] == A.remaining() + del_univ_a) {
      ++B.univ;
      ++del_univ_b;
      progress = true;
    }
    while (A.remaining() > 0 && deg[A.tail()] == del_univ_b) {
      ++A.iso;
      progress = true;
    }
    while (B.remaining() > 0 && deg[B.tail()] == del_univ_a) {
      ++B.iso;
      progress = true;
    }
  }
  if (A.remaining() == 0 || B.remaining() == 0)
    throw extraction_error("chain prune emptied a side of a non-chain graph");

  // v: maximum remaining degree over both sides, ties to the smaller id
  std::uint64_t ra = deg[A.head()] - del_univ_b;
  std::uint64_t rb = deg[B.head()] - del_univ_a;
  bool v_in_a = ra != rb ? ra > rb : A.head() < B.head();
  Side& vs = v_in_a ? A : B;
  Side& os = v_in_a ? B : A;
  std::uint64_t v = vs.head();

  auto remaining_in = [&](const Side& s, std::uint64_t id) {
    auto cmp = [&](std::uint64_t x, std::uint64_t y) {
      return deg[x] != deg[y] ? deg[x] > deg[y] : x < y;
    };
    auto it = std::lower_bound(s.order.begin(), s.order.end(), id, cmp);
    if (it == s.order.end() || *it != id) return false;
    std::size_t pos = static_cast<std::size_t>(it - s.order.begin());
    return pos >= s.univ && pos < s.order.size() - s.iso;
  };

  // y: smallest-id remaining vertex of the other side not adjacent to v
  std::optional<std::uint64_t> y;
  {
    std::vector<std::uint64_t> others;
    for (std::size_t i = os.univ; i < os.order.size() - os.iso; ++i)
      others.push_back(os.order[i]);
    std::sort(others.begin(), others.end());
    AdjacencyCursor cv(k, g, v);
    for (std::uint64_t cand : others) {
      if (!cv.contains_from_here(cand)) {
        y = cand;
        break;
      }
    }
  }
  if (!y) throw extraction_error("chain 2K2: non-neighbor y not found");

  // z: smallest-id remaining neighbor of y (on v's side)
  std::optional<std::uint64_t> z;
  {
    AdjacencyCursor cy(k, g, *y);
    while (!cy.done()) {
      std::uint64_t cand = cy.next();
      if (remaining_in(vs, cand)) {
        z = cand;
        break;
      }
    }
  }
  if (!z) throw extraction_error("chain 2K2: neighbor z not found");

  // x: smallest-id remaining neighbor of v nonadjacent to z
  std::optional<std::uint64_t> x;
  {
    AdjacencyCursor cv(k, g, v), cz(k, g, *z);
    while (!cv.done()) {
      std::uint64_t cand = cv.next();
      if (!remaining_in(os, cand)) continue;
      if (!cz.contains_from_here(cand)) {
        x = cand;
        break;
      }
    }
  }
  if (!x) throw extraction_error("chain 2K2: neighbor x not found");

  return Witness{WitnessKind::two_k2, {v, *x, *y, *z}};
}

namespace detail {

/// First violation of N(order[t]) \ skip  ⊆  N(order[t+1]) \ skip, scanning
/// consecutive adjacency lists.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> first_nno_violation(
    Kernel& k, const Graph& g, const std::vector<std::uint64_t>& order,
    const std::vector<std::uint64_t>& skip_sorted) {
  auto skip = [&](std::uint64_t v) {
    return std::binary_search(skip_sorted.begin(), skip_sorted.end(), v);
  };
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    AdjacencyCursor small(k, g, order[t]), big(k, g, order[t + 1]);
    while (!small.done()) {
      std::uint64_t w = small.next();
      if (skip(w) || w == order[t + 1]) continue;
      if (!big.contains_from_here(w))
        return std::make_pair(order[t], w);  // w missing downstream
    }
  }
  return std::nullopt;
}

}  // namespace detail

struct ChainPipeline {
  Certificate cert;
  bool member = false;
  std::uint64_t view_peo_messages = 0;
  std::uint64_t view_clique_size = 0;
  std::uint64_t extract_iterations = 0;  // odd-cycle shrink rounds
};

inline ChainPipeline run_chain_pipeline(Kernel& k, const Graph& g) {
  ChainPipeline pl;
  pl.cert.cls = GraphClass::chain;

  std::vector<std::uint64_t> deg(g.n + 1, 0);
  {
    StreamReader<std::uint64_t> p(k, g.path, g.p_offset(), g.n + 1);
    std::uint64_t prev = p.next();
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      std::uint64_t cur = p.next();
      deg[v] = cur - prev;
      prev = cur;
    }
  }

  if (g.m == 0) {
    std::vector<std::uint64_t> all(g.n);
    for (std::uint64_t v = 1; v <= g.n; ++v) all[v - 1] = v;
    pl.cert.payload = ChainYes{all, {}, all, {}};
    pl.member = true;
    return pl;
  }

  SpanningForest forest = spanning_forest(k, g);

  std::vector<std::uint64_t> edge_roots;
  for (std::uint64_t v = 1; v <= g.n; ++v)
    if (deg[v] > 0) edge_roots.push_back(forest.component[v]);
  std::sort(edge_roots.begin(), edge_roots.end());
  edge_roots.erase(std::unique(edge_roots.begin(), edge_roots.end()),
                   edge_roots.end());

  if (edge_roots.size() >= 2) {
    // one edge from each of the two smallest edge-bearing components
    std::uint64_t picks[2][2] = {{0, 0}, {0, 0}};
    for (int c = 0; c < 2; ++c) {
      for (std::uint64_t v = 1; v <= g.n; ++v) {
        if (deg[v] == 0 || forest.component[v] != edge_roots[static_cast<std::size_t>(c)])
          continue;
        AdjacencyCursor cur(k, g, v);
        picks[c][0] = v;
        picks[c][1] = cur.next();
        break;
      }
    }
    Witness w{WitnessKind::two_k2,
              {picks[0][0], picks[0][1], picks[1][0], picks[1][1]}};
    if (auto bad = check_witness(k, g, w))
      throw extraction_error("cross-component 2K2 failed authentication: " + *bad);
    pl.cert.payload = NoCertificate{std::move(w)};
    return pl;
  }

  BipartiteOutcome bip = certify_bipartite(k, g, forest);
  if (!bip.member) {
    ShrunkWitness sw = extract_c3_c5_2k2(k, g, bip.min_odd_cycle);
    pl.extract_iterations = sw.iterations;
    pl.cert.payload = NoCertificate{std::move(sw.witness)};
    return pl;
  }

  const std::uint64_t ec = edge_roots.front();
  std::vector<std::uint64_t> u_side, w_side, isolated;
  for (std::uint64_t v = 1; v <= g.n; ++v) {
    if (forest.component[v] != ec)
      isolated.push_back(v);
    else
      (forest.depth[v] % 2 == 0 ? u_side : w_side).push_back(v);
  }
  if (w_side.size() > u_side.size()) std::swap(u_side, w_side);

  // view ordering: base degrees plus the implicit clique contribution
  fs::path degrecs = k.make_temp_path("view_deg");
  {
    StreamWriter<detail::DegId> w(k, degrecs);
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      std::uint64_t d = deg[v];
      if (std::binary_search(u_side.begin(), u_side.end(), v))
        d += u_side.size() - 1;
      w.push({d, v});
    }
    w.close();
  }
  fs::path degsorted = k.make_temp_path("view_deg_s");
  em_sort<detail::DegId>(k, degrecs, degsorted,
                         [](const detail::DegId& x, const detail::DegId& y) {
                           return x.deg != y.deg ? x.deg < y.deg : x.id < y.id;
                         });
  fs::remove(degrecs);
  fs::path permfile = k.make_temp_path("view_perm");
  {
    StreamReader<detail::DegId> r(k, degsorted);
    StreamWriter<std::uint64_t> w(k, permfile);
    while (!r.done()) w.push(r.next().id);
    w.close();
  }
  fs::remove(degsorted);
  Ordering alpha{permfile, g.n, OrderingRole::nondecreasing_degree};
  Graph grel = relabel(k, g, alpha);

  std::vector<std::uint64_t> member_ranks;
  {
    StreamReader<std::uint64_t> r(k, alpha.perm_path);
    std::uint64_t rank = 0;
    while (!r.done()) {
      ++rank;
      if (std::binary_search(u_side.begin(), u_side.end(), r.next()))
        member_ranks.push_back(rank);
    }
  }

  auto factory = [&] { return ViewScanner(k, grel, &member_ranks); };
  auto skip_clique = [&](std::uint64_t x) {
    return std::binary_search(member_ranks.begin(), member_ranks.end(), x);
  };

  CheckPeoResult peo = check_peo_impl(k, g.n, factory, skip_clique);
  pl.view_peo_messages = peo.messages_sent;
  if (!peo.ok())
    throw extraction_error(
        "clique-augmented view of a bipartite graph must pass the peo check");
  pl.view_clique_size = max_clique_size_impl(k, g.n, factory, true);

  EliminationResult elim = eliminate_universal_isolated_impl(k, g.n, factory);
  if (!elim.emptied) {
    Witness w = extract_chain_2k2(k, g, u_side, w_side, deg);
    if (auto bad = check_witness(k, g, w))
      throw extraction_error("chain 2K2 failed authentication: " + *bad);
    pl.cert.payload = NoCertificate{std::move(w)};
    return pl;
  }

  ChainYes yes;
  yes.U = u_side;
  yes.U.insert(yes.U.end(), isolated.begin(), isolated.end());
  std::sort(yes.U.begin(), yes.U.end());
  yes.W = w_side;
  auto by_degree = [&](std::vector<std::uint64_t> ids) {
    std::sort(ids.begin(), ids.end(), [&](std::uint64_t a, std::uint64_t b) {
      return deg[a] != deg[b] ? deg[a] < deg[b] : a < b;
    });
    return ids;
  };
  yes.nno_u = by_degree(yes.U);
  yes.nno_w = by_degree(yes.W);

  // both orderings must verify; one side nests iff both do
  if (auto bad = detail::first_nno_violation(k, g, yes.nno_u, yes.U))
    throw extraction_error("emitted nno_U failed verification at vertex " +
                           std::to_string(bad->first));
  if (auto bad = detail::first_nno_violation(k, g, yes.nno_w, yes.W))
    throw extraction_error("emitted nno_W failed verification at vertex " +
                           std::to_string(bad->first));

  pl.cert.payload = std::move(yes);
  pl.member = true;
  return pl;
}

inline Certificate certify_chain(Kernel& k, const Graph& g) {
  return run_chain_pipeline(k, g).cert;
}

}  // namespace emcert

#endif  // EMCERT_CHAIN_HPP
