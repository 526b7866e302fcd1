#ifndef EMCERT_THRESHOLD_HPP
#define EMCERT_THRESHOLD_HPP

// Threshold certification on top of the split pipeline: a split graph is
// threshold iff repeatedly removing universal and isolated vertices leaves
// nothing. On failure a P4 is extracted after pruning vertices that cannot
// lie on one (clique vertices with no remaining independent neighbors,
// independent vertices adjacent to the whole remaining clique); the prune
// runs on two degree cursors and deletion counters, never rewriting the
// graph.

#include <cstdint>
#include <optional>
#include <vector>

#include "emcert/split.hpp"

namespace emcert {

namespace detail {

struct ThresholdPrune {
  std::uint64_t deleted_k = 0;  // prefix of the clique-side rank range
  std::uint64_t deleted_i = 0;  // suffix of the independent-side rank range
};

/// Degrees of ranks [lo, hi] in rank order (stream over P deltas).
class DegreeWindow {
public:
  DegreeWindow(Kernel& k, const Graph& g, std::uint64_t lo, std::uint64_t hi)
      : lo_(lo) {
    if (lo > hi) return;
    r_.open(k, g.path, g.p_offset() + 8 * (lo - 1), hi - lo + 2);
    prev_ = r_.next();
  }
  bool done() { return r_.done(); }
  /// degree of the next rank (lo, lo+1, ...)
  std::uint64_t next() {
    std::uint64_t cur = r_.next();
    std::uint64_t d = cur - prev_;
    prev_ = cur;
    ++lo_;
    return d;
  }

private:
  StreamReader<std::uint64_t> r_;
  std::uint64_t prev_ = 0;
  std::uint64_t lo_ = 0;
};

struct RankDeg {
  std::uint64_t rank, deg;
};

}  // namespace detail

/// Extracts an induced P4 from a split graph that failed the
/// universal/isolated elimination. Rank space; clique side is ranks
/// (n-k, n], independent side [1, n-k].
inline Witness extract_p4(Kernel& k, const Graph& g_rel,
                          std::uint64_t clique_size) {
  const std::uint64_t n = g_rel.n;
  const std::uint64_t bound = n - clique_size;

  // Degree streams: clique side ascending by rank, independent side
  // descending (materialized by one sort).
  fs::path idesc = k.make_temp_path("p4_ideg");
  {
    detail::DegreeWindow dw(k, g_rel, 1, bound);
    fs::path tmp = k.make_temp_path("p4_ideg_raw");
    StreamWriter<detail::RankDeg> w(k, tmp);
    for (std::uint64_t v = 1; v <= bound; ++v) w.push({v, dw.next()});
    w.close();
    em_sort<detail::RankDeg>(k, tmp, idesc,
                             [](const detail::RankDeg& a, const detail::RankDeg& b) {
                               return a.rank > b.rank;
                             });
    fs::remove(tmp);
  }

  detail::ThresholdPrune pr;
  {
    detail::DegreeWindow kdeg(k, g_rel, bound + 1, n);
    StreamReader<detail::RankDeg> ideg(k, idesc);
    bool kdone = bound + 1 > n, idone = bound == 0;
    std::uint64_t k_head = kdone ? 0 : kdeg.next();
    detail::RankDeg i_head = idone ? detail::RankDeg{0, 0} : ideg.next();
    bool progress = true;
    while (progress) {
      progress = false;
      // clique vertices with every independent neighbor already deleted
      while (!kdone && k_head - (clique_size - 1) <= pr.deleted_i) {
        ++pr.deleted_k;
        progress = true;
        if (pr.deleted_k == clique_size) {
          kdone = true;
        } else {
          k_head = kdeg.next();
        }
      }
      // independent vertices adjacent to the whole remaining clique
      while (!idone && i_head.deg >= clique_size - pr.deleted_k) {
        ++pr.deleted_i;
        progress = true;
        if (pr.deleted_i == bound) {
          idone = true;
        } else {
          i_head = ideg.next();
        }
      }
    }
    if (kdone || idone)
      throw extraction_error("p4 prune emptied a side of a non-threshold graph");
  }
  fs::remove(idesc);

  const std::uint64_t i_top = bound - pr.deleted_i;        // highest remaining I rank
  const std::uint64_t k_low = bound + pr.deleted_k + 1;    // lowest remaining K rank

  // v: smallest-id vertex of maximum remaining independent-side degree;
  // with the degree-sorted relabeling that is the first rank whose degree
  // equals the degree at i_top
  std::uint64_t dstar = 0;
  {
    detail::DegreeWindow dw(k, g_rel, i_top, i_top);
    dstar = dw.next();
  }
  std::uint64_t v = 0;
  {
    detail::DegreeWindow dw(k, g_rel, 1, i_top);
    for (std::uint64_t r = 1; r <= i_top; ++r) {
      if (dw.next() == dstar) {
        v = r;
        break;
      }
    }
  }
  if (v == 0) throw extraction_error("p4: no remaining independent vertex");

  // y: smallest remaining clique rank not adjacent to v
  std::optional<std::uint64_t> y;
  {
    AdjacencyCursor cv(k, g_rel, v);
    for (std::uint64_t cand = k_low; cand <= n; ++cand) {
      if (!cv.contains_from_here(cand)) {
        y = cand;
        break;
      }
    }
  }
  if (!y) throw extraction_error("p4: non-neighbor y not found");

  // z: smallest remaining independent neighbor of y
  std::optional<std::uint64_t> z;
  {
    AdjacencyCursor cy(k, g_rel, *y);
    if (!cy.done() && cy.peek() <= i_top) z = cy.peek();
  }
  if (!z) throw extraction_error("p4: independent neighbor z not found");

  // w: remaining clique neighbor of v nonadjacent to z
  std::optional<std::uint64_t> w;
  {
    AdjacencyCursor cv(k, g_rel, v), cz(k, g_rel, *z);
    while (!cv.done()) {
      std::uint64_t cand = cv.next();
      if (cand < k_low) continue;
      if (!cz.contains_from_here(cand)) {
        w = cand;
        break;
      }
    }
  }
  if (!w) throw extraction_error("p4: clique neighbor w not found");

  return Witness{WitnessKind::p4, {v, *w, *y, *z}};
}

struct ThresholdPipeline {
  Certificate cert;
  bool member = false;
  std::uint64_t peo_messages = 0;
};

inline ThresholdPipeline run_threshold_pipeline(Kernel& k, const Graph& g) {
  ThresholdPipeline pl;
  pl.cert.cls = GraphClass::threshold;

  if (g.m == 0) {
    std::vector<std::uint64_t> all(g.n);
    for (std::uint64_t v = 1; v <= g.n; ++v) all[v - 1] = v;
    pl.cert.payload = ThresholdYes{{}, all, all};
    pl.member = true;
    return pl;
  }

  SplitPipeline split = run_split_pipeline(k, g);
  pl.peo_messages = split.peo_messages;
  if (!split.member) {
    Witness w = split.cert.witness();
    if (w.kind == WitnessKind::c5) {
      // four consecutive cycle vertices induce a P4
      w = Witness{WitnessKind::p4,
                  {w.vertices[0], w.vertices[1], w.vertices[2], w.vertices[3]}};
      if (auto bad = check_witness(k, g, w))
        throw extraction_error("C5-to-P4 witness failed authentication: " + *bad);
    }
    pl.cert.payload = NoCertificate{std::move(w)};
    return pl;
  }

  EliminationResult elim = eliminate_universal_isolated(k, *split.relabeled);
  if (elim.emptied) {
    const auto& sy = std::get<SplitYes>(split.cert.payload);
    ThresholdYes yes;
    yes.K = sy.K;
    yes.I = sy.I;
    yes.beta = ranks_to_ids(k, *split.alpha, 1, g.n - split.clique_size);
    pl.cert.payload = std::move(yes);
    pl.member = true;
    return pl;
  }

  Witness w = extract_p4(k, *split.relabeled, split.clique_size);
  pl.cert.payload =
      NoCertificate{detail::authenticated_original(k, g, *split.alpha, w)};
  return pl;
}

inline Certificate certify_threshold(Kernel& k, const Graph& g) {
  return run_threshold_pipeline(k, g).cert;
}

}  // namespace emcert

#endif  // EMCERT_THRESHOLD_HPP
