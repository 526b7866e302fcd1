#ifndef EMCERT_TRIVIALLY_PERFECT_HPP
#define EMCERT_TRIVIALLY_PERFECT_HPP

// Trivially perfect certification: a non-increasing degree ordering is a
// universal-in-a-component ordering iff the graph is trivially perfect.
// The selected label anomaly is completed to a P4 or C4.

#include <cstdint>
#include <vector>

#include "emcert/certificates.hpp"
#include "emcert/graph_ops.hpp"
#include "emcert/orderings.hpp"
#include "emcert/split.hpp"

namespace emcert {

/// Rank space. With k the larger label involved, v_k the vertex of rank k,
/// v_j the anomaly endpoint carrying k and v_i the other endpoint,
/// (v_k, v_j, v_i) is a P3; a neighbor x of v_k outside N[v_j] closes a C4
/// when adjacent to v_i and a P4 otherwise.
inline Witness extract_tp_witness(Kernel& k, const Graph& g_rel,
                                  const LabelAnomaly& a) {
  const std::uint64_t label = a.max_label();
  if (label == 0)
    throw extraction_error("tp anomaly with zero label cannot be completed");
  const std::uint64_t vk = label;
  const std::uint64_t vj = a.carrier();
  const std::uint64_t vi = a.other();

  std::optional<std::uint64_t> x;
  {
    AdjacencyCursor ck(k, g_rel, vk), cj(k, g_rel, vj);
    x = detail::first_not_covered(ck, {&cj}, {vj});
  }
  if (!x) throw extraction_error("tp witness: x not found");
  if (has_edge(k, g_rel, vi, *x))
    return Witness{WitnessKind::c4, {vk, vj, vi, *x}};
  return Witness{WitnessKind::p4, {*x, vk, vj, vi}};
}

struct TpPipeline {
  Certificate cert;
  bool member = false;
  std::uint64_t uco_messages = 0;
};

inline TpPipeline run_tp_pipeline(Kernel& k, const Graph& g) {
  TpPipeline pl;
  pl.cert.cls = GraphClass::trivially_perfect;

  Ordering gamma = degree_ordering(k, g, OrderingRole::nonincreasing_degree);
  Graph grel = relabel(k, g, gamma);
  CheckUcoResult uco = check_uco(k, grel);
  pl.uco_messages = uco.messages_sent;
  if (uco.ok()) {
    pl.cert.payload = TPYes{ranks_to_ids(k, gamma, 1, g.n)};
    pl.member = true;
    return pl;
  }
  Witness w = extract_tp_witness(k, grel, *uco.anomaly);
  pl.cert.payload = NoCertificate{detail::authenticated_original(k, g, gamma, w)};
  return pl;
}

inline Certificate certify_trivially_perfect(Kernel& k, const Graph& g) {
  return run_tp_pipeline(k, g).cert;
}

}  // namespace emcert

#endif  // EMCERT_TRIVIALLY_PERFECT_HPP
