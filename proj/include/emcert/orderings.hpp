#ifndef EMCERT_ORDERINGS_HPP
#define EMCERT_ORDERINGS_HPP

// Recognition passes over relabeled graphs (rank == vertex id):
//
//  * check_peo            perfect-elimination check via TFP messages
//  * max_clique_size      1 + max |H(v)| for graphs with a verified peo
//  * eliminate_universal_isolated
//                         reverse simulation of universal/isolated removal
//  * check_uco            universal-in-a-component check via label replay
//
// Each pass is generic over the adjacency source so the same machinery can
// run on an implicitly clique-augmented view.

#include <cstdint>
#include <optional>
#include <vector>

#include "emcert/graph.hpp"
#include "emcert/graph_ops.hpp"
#include "emcert/kernel.hpp"
#include "emcert/tfp.hpp"

namespace emcert {

/// Ranks i < j < k with {v_i,v_j}, {v_i,v_k} edges and {v_j,v_k} a
/// non-edge: rank i is not simplicial among its successors.
struct PeoFailure {
  std::uint64_t i = 0, j = 0, k = 0;
};

struct CheckPeoResult {
  std::optional<PeoFailure> failure;
  std::uint64_t messages_sent = 0;
  bool ok() const { return !failure.has_value(); }
};

namespace detail {

inline bool never_skip(std::uint64_t) { return false; }

}  // namespace detail

/// Algorithm: every vertex v informs u = min H(v) of each further
/// successor x; u verifies x is among its own neighbors. Failures are
/// selected first by recipient rank, then by (sender, payload).
///
/// `skip_payload(x)` suppresses messages whose payload is known adjacent
/// to every possible recipient (used by the clique-augmented view).
template <typename ScannerFactory, typename SkipPred>
CheckPeoResult check_peo_impl(Kernel& k, [[maybe_unused]] std::uint64_t n,
                              ScannerFactory make_scanner, SkipPred skip_payload) {
  fs::path delivered = k.make_temp_path("peo_msgs");
  std::uint64_t sent = 0;
  {
    auto sc = make_scanner();
    TfpMailbox mb(k);
    StreamWriter<Message> out(k, delivered);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex();
      mb.deliver_all_for(v, [&](const Message& m) { out.push(m); });
      std::uint64_t u = 0, w = 0;
      while (sc.next_neighbor(w)) {
        if (w < v) continue;
        if (u == 0) {
          u = w;
          continue;
        }
        if (skip_payload(w)) continue;
        mb.send(u, v, w);
      }
    }
    // ranks are exhausted, so any leftover mail is a protocol bug upstream
    out.close();
    sent = mb.messages_sent();
    if (sent != out.records_written())
      throw protocol_error("peo: undelivered messages remain");
  }

  fs::path by_payload = k.make_temp_path("peo_sorted");
  em_sort<Message>(k, delivered, by_payload,
                   [](const Message& x, const Message& y) {
                     if (x.recipient != y.recipient) return x.recipient < y.recipient;
                     if (x.a != y.a) return x.a < y.a;
                     return x.sender < y.sender;
                   });
  fs::remove(delivered);

  CheckPeoResult res;
  res.messages_sent = sent;
  {
    auto sc = make_scanner();
    StreamReader<Message> mr(k, by_payload);
    std::optional<Message> best;
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex();
      std::uint64_t w = 0;
      bool have_w = sc.next_neighbor(w);
      while (!mr.done() && mr.peek().recipient == v) {
        Message m = mr.next();
        while (have_w && w < m.a) have_w = sc.next_neighbor(w);
        bool adjacent = have_w && w == m.a;
        if (!adjacent) {
          if (!best || m.sender < best->sender ||
              (m.sender == best->sender && m.a < best->a))
            best = m;
        }
      }
      if (best) {
        res.failure = PeoFailure{best->sender, v, best->a};
        break;
      }
    }
    if (!res.failure && !mr.done())
      throw protocol_error("peo: message for unknown rank");
  }
  fs::remove(by_payload);
  return res;
}

inline CheckPeoResult check_peo(Kernel& k, const Graph& g_rel) {
  return check_peo_impl(
      k, g_rel.n, [&] { return AdjacencyScanner(k, g_rel); },
      detail::never_skip);
}

/// Size of a maximum clique of a graph whose non-decreasing degree
/// ordering has been verified to be a peo: under a peo every maximal
/// clique is {v} plus v's higher-ranked neighbors.
template <typename ScannerFactory>
std::uint64_t max_clique_size_impl(Kernel&, std::uint64_t n,
                                   ScannerFactory make_scanner,
                                   bool peo_verified) {
  if (!peo_verified)
    throw em_error("max_clique_size requires a verified perfect elimination ordering");
  if (n == 0) return 0;
  auto sc = make_scanner();
  std::uint64_t best = 0;
  while (sc.next_vertex()) {
    std::uint64_t v = sc.vertex(), w = 0, h = 0;
    while (sc.next_neighbor(w))
      if (w > v) ++h;
    best = std::max(best, h);
  }
  return 1 + best;
}

inline std::uint64_t max_clique_size(Kernel& k, const Graph& g_rel,
                                     bool peo_verified) {
  return max_clique_size_impl(
      k, g_rel.n, [&] { return AdjacencyScanner(k, g_rel); }, peo_verified);
}

struct EliminationResult {
  bool emptied = false;
  std::uint64_t stuck_at = 0;  // rank, when not emptied
};

namespace detail {

struct RankCount {
  std::uint64_t rank, count;
};

}  // namespace detail

/// Simulates repeatedly deleting universal and isolated vertices, scanning
/// ranks from n downward. The pre-pass stores, for each vertex with no
/// lower-ranked neighbors, the rank whose deletion would isolate it;
/// degree-zero vertices are isolated from the start and are counted as
/// deleted immediately.
template <typename ScannerFactory>
EliminationResult eliminate_universal_isolated_impl(Kernel& k, std::uint64_t n,
                                                    ScannerFactory make_scanner) {
  fs::path triggers = k.make_temp_path("elim_trig");
  fs::path lsizes = k.make_temp_path("elim_l");
  std::uint64_t isolated_from_start = 0;
  {
    auto sc = make_scanner();
    StreamWriter<std::uint64_t> tw(k, triggers);
    StreamWriter<detail::RankCount> lw(k, lsizes);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex(), w = 0;
      std::uint64_t lcount = 0, min_h = 0;
      while (sc.next_neighbor(w)) {
        if (w < v)
          ++lcount;
        else if (min_h == 0)
          min_h = w;
      }
      if (lcount == 0 && min_h != 0) tw.push(min_h);
      if (lcount == 0 && min_h == 0) ++isolated_from_start;
      lw.push({v, lcount});
    }
    tw.close();
    lw.close();
  }

  fs::path trig_desc = k.make_temp_path("elim_trig_d");
  em_sort<std::uint64_t>(k, triggers, trig_desc,
                         [](std::uint64_t a, std::uint64_t b) { return a > b; });
  fs::remove(triggers);
  fs::path l_desc = k.make_temp_path("elim_l_d");
  em_sort<detail::RankCount>(k, lsizes, l_desc,
                             [](const detail::RankCount& a, const detail::RankCount& b) {
                               return a.rank > b.rank;
                             });
  fs::remove(lsizes);

  EliminationResult res;
  {
    StreamReader<std::uint64_t> tr(k, trig_desc);
    StreamReader<detail::RankCount> lr(k, l_desc);
    std::uint64_t n_del = isolated_from_start;
    res.emptied = true;
    for (std::uint64_t i = n; i >= 1 && res.emptied; --i) {
      detail::RankCount rc = lr.next();
      if (rc.rank != i) throw em_error("elimination: rank stream corrupt");
      if (rc.count == 0) continue;
      if (rc.count < (n - 1) - n_del) {
        res.emptied = false;
        res.stuck_at = i;
        break;
      }
      n_del += 1;
      while (!tr.done() && tr.peek() == i) {
        tr.next();
        ++n_del;
      }
    }
  }
  fs::remove(trig_desc);
  fs::remove(l_desc);
  return res;
}

inline EliminationResult eliminate_universal_isolated(Kernel& k,
                                                      const Graph& g_rel) {
  return eliminate_universal_isolated_impl(
      k, g_rel.n, [&] { return AdjacencyScanner(k, g_rel); });
}

/// A failed label comparison. `at` is the rank whose check failed (the
/// message sender), `neighbor` the vertex whose label was inspected.
struct LabelAnomaly {
  std::uint64_t at = 0;
  std::uint64_t neighbor = 0;
  std::uint64_t expected_label = 0;  // label carried by `at`
  std::uint64_t found_label = 0;     // label carried by `neighbor`

  std::uint64_t max_label() const {
    return std::max(expected_label, found_label);
  }
  /// Endpoint carrying the larger label; the labels differ by definition.
  std::uint64_t carrier() const {
    return expected_label > found_label ? at : neighbor;
  }
  std::uint64_t other() const {
    return expected_label > found_label ? neighbor : at;
  }
};

struct CheckUcoResult {
  std::optional<LabelAnomaly> anomaly;
  std::uint64_t messages_sent = 0;
  bool ok() const { return !anomaly.has_value(); }
};

/// Label replay: every vertex starts labeled 0; processing rank i requires
/// each not-yet-removed neighbor to carry i's current label and then
/// relabels them to i. Each vertex forwards (own label, own rank) to every
/// higher-ranked neighbor as two messages.
///
/// All anomalies are recorded; the one reported is the earliest by
/// checking rank, then the largest involved label, then the smallest
/// checked rank.
inline CheckUcoResult check_uco(Kernel& k, const Graph& g_rel,
                                std::vector<std::uint64_t>* labels_out = nullptr) {
  CheckUcoResult res;
  std::optional<LabelAnomaly> best;
  auto consider = [&](const LabelAnomaly& a) {
    if (!best) {
      best = a;
      return;
    }
    if (a.at != best->at) {
      if (a.at < best->at) best = a;
      return;
    }
    if (a.max_label() != best->max_label()) {
      if (a.max_label() > best->max_label()) best = a;
      return;
    }
    if (a.neighbor < best->neighbor) best = a;
  };

  {
    AdjacencyScanner sc(k, g_rel);
    TfpMailbox mb(k);
    if (labels_out) labels_out->assign(g_rel.n + 1, 0);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex();
      std::uint64_t cur = 0;
      bool have_expected = false;
      std::uint64_t expected = 0, expected_sender = 0;
      mb.deliver_all_for(v, [&](const Message& m) {
        if (!have_expected) {
          if (m.b != 0)
            throw protocol_error("uco: unpaired label message");
          expected = m.a;
          expected_sender = m.sender;
          have_expected = true;
          return;
        }
        if (m.b != 1 || m.sender != expected_sender)
          throw protocol_error("uco: unpaired label message");
        if (cur != expected)
          consider(LabelAnomaly{m.sender, v, expected, cur});
        cur = m.a;  // == sender's rank
        have_expected = false;
      });
      if (have_expected) throw protocol_error("uco: odd message count");
      if (labels_out) (*labels_out)[v] = cur;
      std::uint64_t w = 0;
      while (sc.next_neighbor(w)) {
        if (w <= v) continue;
        mb.send(w, v, cur, 0);
        mb.send(w, v, v, 1);
      }
    }
    res.messages_sent = mb.messages_sent();
  }
  res.anomaly = best;
  return res;
}

}  // namespace emcert

#endif  // EMCERT_ORDERINGS_HPP
