#ifndef EMCERT_CERTIFICATES_HPP
#define EMCERT_CERTIFICATES_HPP

// Certificates and witnesses shared by all recognizers.
//
// A witness names a constant-size forbidden induced subgraph (or an odd
// cycle) by an explicit vertex sequence whose order is normative: cycle
// order for cycles, path order for P4, and (a,b,c,d) with edges {a,b} and
// {c,d} for the 2K2. Certificates are always expressed in original vertex
// ids.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "emcert/graph.hpp"

namespace emcert {

class cert_format_error : public em_error {
public:
  using em_error::em_error;
};

enum class WitnessKind { two_k2, c3, c4, c5, p4, odd_cycle };

enum class GraphClass { bipartite, split, threshold, trivially_perfect, chain };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::two_k2: return "2K2";
    case WitnessKind::c3: return "C3";
    case WitnessKind::c4: return "C4";
    case WitnessKind::c5: return "C5";
    case WitnessKind::p4: return "P4";
    case WitnessKind::odd_cycle: return "odd_cycle";
  }
  return "?";
}

inline const char* to_string(GraphClass c) {
  switch (c) {
    case GraphClass::bipartite: return "bipartite";
    case GraphClass::split: return "split";
    case GraphClass::threshold: return "threshold";
    case GraphClass::trivially_perfect: return "trivially_perfect";
    case GraphClass::chain: return "chain";
  }
  return "?";
}

inline std::optional<GraphClass> parse_graph_class(const std::string& s) {
  if (s == "bipartite") return GraphClass::bipartite;
  if (s == "split") return GraphClass::split;
  if (s == "threshold") return GraphClass::threshold;
  if (s == "trivially_perfect") return GraphClass::trivially_perfect;
  if (s == "chain") return GraphClass::chain;
  return std::nullopt;
}

inline std::optional<WitnessKind> parse_witness_kind(const std::string& s) {
  if (s == "2K2") return WitnessKind::two_k2;
  if (s == "C3") return WitnessKind::c3;
  if (s == "C4") return WitnessKind::c4;
  if (s == "C5") return WitnessKind::c5;
  if (s == "P4") return WitnessKind::p4;
  if (s == "odd_cycle") return WitnessKind::odd_cycle;
  return std::nullopt;
}

struct Witness {
  WitnessKind kind = WitnessKind::two_k2;
  std::vector<std::uint64_t> vertices;
};

/// Witness kinds a NO-certificate may carry, per class.
inline bool witness_kind_legal(GraphClass c, WitnessKind k) {
  switch (c) {
    case GraphClass::split:
      return k == WitnessKind::two_k2 || k == WitnessKind::c4 ||
             k == WitnessKind::c5;
    case GraphClass::threshold:
      return k == WitnessKind::two_k2 || k == WitnessKind::p4 ||
             k == WitnessKind::c4;
    case GraphClass::trivially_perfect:
      return k == WitnessKind::p4 || k == WitnessKind::c4;
    case GraphClass::bipartite:
      return k == WitnessKind::odd_cycle;
    case GraphClass::chain:
      return k == WitnessKind::two_k2 || k == WitnessKind::c3 ||
             k == WitnessKind::c5;
  }
  return false;
}

struct SplitYes {
  std::vector<std::uint64_t> K, I;
};
struct ThresholdYes {
  std::vector<std::uint64_t> K, I, beta;
};
struct TPYes {
  std::vector<std::uint64_t> gamma;
};
struct BipartiteYes {
  std::vector<std::uint64_t> U, W;
};
struct ChainYes {
  std::vector<std::uint64_t> U, W, nno_u, nno_w;
};
struct NoCertificate {
  Witness witness;
};

struct Certificate {
  GraphClass cls = GraphClass::split;
  std::variant<SplitYes, ThresholdYes, TPYes, BipartiteYes, ChainYes,
               NoCertificate>
      payload;

  bool yes() const { return !std::holds_alternative<NoCertificate>(payload); }
  const Witness& witness() const {
    return std::get<NoCertificate>(payload).witness;
  }
};

// ---------------------------------------------------------------------------
// Constant-size witness checking against the host graph. Scans only the
// adjacency lists of the witness vertices.

namespace detail {

/// Edge pattern of a witness kind over index pairs (i, j), i < j.
/// `required` lists index pairs that must be edges; every other pair must
/// be a non-edge, except for odd cycles where chords are unconstrained.
inline void witness_pattern(const Witness& w,
                            std::vector<std::pair<std::size_t, std::size_t>>& required,
                            bool& check_non_edges) {
  required.clear();
  check_non_edges = true;
  std::size_t n = w.vertices.size();
  switch (w.kind) {
    case WitnessKind::two_k2:
      required = {{0, 1}, {2, 3}};
      break;
    case WitnessKind::c3:
    case WitnessKind::c4:
    case WitnessKind::c5:
      for (std::size_t i = 0; i + 1 < n; ++i) required.push_back({i, i + 1});
      required.push_back({n - 1, 0});
      break;
    case WitnessKind::p4:
      required = {{0, 1}, {1, 2}, {2, 3}};
      break;
    case WitnessKind::odd_cycle:
      for (std::size_t i = 0; i + 1 < n; ++i) required.push_back({i, i + 1});
      required.push_back({n - 1, 0});
      check_non_edges = false;
      break;
  }
}

inline std::size_t witness_arity(WitnessKind k) {
  switch (k) {
    case WitnessKind::two_k2: return 4;
    case WitnessKind::c3: return 3;
    case WitnessKind::c4: return 4;
    case WitnessKind::c5: return 5;
    case WitnessKind::p4: return 4;
    case WitnessKind::odd_cycle: return 0;  // any odd length >= 3
  }
  return 0;
}

}  // namespace detail

inline std::optional<std::string> check_witness(Kernel& k, const Graph& g,
                                                const Witness& w) {
  auto fail = [](const std::string& s) { return std::optional<std::string>(s); };
  std::size_t cnt = w.vertices.size();
  std::size_t need = detail::witness_arity(w.kind);
  if (w.kind == WitnessKind::odd_cycle) {
    if (cnt < 3 || cnt % 2 == 0)
      return fail("odd cycle must have odd length >= 3, got " +
                  std::to_string(cnt));
  } else if (cnt != need) {
    return fail(std::string("witness ") + to_string(w.kind) + " needs " +
                std::to_string(need) + " vertices, got " + std::to_string(cnt));
  }
  for (std::size_t i = 0; i < cnt; ++i) {
    if (w.vertices[i] == 0 || w.vertices[i] > g.n)
      return fail("vertex " + std::to_string(w.vertices[i]) + " out of range");
    for (std::size_t j = i + 1; j < cnt; ++j)
      if (w.vertices[i] == w.vertices[j])
        return fail("duplicate vertex " + std::to_string(w.vertices[i]));
  }

  std::vector<std::pair<std::size_t, std::size_t>> required;
  bool check_non_edges = false;
  detail::witness_pattern(w, required, check_non_edges);

  // adjacency among witness vertices, one list scan per vertex
  std::vector<std::vector<bool>> adj(cnt, std::vector<bool>(cnt, false));
  for (std::size_t i = 0; i < cnt; ++i) {
    scan_adjacency(k, g, w.vertices[i], [&](std::uint64_t x) {
      for (std::size_t j = 0; j < cnt; ++j)
        if (x == w.vertices[j]) adj[i][j] = true;
    });
  }

  std::vector<std::vector<bool>> req(cnt, std::vector<bool>(cnt, false));
  for (auto [i, j] : required) req[i][j] = req[j][i] = true;
  for (std::size_t i = 0; i < cnt; ++i)
    for (std::size_t j = i + 1; j < cnt; ++j) {
      std::string pair = "{" + std::to_string(w.vertices[i]) + "," +
                         std::to_string(w.vertices[j]) + "}";
      if (req[i][j] && !adj[i][j]) return fail("missing edge " + pair);
      if (!req[i][j] && adj[i][j] && check_non_edges)
        return fail("unexpected edge " + pair);
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Line-oriented text serialization.
//
//   <class> YES            |  <class> NO
//   <set>: id id ...       |  witness <kind>: id id ...
//
// YES payload lines per class: split K,I; threshold K,I,beta;
// trivially_perfect gamma; bipartite U,W; chain U,W,nno_U,nno_W.

namespace detail {

inline void write_ids(std::ostream& out, const char* label,
                      const std::vector<std::uint64_t>& ids) {
  out << label << ":";
  for (auto v : ids) out << " " << v;
  out << "\n";
}

inline std::vector<std::uint64_t> parse_ids_line(const std::string& line,
                                                 const std::string& label) {
  auto colon = line.find(':');
  if (colon == std::string::npos || line.substr(0, colon) != label)
    throw cert_format_error("expected '" + label + ":' line, got: " + line);
  std::istringstream rest(line.substr(colon + 1));
  std::vector<std::uint64_t> ids;
  std::uint64_t v;
  while (rest >> v) ids.push_back(v);
  return ids;
}

inline std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw cert_format_error("unexpected end of certificate");
  return line;
}

}  // namespace detail

inline void write_certificate(const Certificate& c, std::ostream& out) {
  out << to_string(c.cls) << " " << (c.yes() ? "YES" : "NO") << "\n";
  if (!c.yes()) {
    const Witness& w = c.witness();
    out << "witness " << to_string(w.kind) << ":";
    for (auto v : w.vertices) out << " " << v;
    out << "\n";
    return;
  }
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SplitYes>) {
          detail::write_ids(out, "K", p.K);
          detail::write_ids(out, "I", p.I);
        } else if constexpr (std::is_same_v<T, ThresholdYes>) {
          detail::write_ids(out, "K", p.K);
          detail::write_ids(out, "I", p.I);
          detail::write_ids(out, "beta", p.beta);
        } else if constexpr (std::is_same_v<T, TPYes>) {
          detail::write_ids(out, "gamma", p.gamma);
        } else if constexpr (std::is_same_v<T, BipartiteYes>) {
          detail::write_ids(out, "U", p.U);
          detail::write_ids(out, "W", p.W);
        } else if constexpr (std::is_same_v<T, ChainYes>) {
          detail::write_ids(out, "U", p.U);
          detail::write_ids(out, "W", p.W);
          detail::write_ids(out, "nno_U", p.nno_u);
          detail::write_ids(out, "nno_W", p.nno_w);
        }
      },
      c.payload);
}

inline Certificate parse_certificate(std::istream& in) {
  std::string head = detail::next_line(in);
  std::istringstream hs(head);
  std::string cls_tok, verdict;
  if (!(hs >> cls_tok >> verdict))
    throw cert_format_error("bad certificate header: " + head);
  auto cls = parse_graph_class(cls_tok);
  if (!cls) throw cert_format_error("unknown class: " + cls_tok);
  Certificate c;
  c.cls = *cls;
  if (verdict == "NO") {
    std::string line = detail::next_line(in);
    std::istringstream ls(line);
    std::string witness_tok, kind_tok;
    ls >> witness_tok >> kind_tok;
    if (witness_tok != "witness" || kind_tok.empty() || kind_tok.back() != ':')
      throw cert_format_error("bad witness line: " + line);
    kind_tok.pop_back();
    auto kind = parse_witness_kind(kind_tok);
    if (!kind) throw cert_format_error("unknown witness kind: " + kind_tok);
    Witness w;
    w.kind = *kind;
    std::uint64_t v;
    while (ls >> v) w.vertices.push_back(v);
    if (!witness_kind_legal(c.cls, w.kind))
      throw cert_format_error(std::string("witness kind ") + to_string(w.kind) +
                              " not legal for class " + to_string(c.cls));
    c.payload = NoCertificate{std::move(w)};
    return c;
  }
  if (verdict != "YES")
    throw cert_format_error("bad verdict: " + verdict);
  switch (c.cls) {
    case GraphClass::split: {
      SplitYes p;
      p.K = detail::parse_ids_line(detail::next_line(in), "K");
      p.I = detail::parse_ids_line(detail::next_line(in), "I");
      c.payload = std::move(p);
      break;
    }
    case GraphClass::threshold: {
      ThresholdYes p;
      p.K = detail::parse_ids_line(detail::next_line(in), "K");
      p.I = detail::parse_ids_line(detail::next_line(in), "I");
      p.beta = detail::parse_ids_line(detail::next_line(in), "beta");
      c.payload = std::move(p);
      break;
    }
    case GraphClass::trivially_perfect: {
      TPYes p;
      p.gamma = detail::parse_ids_line(detail::next_line(in), "gamma");
      c.payload = std::move(p);
      break;
    }
    case GraphClass::bipartite: {
      BipartiteYes p;
      p.U = detail::parse_ids_line(detail::next_line(in), "U");
      p.W = detail::parse_ids_line(detail::next_line(in), "W");
      c.payload = std::move(p);
      break;
    }
    case GraphClass::chain: {
      ChainYes p;
      p.U = detail::parse_ids_line(detail::next_line(in), "U");
      p.W = detail::parse_ids_line(detail::next_line(in), "W");
      p.nno_u = detail::parse_ids_line(detail::next_line(in), "nno_U");
      p.nno_w = detail::parse_ids_line(detail::next_line(in), "nno_W");
      c.payload = std::move(p);
      break;
    }
  }
  return c;
}

inline std::string certificate_to_string(const Certificate& c) {
  std::ostringstream ss;
  write_certificate(c, ss);
  return ss.str();
}

inline Certificate certificate_from_string(const std::string& s) {
  std::istringstream ss(s);
  return parse_certificate(ss);
}

}  // namespace emcert

#endif  // EMCERT_CERTIFICATES_HPP
