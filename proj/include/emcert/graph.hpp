#ifndef EMCERT_GRAPH_HPP
#define EMCERT_GRAPH_HPP

// Adjacency-row graph storage.
//
// Binary format ("ARG1"): magic "ARG1", u64 n, u64 m, then the offset
// array P (n+1 entries, element indices into E, first 0 and last 2m),
// then the neighbor array E (2m entries). All integers little-endian,
// vertex ids 1-based, each undirected edge stored in both endpoint lists,
// lists sorted ascending.

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "emcert/kernel.hpp"

namespace emcert {

class graph_format_error : public em_error {
public:
  using em_error::em_error;
};

namespace detail {

inline void put_u64_le(std::FILE* f, std::uint64_t v) {
  std::array<unsigned char, 8> b;
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] =
      static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  if (std::fwrite(b.data(), 1, 8, f) != 8)
    throw capacity_error("short write in graph file");
}

inline std::uint64_t get_u64_le(std::FILE* f) {
  std::array<unsigned char, 8> b;
  if (std::fread(b.data(), 1, 8, f) != 8)
    throw graph_format_error("truncated graph file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
    v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

inline constexpr std::uint64_t kHeaderBytes = 20;

}  // namespace detail

/// Handle to an on-disk graph. The file is immutable once stored.
struct Graph {
  fs::path path;
  std::uint64_t n = 0;
  std::uint64_t m = 0;

  std::uint64_t p_offset() const { return detail::kHeaderBytes; }
  std::uint64_t e_offset() const {
    return detail::kHeaderBytes + 8 * (n + 1);
  }

  static Graph load(const fs::path& p) {
    auto f = detail::open_file(p, "rb");
    std::array<char, 4> magic;
    if (std::fread(magic.data(), 1, 4, f.get()) != 4 ||
        std::memcmp(magic.data(), "ARG1", 4) != 0)
      throw graph_format_error("not an ARG1 graph file: " + p.string());
    Graph g;
    g.path = p;
    g.n = detail::get_u64_le(f.get());
    g.m = detail::get_u64_le(f.get());
    std::uint64_t expect = detail::kHeaderBytes + 8 * (g.n + 1) + 8 * 2 * g.m;
    if (file_size_bytes(p) != expect)
      throw graph_format_error("graph file size mismatch: " + p.string());
    return g;
  }
};

/// Small in-memory graph used by the oracle, the generators and tests.
/// Vertex ids are 1-based; adj[0] is unused.
struct MemGraph {
  std::uint64_t n = 0;
  std::vector<std::vector<std::uint64_t>> adj;

  MemGraph() = default;
  explicit MemGraph(std::uint64_t vertices) { reset(vertices); }

  void reset(std::uint64_t vertices) {
    n = vertices;
    adj.assign(n + 1, {});
  }

  void add_edge(std::uint64_t u, std::uint64_t v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  /// Sorts lists and drops duplicate entries. Returns the number of
  /// duplicate undirected edges removed.
  std::uint64_t normalize() {
    std::uint64_t dups = 0;
    for (auto& l : adj) {
      std::sort(l.begin(), l.end());
      auto e = std::unique(l.begin(), l.end());
      dups += static_cast<std::uint64_t>(l.end() - e);
      l.erase(e, l.end());
    }
    return dups / 2;
  }

  std::uint64_t m() const {
    std::uint64_t deg_sum = 0;
    for (const auto& l : adj) deg_sum += l.size();
    return deg_sum / 2;
  }

  std::uint64_t degree(std::uint64_t v) const { return adj[v].size(); }

  bool has_edge(std::uint64_t u, std::uint64_t v) const {
    if (u == 0 || v == 0 || u > n || v > n) return false;
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
  }
};

/// Canonical writer: produces a byte-identical file for equal graphs.
inline Graph store_graph(const MemGraph& g, const fs::path& p) {
  auto f = detail::open_file(p, "wb");
  if (std::fwrite("ARG1", 1, 4, f.get()) != 4)
    throw capacity_error("short write in graph header");
  std::uint64_t m = g.m();
  detail::put_u64_le(f.get(), g.n);
  detail::put_u64_le(f.get(), m);
  std::uint64_t off = 0;
  detail::put_u64_le(f.get(), 0);
  for (std::uint64_t v = 1; v <= g.n; ++v) {
    off += g.adj[v].size();
    detail::put_u64_le(f.get(), off);
  }
  for (std::uint64_t v = 1; v <= g.n; ++v)
    for (std::uint64_t w : g.adj[v]) detail::put_u64_le(f.get(), w);
  return Graph{p, g.n, m};
}

inline MemGraph load_mem_graph(const fs::path& p) {
  Graph g = Graph::load(p);
  auto f = detail::open_file(p, "rb");
  if (std::fseek(f.get(), static_cast<long>(g.p_offset()), SEEK_SET) != 0)
    throw graph_format_error("seek failed");
  std::vector<std::uint64_t> off(g.n + 1);
  for (auto& o : off) o = detail::get_u64_le(f.get());
  MemGraph out(g.n);
  for (std::uint64_t v = 1; v <= g.n; ++v) {
    if (off[v] < off[v - 1]) throw graph_format_error("non-monotone offsets");
    out.adj[v].resize(off[v] - off[v - 1]);
    for (auto& w : out.adj[v]) w = detail::get_u64_le(f.get());
  }
  return out;
}

/// Streaming pass over a graph file: vertices in id order, neighbors in
/// list order. Holds two blocks (offset stream + neighbor stream).
class AdjacencyScanner {
public:
  AdjacencyScanner(Kernel& k, const Graph& g) : g_(g) {
    p_.open(k, g.path, g.p_offset(), g.n + 1);
    e_.open(k, g.path, g.e_offset(), 2 * g.m);
    prev_off_ = p_.done() ? 0 : p_.next();
  }

  /// Advances to the next vertex, discarding any unread neighbors of the
  /// current one. Returns false after the last vertex.
  bool next_vertex() {
    while (left_ > 0) {
      e_.next();
      --left_;
    }
    if (v_ >= g_.n) return false;
    ++v_;
    std::uint64_t off = p_.next();
    left_ = off - prev_off_;
    deg_ = left_;
    prev_off_ = off;
    return true;
  }

  std::uint64_t vertex() const { return v_; }
  std::uint64_t degree() const { return deg_; }

  bool next_neighbor(std::uint64_t& w) {
    if (left_ == 0) return false;
    w = e_.next();
    --left_;
    return true;
  }

private:
  const Graph& g_;
  StreamReader<std::uint64_t> p_;
  StreamReader<std::uint64_t> e_;
  std::uint64_t prev_off_ = 0;
  std::uint64_t v_ = 0;
  std::uint64_t deg_ = 0;
  std::uint64_t left_ = 0;
};

/// Streams the adjacency list of a single vertex (two offset lookups plus
/// a windowed scan of E).
template <typename Fn>
void scan_adjacency(Kernel& k, const Graph& g, std::uint64_t v, Fn&& fn) {
  std::uint64_t lo = read_record_at<std::uint64_t>(k, g.path, g.p_offset(), v - 1);
  std::uint64_t hi = read_record_at<std::uint64_t>(k, g.path, g.p_offset(), v);
  StreamReader<std::uint64_t> e(k, g.path, g.e_offset() + 8 * lo, hi - lo);
  while (!e.done()) fn(e.next());
}

inline std::vector<std::uint64_t> adjacency_list(Kernel& k, const Graph& g,
                                                 std::uint64_t v) {
  std::vector<std::uint64_t> out;
  scan_adjacency(k, g, v, [&](std::uint64_t w) { out.push_back(w); });
  return out;
}

/// Forward cursor over one sorted adjacency list.
class AdjacencyCursor {
public:
  AdjacencyCursor(Kernel& k, const Graph& g, std::uint64_t v) {
    std::uint64_t lo =
        read_record_at<std::uint64_t>(k, g.path, g.p_offset(), v - 1);
    std::uint64_t hi = read_record_at<std::uint64_t>(k, g.path, g.p_offset(), v);
    r_.open(k, g.path, g.e_offset() + 8 * lo, hi - lo);
  }

  bool done() { return r_.done(); }
  std::uint64_t peek() { return r_.peek(); }
  std::uint64_t next() { return r_.next(); }

  void advance_to(std::uint64_t x) {
    while (!done() && peek() < x) next();
  }
  /// Monotone membership probe; only valid for non-decreasing x.
  bool contains_from_here(std::uint64_t x) {
    advance_to(x);
    return !done() && peek() == x;
  }

private:
  StreamReader<std::uint64_t> r_;
};

/// Lists are sorted, so the scan stops at the first neighbor >= v.
inline bool has_edge(Kernel& k, const Graph& g, std::uint64_t u,
                     std::uint64_t v) {
  std::uint64_t lo = read_record_at<std::uint64_t>(k, g.path, g.p_offset(), u - 1);
  std::uint64_t hi = read_record_at<std::uint64_t>(k, g.path, g.p_offset(), u);
  StreamReader<std::uint64_t> e(k, g.path, g.e_offset() + 8 * lo, hi - lo);
  while (!e.done()) {
    std::uint64_t w = e.next();
    if (w == v) return true;
    if (w > v) return false;
  }
  return false;
}

namespace detail {

struct ArcKey {
  std::uint64_t a, b, dir;
  friend auto operator<=>(const ArcKey&, const ArcKey&) = default;
};

}  // namespace detail

/// Structural and symmetry validation. Returns std::nullopt when the file
/// satisfies every representation invariant, otherwise a description of
/// the first violation found.
inline std::optional<std::string> validate_graph(Kernel& k, const Graph& g) {
  auto fail = [](const std::string& s) { return std::optional<std::string>(s); };

  {
    StreamReader<std::uint64_t> p(k, g.path, g.p_offset(), g.n + 1);
    std::uint64_t prev = p.next();
    if (prev != 0) return fail("P[1] must be 0, found " + std::to_string(prev));
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      std::uint64_t cur = p.next();
      if (cur < prev)
        return fail("P non-monotone at vertex " + std::to_string(v));
      prev = cur;
    }
    if (prev != 2 * g.m)
      return fail("P[n+1] = " + std::to_string(prev) + ", expected 2m = " +
                  std::to_string(2 * g.m));
  }

  fs::path arcs = k.make_temp_path("arcs");
  {
    AdjacencyScanner sc(k, g);
    StreamWriter<detail::ArcKey> w(k, arcs);
    while (sc.next_vertex()) {
      std::uint64_t v = sc.vertex();
      std::uint64_t prev = 0;
      bool first = true;
      std::uint64_t x;
      while (sc.next_neighbor(x)) {
        if (x == v) return fail("self-loop at vertex " + std::to_string(v));
        if (x == 0 || x > g.n)
          return fail("neighbor " + std::to_string(x) + " of vertex " +
                      std::to_string(v) + " out of range");
        if (!first && x <= prev)
          return fail("adjacency list of vertex " + std::to_string(v) +
                      (x == prev ? " has duplicate " : " not sorted at ") +
                      std::to_string(x));
        w.push({std::min(v, x), std::max(v, x), v < x ? 0ull : 1ull});
        prev = x;
        first = false;
      }
    }
    w.close();
  }

  fs::path sorted = k.make_temp_path("arcs_sorted");
  em_sort<detail::ArcKey>(k, arcs, sorted);
  fs::remove(arcs);
  {
    StreamReader<detail::ArcKey> r(k, sorted);
    while (!r.done()) {
      detail::ArcKey one = r.next();
      if (r.done())
        return fail("edge {" + std::to_string(one.a) + "," +
                    std::to_string(one.b) + "} missing reverse arc");
      detail::ArcKey two = r.next();
      if (one.a != two.a || one.b != two.b || one.dir != 0 || two.dir != 1)
        return fail("edge {" + std::to_string(one.a) + "," +
                    std::to_string(one.b) + "} missing reverse arc");
    }
  }
  fs::remove(sorted);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Edge-list text interchange: one "u v" pair per line, 1-based ids.

struct EdgeListResult {
  MemGraph graph;
  std::uint64_t duplicates = 0;  // deduplicated with a warning by the CLI
};

inline EdgeListResult parse_edge_list(std::istream& in,
                                      std::uint64_t n_override = 0) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::uint64_t max_id = 0;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t u = 0, v = 0;
    if (!(ls >> u >> v) || u == 0 || v == 0)
      throw graph_format_error("bad edge at line " + std::to_string(lineno));
    if (u == v)
      throw graph_format_error("self-loop at line " + std::to_string(lineno));
    edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
  }
  if (n_override != 0 && n_override < max_id)
    throw graph_format_error("vertex count override smaller than max id");
  EdgeListResult res;
  res.graph.reset(n_override ? n_override : max_id);
  for (auto [u, v] : edges) res.graph.add_edge(u, v);
  res.duplicates = res.graph.normalize();
  return res;
}

inline void write_edge_list(const MemGraph& g, std::ostream& out) {
  for (std::uint64_t v = 1; v <= g.n; ++v)
    for (std::uint64_t w : g.adj[v])
      if (v < w) out << v << " " << w << "\n";
}

}  // namespace emcert

#endif  // EMCERT_GRAPH_HPP
