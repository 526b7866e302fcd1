#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "emcert/graph.hpp"
#include "emcert/graph_ops.hpp"
#include "test_util.hpp"

using namespace emcert;

namespace {

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_graph(const MemGraph& a, const MemGraph& b) {
  return a.n == b.n && a.adj == b.adj;
}

}  // namespace

TEST_CASE("single edge round-trips with the documented layout") {
  emtest::TempDir td("single");
  MemGraph g = emtest::from_edges(2, {{1, 2}});
  Graph h = store_graph(g, td.path / "g.arg");
  CHECK(h.n == 2);
  CHECK(h.m == 1);

  std::string bytes = file_bytes(td.path / "g.arg");
  REQUIRE(bytes.size() == 20 + 8 * 3 + 8 * 2);
  CHECK(bytes.substr(0, 4) == "ARG1");
  // P = [0,1,2], E = [2,1], little-endian
  const unsigned char* b = reinterpret_cast<const unsigned char*>(bytes.data());
  CHECK(b[20] == 0);
  CHECK(b[28] == 1);
  CHECK(b[36] == 2);
  CHECK(b[44] == 2);
  CHECK(b[52] == 1);
}

TEST_CASE("missing reverse arc is reported as asymmetry") {
  emtest::TempDir td("asym");
  // Hand-build a malformed file: vertex 1 lists 2, but 2 only lists 3.
  // n=3, m=1, P=[0,1,2,2], E=[2,3]
  fs::path p = td.path / "bad.arg";
  {
    std::ofstream out(p, std::ios::binary);
    out.write("ARG1", 4);
    auto w64 = [&](std::uint64_t v) {
      char buf[8];
      for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
      out.write(buf, 8);
    };
    for (std::uint64_t v : {3ull, 1ull, 0ull, 1ull, 2ull, 2ull, 2ull, 3ull})
      w64(v);
  }
  Graph g = Graph::load(p);
  Kernel k({16, 64}, td.path / "k");
  auto violation = validate_graph(k, g);
  REQUIRE(violation.has_value());
  CHECK(violation->find("missing reverse arc") != std::string::npos);
}

TEST_CASE("loader rejects malformed headers") {
  emtest::TempDir td("hdr");
  fs::path p = td.path / "bad.arg";
  {
    std::ofstream out(p, std::ios::binary);
    out.write("NOPE", 4);
  }
  CHECK_THROWS_AS(Graph::load(p), graph_format_error);
  {
    std::ofstream out(p, std::ios::binary);
    out.write("ARG1", 4);
    // n=5 claimed but the file ends here
  }
  CHECK_THROWS_AS(Graph::load(p), graph_format_error);
}

TEST_CASE("validator accepts clean graphs and catches self-loops") {
  emtest::TempDir td("val");
  Kernel k({16, 64}, td.path / "k");
  Graph ok = store_graph(emtest::triangle_pendant_graph(), td.path / "ok.arg");
  CHECK(!validate_graph(k, ok).has_value());

  MemGraph bad(2);
  bad.adj[1] = {1, 2};
  bad.adj[2] = {1, 2};
  Graph loop = store_graph(bad, td.path / "loop.arg");
  auto v = validate_graph(k, loop);
  REQUIRE(v.has_value());
  CHECK(v->find("self-loop") != std::string::npos);
}

TEST_CASE("store/load round-trip is byte-identical for random graphs") {
  emtest::TempDir td("rt");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    MemGraph g = emtest::random_graph(1 + rng() % 12, 0.4, rng());
    Graph h = store_graph(g, td.path / "a.arg");
    MemGraph back = load_mem_graph(h.path);
    store_graph(back, td.path / "b.arg");
    REQUIRE(file_bytes(td.path / "a.arg") == file_bytes(td.path / "b.arg"));
  }
}

TEST_CASE("edge list conversion") {
  SUBCASE("self-loop rejected") {
    std::istringstream in("1 2\n3 3\n");
    CHECK_THROWS_AS(parse_edge_list(in), graph_format_error);
  }
  SUBCASE("duplicates removed and counted") {
    std::istringstream in("1 2\n2 1\n1 2\n");
    auto res = parse_edge_list(in);
    CHECK(res.duplicates == 2);
    CHECK(res.graph.m() == 1);
  }
  SUBCASE("round-trip") {
    MemGraph g = emtest::q3_graph();
    std::ostringstream out;
    write_edge_list(g, out);
    std::istringstream in(out.str());
    auto res = parse_edge_list(in);
    CHECK(same_graph(res.graph, g));
  }
  SUBCASE("vertex count override pads isolated vertices") {
    std::istringstream in("1 2\n");
    auto res = parse_edge_list(in, 5);
    CHECK(res.graph.n == 5);
    CHECK(res.graph.degree(5) == 0);
  }
}

TEST_CASE("adjacency scanner streams vertices and neighbors in order") {
  emtest::TempDir td("scan");
  Kernel k({16, 64}, td.path / "k");
  Graph g = store_graph(emtest::triangle_pendant_graph(), td.path / "g.arg");
  AdjacencyScanner sc(k, g);
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> seen;
  while (sc.next_vertex()) {
    std::vector<std::uint64_t> nbrs;
    std::uint64_t w;
    while (sc.next_neighbor(w)) nbrs.push_back(w);
    seen.push_back({sc.vertex(), nbrs});
  }
  REQUIRE(seen.size() == 4);
  CHECK(seen[0].second == std::vector<std::uint64_t>{2, 3, 4});
  CHECK(seen[3].second == std::vector<std::uint64_t>{1});
}

TEST_CASE("degree orderings follow the tie rules") {
  emtest::TempDir td("deg");
  Kernel k({16, 64}, td.path / "k");

  SUBCASE("triangle+pendant nondecreasing") {
    Graph g = store_graph(emtest::triangle_pendant_graph(), td.path / "g.arg");
    Ordering ord = degree_ordering(k, g, OrderingRole::nondecreasing_degree);
    CHECK(ord.to_vector(k) == std::vector<std::uint64_t>{4, 2, 3, 1});
  }
  SUBCASE("star nonincreasing") {
    Graph g = store_graph(emtest::star_graph(3), td.path / "g.arg");
    Ordering ord = degree_ordering(k, g, OrderingRole::nonincreasing_degree);
    CHECK(ord.to_vector(k) == std::vector<std::uint64_t>{1, 2, 3, 4});
  }
  SUBCASE("edgeless all ties") {
    Graph g = store_graph(emtest::edgeless_graph(3), td.path / "g.arg");
    CHECK(degree_ordering(k, g, OrderingRole::nondecreasing_degree).to_vector(k) ==
          std::vector<std::uint64_t>{1, 2, 3});
    CHECK(degree_ordering(k, g, OrderingRole::nonincreasing_degree).to_vector(k) ==
          std::vector<std::uint64_t>{1, 2, 3});
  }
}

TEST_CASE("degree orderings are monotone permutations on random graphs") {
  emtest::TempDir td("degprop");
  Kernel k({16, 64}, td.path / "k");
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    MemGraph g = emtest::random_graph(1 + rng() % 10, 0.4, rng());
    Graph gd = store_graph(g, td.path / "g.arg");
    for (auto dir : {OrderingRole::nondecreasing_degree,
                     OrderingRole::nonincreasing_degree}) {
      Ordering ord = degree_ordering(k, gd, dir);
      auto perm = ord.to_vector(k);
      REQUIRE(is_permutation(k, ord, g.n));
      for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
        std::uint64_t a = g.degree(perm[i]), b = g.degree(perm[i + 1]);
        if (dir == OrderingRole::nondecreasing_degree)
          REQUIRE(a <= b);
        else
          REQUIRE(a >= b);
        if (a == b) REQUIRE(perm[i] < perm[i + 1]);
      }
    }
  }
}

TEST_CASE("relabel") {
  emtest::TempDir td("rel");
  Kernel k({16, 128}, td.path / "k");
  MemGraph tp = emtest::triangle_pendant_graph();
  Graph g = store_graph(tp, td.path / "g.arg");

  SUBCASE("identity ordering leaves the graph unchanged") {
    Ordering id = Ordering::from_vector(k, {1, 2, 3, 4}, OrderingRole::peo);
    Graph h = relabel(k, g, id);
    CHECK(same_graph(load_mem_graph(h.path), tp));
  }

  SUBCASE("pendant becomes vertex 1 under the degree ordering") {
    Ordering ord = degree_ordering(k, g, OrderingRole::nondecreasing_degree);
    Graph h = relabel(k, g, ord);
    MemGraph hm = load_mem_graph(h.path);
    // rank 1 = old vertex 4 (the pendant), attached to old 1 = rank 4
    CHECK(hm.degree(1) == 1);
    CHECK(hm.adj[1] == std::vector<std::uint64_t>{4});
    CHECK(hm.degree(4) == 3);
  }

  SUBCASE("relabel then inverse-relabel restores the graph") {
    Ordering ord = degree_ordering(k, g, OrderingRole::nondecreasing_degree);
    Graph h = relabel(k, g, ord);
    // inverse permutation: rank of old id i
    auto perm = ord.to_vector(k);
    std::vector<std::uint64_t> inv(perm.size());
    for (std::uint64_t r = 0; r < perm.size(); ++r) inv[perm[r] - 1] = r + 1;
    Ordering back = Ordering::from_vector(k, inv, OrderingRole::peo);
    Graph g2 = relabel(k, h, back);
    CHECK(same_graph(load_mem_graph(g2.path), tp));
  }
}

TEST_CASE("neighbor splits") {
  emtest::TempDir td("split");
  Kernel k({16, 64}, td.path / "k");
  Graph c4 = store_graph(emtest::cycle_graph(4), td.path / "c4.arg");
  auto s1 = neighbor_split(k, c4, 1);
  CHECK(s1.higher == std::vector<std::uint64_t>{2, 4});
  CHECK(s1.lower.empty());
  auto s4 = neighbor_split(k, c4, 4);
  CHECK(s4.higher.empty());
  CHECK(s4.lower == std::vector<std::uint64_t>{1, 3});

  MemGraph iso(3);
  iso.add_edge(1, 2);
  iso.normalize();
  Graph gi = store_graph(iso, td.path / "iso.arg");
  auto s3 = neighbor_split(k, gi, 3);
  CHECK(s3.lower.empty());
  CHECK(s3.higher.empty());
}

TEST_CASE("sum of |H| equals sum of |L| equals m for any relabeling") {
  emtest::TempDir td("sums");
  Kernel k({16, 128}, td.path / "k");
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    MemGraph g = emtest::random_graph(8, 0.5, rng());
    Graph gd = store_graph(g, td.path / "g.arg");
    std::vector<std::uint64_t> perm(g.n);
    for (std::uint64_t i = 0; i < g.n; ++i) perm[i] = i + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    Graph h = relabel(k, gd, Ordering::from_vector(k, perm, OrderingRole::peo));
    std::uint64_t hs = 0, ls = 0;
    for (std::uint64_t v = 1; v <= g.n; ++v) {
      auto s = neighbor_split(k, h, v);
      hs += s.higher.size();
      ls += s.lower.size();
    }
    CHECK(hs == g.m());
    CHECK(ls == g.m());
  }
}

TEST_CASE("augmented view") {
  emtest::TempDir td("view");
  Kernel k({16, 64}, td.path / "k");
  MemGraph c4 = emtest::cycle_graph(4);
  Graph g = store_graph(c4, td.path / "c4.arg");

  SUBCASE("clique side gains the missing diagonal") {
    AugmentedView v{&g, {1, 3}};
    CHECK(view_neighbors(k, v, 1) == std::vector<std::uint64_t>{2, 3, 4});
    CHECK(view_is_edge_clique(v, 1, 3));
    CHECK(!view_is_edge_clique(v, 1, 2));
    CHECK(v.degree(k, 1) == 3);
    CHECK(v.degree(k, 2) == 2);
  }
  SUBCASE("outside the clique the base adjacency is unchanged") {
    AugmentedView v{&g, {1, 3}};
    CHECK(view_neighbors(k, v, 2) == std::vector<std::uint64_t>{1, 3});
  }
  SUBCASE("singleton clique set is the identity view") {
    AugmentedView v{&g, {2}};
    for (std::uint64_t u = 1; u <= 4; ++u)
      CHECK(view_neighbors(k, v, u) == c4.adj[u]);
  }
  SUBCASE("degree formula matches explicit materialization") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      // independent member set inside a random bipartite-ish graph
      MemGraph base(8);
      std::vector<std::uint64_t> side;
      for (std::uint64_t v = 1; v <= 8; ++v)
        if (v % 2 == 0) side.push_back(v);
      for (std::uint64_t u = 1; u <= 8; u += 2)
        for (std::uint64_t w : side)
          if (rng() % 2) base.add_edge(u, w);
      base.normalize();
      Graph bd = store_graph(base, td.path / "b.arg");
      AugmentedView v{&bd, side};

      MemGraph mat = base;
      for (std::size_t i = 0; i < side.size(); ++i)
        for (std::size_t j = i + 1; j < side.size(); ++j)
          mat.add_edge(side[i], side[j]);
      mat.normalize();
      for (std::uint64_t u = 1; u <= 8; ++u) {
        REQUIRE(v.degree(k, u) == mat.degree(u));
        REQUIRE(view_neighbors(k, v, u) == mat.adj[u]);
      }
    }
  }
}
