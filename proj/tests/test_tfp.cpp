#include <doctest.h>

#include <queue>
#include <random>
#include <vector>

#include "emcert/tfp.hpp"
#include "test_util.hpp"

using namespace emcert;

TEST_CASE("pq pops the minimum recipient") {
  emtest::TempDir td("pqmin");
  Kernel k({16, 64}, td.path / "k");
  MessagePQ pq(k);
  pq.push({5, 1, 0, 0});
  pq.push({2, 1, 0, 0});
  pq.push({9, 1, 0, 0});
  CHECK(pq.pop_min().recipient == 2);
  CHECK(pq.pop_min().recipient == 5);
  CHECK(pq.pop_min().recipient == 9);
  CHECK(pq.empty());
}

TEST_CASE("equal recipients tie-break by sender") {
  emtest::TempDir td("pqtie");
  Kernel k({16, 64}, td.path / "k");
  MessagePQ pq(k);
  pq.push({4, 7, 0, 0});
  pq.push({4, 3, 0, 0});
  CHECK(pq.pop_min().sender == 3);
  CHECK(pq.pop_min().sender == 7);
}

TEST_CASE("pop on empty queue throws") {
  emtest::TempDir td("pqempty");
  Kernel k({16, 64}, td.path / "k");
  MessagePQ pq(k);
  CHECK(pq.empty());
  CHECK_THROWS_AS(pq.pop_min(), empty_queue_error);
}

TEST_CASE("pq matches an in-memory heap over random interleavings") {
  emtest::TempDir td("pqheap");
  // Tight budget so runs spill and consolidate.
  Kernel k({16, 64}, td.path / "k");
  MessagePQ pq(k);
  std::priority_queue<Message, std::vector<Message>, std::greater<>> oracle;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 10000; ++i) {
    bool do_push = oracle.empty() || rng() % 3 != 0;
    if (do_push) {
      Message m{rng() % 500, rng() % 50, rng() % 10, 0};
      pq.push(m);
      oracle.push(m);
    } else {
      Message got = pq.pop_min();
      Message expect = oracle.top();
      oracle.pop();
      REQUIRE(got == expect);
    }
  }
  while (!oracle.empty()) {
    REQUIRE(pq.pop_min() == oracle.top());
    oracle.pop();
  }
  CHECK(pq.empty());
  CHECK(k.memory_high_water() <= k.memory_records());
}

TEST_CASE("mailbox delivers grouped messages in sender order") {
  emtest::TempDir td("mbx");
  Kernel k({16, 128}, td.path / "k");
  TfpMailbox mb(k);

  mb.send(4, 2, 11);
  mb.send(4, 1, 12);
  mb.send(4, 2, 10);
  mb.send(6, 1, 9);

  CHECK(mb.deliver_all_for(3).empty());
  auto msgs = mb.deliver_all_for(4);
  REQUIRE(msgs.size() == 3);
  CHECK(msgs[0].sender == 1);
  CHECK(msgs[1].sender == 2);
  CHECK(msgs[1].a == 10);
  CHECK(msgs[2].a == 11);
  CHECK(mb.messages_sent() == 4);
}

TEST_CASE("mailbox enforces topological protocol") {
  emtest::TempDir td("proto");
  Kernel k({16, 128}, td.path / "k");

  SUBCASE("delivering a rank twice") {
    TfpMailbox mb(k);
    mb.deliver_all_for(5);
    CHECK_THROWS_AS(mb.deliver_all_for(5), protocol_error);
    CHECK_THROWS_AS(mb.deliver_all_for(3), protocol_error);
  }
  SUBCASE("sending into the past") {
    TfpMailbox mb(k);
    mb.deliver_all_for(5);
    CHECK_THROWS_AS(mb.send(4, 1, 0), protocol_error);
  }
  SUBCASE("skipping a rank that still has mail") {
    TfpMailbox mb(k);
    mb.send(2, 1, 0);
    CHECK_THROWS_AS(mb.deliver_all_for(3), protocol_error);
  }
}

TEST_CASE("tfp over a random DAG equals direct simulation") {
  // Vertices 1..n, edges only forward; every vertex forwards (its own
  // value) to its successors. The mailbox run must see exactly the inbox
  // the materialized adjacency predicts.
  emtest::TempDir td("dag");
  Kernel k({16, 128}, td.path / "k");
  std::mt19937_64 rng(1234);
  const std::uint64_t n = 200;
  std::vector<std::vector<std::uint64_t>> succ(n + 1);
  for (std::uint64_t u = 1; u <= n; ++u)
    for (std::uint64_t v = u + 1; v <= n; ++v)
      if (rng() % 100 < 5) succ[u].push_back(v);

  std::vector<std::vector<Message>> expected(n + 1);
  for (std::uint64_t u = 1; u <= n; ++u)
    for (std::uint64_t v : succ[u]) expected[v].push_back({v, u, u * 10, 0});

  TfpMailbox mb(k);
  for (std::uint64_t v = 1; v <= n; ++v) {
    auto inbox = mb.deliver_all_for(v);
    REQUIRE(inbox == expected[v]);
    for (std::uint64_t w : succ[v]) mb.send(w, v, v * 10);
  }
}
