#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "emcert/certificates.hpp"
#include "emcert/graph.hpp"
#include "test_util.hpp"

#ifndef EMCERT_CLI_PATH
#define EMCERT_CLI_PATH "emcert"
#endif

using namespace emcert;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(EMCERT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli exit-code contract") {
  emtest::TempDir td("cli");
  fs::path star = td.path / "star.arg";
  store_graph(emtest::star_graph(3), star);
  fs::path c4 = td.path / "c4.arg";
  store_graph(emtest::cycle_graph(4), c4);
  fs::path cert = td.path / "out.cert";

  SUBCASE("member exits 0 and writes the certificate") {
    CHECK(run("certify --class threshold --in " + star.string() + " --cert " +
              cert.string() + " --block-size 8 --memory 64") == 0);
    Certificate c = certificate_from_string(slurp(cert));
    CHECK(c.yes());
    CHECK(std::get<ThresholdYes>(c.payload).beta ==
          std::vector<std::uint64_t>{2, 3});
    CHECK(run("authenticate --in " + star.string() + " --cert " +
              cert.string()) == 0);
  }
  SUBCASE("non-member exits 1 with the expected witness") {
    CHECK(run("certify --class split --in " + c4.string() + " --cert " +
              cert.string() + " --block-size 8 --memory 64") == 1);
    Certificate c = certificate_from_string(slurp(cert));
    CHECK(!c.yes());
    CHECK(c.witness().kind == WitnessKind::c4);
    CHECK(run("authenticate --in " + c4.string() + " --cert " + cert.string()) ==
          0);
  }
  SUBCASE("missing file exits 2") {
    CHECK(run("certify --class split --in " + (td.path / "nope.arg").string()) ==
          2);
  }
  SUBCASE("tampered certificate exits 3") {
    CHECK(run("certify --class split --in " + star.string() + " --cert " +
              cert.string() + " --block-size 8 --memory 64") == 0);
    Certificate c = certificate_from_string(slurp(cert));
    auto& p = std::get<SplitYes>(c.payload);
    std::swap(p.K.front(), p.I.front());
    std::ofstream f(cert);
    write_certificate(c, f);
    f.close();
    CHECK(run("authenticate --in " + star.string() + " --cert " +
              cert.string()) == 3);
  }
  SUBCASE("a mismatching --class flag is rejected with exit 3") {
    CHECK(run("certify --class split --in " + star.string() + " --cert " +
              cert.string() + " --block-size 8 --memory 64") == 0);
    CHECK(run("authenticate --in " + star.string() + " --cert " +
              cert.string() + " --class threshold") == 3);
  }
  SUBCASE("oracle engine agrees") {
    CHECK(run("certify --class split --in " + c4.string() +
              " --engine oracle") == 1);
    CHECK(run("certify --class bipartite --in " + c4.string() +
              " --engine oracle") == 0);
  }
  SUBCASE("empty bench size list yields a header-only csv") {
    fs::path csv = td.path / "b.csv";
    CHECK(run("bench --classes split --out " + csv.string()) == 0);
    std::istringstream ss(slurp(csv));
    std::string l1, l2, rest;
    std::getline(ss, l1);
    std::getline(ss, l2);
    CHECK(l1.rfind("#", 0) == 0);
    CHECK(l2.rfind("class,", 0) == 0);
    CHECK(!std::getline(ss, rest));
  }
  SUBCASE("generate round-trips through certify") {
    fs::path g = td.path / "gen.arg";
    CHECK(run("generate --class split --n 120 --seed 3 --shuffle --out " +
              g.string()) == 0);
    CHECK(run("certify --class split --in " + g.string() +
              " --block-size 16 --memory 256") == 0);
  }
}
