#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

#include "process.hpp"

using nlohmann::json;

namespace {

const std::string data = MK_DATA_DIR;

proc::Result mk(const std::string &args) { return proc::run(proc::quote(MK_BINARY) + " " + args); }

std::string file(const std::string &name) { return proc::quote(data + "/" + name); }

json mk_json(const std::string &args, int expect = 0) {
  const proc::Result r = mk(args);
  INFO(args);
  REQUIRE(r.status == expect);
  return json::parse(r.out);
}

} // namespace

TEST_CASE("counterexample matches the golden file byte for byte") {
  std::ifstream in(std::string(MK_GOLDEN_DIR) + "/counterexample.txt", std::ios::binary);
  REQUIRE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  const proc::Result r = mk("counterexample --golden");
  CHECK(r.status == 0);
  CHECK(r.out == golden.str());
}

TEST_CASE("successful verbs exit 0") {
  const json n = mk_json("nilpotence " + file("d4.alg"));
  CHECK(n["class"] == 2);
  CHECK(n["lower"].size() == 3);
  CHECK(mk_json("nilpotence " + file("s3.alg"))["class"].is_null());

  const json m = mk_json("maltsev-term " + file("semi.alg"));
  CHECK(m["found"] == false);
  CHECK(m["complete"] == true);

  const json c = mk_json("congruences " + file("d4.alg"));
  CHECK(c["congruences"].size() == 6);

  const json z = mk_json("center " + file("q8.alg"));
  CHECK(z["center"] == json::parse("[[0,4],[1,5],[2,6],[3,7]]"));

  const json d = mk_json("derivations " + file("bimodules.form") + " 'C(Z4)'");
  CHECK(d["cardinality_identity"] == true);

  const json l = mk_json("untwisted-check " + file("counterexample.mon") + " ce");
  CHECK(l["untwisted"] == false);
}

TEST_CASE("domain errors exit 1 with a JSON error") {
  const json e = mk_json("abelianize " + file("s3.alg"), 1);
  CHECK(e["error"] == "NotAbelian");
}

TEST_CASE("parse diagnostics carry a position") {
  const std::string bad = "/tmp/mk_test_cli_bad.alg";
  std::ofstream(bad) << "algebra A {\n  size 2 op f/2 = [0 1]\n}\n";
  const json e = mk_json("congruences " + proc::quote(bad), 1);
  CHECK(e["error"] == "E_TABLE_LEN");
  CHECK(e["line"] == 2);
  std::remove(bad.c_str());
}

TEST_CASE("budget overruns exit 2") {
  const json e = mk_json("clone " + file("s3.alg") + " --arity 2 --budget 5", 2);
  CHECK(e["error"] == "CloneBudgetExceeded");
}

TEST_CASE("usage errors exit 64") {
  CHECK(mk("").status == 64);
  CHECK(mk("no-such-verb").status == 64);
  CHECK(mk("nilpotence").status == 64);
  // a positional that is not a file is an entity name
  CHECK(mk("congruences " + file("missing.alg")).status == 64);
  CHECK(mk("nilpotence " + file("d4.alg") + " --threads zero").status == 64);
}

TEST_CASE("thread count does not change output") {
  for (const std::string args : {"congruences " + file("d4.alg"), "commutator " + file("q8.alg"),
                                 "derivations " + file("bimodules.form") + " 'C(Z4)'"}) {
    const proc::Result one = mk(args + " --threads 1");
    const proc::Result four = mk(args + " --threads 4");
    INFO(args);
    CHECK(one.status == 0);
    CHECK(one.out == four.out);
  }
}
