#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mk/corpus.hpp"
#include "mk/spec_io.hpp"

using namespace mk;

namespace {

const std::string data_dir = MK_DATA_DIR;

SpecDocument corpus_document() {
  SpecDocument doc;
  for (const auto &e : maltsev_corpus())
    add_algebra(doc, e.algebra);
  add_algebra(doc, semilattice2());
  for (const auto &f : form_corpus())
    add_form(doc, f);
  for (const auto &x : bimodule_corpus())
    add_dbimodule(doc, x);
  for (const auto &e : extension_corpus())
    if (crext_check(e.ext).ok)
      add_diagram(doc, e.name, e.ext);
  for (const auto &h : enumerate_herds(3))
    add_tern(doc, h);
  add_linext(doc, "ce", counterexample_extension());
  return doc;
}

SpecError parse_error(const std::string &text) {
  try {
    parse(text);
  } catch (const SpecError &e) {
    return e;
  }
  FAIL("no error for: " << text);
  throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("the Z2 example parses") {
  const SpecDocument d = parse("algebra Z2 { size 2 op plus/2 = [0 1 1 0] }");
  REQUIRE(d.algebras.size() == 1);
  const FiniteAlgebra &z2 = d.algebras.at("Z2");
  CHECK(z2.size() == 2);
  const std::vector<Element> args{1, 1};
  CHECK(z2.apply(*z2.find_op("plus"), args) == 0);
  CHECK(d.kind("Z2") == EntityKind::algebra);
}

TEST_CASE("wrong table length is E_TABLE_LEN with a position") {
  const SpecError e = parse_error("algebra A {\n  size 2 op f/2 = [0 1 1]\n}\n");
  CHECK(e.code() == std::string("E_TABLE_LEN"));
  CHECK(e.line() == 2);
  CHECK(e.column() > 0);
  CHECK(e.source() == "<input>");
}

TEST_CASE("module law failure is E_INVARIANT naming the law") {
  const SpecError e = parse_error("ring Z2 { size 2 add = [0 1 1 0] mul = [0 0 0 1] }\n"
                                  "module M over Z2 { size 2 add = [0 1 1 0] act = [0 1 0 1] }\n");
  CHECK(e.code() == std::string("E_INVARIANT"));
  CHECK(e.line() == 2);
  CHECK_FALSE(e.message().empty());
  CHECK(e.message().find("at (") != std::string::npos);
}

TEST_CASE("dangling references and duplicates") {
  CHECK(parse_error("form F on Q { d = [0] }").code() == std::string("E_DANGLING"));
  CHECK(parse_error("cong c on A { blocks: 0 | 1 }").code() == std::string("E_DANGLING"));
  const SpecError dup = parse_error("algebra A { size 1 }\nalgebra A { size 1 }\n");
  CHECK(dup.line() == 2);
}

TEST_CASE("syntax errors") {
  CHECK(parse_error("algebra { size 1 }").code() == std::string("E_SYNTAX"));
  CHECK(parse_error("algebra A { size 2 op f/2 = [0 1 1 x] }").code() == std::string("E_SYNTAX"));
  CHECK(parse_error("widget A { }").code() == std::string("E_SYNTAX"));
  CHECK(parse_error("algebra \"A { size 1 }").code() == std::string("E_SYNTAX"));
}

TEST_CASE("comments, quoted names and optional '='") {
  const SpecDocument d = parse("# leading comment\n"
                               "algebra \"my alg\" { # trailing\n size 2\n op f/1 [1 0]\n}\n"
                               "cong c on \"my alg\" { blocks: 0 1 }\n");
  CHECK(d.algebras.count("my alg") == 1);
  CHECK(d.congruences.at("c").theta.is_total());
}

TEST_CASE("non-congruence partitions are refused") {
  const std::string z4 = "algebra Z4 { size 4 op plus/2 = [0 1 2 3 1 2 3 0 2 3 0 1 3 0 1 2] }\n";
  CHECK_NOTHROW(parse(z4 + "cong half on Z4 { blocks: 0 2 | 1 3 }"));
  CHECK(parse_error(z4 + "cong bad on Z4 { blocks: 0 1 | 2 3 }").code() == std::string("E_INVARIANT"));
}

TEST_CASE("serialize then parse is the identity on the corpus document") {
  const SpecDocument d = corpus_document();
  CHECK(d.order.size() > 100);
  const std::string text = serialize(d);
  const SpecDocument back = parse(text);
  CHECK(serialize(back) == text);
  CHECK(back.order == d.order);
}

TEST_CASE("checked-in data files load and round trip") {
  for (const std::string f : {"d4.alg", "q8.alg", "s3.alg", "semi.alg", "z4affine.alg", "forms.form",
                              "bimodules.form", "extensions.form", "counterexample.mon"}) {
    INFO(f);
    SpecDocument d;
    REQUIRE_NOTHROW(load_file(d, data_dir + "/" + f));
    CHECK_FALSE(d.order.empty());
    const std::string text = serialize(d);
    CHECK(serialize(parse(text)) == text);
  }
  SpecDocument d;
  CHECK_THROWS_AS(load_file(d, data_dir + "/missing.alg"), DomainError);
}

TEST_CASE("loaded structures keep their meaning") {
  SpecDocument d;
  load_file(d, data_dir + "/bimodules.form");
  CHECK(d.dbimodules.size() == 42);
  const DBimodule &c = d.dbimodules.at("C(Z4)").value;
  const DerivationReport r = enumerate_derivations(c);
  CHECK(r.der.size() == 1);
  CHECK(r.h0.size() == 4);

  SpecDocument m;
  load_file(m, data_dir + "/counterexample.mon");
  const MonoidExtension &ce = m.linexts.at("ce").value;
  CHECK(check_linear_extension(ce));
  CHECK_FALSE(check_untwisted(ce).has_value());
  CHECK(ce.labels == std::vector<std::string>{"1", "00", "01", "10", "11"});
}

TEST_CASE("builders reuse structurally equal dependencies") {
  SpecDocument d;
  add_form(d, LinearForm::identity(FiniteRing::cyclic(4)));
  const auto rings = d.names(EntityKind::ring);
  add_dbimodule(d, DBimodule::cone(LinearForm::identity(FiniteRing::cyclic(4)),
                                   Bimodule::regular(FiniteRing::cyclic(4))));
  CHECK(d.names(EntityKind::ring) == rings);
  CHECK(d.names(EntityKind::form).size() == 1);
}
