#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "group_oracle.hpp"
#include "mk/commutator.hpp"
#include "mk/congruence.hpp"
#include "mk/corpus.hpp"
#include "mk/error.hpp"
#include "mk/maltsev.hpp"

using namespace mk;

namespace {

TermOp term_of(const CorpusEntry &e) { return parse_term(e.algebra, e.maltsev_term, 3); }

} // namespace

TEST_CASE("congruences of a group are the coset partitions of normal subgroups") {
  for (const auto &e : maltsev_corpus()) {
    if (!e.is_group)
      continue;
    const oracle::Group g(e.algebra);
    std::vector<Congruence> expected;
    for (const auto &n : g.normal_subgroups())
      expected.push_back(g.cosets(n));
    std::sort(expected.begin(), expected.end());
    INFO(e.algebra.name());
    CHECK(all_congruences(e.algebra) == expected);
  }
}

TEST_CASE("commutator of congruences matches the commutator subgroup") {
  for (const auto &e : maltsev_corpus()) {
    if (!e.is_group)
      continue;
    const oracle::Group g(e.algebra);
    const TermOp p = term_of(e);
    const auto normals = g.normal_subgroups();
    for (const auto &a : normals)
      for (const auto &b : normals) {
        INFO(e.algebra.name() << " " << g.cosets(a).to_string() << " " << g.cosets(b).to_string());
        CHECK(commutator(e.algebra, g.cosets(a), g.cosets(b), p) == g.cosets(g.commutator(a, b)));
      }
  }
}

TEST_CASE("commutator agrees with the lattice oracle on every corpus algebra") {
  for (const auto &e : maltsev_corpus()) {
    const TermOp p = term_of(e);
    const auto l = all_congruences(e.algebra);
    CommutatorOracle orc(e.algebra, p);
    for (const auto &r : l)
      for (const auto &s : l) {
        INFO(e.algebra.name() << " R=" << r.to_string() << " S=" << s.to_string());
        CHECK(commutator(e.algebra, r, s, p) == orc(r, s));
      }
  }
}

TEST_CASE("commutator properties") {
  for (const auto &e : maltsev_corpus()) {
    const TermOp p = term_of(e);
    const auto l = all_congruences(e.algebra);
    for (const auto &r : l)
      for (const auto &s : l) {
        const Congruence c = commutator(e.algebra, r, s, p);
        CHECK(c.leq(meet(r, s)));
        CHECK(c == commutator(e.algebra, s, r, p));
        CHECK(centralize(e.algebra, r, s, p) == c.is_diagonal());
        for (const auto &r2 : l)
          if (r2.leq(r))
            CHECK(commutator(e.algebra, r2, s, p).leq(c));
      }
  }
}

TEST_CASE("center and nilpotence class against the group oracle") {
  for (const auto &e : maltsev_corpus()) {
    if (!e.is_group)
      continue;
    const oracle::Group g(e.algebra);
    const TermOp p = term_of(e);
    INFO(e.algebra.name());
    CHECK(center(e.algebra, p) == g.cosets(g.center()));
    CHECK(nilpotence_class(e.algebra, p) == g.nilpotence_class());
    CHECK(is_abelian(e.algebra, p) == g.abelian());
  }
}

TEST_CASE("named classes") {
  const auto cls = [](const FiniteAlgebra &a) {
    return nilpotence_class(a, parse_term(a, kGroupMaltsevTerm, 3));
  };
  CHECK(cls(dihedral_group(4)) == 2);
  CHECK(cls(quaternion_group()) == 2);
  CHECK_FALSE(cls(symmetric_group3()).has_value());
  CHECK(cls(cyclic_group(6)) == 1);
  CHECK(cls(cyclic_group(1)) == 0);
}

TEST_CASE("series reports") {
  const FiniteAlgebra d4 = dihedral_group(4);
  const TermOp p = parse_term(d4, kGroupMaltsevTerm, 3);
  const SeriesReport lo = lower_series(d4, p);
  CHECK(lo.stabilized);
  REQUIRE(lo.terms.size() == 3);
  CHECK(lo.terms.front().is_total());
  CHECK(lo.terms.back().is_diagonal());
  const SeriesReport up = upper_series(d4, p);
  REQUIRE(up.terms.size() == 3);
  CHECK(up.terms.front().is_diagonal());
  CHECK(up.terms.back().is_total());
  const SeriesReport s3 = lower_series(symmetric_group3(), parse_term(symmetric_group3(), kGroupMaltsevTerm, 3));
  CHECK_FALSE(s3.nilpotence_class.has_value());
}

TEST_CASE("quasigroups in the corpus") {
  for (const auto &e : maltsev_corpus()) {
    if (e.is_group)
      continue;
    const TermOp p = term_of(e);
    INFO(e.algebra.name());
    CHECK_NOTHROW(require_maltsev(e.algebra, p));
    CHECK(center(e.algebra, p).leq(Congruence::total(e.algebra.size())));
  }
}

TEST_CASE("non-Maltsev terms are rejected") {
  const FiniteAlgebra z3 = cyclic_group(3);
  CHECK_THROWS_AS(require_maltsev(z3, projection(z3, 3, 0)), NotMaltsev);
  const FiniteAlgebra s = semilattice2();
  CHECK_THROWS_AS(center(s, projection(s, 3, 2)), NotMaltsev);
}
