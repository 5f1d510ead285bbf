#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "mk/congruence.hpp"
#include "mk/corpus.hpp"
#include "mk/error.hpp"

using namespace mk;

namespace {

// Every partition of {0..n-1} as restricted growth strings.
std::vector<Congruence> all_partitions(int n) {
  std::vector<Congruence> out;
  std::vector<Element> labels(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      out.push_back(Congruence::from_labels(labels));
      return;
    }
    for (int b = 0; b <= used && b < n; ++b) {
      labels[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0)
    return {Congruence::from_labels(labels)};
  rec(0, 0);
  return out;
}

std::vector<Congruence> lattice_oracle(const FiniteAlgebra &alg) {
  std::vector<Congruence> out;
  for (const auto &p : all_partitions(alg.size()))
    if (!congruence_violation(alg, p))
      out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("Bell numbers from the partition oracle") {
  CHECK(all_partitions(1).size() == 1);
  CHECK(all_partitions(4).size() == 15);
  CHECK(all_partitions(6).size() == 203);
}

TEST_CASE("canonical block form") {
  const std::vector<Element> labels{5, 5, 2, 5};
  const Congruence c = Congruence::from_labels(labels);
  CHECK(c.block_count() == 2);
  CHECK(c.blocks() == std::vector<std::vector<Element>>{{0, 1, 3}, {2}});
  CHECK(c == Congruence::from_blocks(4, {{2}, {3, 0, 1}}));
  CHECK(Congruence::diagonal(3).is_diagonal());
  CHECK(Congruence::total(3).is_total());
  CHECK(Congruence::diagonal(4).leq(c));
  CHECK(c.leq(Congruence::total(4)));
  CHECK_FALSE(c.leq(Congruence::diagonal(4)));
}

TEST_CASE("lattice equals the filtered partitions on the corpus") {
  for (const auto &e : maltsev_corpus()) {
    if (e.algebra.size() > 6)
      continue;
    INFO(e.algebra.name());
    CHECK(all_congruences(e.algebra) == lattice_oracle(e.algebra));
  }
  CHECK(all_congruences(semilattice2()) == lattice_oracle(semilattice2()));
}

TEST_CASE("lattice of D4 has the six normal subgroups") {
  CHECK(all_congruences(dihedral_group(4)).size() == 6);
  CHECK(all_congruences(quaternion_group()).size() == 6);
  CHECK(all_congruences(cyclic_group(8)).size() == 4);
  CHECK(all_congruences(power(cyclic_group(2), 3)).size() == 16);
}

TEST_CASE("cg is the least congruence containing the pair") {
  for (const auto &e : maltsev_corpus()) {
    if (e.algebra.size() > 6)
      continue;
    const auto lattice = lattice_oracle(e.algebra);
    for (Element a = 0; a < e.algebra.size(); ++a)
      for (Element b = a + 1; b < e.algebra.size(); ++b) {
        const Congruence c = cg(e.algebra, a, b);
        CHECK(!congruence_violation(e.algebra, c));
        CHECK(c.related(a, b));
        for (const auto &t : lattice)
          if (t.related(a, b))
            CHECK(c.leq(t));
      }
  }
}

TEST_CASE("meet and join are lattice operations") {
  const FiniteAlgebra g = dihedral_group(4);
  const auto l = all_congruences(g);
  for (const auto &a : l)
    for (const auto &b : l) {
      const Congruence m = meet(a, b), j = join(g, a, b);
      CHECK(m.leq(a));
      CHECK(m.leq(b));
      CHECK(a.leq(j));
      CHECK(b.leq(j));
      for (const auto &c : l) {
        if (a.leq(c) && b.leq(c))
          CHECK(j.leq(c));
        if (c.leq(a) && c.leq(b))
          CHECK(c.leq(m));
      }
    }
}

TEST_CASE("congruences of a Maltsev algebra permute") {
  for (const auto &e : maltsev_corpus()) {
    const auto l = all_congruences(e.algebra);
    for (const auto &a : l)
      for (const auto &b : l)
        CHECK(composition_equals_join(e.algebra, a, b));
  }
}

TEST_CASE("quotient and pull back") {
  const FiniteAlgebra z4 = cyclic_group(4);
  const Congruence half = cg(z4, 0, 2);
  const Quotient q = quotient(z4, half);
  CHECK(q.algebra.size() == 2);
  CHECK(is_homomorphism(z4, q.algebra, q.projection));
  CHECK(pull_back(Congruence::diagonal(2), q.projection) == half);
  CHECK(pull_back(Congruence::total(2), q.projection) == Congruence::total(4));
  const std::vector<Element> bad{0, 1, 1, 0};
  CHECK_THROWS_AS(quotient(z4, Congruence::from_labels(bad)), NotACongruence);
}

TEST_CASE("size cap on lattice enumeration") {
  CHECK_THROWS_AS(all_congruences(power(cyclic_group(2), 4), kDefaultLatticeBudget, 12), LatticeBudgetExceeded);
}
