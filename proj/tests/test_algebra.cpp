#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mk/algebra.hpp"
#include "mk/corpus.hpp"
#include "mk/error.hpp"

using namespace mk;

TEST_CASE("mixed-radix encoding puts the leftmost coordinate first") {
  const std::vector<Element> t{1, 0, 2};
  CHECK(encode_tuple(t, 3) == 1 * 9 + 0 * 3 + 2);
  std::vector<Element> back(3);
  decode_tuple(11, 3, back);
  CHECK(back == t);
  CHECK(tuple_count(3, 0) == 1);
  CHECK(tuple_count(0, 2) == 0);
  CHECK(tuple_count(4, 3) == 64);
}

TEST_CASE("encode and decode are inverse on every tuple") {
  for (int base = 1; base <= 4; ++base)
    for (int arity = 0; arity <= 3; ++arity) {
      std::vector<Element> buf(static_cast<std::size_t>(arity));
      for (std::size_t i = 0; i < tuple_count(base, arity); ++i) {
        decode_tuple(i, base, buf);
        CHECK(encode_tuple(buf, base) == i);
      }
    }
}

TEST_CASE("constructor rejects bad tables") {
  CHECK_THROWS_AS(FiniteAlgebra("A", 2, {{"f", 2, {0, 1, 1}}}), InvalidAlgebra);
  CHECK_THROWS_AS(FiniteAlgebra("A", 2, {{"f", 1, {0, 2}}}), InvalidAlgebra);
  CHECK_THROWS_AS(FiniteAlgebra("A", 2, {{"f", 1, {0, 1}}, {"f", 1, {1, 0}}}), InvalidAlgebra);
  CHECK_NOTHROW(FiniteAlgebra("A", 2, {{"c", 0, {1}}}));
}

TEST_CASE("empty algebra is allowed") {
  const FiniteAlgebra e("E", 0, {{"f", 2, {}}});
  CHECK(e.size() == 0);
}

TEST_CASE("product of Z2 with itself is Klein four") {
  const FiniteAlgebra z2 = cyclic_group(2);
  const FiniteAlgebra v = power(z2, 2);
  CHECK(v.size() == 4);
  const auto mul = *v.find_op("mul");
  // (1,0)·(0,1) = (1,1): 2·1 -> 3
  const std::vector<Element> args{2, 1};
  CHECK(v.apply(mul, args) == 3);
}

TEST_CASE("parse_term evaluates against the tables") {
  const FiniteAlgebra z3 = cyclic_group(3);
  const TermOp t = parse_term(z3, kGroupMaltsevTerm, 3);
  for (Element x = 0; x < 3; ++x)
    for (Element y = 0; y < 3; ++y)
      for (Element z = 0; z < 3; ++z) {
        const std::vector<Element> a{x, y, z};
        CHECK(t(a, 3) == ((x - y + z) % 3 + 3) % 3);
      }
  CHECK_THROWS(parse_term(z3, "mul(x", 3));
  CHECK_THROWS(parse_term(z3, "nope(x,y)", 3));
}

TEST_CASE("unary clone of Z4 is the multiples kx") {
  const FiniteAlgebra z4 = cyclic_group(4);
  const TermClone c = term_clone(z4, 1);
  std::set<std::vector<Element>> tables;
  for (const auto &m : c.members)
    tables.insert(m.table);
  std::set<std::vector<Element>> expected;
  for (int k = 0; k < 4; ++k) {
    std::vector<Element> t(4);
    for (int x = 0; x < 4; ++x)
      t[static_cast<std::size_t>(x)] = (k * x) % 4;
    expected.insert(t);
  }
  CHECK(tables == expected);
  CHECK(c.members.size() == 4);
}

TEST_CASE("binary clone of the semilattice") {
  const TermClone c = term_clone(semilattice2(), 2);
  // x, y, x∧y
  CHECK(c.members.size() == 3);
}

TEST_CASE("clone budget is enforced") {
  CHECK_THROWS_AS(term_clone(symmetric_group3(), 2, 5), CloneBudgetExceeded);
}

TEST_CASE("homomorphism check") {
  const FiniteAlgebra z4 = cyclic_group(4), z2 = cyclic_group(2);
  const std::vector<Element> mod2{0, 1, 0, 1};
  CHECK(is_homomorphism(z4, z2, mod2));
  const std::vector<Element> bad{0, 1, 1, 0};
  CHECK_FALSE(is_homomorphism(z4, z2, bad));
  CHECK(homomorphism_violation(z4, z2, bad).has_value());
}
