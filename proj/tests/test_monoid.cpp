#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "mk/error.hpp"
#include "mk/monoid.hpp"

using namespace mk;

namespace {

FiniteMonoid two_element() { return FiniteMonoid("{1,0}", 2, 0, {0, 1, 1, 1}); }

FiniteMonoid cyclic_monoid(int n) {
  std::vector<Element> mul(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      mul[static_cast<std::size_t>(a * n + b)] = (a + b) % n;
  return FiniteMonoid("C" + std::to_string(n), n, 0, mul);
}

Element by_label(const MonoidExtension &e, const std::string &s) {
  for (Element x = 0; x < e.total.size(); ++x)
    if (e.label(x) == s)
      return x;
  throw std::runtime_error("no element " + s);
}

} // namespace

TEST_CASE("monoid laws") {
  CHECK_FALSE(FiniteMonoid::violation(2, 0, two_element().mul_table()));
  const std::vector<Element> no_unit{1, 1, 1, 1};
  CHECK(FiniteMonoid::violation(2, 0, no_unit));
  // x*y = y+1 mod 3 is not associative
  std::vector<Element> bad(9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      bad[static_cast<std::size_t>(a * 3 + b)] = a == 0 ? b : b == 0 ? a : (b + 1) % 3;
  CHECK(FiniteMonoid::violation(3, 0, bad));
  CHECK_THROWS_AS(FiniteMonoid("bad", 3, 0, bad), InvalidStructure);
}

TEST_CASE("trivial extensions are linear and have the expected size") {
  for (const auto &m : {two_element(), cyclic_monoid(2), cyclic_monoid(3)})
    for (int k : {1, 2, 3}) {
      const NaturalSystem d = NaturalSystem::constant(m, AbelianGroup::cyclic(k));
      const MonoidExtension e = trivial_extension(d);
      INFO(m.name() << " " << k);
      CHECK(e.total.size() == m.size() * k);
      CHECK(check_linear_extension(e));
      for (Element a = 0; a < e.total.size(); ++a)
        for (Element b = 0; b < e.total.size(); ++b)
          CHECK(e.p(e.total.times(a, b)) == m.times(e.p(a), e.p(b)));
    }
}

TEST_CASE("constant systems give untwisted extensions") {
  for (const auto &m : {two_element(), cyclic_monoid(2)})
    for (int k : {2, 3}) {
      const MonoidExtension e = trivial_extension(NaturalSystem::constant(m, AbelianGroup::cyclic(k)));
      const auto fam = check_untwisted(e);
      REQUIRE(fam.has_value());
      CHECK_FALSE(untwisted_violation(e, fam->m).has_value());
      CHECK_FALSE(phi_violation(e, fam->m).has_value());
    }
}

TEST_CASE("tampering breaks the linear-extension checks") {
  MonoidExtension e = trivial_extension(NaturalSystem::constant(two_element(), AbelianGroup::cyclic(2)));
  e.proj[1] = 1 - e.proj[1];
  CHECK(linear_extension_violation(e).has_value());
  MonoidExtension f = trivial_extension(NaturalSystem::constant(two_element(), AbelianGroup::cyclic(2)));
  std::swap(f.act[0][0], f.act[0][1]);
  CHECK(linear_extension_violation(f).has_value());
}

TEST_CASE("natural system laws") {
  const FiniteMonoid m = two_element();
  const NaturalSystem c = NaturalSystem::constant(m, AbelianGroup::cyclic(2));
  CHECK_FALSE(NaturalSystem::violation(m, {AbelianGroup::cyclic(2), AbelianGroup::cyclic(2)}, c.left_maps(),
                                       c.right_maps()));
  auto left = c.left_maps();
  left[0] = {1, 0}; // the unit must act as the identity
  CHECK(NaturalSystem::violation(m, {AbelianGroup::cyclic(2), AbelianGroup::cyclic(2)}, left, c.right_maps()));
}

TEST_CASE("counterexample products") {
  const MonoidExtension e = counterexample_extension();
  CHECK(check_linear_extension(e));
  CHECK(e.total.size() == 5);
  const Element one = by_label(e, "1");
  for (const std::string a : {"00", "10", "01", "11"}) {
    const Element x = by_label(e, a);
    CHECK(e.total.times(one, x) == x);
    CHECK(e.total.times(x, one) == x);
    for (const std::string b : {"00", "10"})
      CHECK(e.label(e.total.times(x, by_label(e, b))) == "00");
    for (const std::string b : {"01", "11"})
      CHECK(e.label(e.total.times(x, by_label(e, b))) == "11");
  }
}

TEST_CASE("counterexample is linear but not untwisted") {
  const MonoidExtension e = counterexample_extension();
  CHECK_FALSE(check_untwisted(e).has_value());
}

TEST_CASE("counterexample harness values") {
  const CounterexampleReport r = counterexample_harness();
  CHECK(r.total_order == std::vector<std::string>{"1", "00", "10", "01", "11"});
  CHECK(r.s_elements == std::vector<std::string>{"1", "*0", "01", "11"});
  CHECK(r.products.size() == 16);
  std::map<std::string, std::string> act;
  for (const auto &p : r.action_of_10)
    act[p[0]] = p[1];
  CHECK(act["*0"] == "*0");
  CHECK(act["01"] == "11");
  CHECK(act["11"] == "11");
  CHECK(r.maltsev_maps == 531441);
  CHECK(r.equivariant == 108);
  CHECK(r.forced_value == "*0");
  CHECK(r.associative == 0);
  REQUIRE(r.chain_lhs.size() == r.equivariant);
  for (std::size_t i = 0; i < r.chain_lhs.size(); ++i) {
    CHECK(r.chain_lhs[i] == "11");
    CHECK(r.chain_rhs[i] == "01");
    CHECK_FALSE(r.witnesses[i].empty());
  }
  CHECK(r.text().find("equivariant: 108") != std::string::npos);
}

TEST_CASE("untwisted search refuses large fibers") {
  const MonoidExtension e =
      trivial_extension(NaturalSystem::constant(two_element(), AbelianGroup::cyclic(kMaxUntwistedFiber + 1)));
  CHECK_THROWS_AS(check_untwisted(e), SearchBudgetExceeded);
}
