#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "mk/algebra.hpp"
#include "mk/corpus.hpp"
#include "mk/error.hpp"
#include "mk/ring.hpp"

using namespace mk;

namespace {

// Every function g -> h filtered by additivity.
std::set<std::vector<Element>> additive_maps_brute(const AbelianGroup &g, const AbelianGroup &h) {
  std::set<std::vector<Element>> out;
  const std::size_t total = tuple_count(h.size(), g.size());
  std::vector<Element> f(static_cast<std::size_t>(g.size()));
  for (std::size_t code = 0; code < total; ++code) {
    decode_tuple(code, h.size(), f);
    bool ok = true;
    for (Element a = 0; a < g.size() && ok; ++a)
      for (Element b = 0; b < g.size() && ok; ++b)
        ok = f[static_cast<std::size_t>(g.plus(a, b))] ==
             h.plus(f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]);
    if (ok)
      out.insert(f);
  }
  return out;
}

std::vector<Element> copy(std::span<const Element> s) { return {s.begin(), s.end()}; }

} // namespace

TEST_CASE("cyclic rings are modular arithmetic") {
  for (int n = 1; n <= 6; ++n) {
    const FiniteRing r = FiniteRing::cyclic(n);
    CHECK(r.one() == 1 % n);
    CHECK(r.commutative());
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        CHECK(r.plus(a, b) == (a + b) % n);
        CHECK(r.times(a, b) == (a * b) % n);
        CHECK(r.minus(a, b) == ((a - b) % n + n) % n);
      }
  }
}

TEST_CASE("dual numbers square e to zero") {
  const FiniteRing d = FiniteRing::dual_numbers(2);
  CHECK(d.size() == 4);
  // e = 0*2 + 1
  CHECK(d.times(1, 1) == d.zero());
  CHECK(d.times(d.one(), 1) == 1);
  CHECK_FALSE(FiniteRing::violation(4, d.add_table(), d.mul_table()));
}

TEST_CASE("product ring") {
  const FiniteRing p = FiniteRing::product(FiniteRing::cyclic(2), FiniteRing::cyclic(3));
  CHECK(p.size() == 6);
  CHECK_FALSE(FiniteRing::violation(6, p.add_table(), p.mul_table()));
  // (1,0)(0,1) = 0
  CHECK(p.times(3, 1) == p.zero());
}

TEST_CASE("ring law failures carry a witness") {
  const FiniteRing z3 = FiniteRing::cyclic(3);
  auto mul = copy(z3.mul_table());
  mul[2 * 3 + 2] = 2; // 2*2 = 2 breaks distributivity
  const auto v = FiniteRing::violation(3, z3.add_table(), mul);
  REQUIRE(v);
  CHECK_FALSE(v->detail.empty());
  CHECK_THROWS_AS(FiniteRing("bad", 3, copy(z3.add_table()), mul), InvalidStructure);

  const std::vector<Element> not_group{0, 1, 1, 1};
  CHECK(AbelianGroup::violation(2, not_group));
  CHECK_THROWS_AS(AbelianGroup(2, not_group), InvalidStructure);
}

TEST_CASE("additive maps match the brute-force enumeration") {
  const std::vector<AbelianGroup> groups{
      AbelianGroup::cyclic(1), AbelianGroup::cyclic(2), AbelianGroup::cyclic(3), AbelianGroup::cyclic(4),
      AbelianGroup::direct_sum(AbelianGroup::cyclic(2), AbelianGroup::cyclic(2)), AbelianGroup::cyclic(6)};
  for (const auto &g : groups)
    for (const auto &h : groups) {
      std::set<std::vector<Element>> found;
      for_each_additive_map(g, h, [&](const std::vector<Element> &f) {
        CHECK(is_additive(g, h, f));
        CHECK(found.insert(f).second);
        return false;
      });
      INFO(g.size() << " -> " << h.size());
      CHECK(found == additive_maps_brute(g, h));
    }
  std::size_t n = 0;
  for_each_additive_map(AbelianGroup::cyclic(4), AbelianGroup::cyclic(6), [&](const std::vector<Element> &) {
    ++n;
    return false;
  });
  CHECK(n == static_cast<std::size_t>(std::gcd(4, 6)));
}

TEST_CASE("modules") {
  const FiniteRing z4 = FiniteRing::cyclic(4);
  const LeftModule reg = LeftModule::regular(z4);
  CHECK_FALSE(LeftModule::violation(z4, 4, reg.add_table(), reg.act_table()));
  const LeftModule z2 = cyclic_module(z4, 2);
  for (Element r = 0; r < 4; ++r)
    for (Element x = 0; x < 2; ++x)
      CHECK(z2.scale(r, x) == (r * x) % 2);
  const LeftModule sum = LeftModule::direct_sum(reg, z2);
  CHECK(sum.size() == 8);
  CHECK_FALSE(LeftModule::violation(z4, 8, sum.add_table(), sum.act_table()));

  const std::vector<Element> evens{0, 2};
  const LeftModule sub = reg.submodule(evens, "2Z4");
  CHECK(sub.size() == 2);
  const std::vector<Element> odd{0, 1, 2};
  CHECK_THROWS_AS(reg.submodule(odd, "x"), InvalidStructure);

  auto act = copy(reg.act_table());
  act[2 * 4 + 1] = 1; // 2·1 = 1
  const auto v = LeftModule::violation(z4, 4, reg.add_table(), act);
  REQUIRE(v);
  CHECK_THROWS_AS(LeftModule("bad", z4, 4, copy(reg.add_table()), act), InvalidStructure);
}

TEST_CASE("forms in the corpus are linear") {
  const auto forms = form_corpus();
  CHECK(forms.size() == 9);
  for (const auto &f : forms) {
    INFO(f.name());
    CHECK_FALSE(LinearForm::violation(f.module(), f.d_table()));
    for (Element r = 0; r < f.ring().size(); ++r)
      for (Element x = 0; x < f.module().size(); ++x)
        CHECK(f.d(f.module().scale(r, x)) == f.ring().times(r, f.d(x)));
  }
  const LinearForm id = LinearForm::identity(FiniteRing::cyclic(4));
  std::vector<Element> bad = copy(id.d_table());
  bad[1] = 2;
  bad[3] = 1;
  CHECK(LinearForm::violation(id.module(), bad));
  CHECK_THROWS_AS(LinearForm("bad", id.module(), bad), InvalidStructure);
}

TEST_CASE("bimodules") {
  const FiniteRing z4 = FiniteRing::cyclic(4);
  const Bimodule reg = Bimodule::regular(z4);
  CHECK(reg.symmetric_actions());
  CHECK_FALSE(Bimodule::violation(z4, 4, reg.add_table(), reg.left_table(), reg.right_table()));
  const Bimodule s = Bimodule::symmetric(cyclic_module(z4, 2));
  for (Element r = 0; r < 4; ++r)
    for (Element b = 0; b < 2; ++b)
      CHECK(s.lact(r, b) == s.ract(b, r));

  const FiniteRing d = FiniteRing::dual_numbers(2);
  const Bimodule dr = Bimodule::regular(d);
  CHECK_FALSE(Bimodule::violation(d, 4, dr.add_table(), dr.left_table(), dr.right_table()));

  auto right = copy(reg.right_table());
  right[1 * 4 + 1] = 2;
  CHECK(Bimodule::violation(z4, 4, reg.add_table(), reg.left_table(), right));
}

TEST_CASE("standard d-bimodules satisfy their laws") {
  for (const auto &f : form_corpus()) {
    INFO(f.name());
    for (const DBimodule &x : {DBimodule::cone(f, Bimodule::regular(f.ring())), DBimodule::shift(f, f.module()),
                               DBimodule::of_form(f), DBimodule::cone(f, Bimodule::zero(f.ring()))})
      CHECK_FALSE(DBimodule::violation(x.form(), x.b(), x.k(), x.delta_table(), x.dot_table()));
  }
  for (const auto &x : bimodule_corpus()) {
    INFO(x.name());
    CHECK_FALSE(DBimodule::violation(x.form(), x.b(), x.k(), x.delta_table(), x.dot_table()));
  }
}

TEST_CASE("broken d-bimodule is reported") {
  const LinearForm id = LinearForm::identity(FiniteRing::cyclic(4));
  const DBimodule c = DBimodule::cone(id, Bimodule::regular(id.ring()));
  auto dot = copy(c.dot_table());
  dot[1 * 4 + 1] = 2;
  CHECK(DBimodule::violation(id, c.b(), c.k(), c.delta_table(), dot));
  auto delta = copy(c.delta_table());
  delta[1] = 3;
  CHECK(DBimodule::violation(id, c.b(), c.k(), delta, c.dot_table()));
  CHECK_THROWS_AS(DBimodule("bad", id, c.b(), c.k(), delta, copy(c.dot_table())), InvalidStructure);
}
