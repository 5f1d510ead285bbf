#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mk/abelian.hpp"
#include "mk/corpus.hpp"
#include "mk/error.hpp"
#include "mk/maltsev.hpp"

#include <algorithm>

using namespace mk;

namespace {

// Z/n with the single operation x - y + z.
FiniteAlgebra affine_herd(int n) {
  std::vector<Element> t(tuple_count(n, 3));
  std::vector<Element> a(3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    decode_tuple(i, n, a);
    t[i] = ((a[0] - a[1] + a[2]) % n + n) % n;
  }
  return FiniteAlgebra("A" + std::to_string(n), n, {{"m", 3, t}});
}

// Elements p of M with ∂p = 1, by definition.
std::vector<Element> pseudoconstants_oracle(const LinearForm &f) {
  std::vector<Element> out;
  for (Element x = 0; x < f.module().size(); ++x)
    if (f.d(x) == f.ring().one())
      out.push_back(x);
  return out;
}

} // namespace

TEST_CASE("bare affine herds abelianize to a trivial module") {
  for (int n = 2; n <= 5; ++n) {
    const FiniteAlgebra a = affine_herd(n);
    const Abelianization ab = abelianize(a, parse_term(a, "m(x,y,z)", 3));
    INFO(n);
    // only the projection is unary; binary idempotents are (1-r)x + ry
    CHECK(ab.form.module().size() == 1);
    CHECK(ab.form.ring().size() == n);
    CHECK_FALSE(LinearForm::violation(ab.form.module(), ab.form.d_table()));
  }
}

TEST_CASE("a constant unary gives a pseudoconstant") {
  std::vector<Element> t(8);
  std::vector<Element> a(3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    decode_tuple(i, 2, a);
    t[i] = (a[0] + a[1] + a[2]) % 2;
  }
  const FiniteAlgebra z2("Z2c", 2, {{"m", 3, t}, {"zero", 1, {0, 0}}});
  const Abelianization ab = abelianize(z2, parse_term(z2, "m(x,y,z)", 3));
  // M = {id, const}, R = {x, y}
  CHECK(ab.form.module().size() == 2);
  CHECK(ab.form.ring().size() == 2);
  const auto p = pseudoconstants(ab.form);
  REQUIRE(p.size() == 1);
  // the pseudoconstant is the term op that is constant
  const std::vector<Element> zero{0}, one{1};
  CHECK(ab.unary[static_cast<std::size_t>(p[0])](zero, 2) == ab.unary[static_cast<std::size_t>(p[0])](one, 2));
}

TEST_CASE("cyclic groups abelianize to Z/n acting on Z/n") {
  for (int n = 2; n <= 4; ++n) {
    const FiniteAlgebra g = cyclic_group(n);
    const Abelianization ab = abelianize(g, parse_term(g, kGroupMaltsevTerm, 3));
    // unary terms kx, binary idempotents (1-r)x + ry
    CHECK(ab.form.module().size() == n);
    CHECK(ab.form.ring().size() == n);
    CHECK(ab.unary.size() == static_cast<std::size_t>(n));
    CHECK(ab.binary.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("non-abelian and non-Maltsev inputs are refused") {
  const FiniteAlgebra s3 = symmetric_group3();
  CHECK(abelian_violation(s3, parse_term(s3, kGroupMaltsevTerm, 3)).has_value());
  CHECK_THROWS_AS(abelianize(s3, parse_term(s3, kGroupMaltsevTerm, 3)), NotAbelian);
  const FiniteAlgebra sl = semilattice2();
  CHECK_THROWS_AS(abelianize(sl, projection(sl, 3, 0)), NotMaltsev);
  const FiniteAlgebra z4 = cyclic_group(4);
  CHECK_FALSE(abelian_violation(z4, parse_term(z4, kGroupMaltsevTerm, 3)).has_value());
}

TEST_CASE("realize then abelianize gives the form back") {
  int with = 0, without = 0;
  for (const auto &f : form_corpus()) {
    INFO(f.name());
    const RoundtripReport r = roundtrip_check(f);
    CHECK(r.isomorphic);
    CHECK(r.failure.empty());
    CHECK(r.recovered.form.ring().size() == f.ring().size());
    CHECK(r.recovered.form.module().size() == f.module().size());
    (pseudoconstants(f).empty() ? without : with)++;
  }
  CHECK(with > 0);
  CHECK(without > 0);
}

TEST_CASE("realized algebras are abelian Maltsev algebras") {
  for (const auto &f : form_corpus()) {
    const FiniteAlgebra a = realize(f);
    CHECK(a.size() == f.module().size() * f.ring().size());
    CHECK(is_maltsev_term(a, parse_term(a, "m(x,y,z)", 3)));
    CHECK_FALSE(abelian_violation(a, parse_term(a, "m(x,y,z)", 3)).has_value());
  }
}

TEST_CASE("pseudoconstants and kernel") {
  for (const auto &f : form_corpus()) {
    CHECK(pseudoconstants(f) == pseudoconstants_oracle(f));
    const auto ker = kernel_elements(f);
    for (Element x = 0; x < f.module().size(); ++x)
      CHECK((std::find(ker.begin(), ker.end(), x) != ker.end()) == (f.d(x) == f.ring().zero()));
  }
}

TEST_CASE("theory with constants") {
  for (const auto &f : form_corpus()) {
    if (pseudoconstants(f).empty()) {
      CHECK_THROWS_AS(constants_theory(f), DomainError);
      continue;
    }
    const ConstTheory t = constants_theory(f);
    INFO(f.name());
    CHECK(t.constants().size() == static_cast<int>(kernel_elements(f).size()));
    const std::size_t K = static_cast<std::size_t>(t.constants().size());
    const std::size_t R = static_cast<std::size_t>(t.ring().size());
    CHECK(t.hom_count(2, 1) == K * R * R);
    CHECK(t.hom_count(0, 2) == K * K);
    CHECK(t.hom(1, 1).size() == t.hom_count(1, 1));
    CHECK_FALSE(t.extension_violation(2).has_value());
    for (const auto &m : t.hom(1, 1)) {
      CHECK(t.compose(t.identity(1), m) == m);
      CHECK(t.compose(m, t.identity(1)) == m);
    }
    CHECK_THROWS_AS(t.compose(t.identity(2), t.identity(1)), ArityError);
  }
  CHECK(ConstTheory::kEmptyModelDiffers);
}
