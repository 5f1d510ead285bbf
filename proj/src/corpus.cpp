#include "mk/corpus.hpp"

#include <array>

#include "mk/error.hpp"

namespace mk {

namespace {

std::size_t at(int n, Element a, Element b) {
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b);
}

void require_latin(const std::string &name, int n, const std::vector<Element> &mul) {
  if (mul.size() != tuple_count(n, 2))
    throw InvalidAlgebra("'" + name + "': multiplication table needs " + std::to_string(n * n) + " entries");
  for (Element a = 0; a < n; ++a) {
    std::vector<bool> row(static_cast<std::size_t>(n)), col(static_cast<std::size_t>(n));
    for (Element b = 0; b < n; ++b) {
      const Element r = mul[at(n, a, b)];
      const Element c = mul[at(n, b, a)];
      if (r < 0 || r >= n || c < 0 || c >= n || row[static_cast<std::size_t>(r)] || col[static_cast<std::size_t>(c)])
        throw InvalidAlgebra("'" + name + "': multiplication table is not a Latin square at row/column " +
                             std::to_string(a));
      row[static_cast<std::size_t>(r)] = true;
      col[static_cast<std::size_t>(c)] = true;
    }
  }
}

} // namespace

FiniteAlgebra group_from_table(std::string name, int size, const std::vector<Element> &mul) {
  require_latin(name, size, mul);
  Element e = -1;
  for (Element a = 0; a < size && e < 0; ++a) {
    bool unit = true;
    for (Element b = 0; b < size && unit; ++b)
      unit = mul[at(size, a, b)] == b && mul[at(size, b, a)] == b;
    if (unit)
      e = a;
  }
  if (e < 0)
    throw InvalidAlgebra("'" + name + "' has no identity element");
  for (Element a = 0; a < size; ++a)
    for (Element b = 0; b < size; ++b)
      for (Element c = 0; c < size; ++c)
        if (mul[at(size, mul[at(size, a, b)], c)] != mul[at(size, a, mul[at(size, b, c)])])
          throw InvalidAlgebra("'" + name + "' is not associative at (" + std::to_string(a) + "," +
                               std::to_string(b) + "," + std::to_string(c) + ")");
  std::vector<Element> inv(static_cast<std::size_t>(size));
  for (Element a = 0; a < size; ++a)
    for (Element b = 0; b < size; ++b)
      if (mul[at(size, a, b)] == e)
        inv[static_cast<std::size_t>(a)] = b;
  return FiniteAlgebra(std::move(name), size,
                       {Operation{"mul", 2, mul}, Operation{"inv", 1, inv}, Operation{"e", 0, {e}}});
}

FiniteAlgebra cyclic_group(int n) {
  std::vector<Element> mul(tuple_count(n, 2));
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      mul[at(n, a, b)] = (a + b) % n;
  return group_from_table("Z" + std::to_string(n), n, mul);
}

FiniteAlgebra dihedral_group(int n) {
  const int size = 2 * n;
  std::vector<Element> mul(tuple_count(size, 2));
  for (Element x = 0; x < size; ++x)
    for (Element y = 0; y < size; ++y) {
      const int a = x % n, b = x / n, c = y % n, d = y / n;
      const int rot = ((b == 0 ? a + c : a - c) % n + n) % n;
      mul[at(size, x, y)] = ((b + d) % 2) * n + rot;
    }
  return group_from_table("D" + std::to_string(n), size, mul);
}

FiniteAlgebra quaternion_group() {
  // Unit products: sign and result among 1, i, j, k.
  static constexpr int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  static constexpr int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::vector<Element> mul(64);
  for (Element x = 0; x < 8; ++x)
    for (Element y = 0; y < 8; ++y) {
      const int s = (x / 4 + y / 4 + sign[x % 4][y % 4]) % 2;
      mul[at(8, x, y)] = s * 4 + unit[x % 4][y % 4];
    }
  return group_from_table("Q8", 8, mul);
}

FiniteAlgebra symmetric_group3() {
  const std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<Element> mul(36);
  for (Element a = 0; a < 6; ++a)
    for (Element b = 0; b < 6; ++b) {
      // (ab)(i) = a(b(i))
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i)
        c[static_cast<std::size_t>(i)] = perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)])];
      for (Element k = 0; k < 6; ++k)
        if (perms[static_cast<std::size_t>(k)] == c)
          mul[at(6, a, b)] = k;
    }
  return group_from_table("S3", 6, mul);
}

FiniteAlgebra quasigroup_from_table(std::string name, int size, const std::vector<Element> &mul) {
  require_latin(name, size, mul);
  std::vector<Element> ldiv(mul.size()), rdiv(mul.size());
  for (Element a = 0; a < size; ++a)
    for (Element c = 0; c < size; ++c) {
      const Element b = mul[at(size, a, c)];
      ldiv[at(size, a, b)] = c; // a * c = b
      rdiv[at(size, b, c)] = a; // a * c = b
    }
  return FiniteAlgebra(std::move(name), size,
                       {Operation{"mul", 2, mul}, Operation{"ldiv", 2, ldiv}, Operation{"rdiv", 2, rdiv}});
}

FiniteAlgebra affine_cyclic(int n) {
  std::vector<Element> m(tuple_count(n, 3));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        m[(at(n, x, y)) * static_cast<std::size_t>(n) + static_cast<std::size_t>(z)] = ((x - y + z) % n + n) % n;
  return FiniteAlgebra("A" + std::to_string(n), n, {Operation{"m", 3, m}});
}

FiniteAlgebra semilattice2() {
  return FiniteAlgebra("SL2", 2, {Operation{"meet", 2, {0, 0, 0, 1}}});
}

std::vector<CorpusEntry> maltsev_corpus() {
  std::vector<CorpusEntry> out;
  auto group = [&](FiniteAlgebra g) { out.push_back({std::move(g), kGroupMaltsevTerm, true}); };
  for (int n : {1, 2, 3, 4, 5, 6, 8})
    group(cyclic_group(n));
  {
    const FiniteAlgebra z2 = cyclic_group(2), z4 = cyclic_group(4);
    const std::vector<FiniteAlgebra> v4{z2, z2}, z2z4{z2, z4}, e8{z2, z2, z2};
    group(product(v4));
    group(product(z2z4));
    group(product(e8));
  }
  group(dihedral_group(4));
  group(quaternion_group());
  group(symmetric_group3());
  out.push_back({affine_cyclic(3), "m(x,y,z)", false});
  out.push_back({affine_cyclic(4), "m(x,y,z)", false});
  // Steiner quasigroup x*y = -x-y on Z/3.
  out.push_back({quasigroup_from_table("Steiner3", 3, {0, 2, 1, 2, 1, 0, 1, 0, 2}), kQuasigroupMaltsevTerm, false});
  // Smallest non-associative loop.
  out.push_back({quasigroup_from_table("Loop5", 5,
                                       {0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0}),
                 kQuasigroupMaltsevTerm, false});
  return out;
}

} // namespace mk

namespace mk {

LeftModule cyclic_module(const FiniteRing &zn, int m) {
  const int n = zn.size();
  if (m <= 0 || n % m != 0)
    throw DomainError("Z" + std::to_string(m) + " is not a module over Z" + std::to_string(n));
  std::vector<Element> add(tuple_count(m, 2)), act(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  for (Element a = 0; a < m; ++a)
    for (Element b = 0; b < m; ++b)
      add[at(m, a, b)] = (a + b) % m;
  for (Element r = 0; r < n; ++r)
    for (Element x = 0; x < m; ++x)
      act[at(m, r, x)] = (r * x) % m;
  return LeftModule("Z" + std::to_string(m), zn, m, std::move(add), std::move(act));
}

std::vector<LinearForm> form_corpus() {
  const FiniteRing z2 = FiniteRing::cyclic(2);
  const FiniteRing z3 = FiniteRing::cyclic(3);
  const FiniteRing z4 = FiniteRing::cyclic(4);
  const FiniteRing dual = FiniteRing::dual_numbers(2);
  std::vector<LinearForm> out;
  out.push_back(LinearForm::zero_form(z2));
  out.push_back(LinearForm::identity(z2));
  out.push_back(LinearForm::zero_form(z3));
  out.push_back(LinearForm::identity(z4));
  out.push_back(LinearForm("Z2->Z4 2x", cyclic_module(z4, 2), {0, 2}));
  out.push_back(LinearForm("Z4->Z4 2x", LeftModule::regular(z4), {0, 2, 0, 2}));
  out.push_back(LinearForm("Z2 zero", LeftModule::regular(z2), {0, 0}));
  {
    const LeftModule z2z2 = LeftModule::direct_sum(LeftModule::regular(z2), LeftModule::regular(z2));
    out.push_back(LinearForm("Z2+Z2->Z2 pr1", z2z2, {0, 0, 1, 1}));
  }
  {
    // eZ2[e] -> Z2[e]; a + be encoded 2a + b, so e = 1.
    std::vector<Element> act(8);
    for (Element r = 0; r < 4; ++r)
      for (Element x = 0; x < 2; ++x)
        act[static_cast<std::size_t>(r * 2 + x)] = dual.times(r, x);
    LeftModule ideal("eZ2[e]", dual, 2, {0, 1, 1, 0}, std::move(act));
    out.push_back(LinearForm("eZ2[e]->Z2[e]", std::move(ideal), {0, 1}));
  }
  return out;
}

} // namespace mk

namespace mk {

namespace {

LinearForm find_form(const std::string &name) {
  for (auto &f : form_corpus())
    if (f.name() == name)
      return f;
  throw InternalError("no corpus form " + name);
}

} // namespace

std::vector<NamedExtension> extension_corpus() {
  const std::vector<Element> mod2_of4{0, 1, 0, 1};
  const std::vector<Element> dual_to_z2{0, 0, 1, 1};
  std::vector<NamedExtension> out;
  out.push_back({"Z4->Z2", {LinearForm::identity(FiniteRing::cyclic(4)), find_form("id_Z2"), mod2_of4, mod2_of4}});
  out.push_back({"Z2[e]->Z2", {LinearForm::identity(FiniteRing::dual_numbers(2)), find_form("id_Z2"), dual_to_z2, dual_to_z2}});
  out.push_back({"Z2->Z4 over zero", {find_form("Z2->Z4 2x"), find_form("Z2 zero"), mod2_of4, {0, 1}}});
  out.push_back({"Z4 2x over zero", {find_form("Z4->Z4 2x"), find_form("Z2 zero"), mod2_of4, mod2_of4}});
  out.push_back({"cycles over 0->Z2", {find_form("eZ2[e]->Z2[e]"), LinearForm::zero_form(FiniteRing::cyclic(2)), dual_to_z2, {0, 0}}});
  out.push_back({"identity", {find_form("id_Z2"), find_form("id_Z2"), {0, 1}, {0, 1}}});
  {
    const FiniteRing z2 = FiniteRing::cyclic(2);
    const FiniteRing z2z2 = FiniteRing::product(z2, z2);
    out.push_back({"Z2xZ2->Z2", {LinearForm::identity(z2z2), find_form("id_Z2"), dual_to_z2, dual_to_z2}});
  }
  return out;
}

std::vector<DBimodule> bimodule_corpus() {
  std::vector<DBimodule> out;
  for (const auto &f : form_corpus()) {
    const auto &R = f.ring();
    out.push_back(DBimodule::shift(f, LeftModule::zero(R)));
    out.push_back(DBimodule::cone(f, Bimodule::regular(R)));
    out.push_back(DBimodule::shift(f, LeftModule::regular(R)));
    out.push_back(DBimodule::of_form(f));
  }
  for (const auto &e : extension_corpus()) {
    auto rep = crext_check(e.ext);
    if (rep.ok)
      out.push_back(*rep.bimodule);
  }
  return out;
}

} // namespace mk
