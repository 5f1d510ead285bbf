#include "mk/monoid.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "mk/algebra.hpp"
#include "mk/error.hpp"

namespace mk {

namespace {

template <class... Ts> std::string tup(Ts... xs) {
  std::ostringstream out;
  out << "(";
  bool first = true;
  ((out << (first ? "" : ",") << xs, first = false), ...);
  out << ")";
  return out.str();
}

Violation fail(std::string law, std::string detail) { return Violation{std::move(law), std::move(detail)}; }

bool is_identity(const std::vector<Element> &map) {
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] != static_cast<Element>(i))
      return false;
  return true;
}

} // namespace

CheckResult FiniteMonoid::violation(int n, Element unit, std::span<const Element> mul) {
  if (n <= 0)
    return fail("non-empty carrier", "size " + std::to_string(n));
  if (mul.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    return fail("mul table length", "expected " + std::to_string(n * n) + ", got " + std::to_string(mul.size()));
  for (Element v : mul)
    if (v < 0 || v >= n)
      return fail("mul entries in range", "entry " + std::to_string(v));
  if (unit < 0 || unit >= n)
    return fail("unit in range", std::to_string(unit));
  const auto t = [&](Element a, Element b) {
    return mul[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)];
  };
  for (Element a = 0; a < n; ++a) {
    if (t(unit, a) != a || t(a, unit) != a)
      return fail("1a=a=a1", "at " + std::to_string(a));
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c)
        if (t(t(a, b), c) != t(a, t(b, c)))
          return fail("(ab)c=a(bc)", "at " + tup(a, b, c));
  }
  return std::nullopt;
}

FiniteMonoid::FiniteMonoid(std::string name, int size, Element unit, std::vector<Element> mul)
    : name_(std::move(name)), size_(size), unit_(unit), mul_(std::move(mul)) {
  if (auto v = violation(size_, unit_, mul_))
    throw InvalidStructure("'" + name_ + "' violates " + v->law + " " + v->detail);
}

// ---------------------------------------------------------------------------

CheckResult NaturalSystem::violation(const FiniteMonoid &M, const std::vector<AbelianGroup> &groups,
                                     const std::vector<std::vector<Element>> &left,
                                     const std::vector<std::vector<Element>> &right) {
  const int n = M.size();
  const auto nn = static_cast<std::size_t>(n);
  if (groups.size() != nn)
    return fail("one group per element", std::to_string(groups.size()) + " groups for " + std::to_string(n));
  if (left.size() != nn * nn || right.size() != nn * nn)
    return fail("one action map per pair", "expected " + std::to_string(nn * nn));
  const auto G = [&](Element x) -> const AbelianGroup & { return groups[static_cast<std::size_t>(x)]; };
  const auto pr = [&](Element x, Element y) { return static_cast<std::size_t>(x) * nn + static_cast<std::size_t>(y); };
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const Element xy = M.times(x, y);
      const auto &l = left[pr(x, y)];
      const auto &r = right[pr(x, y)];
      if (l.size() != static_cast<std::size_t>(G(y).size()))
        return fail("left map length", "for " + tup(x, y));
      if (r.size() != static_cast<std::size_t>(G(x).size()))
        return fail("right map length", "for " + tup(x, y));
      for (Element v : l)
        if (v < 0 || v >= G(xy).size())
          return fail("left map lands in D_xy", "for " + tup(x, y));
      for (Element v : r)
        if (v < 0 || v >= G(xy).size())
          return fail("right map lands in D_xy", "for " + tup(x, y));
      if (!is_additive(G(y), G(xy), l))
        return fail("x(d+d')=xd+xd'", "for " + tup(x, y));
      if (!is_additive(G(x), G(xy), r))
        return fail("(d+d')y=dy+d'y", "for " + tup(x, y));
    }
  const Element u = M.unit();
  for (Element z = 0; z < n; ++z) {
    if (!is_identity(left[pr(u, z)]))
      return fail("1d=d", "on D_" + std::to_string(z));
    if (!is_identity(right[pr(z, u)]))
      return fail("d1=d", "on D_" + std::to_string(z));
  }
  const auto L = [&](Element x, Element y, Element d) { return left[pr(x, y)][static_cast<std::size_t>(d)]; };
  const auto R = [&](Element x, Element d, Element y) { return right[pr(x, y)][static_cast<std::size_t>(d)]; };
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        for (Element d = 0; d < G(z).size(); ++d) {
          if (L(x, M.times(y, z), L(y, z, d)) != L(M.times(x, y), z, d))
            return fail("x(yd)=(xy)d", "at x=" + std::to_string(x) + " y=" + std::to_string(y) + " d=" +
                                           std::to_string(d) + " in D_" + std::to_string(z));
          if (R(M.times(z, y), R(z, d, y), x) != R(z, d, M.times(y, x)))
            return fail("(dy)x=d(yx)", "at x=" + std::to_string(x) + " y=" + std::to_string(y) + " d=" +
                                           std::to_string(d) + " in D_" + std::to_string(z));
          if (L(x, M.times(z, y), R(z, d, y)) != R(M.times(x, z), L(x, z, d), y))
            return fail("x(dy)=(xd)y", "at x=" + std::to_string(x) + " y=" + std::to_string(y) + " d=" +
                                           std::to_string(d) + " in D_" + std::to_string(z));
        }
  return std::nullopt;
}

NaturalSystem::NaturalSystem(FiniteMonoid base, std::vector<AbelianGroup> groups,
                             std::vector<std::vector<Element>> left, std::vector<std::vector<Element>> right)
    : base_(std::move(base)), groups_(std::move(groups)), left_(std::move(left)), right_(std::move(right)) {
  if (auto v = violation(base_, groups_, left_, right_))
    throw InvalidStructure("natural system on '" + base_.name() + "' violates " + v->law + " " + v->detail);
}

NaturalSystem NaturalSystem::constant(const FiniteMonoid &base, const AbelianGroup &a) {
  const auto n = static_cast<std::size_t>(base.size());
  std::vector<Element> id(static_cast<std::size_t>(a.size()));
  for (std::size_t i = 0; i < id.size(); ++i)
    id[i] = static_cast<Element>(i);
  return NaturalSystem(base, std::vector<AbelianGroup>(n, a), std::vector<std::vector<Element>>(n * n, id),
                       std::vector<std::vector<Element>>(n * n, id));
}

// ---------------------------------------------------------------------------

std::string MonoidExtension::label(Element e) const {
  if (static_cast<std::size_t>(e) < labels.size())
    return labels[static_cast<std::size_t>(e)];
  return std::to_string(e);
}

MonoidExtension trivial_extension(const NaturalSystem &D) {
  const FiniteMonoid &M = D.base();
  const int n = M.size();
  std::vector<Element> offset(static_cast<std::size_t>(n) + 1, 0);
  for (Element x = 0; x < n; ++x)
    offset[static_cast<std::size_t>(x) + 1] = offset[static_cast<std::size_t>(x)] + D.group(x).size();
  const int total = offset.back();
  std::vector<Element> proj(static_cast<std::size_t>(total)), fiber_el(static_cast<std::size_t>(total));
  for (Element x = 0; x < n; ++x)
    for (Element d = 0; d < D.group(x).size(); ++d) {
      proj[static_cast<std::size_t>(offset[static_cast<std::size_t>(x)] + d)] = x;
      fiber_el[static_cast<std::size_t>(offset[static_cast<std::size_t>(x)] + d)] = d;
    }
  const auto make = [&](Element x, Element d) { return offset[static_cast<std::size_t>(x)] + d; };

  std::vector<Element> mul(static_cast<std::size_t>(total) * static_cast<std::size_t>(total));
  for (Element e1 = 0; e1 < total; ++e1)
    for (Element e2 = 0; e2 < total; ++e2) {
      const Element x1 = proj[static_cast<std::size_t>(e1)], x2 = proj[static_cast<std::size_t>(e2)];
      const Element d1 = fiber_el[static_cast<std::size_t>(e1)], d2 = fiber_el[static_cast<std::size_t>(e2)];
      const Element x = M.times(x1, x2);
      mul[static_cast<std::size_t>(e1) * static_cast<std::size_t>(total) + static_cast<std::size_t>(e2)] =
          make(x, D.group(x).plus(D.ract(x1, d1, x2), D.lact(x1, x2, d2)));
    }

  MonoidExtension ext;
  try {
    ext.total = FiniteMonoid(M.name() + "x|D", total, make(M.unit(), D.group(M.unit()).zero()), std::move(mul));
  } catch (const InvalidStructure &e) {
    throw InternalError(std::string("trivial extension is not a monoid: ") + e.what());
  }
  ext.base = M;
  ext.proj = proj;
  ext.system = D;
  ext.act.resize(static_cast<std::size_t>(total));
  for (Element e = 0; e < total; ++e) {
    const Element x = proj[static_cast<std::size_t>(e)];
    const AbelianGroup &G = D.group(x);
    for (Element d = 0; d < G.size(); ++d)
      ext.act[static_cast<std::size_t>(e)].push_back(make(x, G.plus(d, fiber_el[static_cast<std::size_t>(e)])));
  }
  if (auto v = linear_extension_violation(ext))
    throw InternalError("trivial extension fails " + v->to_string());
  return ext;
}

CheckResult linear_extension_violation(const MonoidExtension &ext) {
  const auto &E = ext.total;
  const auto &B = ext.base;
  const auto &D = ext.system;
  const int n = E.size();
  if (ext.proj.size() != static_cast<std::size_t>(n) || ext.act.size() != static_cast<std::size_t>(n))
    return fail("shape", "proj or act has the wrong length");
  for (Element v : ext.proj)
    if (v < 0 || v >= B.size())
      return fail("proj lands in the base", std::to_string(v));
  if (ext.p(E.unit()) != B.unit())
    return fail("P(1)=1", "");
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (ext.p(E.times(a, b)) != B.times(ext.p(a), ext.p(b)))
        return fail("P(ab)=P(a)P(b)", "at " + tup(ext.label(a), ext.label(b)));

  std::vector<std::vector<Element>> fiber(static_cast<std::size_t>(B.size()));
  for (Element e = 0; e < n; ++e)
    fiber[static_cast<std::size_t>(ext.p(e))].push_back(e);
  for (Element b = 0; b < B.size(); ++b)
    if (fiber[static_cast<std::size_t>(b)].empty())
      return fail("P surjective", std::to_string(b) + " has an empty fiber");

  // d + e, and the subtraction e - e' it induces.
  std::map<std::pair<Element, Element>, Element> diff;
  for (Element e = 0; e < n; ++e) {
    const Element b = ext.p(e);
    const AbelianGroup &G = D.group(b);
    const auto &row = ext.act[static_cast<std::size_t>(e)];
    if (row.size() != static_cast<std::size_t>(G.size()))
      return fail("action length", "at " + ext.label(e));
    if (ext.plus(G.zero(), e) != e)
      return fail("0+e=e", "at " + ext.label(e));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Element d = 0; d < G.size(); ++d) {
      const Element f = row[static_cast<std::size_t>(d)];
      if (f < 0 || f >= n || ext.p(f) != b)
        return fail("d+e stays in the fiber", "at " + tup(d, ext.label(e)));
      if (seen[static_cast<std::size_t>(f)])
        return fail("action free", "two elements of D_" + std::to_string(b) + " move " + ext.label(e) + " to " +
                                       ext.label(f));
      seen[static_cast<std::size_t>(f)] = true;
      diff[{f, e}] = d;
      for (Element d2 = 0; d2 < G.size(); ++d2)
        if (ext.plus(d2, f) != ext.plus(G.plus(d2, d), e))
          return fail("d'+(d+e)=(d'+d)+e", "at " + tup(d2, d, ext.label(e)));
    }
    if (fiber[static_cast<std::size_t>(b)].size() != static_cast<std::size_t>(G.size()))
      return fail("action transitive", "fiber over " + std::to_string(b) + " has " +
                                           std::to_string(fiber[static_cast<std::size_t>(b)].size()) +
                                           " elements, D_" + std::to_string(b) + " has " + std::to_string(G.size()));
  }
  const auto sub = [&](Element e, Element f) { return diff.at({e, f}); };

  for (Element e1 = 0; e1 < n; ++e1)
    for (Element e2 = 0; e2 < n; ++e2) {
      const Element b1 = ext.p(e1), b2 = ext.p(e2);
      const Element b = B.times(b1, b2);
      const AbelianGroup &G = D.group(b);
      const Element e12 = E.times(e1, e2);
      for (Element d1 = 0; d1 < D.group(b1).size(); ++d1)
        for (Element d2 = 0; d2 < D.group(b2).size(); ++d2)
          if (E.times(ext.plus(d1, e1), ext.plus(d2, e2)) !=
              ext.plus(G.plus(D.ract(b1, d1, b2), D.lact(b1, b2, d2)), e12))
            return fail("(d1+e1)(d2+e2)=(d1P(e2)+P(e1)d2)+e1e2", "at " + tup(d1, ext.label(e1), d2, ext.label(e2)));
      for (Element f2 : fiber[static_cast<std::size_t>(b2)])
        if (sub(e12, E.times(e1, f2)) != D.lact(b1, b2, sub(e2, f2)))
          return fail("e1e2-e1e2'=P(e1)(e2-e2')", "at " + tup(ext.label(e1), ext.label(e2), ext.label(f2)));
      for (Element f1 : fiber[static_cast<std::size_t>(b1)])
        if (sub(e12, E.times(f1, e2)) != D.ract(b1, sub(e1, f1), b2))
          return fail("e1e2-e1'e2=(e1-e1')P(e2)", "at " + tup(ext.label(e1), ext.label(f1), ext.label(e2)));
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t idx3(int n, Element a, Element b, Element c) {
  const auto s = static_cast<std::size_t>(n);
  return (static_cast<std::size_t>(a) * s + static_cast<std::size_t>(b)) * s + static_cast<std::size_t>(c);
}

// f1 - f2 for f1, f2 in one fiber.
Element fiber_diff(const MonoidExtension &ext, Element f1, Element f2) {
  const auto &row = ext.act[static_cast<std::size_t>(f2)];
  for (std::size_t d = 0; d < row.size(); ++d)
    if (row[d] == f1)
      return static_cast<Element>(d);
  throw InternalError("elements " + ext.label(f1) + ", " + ext.label(f2) + " are not in one fiber");
}

} // namespace

CheckResult untwisted_violation(const MonoidExtension &ext, const std::vector<Element> &m) {
  const int n = ext.total.size();
  if (m.size() != tuple_count(n, 3))
    return fail("table length", std::to_string(m.size()));
  const auto M = [&](Element a, Element b, Element c) { return m[idx3(n, a, b, c)]; };
  const auto same = [&](Element a, Element b) { return ext.p(a) == ext.p(b); };
  const auto L = [&](Element e) { return ext.label(e); };
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c) {
        const Element v = M(a, b, c);
        if (!same(a, b)) {
          if (v != -1)
            return fail("defined only for P(f1)=P(f2)", "at " + tup(L(a), L(b), L(c)));
          continue;
        }
        if (v < 0 || v >= n || ext.p(v) != ext.p(c))
          return fail("P(m(f1,f2,f))=P(f)", "at " + tup(L(a), L(b), L(c)));
      }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (M(a, a, b) != b)
        return fail("m(f,f,g)=g", "at " + tup(L(a), L(b)));
      if (same(a, b) && M(a, b, b) != a)
        return fail("m(f,g,g)=f", "at " + tup(L(a), L(b)));
    }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (!same(a, b))
        continue;
      for (Element c = 0; c < n; ++c) {
        if (same(a, c) && M(a, b, c) != M(c, b, a))
          return fail("m(f1,f2,f)=m(f,f2,f1)", "at " + tup(L(a), L(b), L(c)));
        for (Element g = 0; g < n; ++g) {
          const auto &E = ext.total;
          if (E.times(g, M(a, b, c)) != M(E.times(g, a), E.times(g, b), E.times(g, c)))
            return fail("g m(f1,f2,f)=m(gf1,gf2,gf)", "at g=" + L(g) + " " + tup(L(a), L(b), L(c)));
          if (E.times(M(a, b, c), g) != M(E.times(a, g), E.times(b, g), E.times(c, g)))
            return fail("m(f1,f2,f)h=m(f1h,f2h,fh)", "at h=" + L(g) + " " + tup(L(a), L(b), L(c)));
        }
        for (Element d = 0; d < n; ++d) {
          if (!same(c, d))
            continue;
          for (Element e = 0; e < n; ++e)
            if (M(M(a, b, c), d, e) != M(a, b, M(c, d, e)))
              return fail("m(m(a,b,c),d,e)=m(a,b,m(c,d,e))", "at " + tup(L(a), L(b), L(c), L(d), L(e)));
        }
      }
    }
  return std::nullopt;
}

CheckResult phi_violation(const MonoidExtension &ext, const std::vector<Element> &m) {
  const int n = ext.total.size();
  const auto &B = ext.base;
  const auto &D = ext.system;
  // phi[b][b'][d]
  std::vector<std::vector<std::vector<Element>>> phi(
      static_cast<std::size_t>(B.size()), std::vector<std::vector<Element>>(static_cast<std::size_t>(B.size())));
  for (Element b = 0; b < B.size(); ++b)
    for (Element b2 = 0; b2 < B.size(); ++b2)
      phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(b2)].assign(static_cast<std::size_t>(D.group(b).size()), -1);
  for (Element f1 = 0; f1 < n; ++f1)
    for (Element f2 = 0; f2 < n; ++f2) {
      if (ext.p(f1) != ext.p(f2))
        continue;
      const Element d = fiber_diff(ext, f1, f2);
      for (Element f = 0; f < n; ++f) {
        const Element v = fiber_diff(ext, m[idx3(n, f1, f2, f)], f);
        Element &slot = phi[static_cast<std::size_t>(ext.p(f1))][static_cast<std::size_t>(ext.p(f))][static_cast<std::size_t>(d)];
        if (slot != -1 && slot != v)
          return fail("φ well defined", "at " + tup(ext.label(f1), ext.label(f2), ext.label(f)));
        slot = v;
      }
    }
  for (Element b = 0; b < B.size(); ++b) {
    if (!is_identity(phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)]))
      return fail("φ_{b,b}=id", "b=" + std::to_string(b));
    for (Element b1 = 0; b1 < B.size(); ++b1)
      for (Element b2 = 0; b2 < B.size(); ++b2)
        for (Element d = 0; d < D.group(b).size(); ++d) {
          const auto &p01 = phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(b1)];
          const auto &p12 = phi[static_cast<std::size_t>(b1)][static_cast<std::size_t>(b2)];
          const auto &p02 = phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(b2)];
          if (p12[static_cast<std::size_t>(p01[static_cast<std::size_t>(d)])] != p02[static_cast<std::size_t>(d)])
            return fail("φ_{b',b''}φ_{b,b'}=φ_{b,b''}", "at " + tup(b, b1, b2, d));
        }
  }
  return std::nullopt;
}

std::optional<UntwistedFamily> check_untwisted(const MonoidExtension &ext) {
  if (auto v = linear_extension_violation(ext))
    throw DomainError("not a linear extension: " + v->to_string());
  const auto &B = ext.base;
  const auto &D = ext.system;
  const Element u = B.unit();
  for (Element b = 0; b < B.size(); ++b)
    if (D.group(b).size() > kMaxUntwistedFiber)
      throw SearchBudgetExceeded("fiber over " + std::to_string(b) + " has " + std::to_string(D.group(b).size()) +
                                 " elements, limit " + std::to_string(kMaxUntwistedFiber));
  for (Element b = 0; b < B.size(); ++b)
    if (D.group(b).size() != D.group(u).size())
      return std::nullopt;

  const int fs = D.group(u).size();
  std::vector<Element> id(static_cast<std::size_t>(fs));
  for (Element i = 0; i < fs; ++i)
    id[static_cast<std::size_t>(i)] = i;
  // Candidate ψ_b for each b.
  std::vector<std::vector<std::vector<Element>>> isos(static_cast<std::size_t>(B.size()));
  std::size_t space = 1;
  for (Element b = 0; b < B.size(); ++b) {
    auto &list = isos[static_cast<std::size_t>(b)];
    if (b == u) {
      list.push_back(id);
    } else {
      for_each_additive_map(D.group(u), D.group(b), [&](const std::vector<Element> &f) {
        std::vector<bool> hit(static_cast<std::size_t>(fs), false);
        for (Element v : f)
          hit[static_cast<std::size_t>(v)] = true;
        if (std::find(hit.begin(), hit.end(), false) == hit.end())
          list.push_back(f);
        return false;
      });
    }
    if (list.empty())
      return std::nullopt;
    space *= list.size();
    if (space > 1'000'000)
      throw SearchBudgetExceeded("more than 10^6 candidate isomorphism families");
  }

  const int n = ext.total.size();
  std::vector<std::size_t> choice(static_cast<std::size_t>(B.size()), 0);
  while (true) {
    UntwistedFamily fam;
    for (Element b = 0; b < B.size(); ++b)
      fam.psi.push_back(isos[static_cast<std::size_t>(b)][choice[static_cast<std::size_t>(b)]]);
    std::vector<std::vector<Element>> inv(fam.psi.size(), std::vector<Element>(static_cast<std::size_t>(fs)));
    for (std::size_t b = 0; b < fam.psi.size(); ++b)
      for (Element i = 0; i < fs; ++i)
        inv[b][static_cast<std::size_t>(fam.psi[b][static_cast<std::size_t>(i)])] = i;
    fam.m.assign(tuple_count(n, 3), -1);
    for (Element f1 = 0; f1 < n; ++f1)
      for (Element f2 = 0; f2 < n; ++f2) {
        if (ext.p(f1) != ext.p(f2))
          continue;
        const Element d0 = inv[static_cast<std::size_t>(ext.p(f1))][static_cast<std::size_t>(fiber_diff(ext, f1, f2))];
        for (Element f = 0; f < n; ++f)
          fam.m[idx3(n, f1, f2, f)] = ext.plus(fam.psi[static_cast<std::size_t>(ext.p(f))][static_cast<std::size_t>(d0)], f);
      }
    if (!untwisted_violation(ext, fam.m))
      return fam;
    std::size_t j = choice.size();
    bool done = true;
    while (j-- > 0) {
      if (++choice[j] < isos[j].size()) {
        done = false;
        break;
      }
      choice[j] = 0;
    }
    if (done)
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

MonoidExtension counterexample_extension() {
  // Index 0 is the unit 1, index 1 is 0.
  const FiniteMonoid M("{1,0}", 2, 0, {0, 1, 1, 1});
  const AbelianGroup z2 = AbelianGroup::cyclic(2);
  // D_0 = Z/2 ⊕ Z/2, (x,y) encoded 2x + y.
  std::vector<AbelianGroup> groups{AbelianGroup::trivial(), AbelianGroup::direct_sum(z2, z2)};
  // x(-): D_y -> D_xy, indexed x*2 + y
  std::vector<std::vector<Element>> left{{0}, {0, 1, 2, 3}, {0}, {0, 3, 0, 3}};
  // (-)y: D_x -> D_xy
  std::vector<std::vector<Element>> right{{0}, {0}, {0, 1, 2, 3}, {0, 0, 0, 0}};
  MonoidExtension ext = trivial_extension(NaturalSystem(M, std::move(groups), std::move(left), std::move(right)));
  ext.labels = {"1", "00", "01", "10", "11"};
  return ext;
}

namespace {

void expect(bool ok, const std::string &what) {
  if (!ok)
    throw CounterexampleBroken(what);
}

} // namespace

CounterexampleReport counterexample_harness() {
  const MonoidExtension ext = counterexample_extension();
  const auto &E = ext.total;
  CounterexampleReport rep;

  const std::map<std::string, Element> by_label{{"1", 0}, {"00", 1}, {"01", 2}, {"10", 3}, {"11", 4}};
  const std::vector<std::string> display_order{"1", "00", "10", "01", "11"};
  rep.total_order = display_order;
  for (std::size_t i = 1; i < display_order.size(); ++i)
    for (std::size_t j = 1; j < display_order.size(); ++j) {
      const Element a = by_label.at(display_order[i]), b = by_label.at(display_order[j]);
      rep.products.push_back({display_order[i], display_order[j], ext.label(E.times(a, b))});
    }
  for (const auto &row : rep.products) {
    // Every non-unit product is (0,(y',y')) for the right factor (x',y').
    const std::string expected = row[1][1] == '0' ? "00" : "11";
    expect(row[2] == expected, "product " + row[0] + "·" + row[1] + " = " + row[2] + ", expected " + expected);
  }
  for (const auto &a : display_order) {
    expect(ext.label(E.times(0, by_label.at(a))) == a, "1 is not a left unit");
    expect(ext.label(E.times(by_label.at(a), 0)) == a, "1 is not a right unit");
  }

  // S = E / (00 ~ 10) acting on itself from the left.
  rep.s_elements = {"1", "*0", "01", "11"};
  const std::vector<Element> cls{0, 1, 2, 1, 3};
  const std::vector<Element> rep_of{0, 1, 2, 4};
  const std::vector<Element> eta{0, 1, 1, 1};
  const int sn = 4;
  std::vector<std::vector<Element>> act(static_cast<std::size_t>(E.size()), std::vector<Element>(sn));
  for (Element e = 0; e < E.size(); ++e)
    for (Element x = 0; x < E.size(); ++x) {
      const Element s = cls[static_cast<std::size_t>(x)];
      const Element v = cls[static_cast<std::size_t>(E.times(e, x))];
      if (x == rep_of[static_cast<std::size_t>(s)])
        act[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)] = v;
      expect(v == cls[static_cast<std::size_t>(E.times(e, rep_of[static_cast<std::size_t>(s)]))],
             "the identification 00 ~ 10 is not compatible with the action");
    }
  const Element ten = by_label.at("10");
  const auto sname = [&](Element s) { return rep.s_elements[static_cast<std::size_t>(s)]; };
  for (Element s : {1, 2, 3})
    rep.action_of_10.push_back({sname(s), sname(act[static_cast<std::size_t>(ten)][static_cast<std::size_t>(s)])});
  expect(rep.action_of_10[0][1] == "*0" && rep.action_of_10[1][1] == "11" && rep.action_of_10[2][1] == "11",
         "10 does not act as *0->*0, 01->11, 11->11");

  // Maltsev maps on S x_M S x_M S over M. Fiber 1 is {1}; on fiber 0 the
  // triples with x = y or y = z are fixed, the other 12 are free.
  const std::vector<Element> f0{1, 2, 3};
  std::vector<std::array<Element, 3>> free;
  for (Element a : f0)
    for (Element b : f0)
      for (Element c : f0)
        if (a != b && b != c)
          free.push_back({a, b, c});
  expect(free.size() == 12, "expected 12 free triples");

  const auto at = [&](Element a, Element b, Element c) { return idx3(sn, a, b, c); };
  std::vector<Element> m(tuple_count(sn, 3), -1);
  m[at(0, 0, 0)] = 0;
  for (Element a : f0)
    for (Element b : f0) {
      m[at(a, b, b)] = a;
      m[at(b, b, a)] = a;
    }
  std::size_t total_maps = 1;
  for (std::size_t i = 0; i < free.size(); ++i)
    total_maps *= 3;

  const Element star0 = 1, s01 = 2, s11 = 3;
  for (std::size_t code = 0; code < total_maps; ++code) {
    std::size_t c = code;
    for (const auto &t : free) {
      m[at(t[0], t[1], t[2])] = f0[c % 3];
      c /= 3;
    }
    bool equivariant = true;
    for (Element e = 0; e < E.size() && equivariant; ++e) {
      const auto &g = act[static_cast<std::size_t>(e)];
      for (Element a = 0; a < sn && equivariant; ++a)
        for (Element b = 0; b < sn && equivariant; ++b)
          for (Element cc = 0; cc < sn && equivariant; ++cc) {
            if (eta[static_cast<std::size_t>(a)] != eta[static_cast<std::size_t>(b)] ||
                eta[static_cast<std::size_t>(b)] != eta[static_cast<std::size_t>(cc)])
              continue;
            const auto G = [&](Element s) { return g[static_cast<std::size_t>(s)]; };
            equivariant = G(m[at(a, b, cc)]) == m[at(G(a), G(b), G(cc))];
          }
    }
    ++rep.maltsev_maps;
    if (!equivariant)
      continue;
    ++rep.equivariant;

    const Element forced = m[at(star0, s01, s11)];
    if (rep.forced_value.empty())
      rep.forced_value = sname(forced);
    expect(forced == star0, "an equivariant Maltsev map has m(*0,01,11) = " + sname(forced));

    const Element lhs = m[at(s11, m[at(star0, s01, s11)], star0)];
    const Element rhs = m[at(s11, s11, m[at(s01, star0, star0)])];
    rep.chain_lhs.push_back(sname(lhs));
    rep.chain_rhs.push_back(sname(rhs));
    expect(lhs == s11 && rhs == s01, "the chain m(11,m(*0,01,11),*0) = m(11,11,m(01,*0,*0)) does not give 11 vs 01");

    std::string witness;
    for (Element a : f0)
      for (Element b : f0)
        for (Element c2 : f0)
          for (Element d : f0)
            for (Element e : f0)
              if (witness.empty() && m[at(m[at(a, b, c2)], d, e)] != m[at(a, b, m[at(c2, d, e)])])
                witness = "m(m(" + sname(a) + "," + sname(b) + "," + sname(c2) + ")," + sname(d) + "," + sname(e) +
                          ") = " + sname(m[at(m[at(a, b, c2)], d, e)]) + " != " +
                          sname(m[at(a, b, m[at(c2, d, e)])]) + " = m(" + sname(a) + "," + sname(b) + ",m(" +
                          sname(c2) + "," + sname(d) + "," + sname(e) + "))";
    if (witness.empty())
      ++rep.associative;
    rep.witnesses.push_back(witness);
  }
  expect(rep.equivariant > 0, "no equivariant Maltsev map at all");
  expect(rep.associative == 0, std::to_string(rep.associative) + " associative equivariant Maltsev maps");
  return rep;
}

std::string CounterexampleReport::text() const {
  std::ostringstream out;
  out << "elements:";
  for (const auto &e : total_order)
    out << " " << e;
  out << "\nproducts:\n";
  for (const auto &p : products)
    out << "  " << p[0] << "*" << p[1] << " = " << p[2] << "\n";
  out << "S:";
  for (const auto &s : s_elements)
    out << " " << s;
  out << "\naction of 10:";
  for (const auto &a : action_of_10)
    out << " " << a[0] << "->" << a[1];
  out << "\nmaltsev maps over M: " << maltsev_maps << "\n";
  out << "equivariant: " << equivariant << "\n";
  out << "forced m(*0,01,11) = " << forced_value << "\n";
  out << "associative: " << associative << "\n";
  std::map<std::pair<std::string, std::string>, std::size_t> chains;
  for (std::size_t i = 0; i < chain_lhs.size(); ++i)
    ++chains[{chain_lhs[i], chain_rhs[i]}];
  for (const auto &[c, count] : chains)
    out << "m(11,m(*0,01,11),*0) = " << c.first << ", m(11,11,m(01,*0,*0)) = " << c.second << " in " << count
        << " candidates\n";
  if (!witnesses.empty())
    out << "first failure: " << witnesses.front() << "\n";
  return out.str();
}

} // namespace mk
