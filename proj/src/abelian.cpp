#include "mk/abelian.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "mk/commutator.hpp"
#include "mk/error.hpp"

namespace mk {

namespace {

using Table = std::vector<Element>;

std::size_t idx3(int n, Element a, Element b, Element c) {
  const auto s = static_cast<std::size_t>(n);
  return (static_cast<std::size_t>(a) * s + static_cast<std::size_t>(b)) * s + static_cast<std::size_t>(c);
}

std::size_t idx2(int n, Element a, Element b) {
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b);
}

std::string tuple_text(std::span<const Element> xs) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << (i ? "," : "") << xs[i];
  out << ")";
  return out.str();
}

// Tables of the clone members, sorted, with a reverse index.
struct SortedClone {
  std::vector<TermOp> ops;
  std::map<Table, Element> index;

  Element at(const Table &t, const char *what) const {
    auto it = index.find(t);
    if (it == index.end())
      throw InternalError(std::string(what) + " is not a term operation");
    return it->second;
  }
};

SortedClone sorted_clone(std::vector<TermOp> ops) {
  std::sort(ops.begin(), ops.end(), [](const TermOp &a, const TermOp &b) { return a.table < b.table; });
  SortedClone out;
  for (std::size_t i = 0; i < ops.size(); ++i)
    out.index.emplace(ops[i].table, static_cast<Element>(i));
  out.ops = std::move(ops);
  return out;
}

} // namespace

std::optional<std::string> abelian_violation(const FiniteAlgebra &alg, const TermOp &m) {
  const int n = alg.size();
  if (n == 0)
    return std::nullopt;
  const auto M = [&](Element x, Element y, Element z) { return m.table[idx3(n, x, y, z)]; };
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z) {
        if (M(x, y, z) != M(z, y, x))
          return "m is not commutative at (" + std::to_string(x) + "," + std::to_string(y) + "," +
                 std::to_string(z) + ")";
        for (Element u = 0; u < n; ++u)
          for (Element v = 0; v < n; ++v)
            if (M(M(x, y, z), u, v) != M(x, y, M(z, u, v)))
              return "m is not associative at (" + std::to_string(x) + "," + std::to_string(y) + "," +
                     std::to_string(z) + "," + std::to_string(u) + "," + std::to_string(v) + ")";
      }
  // Abelian group with zero 0: x + y = m(x,0,y), -x = m(0,x,0).
  const auto plus = [&](Element x, Element y) { return M(x, 0, y); };
  const auto minus = [&](Element x, Element y) { return M(x, y, 0); };

  // f commutes with m iff f(a) - f(0) is additive on A^k.
  for (const auto &op : alg.ops()) {
    const int k = op.arity;
    if (k == 0)
      continue;
    std::vector<Element> args(static_cast<std::size_t>(k), 0);
    const Element f0 = op.table[0];
    // h[i][x] = f(0,..,x,..,0) - f(0)
    std::vector<std::vector<Element>> h(static_cast<std::size_t>(k), std::vector<Element>(static_cast<std::size_t>(n)));
    for (int i = 0; i < k; ++i)
      for (Element x = 0; x < n; ++x) {
        std::fill(args.begin(), args.end(), 0);
        args[static_cast<std::size_t>(i)] = x;
        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] = minus(op.table[encode_tuple(args, n)], f0);
      }
    for (int i = 0; i < k; ++i) {
      const auto &hi = h[static_cast<std::size_t>(i)];
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          if (hi[static_cast<std::size_t>(plus(x, y))] !=
              plus(hi[static_cast<std::size_t>(x)], hi[static_cast<std::size_t>(y)]))
            return "operation '" + op.name + "' is not affine in argument " + std::to_string(i) + " at (" +
                   std::to_string(x) + "," + std::to_string(y) + ")";
    }
    for (std::size_t t = 0; t < op.table.size(); ++t) {
      decode_tuple(t, n, args);
      Element expect = f0;
      for (int i = 0; i < k; ++i)
        expect = plus(expect, h[static_cast<std::size_t>(i)][static_cast<std::size_t>(args[static_cast<std::size_t>(i)])]);
      if (op.table[t] != expect)
        return "operation '" + op.name + "' does not commute with m at " + tuple_text(args);
    }
  }
  return std::nullopt;
}

Abelianization abelianize(const FiniteAlgebra &alg, const TermOp &m, std::size_t budget) {
  if (alg.size() == 0)
    throw DomainError("cannot abelianize the empty algebra");
  require_maltsev(alg, m);
  if (auto why = abelian_violation(alg, m))
    throw NotAbelian("'" + alg.name() + "' is not abelian: " + *why);

  const int n = alg.size();
  const auto M = [&](Element x, Element y, Element z) { return m.table[idx3(n, x, y, z)]; };

  const SortedClone un = sorted_clone(term_clone(alg, 1, budget).members);
  std::vector<TermOp> convex;
  for (auto &op : term_clone(alg, 2, budget).members) {
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a)
      ok = op.table[idx2(n, a, a)] == a;
    if (ok)
      convex.push_back(std::move(op));
  }
  const SortedClone bin = sorted_clone(std::move(convex));
  const int ms = static_cast<int>(un.ops.size());
  const int rs = static_cast<int>(bin.ops.size());
  const auto ux = [&](Element x, Element a) { return un.ops[static_cast<std::size_t>(x)].table[static_cast<std::size_t>(a)]; };
  const auto br = [&](Element r, Element a, Element b) {
    return bin.ops[static_cast<std::size_t>(r)].table[idx2(n, a, b)];
  };

  std::vector<Element> radd(tuple_count(rs, 2)), rmul(radd.size());
  Table t2(tuple_count(n, 2)), t1(static_cast<std::size_t>(n));
  for (Element r = 0; r < rs; ++r)
    for (Element s = 0; s < rs; ++s) {
      for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b)
          t2[idx2(n, a, b)] = M(br(r, a, b), a, br(s, a, b));
      radd[idx2(rs, r, s)] = bin.at(t2, "r+s");
      for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b)
          t2[idx2(n, a, b)] = br(r, a, br(s, a, b));
      rmul[idx2(rs, r, s)] = bin.at(t2, "rs");
    }
  std::vector<Element> madd(tuple_count(ms, 2)), act(static_cast<std::size_t>(rs) * static_cast<std::size_t>(ms));
  for (Element x = 0; x < ms; ++x) {
    for (Element y = 0; y < ms; ++y) {
      for (Element a = 0; a < n; ++a)
        t1[static_cast<std::size_t>(a)] = M(ux(x, a), a, ux(y, a));
      madd[idx2(ms, x, y)] = un.at(t1, "x+y");
    }
    for (Element r = 0; r < rs; ++r) {
      for (Element a = 0; a < n; ++a)
        t1[static_cast<std::size_t>(a)] = br(r, a, ux(x, a));
      act[idx2(ms, r, x)] = un.at(t1, "rx");
    }
  }
  std::vector<Element> d(static_cast<std::size_t>(ms));
  for (Element x = 0; x < ms; ++x) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        t2[idx2(n, a, b)] = M(ux(x, a), ux(x, b), b);
    d[static_cast<std::size_t>(x)] = bin.at(t2, "∂x");
  }

  Abelianization out;
  try {
    FiniteRing ring("R(" + alg.name() + ")", rs, std::move(radd), std::move(rmul));
    LeftModule mod("M(" + alg.name() + ")", ring, ms, std::move(madd), std::move(act));
    out.form = LinearForm("d(" + alg.name() + ")", std::move(mod), std::move(d));
  } catch (const InvalidStructure &e) {
    throw InternalError(std::string("abelianization produced an invalid form: ") + e.what());
  }
  out.unary = un.ops;
  out.binary = bin.ops;
  return out;
}

FiniteAlgebra realize(const LinearForm &form, AffinityCarrier carrier) {
  const AffinityStructure A = canonical_affinity(form, carrier);
  const int n = A.size;
  std::vector<Operation> ops;
  ops.push_back(Operation{"m", 3, A.herd});
  for (Element r = 0; r < form.ring().size(); ++r) {
    Table t(tuple_count(n, 2));
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        t[idx2(n, a, b)] = A.scale(r, a, b);
    ops.push_back(Operation{"r" + std::to_string(r), 2, std::move(t)});
  }
  for (Element x = 0; x < form.module().size(); ++x) {
    Table t(static_cast<std::size_t>(n));
    for (Element a = 0; a < n; ++a)
      t[static_cast<std::size_t>(a)] = A.unary(x, a);
    ops.push_back(Operation{"p" + std::to_string(x), 1, std::move(t)});
  }
  return FiniteAlgebra(A.name, n, std::move(ops));
}

RoundtripReport roundtrip_check(const LinearForm &form, int arity_bound, std::size_t budget) {
  if (arity_bound < 2)
    throw ArityError("roundtrip needs hom-sets up to arity 2 at least");
  RoundtripReport rep;
  const AffinityStructure A = canonical_affinity(form, AffinityCarrier::sum);
  const FiniteAlgebra alg = realize(form, AffinityCarrier::sum);
  const TermOp m = parse_term(alg, "m(x,y,z)", 3);

  for (int k = 1; k <= arity_bound; ++k) {
    std::vector<Table> clone;
    for (auto &op : term_clone(alg, k, budget).members)
      clone.push_back(std::move(op.table));
    std::sort(clone.begin(), clone.end());
    std::vector<Table> hom;
    for (const auto &op : all_affinity_ops(form, k))
      hom.push_back(interpret(op, A));
    std::sort(hom.begin(), hom.end());
    const auto distinct = static_cast<std::size_t>(std::unique(hom.begin(), hom.end()) - hom.begin());
    if (distinct != hom.size()) {
      rep.failure = "interpretation is not faithful at arity " + std::to_string(k);
      return rep;
    }
    if (clone != hom) {
      rep.failure = "arity " + std::to_string(k) + ": " + std::to_string(clone.size()) +
                    " term operations vs " + std::to_string(hom.size()) + " theory operations";
      return rep;
    }
  }

  rep.recovered = abelianize(alg, m, budget);
  const LinearForm &g = rep.recovered.form;
  const auto &R = form.ring();
  const auto &Mod = form.module();
  if (g.ring().size() != R.size() || g.module().size() != Mod.size()) {
    rep.failure = "recovered sizes differ";
    return rep;
  }
  const auto find = [](const std::vector<TermOp> &ops, const Table &t) {
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (ops[i].table == t)
        return static_cast<Element>(i);
    throw InternalError("theory operation missing from the clone");
  };
  for (Element r = 0; r < R.size(); ++r)
    rep.ring_map.push_back(find(rep.recovered.binary, interpret(AffinityOp{Mod.zero(), {r}}, A)));
  for (Element x = 0; x < Mod.size(); ++x)
    rep.module_map.push_back(find(rep.recovered.unary, interpret(AffinityOp{x, {}}, A)));

  const auto fr = [&](Element r) { return rep.ring_map[static_cast<std::size_t>(r)]; };
  const auto fm = [&](Element x) { return rep.module_map[static_cast<std::size_t>(x)]; };
  const auto &gR = g.ring();
  const auto &gM = g.module();
  std::ostringstream why;
  if (fr(R.one()) != gR.one())
    why << "1 not preserved";
  for (Element r = 0; r < R.size() && why.str().empty(); ++r)
    for (Element s = 0; s < R.size() && why.str().empty(); ++s) {
      if (fr(R.plus(r, s)) != gR.plus(fr(r), fr(s)))
        why << "ring map not additive at (" << r << "," << s << ")";
      else if (fr(R.times(r, s)) != gR.times(fr(r), fr(s)))
        why << "ring map not multiplicative at (" << r << "," << s << ")";
    }
  for (Element x = 0; x < Mod.size() && why.str().empty(); ++x) {
    if (fr(form.d(x)) != g.d(fm(x)))
      why << "∂ not preserved at " << x;
    for (Element y = 0; y < Mod.size() && why.str().empty(); ++y)
      if (fm(Mod.plus(x, y)) != gM.plus(fm(x), fm(y)))
        why << "module map not additive at (" << x << "," << y << ")";
    for (Element r = 0; r < R.size() && why.str().empty(); ++r)
      if (fm(Mod.scale(r, x)) != gM.scale(fr(r), fm(x)))
        why << "module map not R-linear at (" << r << "," << x << ")";
  }
  rep.failure = why.str();
  rep.isomorphic = rep.failure.empty();
  return rep;
}

std::vector<Element> pseudoconstants(const LinearForm &form) {
  std::vector<Element> out;
  for (Element x = 0; x < form.module().size(); ++x)
    if (form.d(x) == form.ring().one())
      out.push_back(x);
  return out;
}

std::vector<Element> kernel_elements(const LinearForm &form) {
  std::vector<Element> out;
  for (Element x = 0; x < form.module().size(); ++x)
    if (form.d(x) == form.ring().zero())
      out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------

ConstTheory::ConstTheory(FiniteRing ring, LeftModule k) : ring_(std::move(ring)), k_(std::move(k)) {}

std::size_t ConstTheory::hom_count(int n, int k) const {
  if (n < 0 || k < 0)
    throw ArityError("negative arity");
  const std::size_t row = static_cast<std::size_t>(k_.size()) * tuple_count(ring_.size(), n);
  std::size_t total = 1;
  for (int j = 0; j < k; ++j)
    total *= row;
  return total;
}

ConstTheory::Morphism ConstTheory::hom_at(int n, int k, std::size_t index) const {
  const std::size_t coeffs = tuple_count(ring_.size(), n);
  const std::size_t row = static_cast<std::size_t>(k_.size()) * coeffs;
  Morphism f{n, k, std::vector<Element>(static_cast<std::size_t>(k)), std::vector<Element>(static_cast<std::size_t>(k * n))};
  for (int j = k; j-- > 0;) {
    std::size_t r = index % row;
    index /= row;
    f.kappa[static_cast<std::size_t>(j)] = static_cast<Element>(r / coeffs);
    decode_tuple(r % coeffs, ring_.size(),
                 std::span<Element>(f.coeff).subspan(static_cast<std::size_t>(j * n), static_cast<std::size_t>(n)));
  }
  return f;
}

std::vector<ConstTheory::Morphism> ConstTheory::hom(int n, int k) const {
  std::vector<Morphism> out;
  const std::size_t count = hom_count(n, k);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(hom_at(n, k, i));
  return out;
}

ConstTheory::Morphism ConstTheory::identity(int n) const {
  Morphism f{n, n, std::vector<Element>(static_cast<std::size_t>(n), k_.zero()),
             std::vector<Element>(static_cast<std::size_t>(n * n), ring_.zero())};
  for (int i = 0; i < n; ++i)
    f.coeff[static_cast<std::size_t>(i * n + i)] = ring_.one();
  return f;
}

ConstTheory::Morphism ConstTheory::compose(const Morphism &g, const Morphism &f) const {
  if (g.n != f.k)
    throw ArityError("cannot compose X^" + std::to_string(g.n) + " -> X^" + std::to_string(g.k) + " after X^" +
                     std::to_string(f.n) + " -> X^" + std::to_string(f.k));
  Morphism h{f.n, g.k, std::vector<Element>(static_cast<std::size_t>(g.k)),
             std::vector<Element>(static_cast<std::size_t>(g.k * f.n), ring_.zero())};
  for (int t = 0; t < g.k; ++t) {
    Element kappa = g.kappa[static_cast<std::size_t>(t)];
    for (int j = 0; j < f.k; ++j)
      kappa = k_.plus(kappa, k_.scale(g.c(t, j), f.kappa[static_cast<std::size_t>(j)]));
    h.kappa[static_cast<std::size_t>(t)] = kappa;
    for (int i = 0; i < f.n; ++i) {
      Element c = ring_.zero();
      for (int j = 0; j < f.k; ++j)
        c = ring_.plus(c, ring_.times(g.c(t, j), f.c(j, i)));
      h.coeff[static_cast<std::size_t>(t * f.n + i)] = c;
    }
  }
  return h;
}

ConstTheory::Morphism ConstTheory::project(const Morphism &f) const {
  Morphism p = f;
  std::fill(p.kappa.begin(), p.kappa.end(), k_.zero());
  return p;
}

CheckResult ConstTheory::extension_violation(int max_arity) const {
  const auto text = [](const Morphism &f) {
    std::ostringstream out;
    out << "[";
    for (int j = 0; j < f.k; ++j) {
      out << (j ? ";" : "") << f.kappa[static_cast<std::size_t>(j)] << "|";
      for (int i = 0; i < f.n; ++i)
        out << (i ? " " : "") << f.c(j, i);
    }
    out << "]";
    return out.str();
  };
  // Difference of two morphisms in the same fiber: the K-rows.
  const auto diff = [&](const Morphism &a, const Morphism &b) {
    std::vector<Element> d(a.kappa.size());
    for (std::size_t j = 0; j < d.size(); ++j)
      d[j] = k_.minus(a.kappa[j], b.kappa[j]);
    return d;
  };
  // Left action of a T_R morphism X^k -> X^l on K^k.
  const auto left = [&](const Morphism &g, const std::vector<Element> &d) {
    std::vector<Element> out(static_cast<std::size_t>(g.k), k_.zero());
    for (int t = 0; t < g.k; ++t)
      for (int j = 0; j < g.n; ++j)
        out[static_cast<std::size_t>(t)] =
            k_.plus(out[static_cast<std::size_t>(t)], k_.scale(g.c(t, j), d[static_cast<std::size_t>(j)]));
    return out;
  };

  const std::size_t span = static_cast<std::size_t>(max_arity) + 1;
  std::vector<std::vector<Morphism>> homs(span * span);
  // fibers[n*span+k][i]: indices of the morphisms with the same projection as i
  std::vector<std::vector<std::vector<std::size_t>>> fibers(span * span);
  for (int n = 0; n <= max_arity; ++n)
    for (int k = 0; k <= max_arity; ++k) {
      const std::size_t at = static_cast<std::size_t>(n) * span + static_cast<std::size_t>(k);
      homs[at] = hom(n, k);
      std::map<Morphism, std::vector<std::size_t>> by_projection;
      for (std::size_t i = 0; i < homs[at].size(); ++i)
        by_projection[project(homs[at][i])].push_back(i);
      for (const auto &h : homs[at])
        fibers[at].push_back(by_projection[project(h)]);
    }
  const auto at = [&](int n, int k) { return static_cast<std::size_t>(n) * span + static_cast<std::size_t>(k); };

  for (int a = 0; a <= max_arity; ++a)
    for (int b = 0; b <= max_arity; ++b) {
      const auto &fs = homs[at(a, b)];
      for (const auto &f : fs)
        if (compose(identity(b), f) != f || compose(f, identity(a)) != f)
          return Violation{"identity law", text(f)};
      for (int c = 0; c <= max_arity; ++c) {
        const auto &gs = homs[at(b, c)];
        for (std::size_t gi = 0; gi < gs.size(); ++gi)
          for (std::size_t fi = 0; fi < fs.size(); ++fi) {
            const Morphism &g = gs[gi], &f = fs[fi];
            const Morphism gf = compose(g, f);
            if (project(gf) != compose(project(g), project(f)))
              return Violation{"P is a functor", text(g) + " after " + text(f)};
            for (std::size_t f2 : fibers[at(a, b)][fi])
              if (diff(gf, compose(g, fs[f2])) != left(project(g), diff(f, fs[f2])))
                return Violation{"e1e2-e1e2'=P(e1)(e2-e2')", text(g) + "," + text(f) + "," + text(fs[f2])};
            for (std::size_t g2 : fibers[at(b, c)][gi])
              if (diff(gf, compose(gs[g2], f)) != diff(g, gs[g2]))
                return Violation{"e1e2-e1'e2=(e1-e1')P(e2)", text(g) + "," + text(gs[g2]) + "," + text(f)};
            for (int d = 0; d <= max_arity; ++d)
              for (const auto &h : homs[at(c, d)])
                if (compose(h, gf) != compose(compose(h, g), f))
                  return Violation{"associativity", text(h) + "," + text(g) + "," + text(f)};
          }
      }
    }
  return std::nullopt;
}

ConstTheory constants_theory(const LinearForm &form) {
  if (pseudoconstants(form).empty())
    throw DomainError("'" + form.name() + "' has no pseudoconstant (1 is not in the image of ∂)");
  const auto ker = kernel_elements(form);
  return ConstTheory(form.ring(), form.module().submodule(ker, "ker " + form.name()));
}

} // namespace mk
