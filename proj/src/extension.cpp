#include "mk/extension.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "mk/algebra.hpp"
#include "mk/error.hpp"
#include "mk/parallel.hpp"

namespace mk {

namespace {

std::size_t at(int n, Element a, Element b) {
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b);
}

template <class... Ts> std::string tup(Ts... xs) {
  std::ostringstream out;
  out << "(";
  bool first = true;
  ((out << (first ? "" : ",") << xs, first = false), ...);
  out << ")";
  return out.str();
}

std::vector<Element> index_of(int size, const std::vector<Element> &elements) {
  std::vector<Element> idx(static_cast<std::size_t>(size), -1);
  for (std::size_t i = 0; i < elements.size(); ++i)
    idx[static_cast<std::size_t>(elements[i])] = static_cast<Element>(i);
  return idx;
}

std::size_t capped_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base)
      return cap + 1;
    out *= base;
  }
  return out;
}

} // namespace

void validate_diagram(const FormExtension &ext) {
  const auto &S = ext.total.ring();
  const auto &R = ext.base.ring();
  const auto &N = ext.total.module();
  const auto &M = ext.base.module();
  if (ext.p.size() != static_cast<std::size_t>(S.size()))
    throw DiagramError("p has " + std::to_string(ext.p.size()) + " entries, S has " + std::to_string(S.size()));
  if (ext.q.size() != static_cast<std::size_t>(N.size()))
    throw DiagramError("q has " + std::to_string(ext.q.size()) + " entries, N has " + std::to_string(N.size()));
  for (Element v : ext.p)
    if (v < 0 || v >= R.size())
      throw DiagramError("p takes the value " + std::to_string(v) + " outside R");
  for (Element v : ext.q)
    if (v < 0 || v >= M.size())
      throw DiagramError("q takes the value " + std::to_string(v) + " outside M");
  const auto p = [&](Element s) { return ext.p[static_cast<std::size_t>(s)]; };
  const auto q = [&](Element n) { return ext.q[static_cast<std::size_t>(n)]; };

  if (p(S.one()) != R.one())
    throw DiagramError("p(1) != 1");
  for (Element a = 0; a < S.size(); ++a)
    for (Element b = 0; b < S.size(); ++b) {
      if (p(S.plus(a, b)) != R.plus(p(a), p(b)))
        throw DiagramError("p is not additive at " + tup(a, b));
      if (p(S.times(a, b)) != R.times(p(a), p(b)))
        throw DiagramError("p is not multiplicative at " + tup(a, b));
    }
  for (Element x = 0; x < N.size(); ++x) {
    for (Element y = 0; y < N.size(); ++y)
      if (q(N.plus(x, y)) != M.plus(q(x), q(y)))
        throw DiagramError("q is not additive at " + tup(x, y));
    for (Element s = 0; s < S.size(); ++s)
      if (q(N.scale(s, x)) != M.scale(p(s), q(x)))
        throw DiagramError("q(sn) != p(s)q(n) at " + tup(s, x));
    if (ext.base.d(q(x)) != p(ext.total.d(x)))
      throw DiagramError("the square does not commute at n=" + std::to_string(x));
  }
  std::vector<bool> hit_r(static_cast<std::size_t>(R.size())), hit_m(static_cast<std::size_t>(M.size()));
  for (Element v : ext.p)
    hit_r[static_cast<std::size_t>(v)] = true;
  for (Element v : ext.q)
    hit_m[static_cast<std::size_t>(v)] = true;
  for (Element r = 0; r < R.size(); ++r)
    if (!hit_r[static_cast<std::size_t>(r)])
      throw DiagramError("p is not surjective: " + std::to_string(r) + " is missed");
  for (Element m = 0; m < M.size(); ++m)
    if (!hit_m[static_cast<std::size_t>(m)])
      throw DiagramError("q is not surjective: " + std::to_string(m) + " is missed");
}

CrextReport crext_check(const FormExtension &ext) {
  validate_diagram(ext);
  const auto &S = ext.total.ring();
  const auto &R = ext.base.ring();
  const auto &N = ext.total.module();
  const auto &M = ext.base.module();

  CrextReport rep;
  for (Element s = 0; s < S.size(); ++s)
    if (ext.p[static_cast<std::size_t>(s)] == R.zero())
      rep.b_elements.push_back(s);
  for (Element n = 0; n < N.size(); ++n)
    if (ext.q[static_cast<std::size_t>(n)] == M.zero())
      rep.k_elements.push_back(n);

  for (Element b : rep.b_elements)
    for (Element c : rep.b_elements)
      if (S.times(b, c) != S.zero()) {
        rep.witness = "B^2 != 0: " + std::to_string(b) + "*" + std::to_string(c) + " = " +
                      std::to_string(S.times(b, c)) + " in S";
        return rep;
      }
  for (Element b : rep.b_elements)
    for (Element k : rep.k_elements)
      if (N.scale(b, k) != N.zero()) {
        rep.witness = "BK != 0: " + std::to_string(b) + "*" + std::to_string(k) + " = " +
                      std::to_string(N.scale(b, k)) + " in N";
        return rep;
      }

  std::vector<Element> sec_r(static_cast<std::size_t>(R.size()), -1), sec_m(static_cast<std::size_t>(M.size()), -1);
  for (Element s = S.size(); s-- > 0;)
    sec_r[static_cast<std::size_t>(ext.p[static_cast<std::size_t>(s)])] = s;
  for (Element n = N.size(); n-- > 0;)
    sec_m[static_cast<std::size_t>(ext.q[static_cast<std::size_t>(n)])] = n;
  const auto bidx = index_of(S.size(), rep.b_elements);
  const auto kidx = index_of(N.size(), rep.k_elements);
  const auto rlift = [&](Element r) { return sec_r[static_cast<std::size_t>(r)]; };
  const auto mlift = [&](Element m) { return sec_m[static_cast<std::size_t>(m)]; };

  // Induced structures must not depend on the chosen lifts.
  for (Element s = 0; s < S.size(); ++s) {
    const Element s0 = rlift(ext.p[static_cast<std::size_t>(s)]);
    for (Element b : rep.b_elements)
      if (S.times(s, b) != S.times(s0, b) || S.times(b, s) != S.times(b, s0)) {
        rep.witness = "R-action on B depends on the lift at " + tup(s, b);
        return rep;
      }
    for (Element k : rep.k_elements)
      if (N.scale(s, k) != N.scale(s0, k)) {
        rep.witness = "R-action on K depends on the lift at " + tup(s, k);
        return rep;
      }
  }
  for (Element n = 0; n < N.size(); ++n) {
    const Element n0 = mlift(ext.q[static_cast<std::size_t>(n)]);
    for (Element b : rep.b_elements)
      if (N.scale(b, n) != N.scale(b, n0)) {
        rep.witness = "b·m depends on the lift at " + tup(b, n);
        return rep;
      }
  }

  const int bs = static_cast<int>(rep.b_elements.size());
  const int ks = static_cast<int>(rep.k_elements.size());
  const auto B = [&](Element i) { return rep.b_elements[static_cast<std::size_t>(i)]; };
  const auto K = [&](Element i) { return rep.k_elements[static_cast<std::size_t>(i)]; };
  const auto inB = [&](Element s) { return bidx[static_cast<std::size_t>(s)]; };
  const auto inK = [&](Element n) { return kidx[static_cast<std::size_t>(n)]; };

  std::vector<Element> badd(tuple_count(bs, 2)), left(static_cast<std::size_t>(R.size() * bs)),
      right(static_cast<std::size_t>(bs * R.size()));
  for (Element i = 0; i < bs; ++i) {
    for (Element j = 0; j < bs; ++j)
      badd[at(bs, i, j)] = inB(S.plus(B(i), B(j)));
    for (Element r = 0; r < R.size(); ++r) {
      left[at(bs, r, i)] = inB(S.times(rlift(r), B(i)));
      right[at(R.size(), i, r)] = inB(S.times(B(i), rlift(r)));
    }
  }
  std::vector<Element> kadd(tuple_count(ks, 2)), kact(static_cast<std::size_t>(R.size() * ks));
  for (Element i = 0; i < ks; ++i) {
    for (Element j = 0; j < ks; ++j)
      kadd[at(ks, i, j)] = inK(N.plus(K(i), K(j)));
    for (Element r = 0; r < R.size(); ++r)
      kact[at(ks, r, i)] = inK(N.scale(rlift(r), K(i)));
  }
  std::vector<Element> delta(static_cast<std::size_t>(ks)), dot(static_cast<std::size_t>(bs * M.size()));
  for (Element i = 0; i < ks; ++i)
    delta[static_cast<std::size_t>(i)] = inB(ext.total.d(K(i)));
  for (Element i = 0; i < bs; ++i)
    for (Element m = 0; m < M.size(); ++m)
      dot[at(M.size(), i, m)] = inK(N.scale(B(i), mlift(m)));

  try {
    Bimodule bim("Ker p", R, bs, std::move(badd), std::move(left), std::move(right));
    LeftModule kmod("Ker q", R, ks, std::move(kadd), std::move(kact));
    rep.bimodule.emplace("Ker", ext.base, std::move(bim), std::move(kmod), std::move(delta), std::move(dot));
  } catch (const InvalidStructure &e) {
    throw InternalError(std::string("induced structure is not a ∂-bimodule: ") + e.what());
  }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------

CheckResult derivation_violation(const DBimodule &bim, const Derivation &der) {
  const auto &form = bim.form();
  const auto &R = form.ring();
  const auto &M = form.module();
  const auto &B = bim.b();
  const auto &K = bim.k();
  if (der.d.size() != static_cast<std::size_t>(R.size()) || der.nabla.size() != static_cast<std::size_t>(M.size()))
    return Violation{"shape", "d or ∇ has the wrong length"};
  const auto d = [&](Element r) { return der.d[static_cast<std::size_t>(r)]; };
  const auto nb = [&](Element m) { return der.nabla[static_cast<std::size_t>(m)]; };
  if (!is_additive(R.group(), B.group(), der.d))
    return Violation{"d additive", ""};
  if (!is_additive(M.group(), K.group(), der.nabla))
    return Violation{"∇ additive", ""};
  for (Element r = 0; r < R.size(); ++r)
    for (Element s = 0; s < R.size(); ++s)
      if (d(R.times(r, s)) != B.plus(B.ract(d(r), s), B.lact(r, d(s))))
        return Violation{"d(rs)=d(r)s+rd(s)", "at " + tup(r, s)};
  for (Element m = 0; m < M.size(); ++m) {
    if (d(form.d(m)) != bim.delta(nb(m)))
      return Violation{"d∂=δ∇", "at " + std::to_string(m)};
    for (Element r = 0; r < R.size(); ++r)
      if (nb(M.scale(r, m)) != K.plus(bim.dot(d(r), m), K.scale(r, nb(m))))
        return Violation{"∇(rm)=d(r)m+r∇(m)", "at " + tup(r, m)};
  }
  return std::nullopt;
}

Derivation inner_derivation(const DBimodule &bim, Element k) {
  const auto &form = bim.form();
  const auto &R = form.ring();
  const auto &M = form.module();
  const auto &B = bim.b();
  const auto &K = bim.k();
  const Element dk = bim.delta(k);
  Derivation out;
  for (Element r = 0; r < R.size(); ++r)
    out.d.push_back(B.minus(B.lact(r, dk), B.ract(dk, r)));
  for (Element m = 0; m < M.size(); ++m)
    out.nabla.push_back(K.minus(K.scale(form.d(m), k), bim.dot(dk, m)));
  return out;
}

DerivationReport enumerate_derivations(const DBimodule &bim, std::size_t budget) {
  const auto &form = bim.form();
  const auto &R = form.ring();
  const auto &M = form.module();
  const auto &B = bim.b();
  const auto &K = bim.k();

  const std::size_t d_space = capped_pow(static_cast<std::size_t>(B.size()), R.group().generators().size(), budget);
  const std::size_t n_space = capped_pow(static_cast<std::size_t>(K.size()), M.group().generators().size(), budget);
  if (d_space > budget || n_space > budget || d_space * n_space > budget)
    throw DerBudgetExceeded("derivation search space exceeds the budget of " + std::to_string(budget));

  std::vector<std::vector<Element>> ds;
  for_each_additive_map(R.group(), B.group(), [&](const std::vector<Element> &d) {
    for (Element r = 0; r < R.size(); ++r)
      for (Element s = 0; s < R.size(); ++s)
        if (d[static_cast<std::size_t>(R.times(r, s))] !=
            B.plus(B.ract(d[static_cast<std::size_t>(r)], s), B.lact(r, d[static_cast<std::size_t>(s)])))
          return false;
    ds.push_back(d);
    return false;
  });

  std::vector<std::vector<Derivation>> found(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    const auto &d = ds[i];
    for_each_additive_map(M.group(), K.group(), [&](const std::vector<Element> &nabla) {
      Derivation der{d, nabla};
      if (!derivation_violation(bim, der))
        found[i].push_back(std::move(der));
      return false;
    });
  });

  DerivationReport rep;
  for (auto &v : found)
    for (auto &der : v)
      rep.der.push_back(std::move(der));
  std::sort(rep.der.begin(), rep.der.end());

  const Derivation zero{std::vector<Element>(static_cast<std::size_t>(R.size()), B.zero()),
                        std::vector<Element>(static_cast<std::size_t>(M.size()), K.zero())};
  std::set<Derivation> inner;
  for (Element k = 0; k < K.size(); ++k) {
    Derivation ad = inner_derivation(bim, k);
    if (auto v = derivation_violation(bim, ad))
      throw InternalError("ad(" + std::to_string(k) + ") is not a derivation: " + v->to_string());
    if (ad == zero)
      rep.ker_ad.push_back(k);
    inner.insert(std::move(ad));
  }
  rep.inner.assign(inner.begin(), inner.end());

  for (Element c = 0; c < K.size(); ++c) {
    bool in = true;
    for (Element m = 0; m < M.size() && in; ++m)
      in = K.scale(form.d(m), c) == bim.dot(bim.delta(c), m);
    if (in)
      rep.h0.push_back(c);
  }

  std::set<Derivation> covered;
  for (const auto &der : rep.der) {
    if (covered.count(der))
      continue;
    rep.h1_representatives.push_back(der);
    for (const auto &ad : rep.inner) {
      Derivation sum = der;
      for (std::size_t r = 0; r < sum.d.size(); ++r)
        sum.d[r] = B.plus(sum.d[r], ad.d[r]);
      for (std::size_t m = 0; m < sum.nabla.size(); ++m)
        sum.nabla[m] = K.plus(sum.nabla[m], ad.nabla[m]);
      covered.insert(std::move(sum));
    }
  }
  if (covered.size() != rep.der.size())
    throw InternalError("Der is not closed under adding inner derivations");
  rep.h1_order = rep.h1_representatives.size();
  rep.cardinality_identity =
      rep.h0.size() * rep.der.size() == static_cast<std::size_t>(K.size()) * rep.h1_order;
  return rep;
}

// ---------------------------------------------------------------------------

AffinityOp project_op(const FormExtension &ext, const AffinityOp &op) {
  validate_affinity_op(ext.total, op);
  AffinityOp out{ext.q[static_cast<std::size_t>(op.x)], {}};
  for (Element r : op.r)
    out.r.push_back(ext.p[static_cast<std::size_t>(r)]);
  return out;
}

AffinityOp section_op(const FormExtension &ext, const AffinityOp &op) {
  validate_affinity_op(ext.base, op);
  const auto least = [](const std::vector<Element> &map, Element v) {
    const auto it = std::find(map.begin(), map.end(), v);
    if (it == map.end())
      throw DiagramError("no preimage of " + std::to_string(v));
    return static_cast<Element>(it - map.begin());
  };
  AffinityOp out{least(ext.q, op.x), {}};
  for (Element r : op.r)
    out.r.push_back(least(ext.p, r));
  return out;
}

bool is_maltsev_op(const LinearForm &form, const AffinityOp &op) {
  if (op.arity() != 3)
    return false;
  const AffinityOp x1 = affinity_projection(form, 2, 0);
  const AffinityOp x2 = affinity_projection(form, 2, 1);
  const std::vector<AffinityOp> aab{x1, x1, x2}, abb{x1, x2, x2};
  return compose_affinity(op, aab, form) == x2 && compose_affinity(op, abb, form) == x1;
}

LiftReport lift_maltsev(const FormExtension &ext, const AffinityOp &image, std::optional<AffinityOp> preimage) {
  validate_diagram(ext);
  if (!is_maltsev_op(ext.base, image))
    throw NotMaltsev(to_string(image) + " is not a Maltsev operation over '" + ext.base.name() + "'");
  const LinearForm &T = ext.total;
  const AffinityOp m = preimage ? *preimage : section_op(ext, image);
  if (project_op(ext, m) != image)
    throw DomainError(to_string(m) + " does not lie over " + to_string(image));

  const AffinityOp x1 = affinity_projection(T, 3, 0);
  const AffinityOp x3 = affinity_projection(T, 3, 2);
  const auto comp = [&](const AffinityOp &u, std::vector<AffinityOp> args) { return compose_affinity(u, args, T); };
  const auto minus = [&](const AffinityOp &a, const AffinityOp &b) { return affinity_minus(a, b, T); };

  // (x2 - m(x1,x1,x2))(x1, P(m)), lifted along (x1, m)
  const AffinityOp d1 = minus(m, comp(m, {x1, x1, m}));
  // (m(x,x,x) - x)P(m), lifted along m
  const AffinityOp d2 = minus(comp(m, {m, m, m}), m);
  // (x1 - m(x1,x2,x2))(P(m), x3), lifted along (m, x3)
  const AffinityOp d3 = minus(m, comp(m, {m, x3, x3}));
  for (const auto *d : {&d1, &d2, &d3})
    if (project_op(ext, *d) != AffinityOp{ext.base.module().zero(), {ext.base.ring().zero(), ext.base.ring().zero()}})
      throw InternalError("correction term " + to_string(*d) + " does not lie in the kernel");

  LiftReport rep{m, affinity_plus(affinity_plus(affinity_plus(m, d1, T), d2, T), d3, T), image};

  if (!is_maltsev_op(T, rep.lifted))
    throw InternalError("lift " + to_string(rep.lifted) + " is not Maltsev in the theory");
  if (project_op(ext, rep.lifted) != image)
    throw InternalError("lift " + to_string(rep.lifted) + " does not project to " + to_string(image));
  const AffinityStructure A = canonical_affinity(T, AffinityCarrier::sum);
  const auto table = interpret(rep.lifted, A);
  const int n = A.size;
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      const std::array<Element, 3> abb{a, b, b}, bba{b, b, a};
      if (table[encode_tuple(abb, n)] != a || table[encode_tuple(bba, n)] != a)
        throw InternalError("lift " + to_string(rep.lifted) + " is not Maltsev on the canonical affinity at " +
                            tup(a, b));
    }
  return rep;
}

} // namespace mk
