#include "mk/affinity.hpp"

#include <sstream>

#include "mk/algebra.hpp"
#include "mk/error.hpp"

namespace mk {

namespace {

template <class... Ts> std::string at(Ts... xs) {
  std::ostringstream out;
  out << "at (";
  bool first = true;
  ((out << (first ? "" : ",") << xs, first = false), ...);
  out << ")";
  return out.str();
}

// (1 - ∂x) in R
Element co_d(const LinearForm &form, Element x) {
  const auto &ring = form.ring();
  return ring.minus(ring.one(), form.d(x));
}

void require_same_arity(const AffinityOp &a, const AffinityOp &b) {
  if (a.arity() != b.arity())
    throw ArityError("affinity ops of arity " + std::to_string(a.arity()) + " and " +
                     std::to_string(b.arity()));
}

} // namespace

std::string to_string(const AffinityOp &op) {
  std::string out = "<" + std::to_string(op.x);
  for (Element r : op.r)
    out += "," + std::to_string(r);
  return out + ">";
}

void validate_affinity_op(const LinearForm &form, const AffinityOp &op) {
  if (op.x < 0 || op.x >= form.module().size())
    throw DomainError("module element " + std::to_string(op.x) + " out of range in " + to_string(op));
  for (Element r : op.r)
    if (r < 0 || r >= form.ring().size())
      throw DomainError("ring element " + std::to_string(r) + " out of range in " + to_string(op));
}

AffinityOp affinity_projection(const LinearForm &form, int arity, int i) {
  if (arity < 1 || i < 0 || i >= arity)
    throw ArityError("no projection " + std::to_string(i) + " of arity " + std::to_string(arity));
  AffinityOp op{form.module().zero(), std::vector<Element>(static_cast<std::size_t>(arity - 1), form.ring().zero())};
  if (i > 0)
    op.r[static_cast<std::size_t>(i - 1)] = form.ring().one();
  return op;
}

AffinityOp canonical_maltsev(const LinearForm &form) {
  const auto &ring = form.ring();
  return AffinityOp{form.module().zero(), {ring.neg(ring.one()), ring.one()}};
}

AffinityOp compose_affinity(const AffinityOp &outer, std::span<const AffinityOp> inners, const LinearForm &form) {
  if (static_cast<int>(inners.size()) != outer.arity())
    throw ArityError("operation of arity " + std::to_string(outer.arity()) + " applied to " +
                     std::to_string(inners.size()) + " arguments");
  for (const auto &v : inners)
    require_same_arity(v, inners.front());
  validate_affinity_op(form, outer);
  for (const auto &v : inners)
    validate_affinity_op(form, v);

  const auto &ring = form.ring();
  const auto &mod = form.module();
  const Element c0 = co_d(form, outer.x);
  const AffinityOp &v0 = inners.front();
  AffinityOp out;
  out.x = mod.plus(outer.x, mod.scale(c0, v0.x));
  out.r.resize(v0.r.size());
  for (std::size_t j = 0; j < v0.r.size(); ++j)
    out.r[j] = ring.times(c0, v0.r[j]);
  for (std::size_t i = 1; i < inners.size(); ++i) {
    const Element ri = outer.r[i - 1];
    const AffinityOp &vi = inners[i];
    out.x = mod.plus(out.x, mod.scale(ri, mod.minus(vi.x, v0.x)));
    for (std::size_t j = 0; j < v0.r.size(); ++j)
      out.r[j] = ring.plus(out.r[j], ring.times(ri, ring.minus(vi.r[j], v0.r[j])));
  }
  return out;
}

AffinityOp affinity_plus(const AffinityOp &a, const AffinityOp &b, const LinearForm &form) {
  require_same_arity(a, b);
  AffinityOp out{form.module().plus(a.x, b.x), a.r};
  for (std::size_t j = 0; j < a.r.size(); ++j)
    out.r[j] = form.ring().plus(a.r[j], b.r[j]);
  return out;
}

AffinityOp affinity_minus(const AffinityOp &a, const AffinityOp &b, const LinearForm &form) {
  require_same_arity(a, b);
  AffinityOp out{form.module().minus(a.x, b.x), a.r};
  for (std::size_t j = 0; j < a.r.size(); ++j)
    out.r[j] = form.ring().minus(a.r[j], b.r[j]);
  return out;
}

std::size_t affinity_op_count(const LinearForm &form, int arity) {
  if (arity < 1)
    throw ArityError("no affinity operations of arity " + std::to_string(arity));
  return static_cast<std::size_t>(form.module().size()) * tuple_count(form.ring().size(), arity - 1);
}

std::size_t affinity_op_index(const LinearForm &form, const AffinityOp &op) {
  return static_cast<std::size_t>(op.x) * tuple_count(form.ring().size(), op.arity() - 1) +
         encode_tuple(op.r, form.ring().size());
}

AffinityOp affinity_op_at(const LinearForm &form, int arity, std::size_t index) {
  const std::size_t block = tuple_count(form.ring().size(), arity - 1);
  AffinityOp op{static_cast<Element>(index / block), std::vector<Element>(static_cast<std::size_t>(arity - 1))};
  decode_tuple(index % block, form.ring().size(), op.r);
  return op;
}

std::vector<AffinityOp> all_affinity_ops(const LinearForm &form, int arity) {
  const std::size_t count = affinity_op_count(form, arity);
  std::vector<AffinityOp> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(affinity_op_at(form, arity, i));
  return out;
}

// ---------------------------------------------------------------------------

AffinityStructure canonical_affinity(const LinearForm &form, AffinityCarrier carrier) {
  const auto &ring = form.ring();
  const auto &mod = form.module();
  const bool sum = carrier == AffinityCarrier::sum;
  const int rs = ring.size();
  const int size = sum ? mod.size() * rs : mod.size();

  // The module N and f: M -> N.
  const auto plus = [&](Element a, Element b) {
    return sum ? mod.plus(a / rs, b / rs) * rs + ring.plus(a % rs, b % rs) : mod.plus(a, b);
  };
  const auto minus = [&](Element a, Element b) {
    return sum ? mod.minus(a / rs, b / rs) * rs + ring.minus(a % rs, b % rs) : mod.minus(a, b);
  };
  const auto times = [&](Element r, Element a) {
    return sum ? mod.scale(r, a / rs) * rs + ring.times(r, a % rs) : mod.scale(r, a);
  };
  const auto f = [&](Element x) { return sum ? x * rs + ring.zero() : x; };

  AffinityStructure out;
  out.name = std::string(sum ? "M+R" : "M") + " over " + form.name();
  out.size = size;
  const auto n = static_cast<std::size_t>(size);
  out.herd.resize(n * n * n);
  for (Element a = 0; a < size; ++a)
    for (Element b = 0; b < size; ++b)
      for (Element c = 0; c < size; ++c)
        out.herd[(static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) * n + static_cast<std::size_t>(c)] =
            plus(minus(a, b), c);
  out.action.resize(static_cast<std::size_t>(rs) * n * n);
  for (Element r = 0; r < rs; ++r)
    for (Element a = 0; a < size; ++a)
      for (Element b = 0; b < size; ++b)
        out.action[(static_cast<std::size_t>(r) * n + static_cast<std::size_t>(a)) * n + static_cast<std::size_t>(b)] =
            plus(times(ring.minus(ring.one(), r), a), times(r, b));
  out.phi.resize(static_cast<std::size_t>(mod.size()) * n);
  for (Element x = 0; x < mod.size(); ++x)
    for (Element a = 0; a < size; ++a)
      out.phi[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(a)] = plus(f(x), times(co_d(form, x), a));
  return out;
}

CheckResult affinity_violation(const AffinityStructure &A, const LinearForm &form) {
  const auto &ring = form.ring();
  const auto &mod = form.module();
  const int n = A.size;
  const auto nn = static_cast<std::size_t>(n);
  if (n < 0 || A.herd.size() != nn * nn * nn || A.action.size() != static_cast<std::size_t>(ring.size()) * nn * nn ||
      A.phi.size() != static_cast<std::size_t>(mod.size()) * nn)
    return Violation{"table shapes", "tables do not match the carrier size " + std::to_string(n)};
  if (n == 0)
    return std::nullopt;

  const Element minus_one = ring.neg(ring.one());
  const auto m = [&](Element x, Element y, Element z) { return A.add(x, y, z); };
  const auto sub = [&](Element b, Element a, Element c) { return A.add(b, a, A.scale(minus_one, a, c)); };
  const auto fail = [](std::string law, std::string detail) { return Violation{std::move(law), std::move(detail)}; };

  // Abelian herd.
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      if (m(x, y, y) != x)
        return fail("m(x,y,y)=x", at(x, y));
      if (m(y, y, x) != x)
        return fail("m(y,y,x)=x", at(x, y));
      for (Element z = 0; z < n; ++z) {
        if (m(x, y, z) != m(z, y, x))
          return fail("m(x,y,z)=m(z,y,x)", at(x, y, z));
        for (Element u = 0; u < n; ++u)
          for (Element v = 0; v < n; ++v)
            if (m(m(x, y, z), u, v) != m(x, y, m(z, u, v)))
              return fail("m(m(x,y,z),u,v)=m(x,y,m(z,u,v))", at(x, y, z, u, v));
      }
    }

  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (A.add(a, a, b) != b)
        return fail("a+_a b=b", at(a, b));
      if (sub(b, a, b) != a)
        return fail("b-_a b=a", at(a, b));
      if (A.scale(ring.one(), a, b) != b)
        return fail("1_a b=b", at(a, b));
      for (Element c = 0; c < n; ++c) {
        if (A.add(b, a, c) != A.add(c, a, b))
          return fail("b+_a c=c+_a b", at(a, b, c));
        for (Element d = 0; d < n; ++d) {
          if (A.add(b, a, A.add(c, a, d)) != A.add(A.add(b, a, c), a, d))
            return fail("b+_a(c+_a d)=(b+_a c)+_a d", at(a, b, c, d));
          // a' = d
          if (A.add(b, d, c) != A.add(A.add(sub(b, a, d), a, sub(c, a, d)), a, d))
            return fail("b+_{a'}c=((b-_a a')+_a(c-_a a'))+_a a'", at(a, d, b, c));
        }
        for (Element r = 0; r < ring.size(); ++r) {
          if (A.scale(r, a, A.add(b, a, c)) != A.add(A.scale(r, a, b), a, A.scale(r, a, c)))
            return fail("r_a(b+_a c)=r_a b+_a r_a c", at(r, a, b, c));
          // a' = c
          if (A.scale(r, c, b) != A.add(A.scale(r, a, sub(b, a, c)), a, c))
            return fail("r_{a'}b=r_a(b-_a a')+_a a'", at(r, a, c, b));
        }
      }
      for (Element r = 0; r < ring.size(); ++r)
        for (Element s = 0; s < ring.size(); ++s) {
          if (A.scale(ring.plus(r, s), a, b) != A.add(A.scale(r, a, b), a, A.scale(s, a, b)))
            return fail("(r+s)_a b=r_a b+_a s_a b", at(r, s, a, b));
          if (A.scale(r, a, A.scale(s, a, b)) != A.scale(ring.times(r, s), a, b))
            return fail("r_a(s_a b)=(rs)_a b", at(r, s, a, b));
        }
      // a' = b
      for (Element x = 0; x < mod.size(); ++x)
        if (A.unary(x, b) != A.add(A.unary(x, a), a, A.scale(co_d(form, x), a, b)))
          return fail("φ_{a'}(x)=φ_a(x)+_a(1-∂x)_a a'", at(x, a, b));
    }

  for (Element a = 0; a < n; ++a)
    for (Element x = 0; x < mod.size(); ++x) {
      for (Element y = 0; y < mod.size(); ++y)
        if (A.unary(mod.plus(x, y), a) != A.add(A.unary(x, a), a, A.unary(y, a)))
          return fail("φ_a(x+y)=φ_a(x)+_a φ_a(y)", at(a, x, y));
      for (Element r = 0; r < ring.size(); ++r)
        if (A.unary(mod.scale(r, x), a) != A.scale(r, a, A.unary(x, a)))
          return fail("φ_a(rx)=r_a φ_a(x)", at(a, r, x));
    }
  return std::nullopt;
}

std::vector<Element> interpret(const AffinityOp &op, const AffinityStructure &A) {
  const int k = op.arity();
  std::vector<Element> table(tuple_count(A.size, k));
  std::vector<Element> args(static_cast<std::size_t>(k));
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    decode_tuple(idx, A.size, args);
    const Element a0 = args[0];
    Element acc = A.unary(op.x, a0);
    for (std::size_t i = 1; i < args.size(); ++i)
      acc = A.add(acc, a0, A.scale(op.r[i - 1], a0, args[i]));
    table[idx] = acc;
  }
  return table;
}

} // namespace mk
