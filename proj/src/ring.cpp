#include "mk/ring.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "mk/algebra.hpp"
#include "mk/error.hpp"

namespace mk {

namespace {

std::size_t at(int n, Element a, Element b) {
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b);
}

template <class... Ts> std::string where(Ts... xs) {
  std::ostringstream out;
  out << "at (";
  bool first = true;
  ((out << (first ? "" : ",") << xs, first = false), ...);
  out << ")";
  return out.str();
}

Violation fail(std::string law, std::string detail) { return Violation{std::move(law), std::move(detail)}; }

CheckResult table_range(std::string_view what, std::span<const Element> t, std::size_t len, int bound) {
  if (t.size() != len)
    return fail(std::string(what) + " table length", "expected " + std::to_string(len) + ", got " +
                                                          std::to_string(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] < 0 || t[i] >= bound)
      return fail(std::string(what) + " entries in range",
                  "entry " + std::to_string(t[i]) + " at position " + std::to_string(i));
  return std::nullopt;
}

void raise(const CheckResult &v, const std::string &name) {
  if (v)
    throw InvalidStructure("'" + name + "' violates " + v->law + " " + v->detail);
}

std::vector<Element> subgroup_closure(const AbelianGroup &g, const std::vector<Element> &gens) {
  std::vector<bool> in(static_cast<std::size_t>(g.size()), false);
  std::vector<Element> out{g.zero()};
  in[static_cast<std::size_t>(g.zero())] = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Element s : gens) {
      const Element y = g.plus(out[i], s);
      if (!in[static_cast<std::size_t>(y)]) {
        in[static_cast<std::size_t>(y)] = true;
        out.push_back(y);
      }
    }
  return out;
}

bool same_ring(const FiniteRing &a, const FiniteRing &b) {
  const auto eq = [](std::span<const Element> x, std::span<const Element> y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
  };
  return eq(a.add_table(), b.add_table()) && eq(a.mul_table(), b.mul_table());
}

} // namespace

// ---------------------------------------------------------------------------

CheckResult AbelianGroup::violation(int n, std::span<const Element> add) {
  if (n <= 0)
    return fail("non-empty carrier", "size " + std::to_string(n));
  if (auto v = table_range("add", add, tuple_count(n, 2), n))
    return v;
  const auto p = [&](Element a, Element b) { return add[at(n, a, b)]; };
  Element zero = -1;
  for (Element e = 0; e < n && zero < 0; ++e) {
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a)
      ok = p(e, a) == a;
    if (ok)
      zero = e;
  }
  if (zero < 0)
    return fail("0+a=a", "no neutral element");
  for (Element a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (Element b = 0; b < n; ++b) {
      if (p(a, b) != p(b, a))
        return fail("a+b=b+a", where(a, b));
      has_inverse = has_inverse || p(a, b) == zero;
      for (Element c = 0; c < n; ++c)
        if (p(p(a, b), c) != p(a, p(b, c)))
          return fail("(a+b)+c=a+(b+c)", where(a, b, c));
    }
    if (!has_inverse)
      return fail("a+(-a)=0", where(a));
  }
  return std::nullopt;
}

AbelianGroup::AbelianGroup(int size, std::vector<Element> add) : size_(size), add_(std::move(add)) {
  raise(violation(size_, add_), "abelian group");
  for (Element e = 0; e < size_; ++e)
    if (plus(e, e) == e) {
      zero_ = e;
      break;
    }
  neg_.resize(static_cast<std::size_t>(size_));
  for (Element a = 0; a < size_; ++a)
    for (Element b = 0; b < size_; ++b)
      if (plus(a, b) == zero_)
        neg_[static_cast<std::size_t>(a)] = b;
  std::vector<bool> covered(static_cast<std::size_t>(size_), false);
  covered[static_cast<std::size_t>(zero_)] = true;
  for (Element x = 0; x < size_; ++x) {
    if (covered[static_cast<std::size_t>(x)])
      continue;
    gens_.push_back(x);
    for (Element y : subgroup_closure(*this, gens_))
      covered[static_cast<std::size_t>(y)] = true;
  }
}

AbelianGroup AbelianGroup::cyclic(int n) {
  std::vector<Element> add(tuple_count(n, 2));
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      add[at(n, a, b)] = (a + b) % n;
  return AbelianGroup(n, std::move(add));
}

AbelianGroup AbelianGroup::direct_sum(const AbelianGroup &g, const AbelianGroup &h) {
  const int n = g.size() * h.size();
  std::vector<Element> add(tuple_count(n, 2));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      add[at(n, x, y)] = g.plus(x / h.size(), y / h.size()) * h.size() + h.plus(x % h.size(), y % h.size());
  return AbelianGroup(n, std::move(add));
}

void for_each_additive_map(const AbelianGroup &g, const AbelianGroup &h,
                           const std::function<bool(const std::vector<Element> &)> &visit) {
  const auto &gens = g.generators();
  std::vector<Element> images(gens.size(), 0);
  std::vector<Element> map(static_cast<std::size_t>(g.size()));
  std::vector<bool> known(map.size());
  while (true) {
    std::fill(known.begin(), known.end(), false);
    map[static_cast<std::size_t>(g.zero())] = h.zero();
    known[static_cast<std::size_t>(g.zero())] = true;
    std::deque<Element> queue{g.zero()};
    bool ok = true;
    while (!queue.empty() && ok) {
      const Element a = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < gens.size() && ok; ++i) {
        const Element b = g.plus(a, gens[i]);
        const Element v = h.plus(map[static_cast<std::size_t>(a)], images[i]);
        if (known[static_cast<std::size_t>(b)]) {
          ok = map[static_cast<std::size_t>(b)] == v;
        } else {
          known[static_cast<std::size_t>(b)] = true;
          map[static_cast<std::size_t>(b)] = v;
          queue.push_back(b);
        }
      }
    }
    if (ok && visit(map))
      return;
    std::size_t j = images.size();
    while (j > 0) {
      --j;
      if (++images[j] < h.size())
        break;
      images[j] = 0;
      if (j == 0)
        return;
    }
    if (images.empty())
      return;
  }
}

bool is_additive(const AbelianGroup &g, const AbelianGroup &h, std::span<const Element> map) {
  for (Element a = 0; a < g.size(); ++a)
    for (Element b = 0; b < g.size(); ++b)
      if (map[static_cast<std::size_t>(g.plus(a, b))] !=
          h.plus(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]))
        return false;
  return true;
}

// ---------------------------------------------------------------------------

CheckResult FiniteRing::violation(int n, std::span<const Element> add, std::span<const Element> mul) {
  if (auto v = AbelianGroup::violation(n, add))
    return v;
  if (auto v = table_range("mul", mul, tuple_count(n, 2), n))
    return v;
  const auto p = [&](Element a, Element b) { return add[at(n, a, b)]; };
  const auto t = [&](Element a, Element b) { return mul[at(n, a, b)]; };
  Element one = -1;
  for (Element e = 0; e < n && one < 0; ++e) {
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a)
      ok = t(e, a) == a && t(a, e) == a;
    if (ok)
      one = e;
  }
  if (one < 0)
    return fail("1a=a=a1", "no two-sided unit");
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c) {
        if (t(t(a, b), c) != t(a, t(b, c)))
          return fail("(ab)c=a(bc)", where(a, b, c));
        if (t(a, p(b, c)) != p(t(a, b), t(a, c)))
          return fail("a(b+c)=ab+ac", where(a, b, c));
        if (t(p(a, b), c) != p(t(a, c), t(b, c)))
          return fail("(a+b)c=ac+bc", where(a, b, c));
      }
  return std::nullopt;
}

FiniteRing::FiniteRing(std::string name, int size, std::vector<Element> add, std::vector<Element> mul)
    : name_(std::move(name)), mul_(std::move(mul)) {
  raise(violation(size, add, mul_), name_);
  group_ = AbelianGroup(size, std::move(add));
  for (Element e = 0; e < size; ++e) {
    bool ok = true;
    for (Element a = 0; a < size && ok; ++a)
      ok = times(e, a) == a && times(a, e) == a;
    if (ok) {
      one_ = e;
      break;
    }
  }
}

FiniteRing FiniteRing::cyclic(int n) {
  std::vector<Element> add(tuple_count(n, 2)), mul(add.size());
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      add[at(n, a, b)] = (a + b) % n;
      mul[at(n, a, b)] = (a * b) % n;
    }
  return FiniteRing("Z" + std::to_string(n), n, std::move(add), std::move(mul));
}

FiniteRing FiniteRing::dual_numbers(int n) {
  const int size = n * n;
  std::vector<Element> add(tuple_count(size, 2)), mul(add.size());
  for (Element x = 0; x < size; ++x)
    for (Element y = 0; y < size; ++y) {
      const int a = x / n, b = x % n, c = y / n, d = y % n;
      add[at(size, x, y)] = ((a + c) % n) * n + (b + d) % n;
      mul[at(size, x, y)] = ((a * c) % n) * n + (a * d + b * c) % n;
    }
  return FiniteRing("Z" + std::to_string(n) + "[e]", size, std::move(add), std::move(mul));
}

FiniteRing FiniteRing::product(const FiniteRing &r, const FiniteRing &s) {
  const int size = r.size() * s.size();
  std::vector<Element> add(tuple_count(size, 2)), mul(add.size());
  const int m = s.size();
  for (Element x = 0; x < size; ++x)
    for (Element y = 0; y < size; ++y) {
      add[at(size, x, y)] = r.plus(x / m, y / m) * m + s.plus(x % m, y % m);
      mul[at(size, x, y)] = r.times(x / m, y / m) * m + s.times(x % m, y % m);
    }
  return FiniteRing(r.name() + "x" + s.name(), size, std::move(add), std::move(mul));
}

bool FiniteRing::commutative() const {
  for (Element a = 0; a < size(); ++a)
    for (Element b = 0; b < size(); ++b)
      if (times(a, b) != times(b, a))
        return false;
  return true;
}

// ---------------------------------------------------------------------------

CheckResult LeftModule::violation(const FiniteRing &ring, int n, std::span<const Element> add,
                                  std::span<const Element> act) {
  if (auto v = AbelianGroup::violation(n, add))
    return v;
  if (auto v = table_range("act", act, static_cast<std::size_t>(ring.size()) * static_cast<std::size_t>(n), n))
    return v;
  const auto p = [&](Element a, Element b) { return add[at(n, a, b)]; };
  const auto s = [&](Element r, Element x) { return act[at(n, r, x)]; };
  for (Element r = 0; r < ring.size(); ++r)
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y)
        if (s(r, p(x, y)) != p(s(r, x), s(r, y)))
          return fail("r(x+y)=rx+ry", where(r, x, y));
      for (Element q = 0; q < ring.size(); ++q) {
        if (s(ring.plus(r, q), x) != p(s(r, x), s(q, x)))
          return fail("(r+s)x=rx+sx", where(r, q, x));
        if (s(ring.times(r, q), x) != s(r, s(q, x)))
          return fail("(rs)x=r(sx)", where(r, q, x));
      }
    }
  for (Element x = 0; x < n; ++x)
    if (s(ring.one(), x) != x)
      return fail("1x=x", where(x));
  return std::nullopt;
}

LeftModule::LeftModule(std::string name, FiniteRing ring, int size, std::vector<Element> add,
                       std::vector<Element> act)
    : name_(std::move(name)), ring_(std::move(ring)), act_(std::move(act)) {
  raise(violation(ring_, size, add, act_), name_);
  group_ = AbelianGroup(size, std::move(add));
}

LeftModule LeftModule::regular(const FiniteRing &ring) {
  const auto add = ring.add_table();
  const auto mul = ring.mul_table();
  return LeftModule(ring.name(), ring, ring.size(), {add.begin(), add.end()}, {mul.begin(), mul.end()});
}

LeftModule LeftModule::zero(const FiniteRing &ring) {
  return LeftModule("0", ring, 1, {0}, std::vector<Element>(static_cast<std::size_t>(ring.size()), 0));
}

LeftModule LeftModule::direct_sum(const LeftModule &a, const LeftModule &b) {
  const int n = a.size() * b.size();
  const int m = b.size();
  const auto &ring = a.ring();
  std::vector<Element> add(tuple_count(n, 2)), act(static_cast<std::size_t>(ring.size()) * static_cast<std::size_t>(n));
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y)
      add[at(n, x, y)] = a.plus(x / m, y / m) * m + b.plus(x % m, y % m);
    for (Element r = 0; r < ring.size(); ++r)
      act[at(n, r, x)] = a.scale(r, x / m) * m + b.scale(r, x % m);
  }
  return LeftModule(a.name() + "+" + b.name(), ring, n, std::move(add), std::move(act));
}

LeftModule LeftModule::submodule(std::span<const Element> elements, std::string name) const {
  std::vector<Element> index(static_cast<std::size_t>(size()), -1);
  for (std::size_t i = 0; i < elements.size(); ++i)
    index[static_cast<std::size_t>(elements[i])] = static_cast<Element>(i);
  const auto pos = [&](Element x) {
    const Element i = index[static_cast<std::size_t>(x)];
    if (i < 0)
      throw InvalidStructure("'" + name_ + "': subset is not closed, " + std::to_string(x) + " escapes");
    return i;
  };
  const int n = static_cast<int>(elements.size());
  std::vector<Element> add(tuple_count(n, 2)), act(static_cast<std::size_t>(ring_.size()) * elements.size());
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b)
      add[at(n, a, b)] = pos(plus(elements[static_cast<std::size_t>(a)], elements[static_cast<std::size_t>(b)]));
    for (Element r = 0; r < ring_.size(); ++r)
      act[at(n, r, a)] = pos(scale(r, elements[static_cast<std::size_t>(a)]));
  }
  return LeftModule(std::move(name), ring_, n, std::move(add), std::move(act));
}

// ---------------------------------------------------------------------------

CheckResult LinearForm::violation(const LeftModule &module, std::span<const Element> d) {
  const auto &ring = module.ring();
  if (auto v = table_range("d", d, static_cast<std::size_t>(module.size()), ring.size()))
    return v;
  for (Element x = 0; x < module.size(); ++x) {
    for (Element y = 0; y < module.size(); ++y)
      if (d[static_cast<std::size_t>(module.plus(x, y))] !=
          ring.plus(d[static_cast<std::size_t>(x)], d[static_cast<std::size_t>(y)]))
        return fail("d(x+y)=dx+dy", where(x, y));
    for (Element r = 0; r < ring.size(); ++r)
      if (d[static_cast<std::size_t>(module.scale(r, x))] != ring.times(r, d[static_cast<std::size_t>(x)]))
        return fail("d(rx)=r·dx", where(r, x));
  }
  return std::nullopt;
}

LinearForm::LinearForm(std::string name, LeftModule module, std::vector<Element> d)
    : name_(std::move(name)), module_(std::move(module)), d_(std::move(d)) {
  raise(violation(module_, d_), name_);
}

LinearForm LinearForm::zero_form(const FiniteRing &ring) {
  return LinearForm("0->" + ring.name(), LeftModule::zero(ring), {ring.zero()});
}

LinearForm LinearForm::identity(const FiniteRing &ring) {
  std::vector<Element> d(static_cast<std::size_t>(ring.size()));
  for (Element x = 0; x < ring.size(); ++x)
    d[static_cast<std::size_t>(x)] = x;
  return LinearForm("id_" + ring.name(), LeftModule::regular(ring), std::move(d));
}

// ---------------------------------------------------------------------------

CheckResult Bimodule::violation(const FiniteRing &ring, int n, std::span<const Element> add,
                                std::span<const Element> left, std::span<const Element> right) {
  if (auto v = LeftModule::violation(ring, n, add, left))
    return v;
  if (auto v = table_range("right", right, static_cast<std::size_t>(ring.size()) * static_cast<std::size_t>(n), n))
    return v;
  const auto rs = static_cast<std::size_t>(ring.size());
  const auto p = [&](Element a, Element b) { return add[at(n, a, b)]; };
  const auto l = [&](Element r, Element b) { return left[at(n, r, b)]; };
  const auto rt = [&](Element b, Element r) { return right[static_cast<std::size_t>(b) * rs + static_cast<std::size_t>(r)]; };
  for (Element b = 0; b < n; ++b) {
    if (rt(b, ring.one()) != b)
      return fail("b1=b", where(b));
    for (Element c = 0; c < n; ++c)
      for (Element r = 0; r < ring.size(); ++r)
        if (rt(p(b, c), r) != p(rt(b, r), rt(c, r)))
          return fail("(b+c)r=br+cr", where(b, c, r));
    for (Element r = 0; r < ring.size(); ++r)
      for (Element s = 0; s < ring.size(); ++s) {
        if (rt(b, ring.plus(r, s)) != p(rt(b, r), rt(b, s)))
          return fail("b(r+s)=br+bs", where(b, r, s));
        if (rt(b, ring.times(r, s)) != rt(rt(b, r), s))
          return fail("b(rs)=(br)s", where(b, r, s));
        if (rt(l(r, b), s) != l(r, rt(b, s)))
          return fail("(rb)s=r(bs)", where(r, b, s));
      }
  }
  return std::nullopt;
}

Bimodule::Bimodule(std::string name, FiniteRing ring, int size, std::vector<Element> add, std::vector<Element> left,
                   std::vector<Element> right)
    : name_(std::move(name)), ring_(std::move(ring)), left_(std::move(left)), right_(std::move(right)) {
  raise(violation(ring_, size, add, left_, right_), name_);
  group_ = AbelianGroup(size, std::move(add));
}

Bimodule Bimodule::regular(const FiniteRing &ring) {
  const auto add = ring.add_table();
  const auto mul = ring.mul_table();
  return Bimodule(ring.name(), ring, ring.size(), {add.begin(), add.end()}, {mul.begin(), mul.end()},
                  {mul.begin(), mul.end()});
}

Bimodule Bimodule::zero(const FiniteRing &ring) {
  const std::vector<Element> z(static_cast<std::size_t>(ring.size()), 0);
  return Bimodule("0", ring, 1, {0}, z, z);
}

Bimodule Bimodule::symmetric(const LeftModule &module) {
  if (!module.ring().commutative())
    throw InvalidStructure("a symmetric bimodule needs a commutative ring");
  const auto &ring = module.ring();
  std::vector<Element> right(static_cast<std::size_t>(ring.size()) * static_cast<std::size_t>(module.size()));
  for (Element b = 0; b < module.size(); ++b)
    for (Element r = 0; r < ring.size(); ++r)
      right[static_cast<std::size_t>(b) * static_cast<std::size_t>(ring.size()) + static_cast<std::size_t>(r)] =
          module.scale(r, b);
  const auto add = module.add_table();
  const auto act = module.act_table();
  return Bimodule(module.name(), ring, module.size(), {add.begin(), add.end()}, {act.begin(), act.end()},
                  std::move(right));
}

bool Bimodule::symmetric_actions() const {
  for (Element r = 0; r < ring_.size(); ++r)
    for (Element b = 0; b < size(); ++b)
      if (lact(r, b) != ract(b, r))
        return false;
  return true;
}

// ---------------------------------------------------------------------------

CheckResult DBimodule::violation(const LinearForm &form, const Bimodule &b, const LeftModule &k,
                                 std::span<const Element> delta, std::span<const Element> dot) {
  const auto &ring = form.ring();
  const auto &m = form.module();
  if (!same_ring(b.ring(), ring))
    return fail("common ring", "B is over a different ring");
  if (!same_ring(k.ring(), ring))
    return fail("common ring", "K is over a different ring");
  if (auto v = table_range("delta", delta, static_cast<std::size_t>(k.size()), b.size()))
    return v;
  if (auto v = table_range("dot", dot, static_cast<std::size_t>(b.size()) * static_cast<std::size_t>(m.size()), k.size()))
    return v;
  const auto dl = [&](Element x) { return delta[static_cast<std::size_t>(x)]; };
  const auto dt = [&](Element bb, Element mm) { return dot[at(m.size(), bb, mm)]; };
  for (Element x = 0; x < k.size(); ++x) {
    for (Element y = 0; y < k.size(); ++y)
      if (dl(k.plus(x, y)) != b.plus(dl(x), dl(y)))
        return fail("δ(k+k')=δk+δk'", where(x, y));
    for (Element r = 0; r < ring.size(); ++r)
      if (dl(k.scale(r, x)) != b.lact(r, dl(x)))
        return fail("δ(rk)=rδk", where(r, x));
  }
  for (Element bb = 0; bb < b.size(); ++bb)
    for (Element mm = 0; mm < m.size(); ++mm) {
      for (Element c = 0; c < b.size(); ++c)
        if (dt(b.plus(bb, c), mm) != k.plus(dt(bb, mm), dt(c, mm)))
          return fail("(b+b')·m=b·m+b'·m", where(bb, c, mm));
      for (Element n = 0; n < m.size(); ++n)
        if (dt(bb, m.plus(mm, n)) != k.plus(dt(bb, mm), dt(bb, n)))
          return fail("b·(m+m')=b·m+b·m'", where(bb, mm, n));
      for (Element r = 0; r < ring.size(); ++r) {
        if (dt(bb, m.scale(r, mm)) != dt(b.ract(bb, r), mm))
          return fail("b·(rm)=(br)·m", where(bb, r, mm));
        if (dt(b.lact(r, bb), mm) != k.scale(r, dt(bb, mm)))
          return fail("(rb)·m=r(b·m)", where(r, bb, mm));
      }
      if (dl(dt(bb, mm)) != b.ract(bb, form.d(mm)))
        return fail("δ(b·m)=b∂m", where(bb, mm));
    }
  return std::nullopt;
}

DBimodule::DBimodule(std::string name, LinearForm form, Bimodule b, LeftModule k, std::vector<Element> delta,
                     std::vector<Element> dot)
    : name_(std::move(name)), form_(std::move(form)), b_(std::move(b)), k_(std::move(k)), delta_(std::move(delta)),
      dot_(std::move(dot)) {
  raise(violation(form_, b_, k_, delta_, dot_), name_);
}

DBimodule DBimodule::cone(const LinearForm &form, const Bimodule &b) {
  const auto add = b.add_table();
  const auto left = b.left_table();
  LeftModule k(b.name(), form.ring(), b.size(), {add.begin(), add.end()}, {left.begin(), left.end()});
  std::vector<Element> delta(static_cast<std::size_t>(b.size()));
  for (Element x = 0; x < b.size(); ++x)
    delta[static_cast<std::size_t>(x)] = x;
  const int ms = form.module().size();
  std::vector<Element> dot(static_cast<std::size_t>(b.size()) * static_cast<std::size_t>(ms));
  for (Element x = 0; x < b.size(); ++x)
    for (Element m = 0; m < ms; ++m)
      dot[at(ms, x, m)] = b.ract(x, form.d(m));
  return DBimodule("C(" + b.name() + ")", form, b, std::move(k), std::move(delta), std::move(dot));
}

DBimodule DBimodule::shift(const LinearForm &form, const LeftModule &k) {
  const Bimodule b = Bimodule::zero(form.ring());
  return DBimodule(k.name() + "[1]", form, b, k, std::vector<Element>(static_cast<std::size_t>(k.size()), 0),
                   std::vector<Element>(static_cast<std::size_t>(form.module().size()), k.zero()));
}

DBimodule DBimodule::of_form(const LinearForm &form) {
  const auto &ring = form.ring();
  const auto &m = form.module();
  const auto add = ring.add_table();
  const auto mul = ring.mul_table();
  Bimodule b(ring.name(), ring, ring.size(), {add.begin(), add.end()}, {mul.begin(), mul.end()},
             {mul.begin(), mul.end()});
  std::vector<Element> dot(static_cast<std::size_t>(ring.size()) * static_cast<std::size_t>(m.size()));
  for (Element r = 0; r < ring.size(); ++r)
    for (Element x = 0; x < m.size(); ++x)
      dot[at(m.size(), r, x)] = m.scale(r, x);
  const auto d = form.d_table();
  return DBimodule(form.name(), form, std::move(b), m, {d.begin(), d.end()}, std::move(dot));
}

} // namespace mk
