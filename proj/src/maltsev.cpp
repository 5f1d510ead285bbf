#include "mk/maltsev.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mk/error.hpp"
#include "mk/parallel.hpp"

namespace mk {

namespace {

std::string triple(Element x, Element y, Element z) {
  std::ostringstream out;
  out << "(" << x << "," << y << "," << z << ")";
  return out.str();
}

Violation violation(std::string law, std::string detail) {
  return Violation{std::move(law), std::move(detail)};
}

class Dsu {
public:
  explicit Dsu(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x)
      x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

} // namespace

const char *to_string(TernaryDomain d) {
  switch (d) {
  case TernaryDomain::full:
    return "full";
  case TernaryDomain::fibered:
    return "fibered";
  case TernaryDomain::mixed:
    return "mixed";
  }
  return "?";
}

TernaryTable::TernaryTable(std::string name, int size, std::vector<Element> table,
                           TernaryDomain domain, std::vector<Element> base_map)
    : name_(std::move(name)), size_(size), domain_(domain), base_map_(std::move(base_map)),
      table_(std::move(table)) {
  if (size_ < 0)
    throw DomainError("negative carrier size");
  if (table_.size() != tuple_count(size_, 3))
    throw DomainError("ternary table must have size^3 = " + std::to_string(tuple_count(size_, 3)) +
                      " slots, got " + std::to_string(table_.size()));
  if (domain_ != TernaryDomain::full && base_map_.size() != static_cast<std::size_t>(size_))
    throw DomainError("fibered ternary table needs a base map of length " + std::to_string(size_));
  for (Element v : base_map_)
    if (v < 0)
      throw DomainError("base map has a negative entry");
  for (Element x = 0; x < size_; ++x)
    for (Element y = 0; y < size_; ++y)
      for (Element z = 0; z < size_; ++z) {
        const Element v = table_[index(x, y, z)];
        if (!in_domain(x, y, z)) {
          table_[index(x, y, z)] = -1;
          continue;
        }
        if (v >= size_ || v < -1)
          throw DomainError("value " + std::to_string(v) + " at " + triple(x, y, z) +
                            " outside the carrier");
      }
}

TernaryTable TernaryTable::from_term(const FiniteAlgebra &alg, const TermOp &op) {
  if (op.arity != 3)
    throw ArityError("expected a ternary term operation");
  return TernaryTable(alg.name() + ".m", alg.size(), op.table);
}

TernaryTable TernaryTable::restricted(TernaryDomain domain, std::vector<Element> base_map) const {
  return TernaryTable(name_, size_, table_, domain, std::move(base_map));
}

bool TernaryTable::in_domain(Element x, Element y, Element z) const {
  if (x < 0 || y < 0 || z < 0 || x >= size_ || y >= size_ || z >= size_)
    return false;
  switch (domain_) {
  case TernaryDomain::full:
    return true;
  case TernaryDomain::fibered:
    return base_map_[static_cast<std::size_t>(x)] == base_map_[static_cast<std::size_t>(y)] &&
           base_map_[static_cast<std::size_t>(y)] == base_map_[static_cast<std::size_t>(z)];
  case TernaryDomain::mixed:
    return base_map_[static_cast<std::size_t>(x)] == base_map_[static_cast<std::size_t>(y)];
  }
  return false;
}

Element TernaryTable::operator()(Element x, Element y, Element z) const {
  if (!in_domain(x, y, z))
    throw DomainError("triple " + triple(x, y, z) + " outside the domain of '" + name_ + "'");
  const Element v = table_[index(x, y, z)];
  if (v < 0)
    throw DomainError("table '" + name_ + "' has no value at domain triple " + triple(x, y, z));
  return v;
}

CheckResult maltsev_violation(const TernaryTable &m) {
  const int n = m.size();
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      if (m.in_domain(x, y, y) && m(x, y, y) != x)
        return violation("m(x,y,y)=x", "m" + triple(x, y, y) + " = " + std::to_string(m(x, y, y)));
      if (m.in_domain(y, y, x) && m(y, y, x) != x)
        return violation("m(y,y,x)=x", "m" + triple(y, y, x) + " = " + std::to_string(m(y, y, x)));
    }
  return std::nullopt;
}

CheckResult associativity_violation(const TernaryTable &m) {
  const int n = m.size();
  for (Element u = 0; u < n; ++u)
    for (Element v = 0; v < n; ++v)
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          for (Element z = 0; z < n; ++z) {
            if (!m.in_domain(x, y, z) || !m.in_domain(u, v, x))
              continue;
            const Element inner_r = m(x, y, z);
            const Element inner_l = m(u, v, x);
            if (!m.in_domain(u, v, inner_r) || !m.in_domain(inner_l, y, z))
              continue;
            const Element lhs = m(u, v, inner_r);
            const Element rhs = m(inner_l, y, z);
            if (lhs != rhs) {
              std::ostringstream w;
              w << "u,v,x,y,z = " << u << "," << v << "," << x << "," << y << "," << z
                << ": m(u,v,m(x,y,z)) = " << lhs << " but m(m(u,v,x),y,z) = " << rhs;
              return violation("m(u,v,m(x,y,z))=m(m(u,v,x),y,z)", w.str());
            }
          }
  return std::nullopt;
}

CheckResult commutativity_violation(const TernaryTable &m) {
  const int n = m.size();
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        if (m.in_domain(x, y, z) && m.in_domain(z, y, x) && m(x, y, z) != m(z, y, x))
          return violation("m(x,y,z)=m(z,y,x)", "m" + triple(x, y, z) + " = " +
                                                    std::to_string(m(x, y, z)) + " but m" +
                                                    triple(z, y, x) + " = " +
                                                    std::to_string(m(z, y, x)));
  return std::nullopt;
}

CheckResult asmal_violation(const TernaryTable &m) {
  const int n = m.size();
  for (Element u = 0; u < n; ++u)
    for (Element v = 0; v < n; ++v)
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          for (Element z = 0; z < n; ++z) {
            if (!m.in_domain(x, y, z) || !m.in_domain(y, x, v))
              continue;
            const Element a = m(x, y, z);
            const Element b = m(y, x, v);
            if (!m.in_domain(u, v, a) || !m.in_domain(u, b, z))
              continue;
            if (m(u, v, a) != m(u, b, z)) {
              std::ostringstream w;
              w << "u,v,x,y,z = " << u << "," << v << "," << x << "," << y << "," << z;
              return violation("m(u,v,m(x,y,z))=m(u,m(y,x,v),z)", w.str());
            }
          }
  return std::nullopt;
}

bool check_maltsev(const TernaryTable &m) { return !maltsev_violation(m); }
bool check_associative(const TernaryTable &m) { return !associativity_violation(m); }
bool check_commutative(const TernaryTable &m) { return !commutativity_violation(m); }

bool is_maltsev_term(const FiniteAlgebra &alg, const TermOp &op) {
  if (op.arity != 3)
    return false;
  const int n = alg.size();
  const auto at = [&](Element x, Element y, Element z) {
    return op.table[(static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(y)) *
                        static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(z)];
  };
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (at(x, y, y) != x || at(y, y, x) != x)
        return false;
  return true;
}

MaltsevSearch find_maltsev_term(const FiniteAlgebra &alg, std::size_t budget) {
  MaltsevSearch result;
  const bool stopped = generate_clone(alg, 3, budget, [&](const TermOp &op) {
    ++result.examined;
    if (is_maltsev_term(alg, op)) {
      result.term = op;
      return true;
    }
    return false;
  });
  result.complete = !stopped;
  return result;
}

bool TorsorGroup::is_abelian() const {
  for (Element g = 0; g < order; ++g)
    for (Element h = 0; h < order; ++h)
      if (plus(g, h) != plus(h, g))
        return false;
  return true;
}

namespace {

/// Quotient of the pairs accepted by `pair_ok` under (x,y) ~ (m(x,y,z), z)
/// for every z with (x,y,z) in the domain. Returns the class of each pair
/// (-1 for excluded pairs) and the number of classes.
std::pair<std::vector<Element>, int> pair_quotient(const TernaryTable &m) {
  const int n = m.size();
  const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  Dsu dsu(nn);
  const auto pair_index = [n](Element x, Element y) {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(y);
  };
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        if (m.in_domain(x, y, z))
          dsu.unite(pair_index(x, y), pair_index(m(x, y, z), z));
  std::vector<Element> cls(nn, -1);
  std::vector<Element> root_class(nn, -1);
  int classes = 0;
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      if (!m.in_domain(x, y, y))
        continue;
      const std::size_t r = dsu.find(pair_index(x, y));
      if (root_class[r] < 0)
        root_class[r] = classes++;
      cls[pair_index(x, y)] = root_class[r];
    }
  return {cls, classes};
}

/// Fills add/neg/action of a group built from pair classes and verifies the
/// group and torsor laws. Throws InternalError with the failing law.
void complete_group(TorsorGroup &g, const TernaryTable &m) {
  const int n = m.size();
  const int order = g.order;
  // Representative pair per class: least (x,y) in lexicographic order.
  std::vector<std::pair<Element, Element>> rep(static_cast<std::size_t>(order), {-1, -1});
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const Element c = g.sub[static_cast<std::size_t>(x * n + y)];
      if (c >= 0 && rep[static_cast<std::size_t>(c)].first < 0)
        rep[static_cast<std::size_t>(c)] = {x, y};
    }
  g.zero = g.minus(0, 0);
  g.add.assign(static_cast<std::size_t>(order * order), -1);
  g.neg.assign(static_cast<std::size_t>(order), -1);
  g.action.assign(static_cast<std::size_t>(order * n), -1);

  // Every representative choice must agree; this checks well-definedness of
  // the induced operations rather than assuming it.
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const Element c = g.sub[static_cast<std::size_t>(x * n + y)];
      if (c < 0)
        continue;
      const auto set = [&](Element &slot, Element value, const char *what) {
        if (slot >= 0 && slot != value)
          throw InternalError(std::string("torsor group operation '") + what + "' is not well defined");
        slot = value;
      };
      set(g.neg[static_cast<std::size_t>(c)], g.minus(y, x), "neg");
      for (Element z = 0; z < n; ++z) {
        set(g.action[static_cast<std::size_t>(c * n + z)], m(x, y, z), "action");
        for (Element t = 0; t < n; ++t) {
          const Element d = g.sub[static_cast<std::size_t>(z * n + t)];
          if (d < 0)
            continue;
          // (x - y) + (z - t) = m(x,y,z) - t
          const Element w = m(x, y, z);
          const Element s = g.sub[static_cast<std::size_t>(w * n + t)];
          if (s < 0)
            throw InternalError("sum of torsor differences leaves the fiber product");
          set(g.add[static_cast<std::size_t>(c * order + d)], s, "add");
        }
      }
    }
  for (Element a = 0; a < order; ++a) {
    if (g.plus(a, g.zero) != a || g.plus(g.zero, a) != a)
      throw InternalError("torsor group: zero is not neutral");
    if (g.plus(a, g.neg[static_cast<std::size_t>(a)]) != g.zero)
      throw InternalError("torsor group: inverse law fails");
    for (Element b = 0; b < order; ++b)
      for (Element c = 0; c < order; ++c)
        if (g.plus(g.plus(a, b), c) != g.plus(a, g.plus(b, c)))
          throw InternalError("torsor group: addition is not associative");
  }
  for (Element a = 0; a < order; ++a)
    for (Element x = 0; x < n; ++x) {
      const Element moved = g.act(a, x);
      if (g.minus(moved, x) != a)
        throw InternalError("torsor law (g+x)-x = g fails");
    }
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const Element d = g.minus(x, y);
      if (d >= 0 && g.act(d, y) != x)
        throw InternalError("torsor law (x-y)+y = x fails");
    }
}

} // namespace

TorsorGroup torsor_to_group(const TernaryTable &m, bool require_commutative) {
  if (m.size() == 0)
    throw EmptyTorsor("a torsor needs global support; the carrier is empty");
  if (m.domain() != TernaryDomain::full)
    throw NotAHerd("torsor_to_group needs a table on the full domain");
  if (auto v = maltsev_violation(m))
    throw NotAHerd("not Maltsev: " + v->to_string());
  if (auto v = associativity_violation(m))
    throw NotAHerd("not associative: " + v->to_string());
  TorsorGroup g;
  g.torsor_size = m.size();
  auto [cls, classes] = pair_quotient(m);
  g.sub = std::move(cls);
  g.order = classes;
  complete_group(g, m);
  if (require_commutative && check_commutative(m) && !g.is_abelian())
    throw InternalError("commutative herd produced a non-abelian group");
  return g;
}

TernaryTable reconstruct_herd(const TorsorGroup &g) {
  const int n = g.torsor_size;
  std::vector<Element> table(tuple_count(n, 3));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        table[static_cast<std::size_t>((x * n + y) * n + z)] = g.act(g.minus(x, y), z);
  return TernaryTable("reconstructed", n, std::move(table));
}

CentralTorsorReport central_torsor_check(const TernaryTable &m, const FiniteAlgebra *algebra) {
  CentralTorsorReport report;
  const int n = m.size();
  if (m.domain() != TernaryDomain::mixed)
    throw DomainError("central_torsor_check needs a table on the mixed domain {p(x)=p(y)}");
  const auto p = m.base_map();
  const int base_size = n == 0 ? 0 : *std::max_element(p.begin(), p.end()) + 1;
  std::vector<bool> hit(static_cast<std::size_t>(base_size), false);
  for (Element b : p)
    hit[static_cast<std::size_t>(b)] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw DomainError("base map is not surjective onto {0.." + std::to_string(base_size - 1) + "}");

  auto fail = [&](Violation v) {
    report.violation = std::move(v);
    return report;
  };
  if (auto v = maltsev_violation(m))
    return fail(*v);
  if (auto v = associativity_violation(m))
    return fail(*v);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        if (m.in_domain(x, y, z) && p[static_cast<std::size_t>(m(x, y, z))] != p[static_cast<std::size_t>(z)])
          return fail(violation("p(m(x,y,z))=p(z)", "at " + triple(x, y, z)));

  if (algebra != nullptr) {
    if (algebra->size() != n)
      throw DomainError("algebra size does not match the ternary table");
    const auto kernel = Congruence::from_labels(p);
    if (auto why = congruence_violation(*algebra, kernel))
      return fail(violation("p is a homomorphism", *why));
    std::vector<std::array<Element, 3>> domain;
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y)
        for (Element z = 0; z < n; ++z)
          if (m.in_domain(x, y, z))
            domain.push_back({x, y, z});
    for (const auto &op : algebra->ops()) {
      const std::size_t count = tuple_count(static_cast<int>(domain.size()), op.arity);
      std::vector<Element> idx(static_cast<std::size_t>(op.arity));
      std::vector<Element> xs(idx.size()), ys(idx.size()), zs(idx.size()), ms(idx.size());
      for (std::size_t t = 0; t < count; ++t) {
        decode_tuple(t, static_cast<int>(domain.size()), idx);
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const auto &d = domain[static_cast<std::size_t>(idx[j])];
          xs[j] = d[0];
          ys[j] = d[1];
          zs[j] = d[2];
          ms[j] = m(d[0], d[1], d[2]);
        }
        const Element fx = op.table[encode_tuple(xs, n)];
        const Element fy = op.table[encode_tuple(ys, n)];
        const Element fz = op.table[encode_tuple(zs, n)];
        const Element lhs = m(fx, fy, fz);
        const Element rhs = op.table[encode_tuple(ms, n)];
        if (lhs != rhs) {
          std::ostringstream w;
          w << "operation '" << op.name << "' on triples";
          for (std::size_t j = 0; j < idx.size(); ++j)
            w << " " << triple(xs[j], ys[j], zs[j]);
          w << ": m(f(..)) = " << lhs << " but f(m(..)) = " << rhs;
          return fail(violation("m is a homomorphism E×_B E×E -> E", w.str()));
        }
      }
    }
  }

  if (n == 0) {
    report.central = true;
    return report;
  }
  TorsorGroup g;
  g.torsor_size = n;
  auto [cls, classes] = pair_quotient(m);
  g.sub = std::move(cls);
  g.order = classes;
  complete_group(g, m);
  report.group = std::move(g);
  report.central = true;
  return report;
}

std::vector<std::vector<Element>> enumerate_groups_with_identity_zero(int n) {
  std::vector<std::vector<Element>> out;
  if (n <= 0)
    return out;
  std::vector<Element> t(static_cast<std::size_t>(n * n), -1);
  for (Element i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = i;
    t[static_cast<std::size_t>(i * n)] = i;
  }
  const auto at = [&](Element a, Element b) -> Element & { return t[static_cast<std::size_t>(a * n + b)]; };
  std::vector<std::pair<Element, Element>> cells;
  for (Element i = 1; i < n; ++i)
    for (Element j = 1; j < n; ++j)
      cells.emplace_back(i, j);

  auto associative = [&] {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c)
          if (at(at(a, b), c) != at(a, at(b, c)))
            return false;
    return true;
  };

  auto fill = [&](auto &&self, std::size_t k) -> void {
    if (k == cells.size()) {
      if (associative())
        out.push_back(t);
      return;
    }
    const auto [i, j] = cells[k];
    for (Element v = 0; v < n; ++v) {
      bool clash = false;
      for (Element c = 0; c < j && !clash; ++c)
        clash = at(i, c) == v;
      for (Element r = 0; r < i && !clash; ++r)
        clash = at(r, j) == v;
      if (clash)
        continue;
      at(i, j) = v;
      self(self, k + 1);
      at(i, j) = -1;
    }
  };
  fill(fill, 0);
  return out;
}

std::vector<TernaryTable> enumerate_herds(int n) {
  std::vector<TernaryTable> herds;
  for (const auto &g : enumerate_groups_with_identity_zero(n)) {
    std::vector<Element> inv(static_cast<std::size_t>(n));
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (g[static_cast<std::size_t>(a * n + b)] == 0)
          inv[static_cast<std::size_t>(a)] = b;
    std::vector<Element> table(tuple_count(n, 3));
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y)
        for (Element z = 0; z < n; ++z) {
          const Element xy = g[static_cast<std::size_t>(x * n + inv[static_cast<std::size_t>(y)])];
          table[static_cast<std::size_t>((x * n + y) * n + z)] = g[static_cast<std::size_t>(xy * n + z)];
        }
    herds.emplace_back("herd" + std::to_string(herds.size()), n, std::move(table));
  }
  return herds;
}

} // namespace mk
