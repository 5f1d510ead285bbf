#include "mk/congruence.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "mk/error.hpp"
#include "mk/parallel.hpp"

namespace mk {

namespace {

// Union by size with path halving.
class UnionFind {
public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  Element find(Element x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto &p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  bool unite(Element a, Element b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)])
      std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    return true;
  }

  Congruence to_congruence() {
    std::vector<Element> labels(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i)
      labels[i] = find(static_cast<Element>(i));
    return Congruence::from_labels(labels);
  }

private:
  std::vector<Element> parent_;
  std::vector<int> size_;
};

Congruence close(const FiniteAlgebra &alg, UnionFind &uf, std::deque<ElementPair> pending) {
  const int n = alg.size();
  while (!pending.empty()) {
    const auto [a, b] = pending.front();
    pending.pop_front();
    for (const auto &op : alg.ops()) {
      if (op.arity == 0)
        continue;
      const std::size_t others = tuple_count(n, op.arity - 1);
      std::vector<Element> rest(static_cast<std::size_t>(op.arity - 1));
      std::vector<Element> args(static_cast<std::size_t>(op.arity));
      for (int pos = 0; pos < op.arity; ++pos) {
        for (std::size_t t = 0; t < others; ++t) {
          decode_tuple(t, n, rest);
          for (int j = 0, r = 0; j < op.arity; ++j)
            args[static_cast<std::size_t>(j)] = j == pos ? a : rest[static_cast<std::size_t>(r++)];
          const Element fa = op.table[encode_tuple(args, n)];
          args[static_cast<std::size_t>(pos)] = b;
          const Element fb = op.table[encode_tuple(args, n)];
          if (uf.unite(fa, fb))
            pending.emplace_back(fa, fb);
        }
      }
    }
  }
  return uf.to_congruence();
}

void check_pair(const FiniteAlgebra &alg, const ElementPair &p) {
  if (p.first < 0 || p.first >= alg.size() || p.second < 0 || p.second >= alg.size())
    throw DomainError("pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                      ") outside the carrier");
}

} // namespace

Congruence cg(const FiniteAlgebra &alg, std::span<const ElementPair> pairs) {
  return cg_extend(alg, Congruence::diagonal(alg.size()), pairs);
}

Congruence cg(const FiniteAlgebra &alg, Element a, Element b) {
  const ElementPair p{a, b};
  return cg(alg, std::span<const ElementPair>(&p, 1));
}

Congruence cg_extend(const FiniteAlgebra &alg, const Congruence &theta,
                     std::span<const ElementPair> pairs) {
  UnionFind uf(alg.size());
  std::deque<ElementPair> pending;
  // theta's own pairs are already closed under translations when theta is a
  // congruence; feeding them through keeps cg_extend correct for any
  // equivalence relation.
  const auto reps = theta.representatives();
  for (Element x = 0; x < alg.size(); ++x) {
    const Element r = reps[static_cast<std::size_t>(theta.block_of(x))];
    if (r != x && uf.unite(r, x))
      pending.emplace_back(r, x);
  }
  for (const auto &p : pairs) {
    check_pair(alg, p);
    if (uf.unite(p.first, p.second))
      pending.push_back(p);
  }
  Congruence result = close(alg, uf, std::move(pending));
  if (auto why = congruence_violation(alg, result))
    throw InternalError("cg produced a non-congruence: " + *why);
  return result;
}

Congruence meet(const Congruence &a, const Congruence &b) {
  if (a.size() != b.size())
    throw DomainError("meet of partitions on different carriers");
  std::vector<Element> labels(static_cast<std::size_t>(a.size()));
  for (Element x = 0; x < a.size(); ++x)
    labels[static_cast<std::size_t>(x)] = a.block_of(x) * b.block_count() + b.block_of(x);
  return Congruence::from_labels(labels);
}

Congruence join(const FiniteAlgebra &alg, const Congruence &a, const Congruence &b) {
  if (a.size() != b.size() || a.size() != alg.size())
    throw DomainError("join of partitions on different carriers");
  std::vector<ElementPair> pairs;
  const auto reps = b.representatives();
  for (Element x = 0; x < b.size(); ++x) {
    const Element r = reps[static_cast<std::size_t>(b.block_of(x))];
    if (r != x)
      pairs.emplace_back(r, x);
  }
  return cg_extend(alg, a, pairs);
}

std::vector<std::vector<bool>> compose(const Congruence &a, const Congruence &b) {
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (Element x = 0; x < a.size(); ++x)
    for (Element y = 0; y < a.size(); ++y) {
      if (!a.related(x, y))
        continue;
      for (Element z = 0; z < a.size(); ++z)
        if (b.related(y, z))
          rel[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)] = true;
    }
  return rel;
}

bool composition_equals_join(const FiniteAlgebra &alg, const Congruence &a, const Congruence &b) {
  const auto rel = compose(a, b);
  const auto j = join(alg, a, b);
  for (Element x = 0; x < alg.size(); ++x)
    for (Element z = 0; z < alg.size(); ++z)
      if (rel[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)] != j.related(x, z))
        return false;
  return true;
}

std::vector<Congruence> all_congruences(const FiniteAlgebra &alg, std::size_t budget,
                                        int size_cap) {
  if (alg.size() > size_cap)
    throw LatticeBudgetExceeded("algebra of size " + std::to_string(alg.size()) +
                                " exceeds the lattice size cap " + std::to_string(size_cap));
  const int n = alg.size();
  std::vector<ElementPair> pairs;
  for (Element a = 0; a < n; ++a)
    for (Element b = a + 1; b < n; ++b)
      pairs.emplace_back(a, b);
  std::vector<Congruence> principal_all(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    principal_all[i] = cg(alg, pairs[i].first, pairs[i].second);
  });
  std::set<Congruence> principal(principal_all.begin(), principal_all.end());

  std::set<Congruence> lattice(principal.begin(), principal.end());
  lattice.insert(Congruence::diagonal(n));
  std::vector<Congruence> frontier(lattice.begin(), lattice.end());
  while (!frontier.empty()) {
    std::vector<Congruence> next;
    for (const auto &c : frontier)
      for (const auto &p : principal) {
        if (p.leq(c))
          continue;
        auto j = join(alg, c, p);
        if (lattice.insert(j).second) {
          if (lattice.size() > budget)
            throw LatticeBudgetExceeded("congruence lattice exceeds " + std::to_string(budget) +
                                        " elements");
          next.push_back(std::move(j));
        }
      }
    frontier = std::move(next);
  }
  return {lattice.begin(), lattice.end()};
}

Congruence pull_back(const Congruence &on_quotient, std::span<const Element> projection) {
  std::vector<Element> labels(projection.size());
  for (std::size_t x = 0; x < projection.size(); ++x)
    labels[x] = on_quotient.block_of(projection[x]);
  return Congruence::from_labels(labels);
}

Congruence quotient_congruence(const FiniteAlgebra &alg, const Congruence &theta,
                               const Congruence &below) {
  if (auto why = congruence_violation(alg, below))
    throw NotACongruence(*why);
  const Congruence j = join(alg, theta, below);
  // Blocks of `below` are the quotient's elements; relate two of them when
  // their representatives are related by the join.
  const auto reps = below.representatives();
  std::vector<Element> labels(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    labels[i] = j.block_of(reps[i]);
  return Congruence::from_labels(labels);
}

} // namespace mk
