#pragma once

// Normal-subgroup computations straight from the group axioms, used to
// cross-check the congruence-side answers.

#include <algorithm>
#include <optional>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/partition.hpp"

namespace oracle {

using mk::Element;

class Group {
public:
  explicit Group(const mk::FiniteAlgebra &g) : n_(g.size()) {
    const auto mul = *g.find_op("mul");
    mul_.resize(static_cast<std::size_t>(n_ * n_));
    for (Element a = 0; a < n_; ++a)
      for (Element b = 0; b < n_; ++b) {
        const std::vector<Element> ab{a, b};
        mul_[static_cast<std::size_t>(a * n_ + b)] = g.apply(mul, ab);
      }
    for (Element e = 0; e < n_; ++e) {
      bool unit = true;
      for (Element a = 0; a < n_ && unit; ++a)
        unit = times(e, a) == a && times(a, e) == a;
      if (unit)
        one_ = e;
    }
    inv_.resize(static_cast<std::size_t>(n_));
    for (Element a = 0; a < n_; ++a)
      for (Element b = 0; b < n_; ++b)
        if (times(a, b) == one_)
          inv_[static_cast<std::size_t>(a)] = b;
  }

  int size() const { return n_; }
  Element one() const { return one_; }
  Element times(Element a, Element b) const { return mul_[static_cast<std::size_t>(a * n_ + b)]; }
  Element inv(Element a) const { return inv_[static_cast<std::size_t>(a)]; }

  using Subset = std::vector<bool>;

  Subset generated(const std::vector<Element> &gens) const {
    Subset s(static_cast<std::size_t>(n_), false);
    s[static_cast<std::size_t>(one_)] = true;
    std::vector<Element> members{one_};
    for (Element g : gens)
      if (!s[static_cast<std::size_t>(g)]) {
        s[static_cast<std::size_t>(g)] = true;
        members.push_back(g);
      }
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        for (Element p : {times(members[i], members[j]), times(members[j], members[i])})
          if (!s[static_cast<std::size_t>(p)]) {
            s[static_cast<std::size_t>(p)] = true;
            members.push_back(p);
          }
    return s;
  }

  bool is_normal_subgroup(const Subset &s) const {
    if (!s[static_cast<std::size_t>(one_)])
      return false;
    for (Element a = 0; a < n_; ++a) {
      if (!s[static_cast<std::size_t>(a)])
        continue;
      if (!s[static_cast<std::size_t>(inv(a))])
        return false;
      for (Element b = 0; b < n_; ++b) {
        if (s[static_cast<std::size_t>(b)] && !s[static_cast<std::size_t>(times(a, b))])
          return false;
        if (!s[static_cast<std::size_t>(times(times(b, a), inv(b)))])
          return false;
      }
    }
    return true;
  }

  /// All normal subgroups by testing every subset.
  std::vector<Subset> normal_subgroups() const {
    std::vector<Subset> out;
    for (unsigned long mask = 0; mask < (1ul << n_); ++mask) {
      Subset s(static_cast<std::size_t>(n_));
      for (int i = 0; i < n_; ++i)
        s[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      if (is_normal_subgroup(s))
        out.push_back(s);
    }
    return out;
  }

  /// [N, M] generated by n m n^-1 m^-1.
  Subset commutator(const Subset &a, const Subset &b) const {
    std::vector<Element> gens;
    for (Element x = 0; x < n_; ++x)
      for (Element y = 0; y < n_; ++y)
        if (a[static_cast<std::size_t>(x)] && b[static_cast<std::size_t>(y)])
          gens.push_back(times(times(x, y), times(inv(x), inv(y))));
    return generated(gens);
  }

  Subset center() const {
    Subset s(static_cast<std::size_t>(n_));
    for (Element a = 0; a < n_; ++a) {
      bool c = true;
      for (Element b = 0; b < n_ && c; ++b)
        c = times(a, b) == times(b, a);
      s[static_cast<std::size_t>(a)] = c;
    }
    return s;
  }

  Subset whole() const { return Subset(static_cast<std::size_t>(n_), true); }
  Subset trivial() const { return generated({}); }

  /// Class by γ_{i+1} = [G, γ_i]; nullopt if the series stalls above 1.
  std::optional<int> nilpotence_class() const {
    Subset g = whole();
    for (int c = 0; c <= n_; ++c) {
      if (g == trivial())
        return c;
      Subset next = commutator(whole(), g);
      if (next == g)
        return std::nullopt;
      g = std::move(next);
    }
    return std::nullopt;
  }

  bool abelian() const { return commutator(whole(), whole()) == trivial(); }

  /// Left cosets as a partition.
  mk::Congruence cosets(const Subset &s) const {
    std::vector<Element> label(static_cast<std::size_t>(n_), -1);
    for (Element a = 0; a < n_; ++a) {
      if (label[static_cast<std::size_t>(a)] != -1)
        continue;
      for (Element h = 0; h < n_; ++h)
        if (s[static_cast<std::size_t>(h)])
          label[static_cast<std::size_t>(times(a, h))] = a;
    }
    return mk::Congruence::from_labels(label);
  }

private:
  int n_;
  Element one_ = 0;
  std::vector<Element> mul_;
  std::vector<Element> inv_;
};

} // namespace oracle
