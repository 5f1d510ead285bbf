#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mk/check.hpp"
#include "mk/partition.hpp"

namespace mk {

/// Finite abelian group on {0..size-1} given by its addition table. The zero
/// and negation are recovered from the table.
class AbelianGroup {
public:
  AbelianGroup() = default;
  /// Throws InvalidStructure naming the failed law.
  AbelianGroup(int size, std::vector<Element> add);

  static AbelianGroup cyclic(int n);
  static AbelianGroup trivial() { return cyclic(1); }
  /// Direct sum; (a,b) encoded as a*|H| + b.
  static AbelianGroup direct_sum(const AbelianGroup &g, const AbelianGroup &h);

  int size() const { return size_; }
  Element zero() const { return zero_; }
  Element plus(Element a, Element b) const { return add_[idx(a, b)]; }
  Element neg(Element a) const { return neg_[static_cast<std::size_t>(a)]; }
  Element minus(Element a, Element b) const { return plus(a, neg(b)); }
  std::span<const Element> add_table() const { return add_; }

  /// A generating set chosen greedily in element order.
  const std::vector<Element> &generators() const { return gens_; }

  static CheckResult violation(int size, std::span<const Element> add);

private:
  std::size_t idx(Element a, Element b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(b);
  }
  int size_ = 0;
  Element zero_ = 0;
  std::vector<Element> add_;
  std::vector<Element> neg_;
  std::vector<Element> gens_;
};

/// All additive maps g -> h, found by assigning images to the generators of
/// g and extending. `visit` returning true stops the enumeration.
void for_each_additive_map(const AbelianGroup &g, const AbelianGroup &h,
                           const std::function<bool(const std::vector<Element> &)> &visit);
bool is_additive(const AbelianGroup &g, const AbelianGroup &h, std::span<const Element> map);

class FiniteRing {
public:
  FiniteRing() = default;
  FiniteRing(std::string name, int size, std::vector<Element> add, std::vector<Element> mul);

  static FiniteRing cyclic(int n);
  /// (Z/n)[e]/(e^2): a + b e encoded as a*n + b.
  static FiniteRing dual_numbers(int n);
  /// Componentwise product ring; (a,b) encoded as a*|S| + b.
  static FiniteRing product(const FiniteRing &r, const FiniteRing &s);

  static CheckResult violation(int size, std::span<const Element> add, std::span<const Element> mul);

  const std::string &name() const { return name_; }
  int size() const { return group_.size(); }
  const AbelianGroup &group() const { return group_; }
  Element zero() const { return group_.zero(); }
  Element one() const { return one_; }
  Element plus(Element a, Element b) const { return group_.plus(a, b); }
  Element neg(Element a) const { return group_.neg(a); }
  Element minus(Element a, Element b) const { return group_.minus(a, b); }
  Element times(Element a, Element b) const {
    return mul_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(b)];
  }
  std::span<const Element> add_table() const { return group_.add_table(); }
  std::span<const Element> mul_table() const { return mul_; }
  bool commutative() const;

private:
  std::string name_;
  AbelianGroup group_;
  std::vector<Element> mul_;
  Element one_ = 0;
};

/// Left R-module. `act` is indexed r*size + x.
class LeftModule {
public:
  LeftModule() = default;
  LeftModule(std::string name, FiniteRing ring, int size, std::vector<Element> add, std::vector<Element> act);

  /// R acting on itself from the left.
  static LeftModule regular(const FiniteRing &ring);
  static LeftModule zero(const FiniteRing &ring);
  static LeftModule direct_sum(const LeftModule &a, const LeftModule &b);

  /// Restriction to a submodule given by its elements; element i of the
  /// result is elements[i]. Throws InvalidStructure if not closed.
  LeftModule submodule(std::span<const Element> elements, std::string name) const;

  static CheckResult violation(const FiniteRing &ring, int size, std::span<const Element> add,
                               std::span<const Element> act);

  const std::string &name() const { return name_; }
  const FiniteRing &ring() const { return ring_; }
  int size() const { return group_.size(); }
  const AbelianGroup &group() const { return group_; }
  Element zero() const { return group_.zero(); }
  Element plus(Element a, Element b) const { return group_.plus(a, b); }
  Element neg(Element a) const { return group_.neg(a); }
  Element minus(Element a, Element b) const { return group_.minus(a, b); }
  Element scale(Element r, Element x) const {
    return act_[static_cast<std::size_t>(r) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(x)];
  }
  std::span<const Element> add_table() const { return group_.add_table(); }
  std::span<const Element> act_table() const { return act_; }

private:
  std::string name_;
  FiniteRing ring_;
  AbelianGroup group_;
  std::vector<Element> act_;
};

/// Left linear form ∂: M -> R.
class LinearForm {
public:
  LinearForm() = default;
  LinearForm(std::string name, LeftModule module, std::vector<Element> d);

  /// 0 -> R.
  static LinearForm zero_form(const FiniteRing &ring);
  /// id: R -> R.
  static LinearForm identity(const FiniteRing &ring);

  static CheckResult violation(const LeftModule &module, std::span<const Element> d);

  const std::string &name() const { return name_; }
  const FiniteRing &ring() const { return module_.ring(); }
  const LeftModule &module() const { return module_; }
  Element d(Element x) const { return d_[static_cast<std::size_t>(x)]; }
  std::span<const Element> d_table() const { return d_; }

private:
  std::string name_;
  LeftModule module_;
  std::vector<Element> d_;
};

/// R-R-bimodule: abelian group with left and right R-actions.
class Bimodule {
public:
  Bimodule() = default;
  Bimodule(std::string name, FiniteRing ring, int size, std::vector<Element> add,
           std::vector<Element> left, std::vector<Element> right);

  static Bimodule regular(const FiniteRing &ring);
  static Bimodule zero(const FiniteRing &ring);
  /// A left module over a commutative ring made symmetric.
  static Bimodule symmetric(const LeftModule &module);

  static CheckResult violation(const FiniteRing &ring, int size, std::span<const Element> add,
                               std::span<const Element> left, std::span<const Element> right);

  const std::string &name() const { return name_; }
  const FiniteRing &ring() const { return ring_; }
  const AbelianGroup &group() const { return group_; }
  int size() const { return group_.size(); }
  Element plus(Element a, Element b) const { return group_.plus(a, b); }
  Element minus(Element a, Element b) const { return group_.minus(a, b); }
  Element zero() const { return group_.zero(); }
  /// r·b
  Element lact(Element r, Element b) const {
    return left_[static_cast<std::size_t>(r) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(b)];
  }
  /// b·r
  Element ract(Element b, Element r) const {
    return right_[static_cast<std::size_t>(b) * static_cast<std::size_t>(ring_.size()) + static_cast<std::size_t>(r)];
  }
  std::span<const Element> add_table() const { return group_.add_table(); }
  std::span<const Element> left_table() const { return left_; }
  std::span<const Element> right_table() const { return right_; }
  bool symmetric_actions() const;

private:
  std::string name_;
  FiniteRing ring_;
  AbelianGroup group_;
  std::vector<Element> left_;  // r*|B| + b
  std::vector<Element> right_; // b*|R| + r
};

/// ∂-bimodule: B ⊗_R M --dot--> K --δ--> B.
class DBimodule {
public:
  DBimodule() = default;
  DBimodule(std::string name, LinearForm form, Bimodule b, LeftModule k, std::vector<Element> delta,
            std::vector<Element> dot);

  /// 𝒞(B): K = B, δ = id, b·m = b∂(m).
  static DBimodule cone(const LinearForm &form, const Bimodule &b);
  /// K[1]: B = 0, δ = 0, dot = 0.
  static DBimodule shift(const LinearForm &form, const LeftModule &k);
  /// ∂ itself: B = R, K = M, δ = ∂, r·m = rm.
  static DBimodule of_form(const LinearForm &form);

  static CheckResult violation(const LinearForm &form, const Bimodule &b, const LeftModule &k,
                               std::span<const Element> delta, std::span<const Element> dot);

  const std::string &name() const { return name_; }
  const LinearForm &form() const { return form_; }
  const Bimodule &b() const { return b_; }
  const LeftModule &k() const { return k_; }
  Element delta(Element k) const { return delta_[static_cast<std::size_t>(k)]; }
  /// b·m
  Element dot(Element b, Element m) const {
    return dot_[static_cast<std::size_t>(b) * static_cast<std::size_t>(form_.module().size()) +
                static_cast<std::size_t>(m)];
  }
  std::span<const Element> delta_table() const { return delta_; }
  std::span<const Element> dot_table() const { return dot_; }

private:
  std::string name_;
  LinearForm form_;
  Bimodule b_;
  LeftModule k_;
  std::vector<Element> delta_;
  std::vector<Element> dot_;
};

} // namespace mk
