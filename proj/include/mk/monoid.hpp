#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mk/check.hpp"
#include "mk/ring.hpp"

namespace mk {

class FiniteMonoid {
public:
  FiniteMonoid() = default;
  /// Throws InvalidStructure on a non-associative table or a wrong unit.
  FiniteMonoid(std::string name, int size, Element unit, std::vector<Element> mul);

  static CheckResult violation(int size, Element unit, std::span<const Element> mul);

  const std::string &name() const { return name_; }
  int size() const { return size_; }
  Element unit() const { return unit_; }
  Element times(Element a, Element b) const {
    return mul_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(b)];
  }
  std::span<const Element> mul_table() const { return mul_; }

private:
  std::string name_;
  int size_ = 0;
  Element unit_ = 0;
  std::vector<Element> mul_;
};

/// Abelian groups D_x for x in M with x(-): D_y -> D_{xy} and
/// (-)y: D_x -> D_{xy}. Maps are indexed by the pair x*|M| + y.
class NaturalSystem {
public:
  NaturalSystem() = default;
  NaturalSystem(FiniteMonoid base, std::vector<AbelianGroup> groups, std::vector<std::vector<Element>> left,
                std::vector<std::vector<Element>> right);

  /// D_x = A for all x, all actions the identity.
  static NaturalSystem constant(const FiniteMonoid &base, const AbelianGroup &a);

  static CheckResult violation(const FiniteMonoid &base, const std::vector<AbelianGroup> &groups,
                               const std::vector<std::vector<Element>> &left,
                               const std::vector<std::vector<Element>> &right);

  const FiniteMonoid &base() const { return base_; }
  const AbelianGroup &group(Element x) const { return groups_[static_cast<std::size_t>(x)]; }
  /// x·d for d in D_y
  Element lact(Element x, Element y, Element d) const { return left_[pair(x, y)][static_cast<std::size_t>(d)]; }
  /// d·y for d in D_x
  Element ract(Element x, Element d, Element y) const { return right_[pair(x, y)][static_cast<std::size_t>(d)]; }
  const std::vector<std::vector<Element>> &left_maps() const { return left_; }
  const std::vector<std::vector<Element>> &right_maps() const { return right_; }

private:
  std::size_t pair(Element x, Element y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(base_.size()) + static_cast<std::size_t>(y);
  }
  FiniteMonoid base_;
  std::vector<AbelianGroup> groups_;
  std::vector<std::vector<Element>> left_;
  std::vector<std::vector<Element>> right_;
};

/// A monoid over a base with fiber actions d + e. Not validated on
/// construction; see linear_extension_violation.
struct MonoidExtension {
  FiniteMonoid total;
  FiniteMonoid base;
  std::vector<Element> proj;
  NaturalSystem system;
  std::vector<std::vector<Element>> act; // act[e][d] = d + e for d in D_{proj(e)}
  std::vector<std::string> labels;       // optional element names

  Element p(Element e) const { return proj[static_cast<std::size_t>(e)]; }
  Element plus(Element d, Element e) const { return act[static_cast<std::size_t>(e)][static_cast<std::size_t>(d)]; }
  std::string label(Element e) const;
};

/// Total carrier: the pairs (x, d in D_x) ordered by x then d, with
/// (x1,d1)(x2,d2) = (x1x2, d1·x2 + x1·d2). Throws InternalError if the
/// result fails the linear-extension checks.
MonoidExtension trivial_extension(const NaturalSystem &d);

/// Structure (proj a surjective homomorphism, actions free and transitive),
/// the distributive law (d1+e1)(d2+e2) = (d1·P(e2) + P(e1)·d2) + e1e2 and
/// both subtraction identities e1e2 - e1e2' = P(e1)(e2 - e2'),
/// e1e2 - e1'e2 = (e1 - e1')P(e2).
CheckResult linear_extension_violation(const MonoidExtension &ext);
inline bool check_linear_extension(const MonoidExtension &ext) { return !linear_extension_violation(ext); }

/// m(f1, f2, f) defined when P(f1) = P(f2); entries for other triples are -1.
struct UntwistedFamily {
  std::vector<std::vector<Element>> psi; // psi[b]: D_unit -> D_b
  std::vector<Element> m;                // |E|^3, row-major
};

inline constexpr int kMaxUntwistedFiber = 8;

/// Searches families φ_{b,b'} = ψ_{b'}ψ_b^{-1} of group isomorphisms
/// between the fibers and returns the first whose m(f1,f2,f) =
/// φ(f1 - f2) + f is equivariant, commutative, associative and Maltsev.
/// nullopt when none exists. Throws SearchBudgetExceeded for fibers larger
/// than kMaxUntwistedFiber, DomainError if ext is not a linear extension.
std::optional<UntwistedFamily> check_untwisted(const MonoidExtension &ext);

/// Conditions on m alone, independent of how it was found.
CheckResult untwisted_violation(const MonoidExtension &ext, const std::vector<Element> &m);

/// φ_{b,b'}(f1 - f2) = m(f1, f2, f) - f for P(f) = b', checked to be well
/// defined, φ_{b,b} = id and φ_{b',b''}φ_{b,b'} = φ_{b,b''}.
CheckResult phi_violation(const MonoidExtension &ext, const std::vector<Element> &m);

// ---------------------------------------------------------------------------

/// The two-element monoid {1,0} with a system of D_1 = 0, D_0 = Z/2 ⊕ Z/2,
/// 0(x,y) = (y,y), (x,y)0 = (0,0). Elements labelled 1, 00, 01, 10, 11.
MonoidExtension counterexample_extension();

struct CounterexampleReport {
  std::vector<std::string> total_order;         // element labels
  std::vector<std::vector<std::string>> products; // {a, b, a·b}, all non-unit pairs
  std::vector<std::string> s_elements;
  std::vector<std::vector<std::string>> action_of_10; // {s, 10·s}
  std::size_t maltsev_maps = 0;                    // maps examined
  std::size_t equivariant = 0;
  std::string forced_value;                        // m(*0,01,11)
  std::size_t associative = 0;
  std::vector<std::string> chain_lhs, chain_rhs;   // per candidate
  std::vector<std::string> witnesses;              // per candidate, first associativity failure

  /// Text used by the golden file.
  std::string text() const;
};

/// Enumerates every Maltsev map on S over M that is equivariant for the
/// action of the total monoid and confirms none is associative. Throws
/// CounterexampleBroken if any expected value differs.
CounterexampleReport counterexample_harness();

} // namespace mk
