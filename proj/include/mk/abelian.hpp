#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mk/affinity.hpp"
#include "mk/algebra.hpp"
#include "mk/ring.hpp"

namespace mk {

/// Reason why m is not the herd of an affine structure on alg, or nullopt.
/// For a Maltsev m this is the same as [∇,∇] = Δ: m must be an abelian herd
/// and every basic operation affine for it.
std::optional<std::string> abelian_violation(const FiniteAlgebra &alg, const TermOp &m);

/// The linear form of an abelian Maltsev algebra: M = unary term operations,
/// R = convex binary term operations. unary[i] / binary[i] are the term
/// operations standing for module / ring element i, ordered by table.
struct Abelianization {
  LinearForm form;
  std::vector<TermOp> unary;
  std::vector<TermOp> binary;
};

/// Throws NotMaltsev, NotAbelian or CloneBudgetExceeded.
Abelianization abelianize(const FiniteAlgebra &alg, const TermOp &m,
                          std::size_t budget = kDefaultCloneBudget);

/// The canonical affinity as an algebra with operations m/3 (herd), r<i>/2
/// (⟨0,i⟩) and p<x>/1 (⟨x⟩).
FiniteAlgebra realize(const LinearForm &form, AffinityCarrier carrier = AffinityCarrier::sum);

struct RoundtripReport {
  bool isomorphic = false;
  Abelianization recovered;
  std::vector<Element> ring_map;   // R -> recovered ring
  std::vector<Element> module_map; // M -> recovered module
  std::string failure;             // empty when isomorphic
};

/// Realizes T_∂ on the canonical carrier, checks that its term operations of
/// arity 1..arity_bound are exactly the interpreted hom-sets, abelianizes and
/// checks the map r -> ⟨0,r⟩, x -> ⟨x⟩ is an isomorphism of linear forms.
RoundtripReport roundtrip_check(const LinearForm &form, int arity_bound = 2,
                                std::size_t budget = kDefaultCloneBudget);

/// {p in M : ∂p = 1}.
std::vector<Element> pseudoconstants(const LinearForm &form);

/// Ker ∂ as a submodule of M, elements in ascending order.
std::vector<Element> kernel_elements(const LinearForm &form);

/// The theory T_{R;K}: hom(X^n, X^k) = Hom_R(R^k, K ⊕ R^n), a morphism being
/// k rows (κ_j, c_j1..c_jn). As operations on a module A under K,
/// row j sends a to g(κ_j) + Σ c_ji a_i.
class ConstTheory {
public:
  struct Morphism {
    int n = 0, k = 0;
    std::vector<Element> kappa; // k entries of K
    std::vector<Element> coeff; // k*n entries of R, row-major

    Element c(int j, int i) const { return coeff[static_cast<std::size_t>(j * n + i)]; }
    auto operator<=>(const Morphism &) const = default;
  };

  ConstTheory(FiniteRing ring, LeftModule k);

  const FiniteRing &ring() const { return ring_; }
  const LeftModule &constants() const { return k_; }

  std::size_t hom_count(int n, int k) const;
  Morphism hom_at(int n, int k, std::size_t index) const;
  std::vector<Morphism> hom(int n, int k) const;

  Morphism identity(int n) const;
  /// g after f, for f: X^n -> X^k and g: X^k -> X^l. Throws ArityError.
  Morphism compose(const Morphism &g, const Morphism &f) const;
  /// Image in T_R: the coefficient part alone.
  Morphism project(const Morphism &f) const;

  /// Associativity, units, and both linear-extension identities of the
  /// projection to T_R, exhaustively for all arities <= max_arity.
  CheckResult extension_violation(int max_arity) const;

  /// T_{R;K} always has nullary operations, so the empty set is never a
  /// model. The constant-free theory T_∂ it replaces also has the empty
  /// model; that difference is reported, not resolved.
  static constexpr bool kEmptyModelDiffers = true;

private:
  FiniteRing ring_;
  LeftModule k_;
};

/// T_{R;Ker ∂} for a form with a pseudoconstant; DomainError otherwise.
ConstTheory constants_theory(const LinearForm &form);

} // namespace mk
