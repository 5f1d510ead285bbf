#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "mk/affinity.hpp"
#include "mk/check.hpp"
#include "mk/ring.hpp"

namespace mk {

/// A square of linear forms: p: S ->> R a ring surjection, q: N ->> M a
/// module surjection over it, with ∂ q = p ∂'.
struct FormExtension {
  LinearForm total; // ∂': N -> S
  LinearForm base;  // ∂: M -> R
  std::vector<Element> p;
  std::vector<Element> q;
};

/// Throws DiagramError if p, q are not surjective homomorphisms or the
/// square does not commute.
void validate_diagram(const FormExtension &ext);

struct CrextReport {
  bool ok = false;
  std::string witness;             // why not, when !ok
  std::vector<Element> b_elements; // Ker p in S, ascending; B element i is b_elements[i]
  std::vector<Element> k_elements; // Ker q in N, ascending
  std::optional<DBimodule> bimodule;
};

/// B = Ker p, K = Ker q. Succeeds iff B^2 = 0, BK = 0 and the induced
/// R-structures are well defined; then returns the induced ∂-bimodule with
/// δ = ∂'|K and b·q(n) = bn.
CrextReport crext_check(const FormExtension &ext);

struct Derivation {
  std::vector<Element> d;     // R -> B
  std::vector<Element> nabla; // M -> K

  auto operator<=>(const Derivation &) const = default;
};

/// First failing identity among d∂ = δ∇, d(rs) = d(r)s + rd(s),
/// ∇(rm) = d(r)m + r∇(m), and additivity.
CheckResult derivation_violation(const DBimodule &bim, const Derivation &der);

/// ad(k): d_k(r) = rδk - δk r, ∇_k(m) = ∂(m)k - δk·m.
Derivation inner_derivation(const DBimodule &bim, Element k);

inline constexpr std::size_t kDefaultDerBudget = 10'000'000;

struct DerivationReport {
  std::vector<Derivation> der;   // sorted
  std::vector<Derivation> inner; // image of ad, sorted
  std::vector<Element> h0;       // {c in K : (∂m)c = (δc)·m for all m}
  std::vector<Element> ker_ad;   // {k : ad(k) = 0}
  std::size_t h1_order = 0;      // |Der| / |im ad|
  std::vector<Derivation> h1_representatives; // least member of each coset
  bool cardinality_identity = false;          // |H0|·|Der| = |K|·|H1|
};

/// Enumerates Der over additive maps fixed by generator images. Throws
/// DerBudgetExceeded when the candidate space exceeds `budget`.
DerivationReport enumerate_derivations(const DBimodule &bim, std::size_t budget = kDefaultDerBudget);

/// Componentwise image in the base theory.
AffinityOp project_op(const FormExtension &ext, const AffinityOp &op);
/// Least preimage of a base operation.
AffinityOp section_op(const FormExtension &ext, const AffinityOp &op);

/// op(x1,x1,x2) = x2 and op(x1,x2,x2) = x1 in the theory.
bool is_maltsev_op(const LinearForm &form, const AffinityOp &op);

struct LiftReport {
  AffinityOp preimage;
  AffinityOp lifted;
  AffinityOp image;
};

/// m' = (x2 - m(x1,x1,x2))(x1,P(m)) + (m(x,x,x) - x)P(m)
///      + (x1 - m(x1,x2,x2))(P(m),x3) + m,
/// with the fiber differences taken in K ⊕ B^2 and transported by
/// composing with lifts. Throws NotMaltsev unless `image` is Maltsev over
/// the base form, DomainError unless `preimage` lies over it. The result is
/// verified symbolically, on the canonical affinity of the total form, and
/// P(m') = image; failure is an InternalError.
LiftReport lift_maltsev(const FormExtension &ext, const AffinityOp &image,
                        std::optional<AffinityOp> preimage = std::nullopt);

} // namespace mk
