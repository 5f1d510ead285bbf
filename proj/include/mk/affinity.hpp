#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mk/check.hpp"
#include "mk/ring.hpp"

namespace mk {

/// n-ary operation ⟨x, r1, ..., r_{n-1}⟩ of the theory of affinities over a
/// linear form. There are no nullary operations.
struct AffinityOp {
  Element x = 0;
  std::vector<Element> r;

  int arity() const { return static_cast<int>(r.size()) + 1; }
  auto operator<=>(const AffinityOp &) const = default;
};

std::string to_string(const AffinityOp &op);

/// Throws DomainError on out-of-range entries or arity < 1.
void validate_affinity_op(const LinearForm &form, const AffinityOp &op);

/// i-th projection X^n -> X.
AffinityOp affinity_projection(const LinearForm &form, int arity, int i);

/// ⟨0, -1, 1⟩, interpreted as the herd operation a +_b c.
AffinityOp canonical_maltsev(const LinearForm &form);

/// outer(inners...). Throws ArityError unless there is one inner op per
/// argument and all inners share an arity.
AffinityOp compose_affinity(const AffinityOp &outer, std::span<const AffinityOp> inners,
                            const LinearForm &form);

/// Componentwise sum and difference in M x R^{n-1}.
AffinityOp affinity_plus(const AffinityOp &a, const AffinityOp &b, const LinearForm &form);
AffinityOp affinity_minus(const AffinityOp &a, const AffinityOp &b, const LinearForm &form);

/// |M| * |R|^{n-1}.
std::size_t affinity_op_count(const LinearForm &form, int arity);
/// Mixed-radix index: x most significant, then r1, r2, ...
std::size_t affinity_op_index(const LinearForm &form, const AffinityOp &op);
AffinityOp affinity_op_at(const LinearForm &form, int arity, std::size_t index);
std::vector<AffinityOp> all_affinity_ops(const LinearForm &form, int arity);

/// A concrete affinity: herd a +_b c, scalings r_a b and unaries φ_a(x).
struct AffinityStructure {
  std::string name;
  int size = 0;
  std::vector<Element> herd;   // (a, b, c) -> a +_b c
  std::vector<Element> action; // (r, a, b) -> r_a b
  std::vector<Element> phi;    // (x, a) -> φ_a(x)

  std::size_t n() const { return static_cast<std::size_t>(size); }
  /// b +_a c
  Element add(Element b, Element a, Element c) const {
    return herd[(static_cast<std::size_t>(b) * n() + static_cast<std::size_t>(a)) * n() + static_cast<std::size_t>(c)];
  }
  /// r_a b
  Element scale(Element r, Element a, Element b) const {
    return action[(static_cast<std::size_t>(r) * n() + static_cast<std::size_t>(a)) * n() + static_cast<std::size_t>(b)];
  }
  /// φ_a(x)
  Element unary(Element x, Element a) const {
    return phi[static_cast<std::size_t>(x) * n() + static_cast<std::size_t>(a)];
  }
};

enum class AffinityCarrier {
  sum,    // M ⊕ R with f(x) = (x, 0); (m, s) encoded m*|R| + s
  module, // M with f = id
};

/// The affinity on a module N under M: a +_b c = a - b + c,
/// r_a b = (1-r)a + rb, φ_a(x) = f(x) + (1 - ∂x)a.
AffinityStructure canonical_affinity(const LinearForm &form, AffinityCarrier carrier = AffinityCarrier::sum);

/// First failed affinity identity, with a witness.
CheckResult affinity_violation(const AffinityStructure &a, const LinearForm &form);
inline bool affinity_axiom_check(const AffinityStructure &a, const LinearForm &form) {
  return !affinity_violation(a, form);
}

/// Table of op on a: ⟨x, r1, ...⟩(a0, a1, ...) = φ_{a0}(x) +_{a0} (r1)_{a0} a1 +_{a0} ...
std::vector<Element> interpret(const AffinityOp &op, const AffinityStructure &a);

} // namespace mk
