#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/partition.hpp"

namespace mk {

using ElementPair = std::pair<Element, Element>;

/// Least congruence containing `pairs`: union-find closure under the basic
/// translations (one argument varying, the others frozen).
Congruence cg(const FiniteAlgebra &alg, std::span<const ElementPair> pairs);
Congruence cg(const FiniteAlgebra &alg, Element a, Element b);

/// Least congruence above `theta` containing `pairs`.
Congruence cg_extend(const FiniteAlgebra &alg, const Congruence &theta,
                     std::span<const ElementPair> pairs);

Congruence meet(const Congruence &a, const Congruence &b);
Congruence join(const FiniteAlgebra &alg, const Congruence &a, const Congruence &b);

/// Relational composition a∘b = {(x,z) : x a y b z}. The result is an
/// equivalence only when a and b permute; returned as the pair set.
std::vector<std::vector<bool>> compose(const Congruence &a, const Congruence &b);

/// True iff a∘b equals the join a∨b as relations.
bool composition_equals_join(const FiniteAlgebra &alg, const Congruence &a, const Congruence &b);

inline constexpr int kDefaultLatticeSizeCap = 12;
inline constexpr std::size_t kDefaultLatticeBudget = 100000;

/// The full congruence lattice, obtained by closing the principal
/// congruences under join. Sorted canonically (Δ first, ∇ last).
std::vector<Congruence> all_congruences(const FiniteAlgebra &alg,
                                        std::size_t budget = kDefaultLatticeBudget,
                                        int size_cap = kDefaultLatticeSizeCap);

/// Image of theta ∨ below on alg/below.
Congruence quotient_congruence(const FiniteAlgebra &alg, const Congruence &theta,
                               const Congruence &below);

/// Preimage of a congruence on a quotient along the projection.
Congruence pull_back(const Congruence &on_quotient, std::span<const Element> projection);

} // namespace mk
