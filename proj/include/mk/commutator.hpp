#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/congruence.hpp"

namespace mk {

/// Throws NotMaltsev unless p is a ternary Maltsev term operation of alg.
void require_maltsev(const FiniteAlgebra &alg, const TermOp &p);

/// p transported to alg/theta (theta must be a congruence).
TermOp project_term(const FiniteAlgebra &alg, const TermOp &p, const Congruence &theta);

/// R and S centralize each other: p restricted to {(x,y,z) : xRy, ySz} is a
/// homomorphism and x S p(x,y,z) R z on that set.
bool centralize(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                const TermOp &p);
/// Same test with several Maltsev terms; throws InternalError if they
/// disagree.
bool centralize(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                std::span<const TermOp> ps);

/// [R,S] through the congruence Δ_{R,S} on the algebra R ⊆ M².
Congruence commutator(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                      const TermOp &p);

/// [R,S] as the meet of all T in the congruence lattice with R/T and S/T
/// centralizing each other on M/T. Independent of `commutator`.
Congruence commutator_oracle(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                             const TermOp &p, std::size_t budget = kDefaultLatticeBudget);

/// Oracle over a precomputed lattice; memoizes centrality tests across calls
/// for the same algebra.
class CommutatorOracle {
public:
  CommutatorOracle(const FiniteAlgebra &alg, const TermOp &p,
                   std::size_t budget = kDefaultLatticeBudget);
  Congruence operator()(const Congruence &r, const Congruence &s);
  const std::vector<Congruence> &lattice() const { return lattice_; }

private:
  struct Level {
    Quotient q;
    TermOp p;
    std::map<std::pair<Congruence, Congruence>, bool> memo;
  };
  FiniteAlgebra alg_;
  std::vector<Congruence> lattice_;
  std::vector<Level> levels_;
};

/// Largest congruence centralized by ∇; verified post hoc.
Congruence center(const FiniteAlgebra &alg, const TermOp &p);

struct SeriesReport {
  enum class Kind { lower, upper };
  Kind kind = Kind::lower;
  std::vector<Congruence> terms;
  bool stabilized = false;
  std::optional<int> nilpotence_class;
};

SeriesReport lower_series(const FiniteAlgebra &alg, const TermOp &p, int max_steps = 64);
SeriesReport upper_series(const FiniteAlgebra &alg, const TermOp &p, int max_steps = 64);

/// [∇,∇] = Δ, cross-checked against p being an associative Maltsev
/// homomorphism M³ → M.
bool is_abelian(const FiniteAlgebra &alg, const TermOp &p);

/// Class by the lower series, checked equal to the upper-series class.
std::optional<int> nilpotence_class(const FiniteAlgebra &alg, const TermOp &p, int max_steps = 64);

} // namespace mk
