#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mk/partition.hpp"

namespace mk {

/// Number of argument tuples of the given arity: base^arity.
std::size_t tuple_count(int base, int arity);

/// Mixed-radix encoding of an argument tuple, leftmost coordinate most
/// significant. All operation tables in the library are indexed this way.
std::size_t encode_tuple(std::span<const Element> args, int base);
void decode_tuple(std::size_t index, int base, std::span<Element> out);

struct Operation {
  std::string name;
  int arity = 0;
  std::vector<Element> table; // length size^arity, row-major
};

/// A finite algebra on the carrier {0..size-1}. Immutable once constructed;
/// the constructor rejects tables with wrong length, out-of-range entries and
/// duplicate operation names.
class FiniteAlgebra {
public:
  FiniteAlgebra() = default;
  FiniteAlgebra(std::string name, int size, std::vector<Operation> ops);

  const std::string &name() const { return name_; }
  int size() const { return size_; }
  std::span<const Operation> ops() const { return ops_; }
  const Operation &op(std::size_t i) const { return ops_[i]; }
  std::size_t op_count() const { return ops_.size(); }

  /// Index of the operation with this name, or nullopt.
  std::optional<std::size_t> find_op(std::string_view name) const;

  Element apply(std::size_t op_index, std::span<const Element> args) const;

  /// Same operation names and arities, in the same order.
  bool same_signature(const FiniteAlgebra &other) const;

private:
  std::string name_;
  int size_ = 0;
  std::vector<Operation> ops_;
};

/// Direct product. Element (a_0,...,a_{k-1}) is encoded mixed-radix with a_0
/// most significant.
FiniteAlgebra product(std::span<const FiniteAlgebra> factors);
FiniteAlgebra power(const FiniteAlgebra &alg, int exponent);

/// Least subuniverse containing `generators` (nullary operations included),
/// returned in ascending order.
std::vector<Element> subuniverse_generate(const FiniteAlgebra &alg,
                                          std::span<const Element> generators);

/// Subalgebra on a subuniverse. `elements` must be closed under every
/// operation; the i-th element of the result corresponds to elements[i].
FiniteAlgebra subalgebra(const FiniteAlgebra &alg, std::span<const Element> elements,
                         std::string name = {});

struct Quotient {
  FiniteAlgebra algebra;
  std::vector<Element> projection; // element -> block index
};

/// Quotient by a congruence; blocks numbered by least element. Throws
/// NotACongruence when theta is not compatible with the operations.
Quotient quotient(const FiniteAlgebra &alg, const Congruence &theta);

/// Checks compatibility of theta with every operation. On failure returns a
/// human-readable witness.
std::optional<std::string> congruence_violation(const FiniteAlgebra &alg, const Congruence &theta);

struct Homomorphism {
  std::shared_ptr<const FiniteAlgebra> source;
  std::shared_ptr<const FiniteAlgebra> target;
  std::vector<Element> map;
};

/// Exhaustive check that `map` commutes with every operation of `source`
/// (matched by name in `target`). Returns a witness on failure.
std::optional<std::string> homomorphism_violation(const FiniteAlgebra &source,
                                                  const FiniteAlgebra &target,
                                                  std::span<const Element> map);
bool is_homomorphism(const FiniteAlgebra &source, const FiniteAlgebra &target,
                     std::span<const Element> map);
bool is_homomorphism(const Homomorphism &h);

// ---------------------------------------------------------------------------
// Terms and clones

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Term tree over operation indices of a fixed algebra. A leaf is a variable
/// (var >= 0); otherwise `op` names the operation applied to `args`.
struct Term {
  int var = -1;
  std::size_t op = 0;
  std::vector<TermPtr> args;

  static TermPtr variable(int index);
  static TermPtr apply(std::size_t op, std::vector<TermPtr> args);
};

std::string variable_name(int index, int arity);
std::string term_to_string(const Term &term, const FiniteAlgebra &alg, int arity);

/// A k-ary term operation given by its full table over alg^k.
struct TermOp {
  int arity = 0;
  std::vector<Element> table;
  TermPtr witness;
  int depth = 0;

  Element operator()(std::span<const Element> args, int base) const {
    return table[encode_tuple(args, base)];
  }
};

/// Evaluates a term to its table.
TermOp evaluate_term(const FiniteAlgebra &alg, const TermPtr &term, int arity);

/// Parses a term such as "mul(mul(x,inv(y)),z)". Variables are x,y,z (arity
/// <= 3) or x0,x1,...; nullary operations may be written with or without ().
TermOp parse_term(const FiniteAlgebra &alg, std::string_view text, int arity);

/// Projection x_i as a term operation.
TermOp projection(const FiniteAlgebra &alg, int arity, int index);

inline constexpr std::size_t kDefaultCloneBudget = 200000;

struct TermClone {
  int arity = 0;
  std::vector<TermOp> members; // generation order: by depth, then lexicographic
};

/// Breadth-first clone generation. Calls `visit` on each new member in
/// generation order; generation stops early (returning true) if `visit`
/// returns true. Throws CloneBudgetExceeded once more than `budget` members
/// exist.
bool generate_clone(const FiniteAlgebra &alg, int arity, std::size_t budget,
                    const std::function<bool(const TermOp &)> &visit);

/// All k-ary term operations of `alg`, each with a witness term.
TermClone term_clone(const FiniteAlgebra &alg, int arity,
                     std::size_t budget = kDefaultCloneBudget);

} // namespace mk
