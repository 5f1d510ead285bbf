#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/check.hpp"

namespace mk {

enum class TernaryDomain {
  full,    // all of T^3
  fibered, // {(x,y,z) : p(x) = p(y) = p(z)}
  mixed,   // {(x,y,z) : p(x) = p(y)}, z arbitrary
};

const char *to_string(TernaryDomain d);

/// A ternary operation given by an explicit table, possibly defined only on a
/// fiber-product domain over a base map p: T -> B. Entries outside the domain
/// are stored as -1.
class TernaryTable {
public:
  TernaryTable() = default;
  TernaryTable(std::string name, int size, std::vector<Element> table,
               TernaryDomain domain = TernaryDomain::full, std::vector<Element> base_map = {});

  static TernaryTable from_term(const FiniteAlgebra &alg, const TermOp &op);
  /// Restriction of a full table to a smaller domain.
  TernaryTable restricted(TernaryDomain domain, std::vector<Element> base_map) const;

  const std::string &name() const { return name_; }
  int size() const { return size_; }
  TernaryDomain domain() const { return domain_; }
  std::span<const Element> base_map() const { return base_map_; }
  std::span<const Element> table() const { return table_; }

  bool in_domain(Element x, Element y, Element z) const;
  /// Value on a domain triple; DomainError outside the domain or where the
  /// table has no value.
  Element operator()(Element x, Element y, Element z) const;

private:
  std::size_t index(Element x, Element y, Element z) const {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(z);
  }

  std::string name_;
  int size_ = 0;
  TernaryDomain domain_ = TernaryDomain::full;
  std::vector<Element> base_map_;
  std::vector<Element> table_;
};

CheckResult maltsev_violation(const TernaryTable &m);
CheckResult associativity_violation(const TernaryTable &m);
CheckResult commutativity_violation(const TernaryTable &m);
/// m(u,v,m(x,y,z)) = m(u,m(y,x,v),z) wherever all triples are in the domain.
CheckResult asmal_violation(const TernaryTable &m);

bool check_maltsev(const TernaryTable &m);
bool check_associative(const TernaryTable &m);
bool check_commutative(const TernaryTable &m);

/// True iff the table of `op` satisfies the Maltsev identities on alg.
bool is_maltsev_term(const FiniteAlgebra &alg, const TermOp &op);

struct MaltsevSearch {
  std::optional<TermOp> term; // first Maltsev member in generation order
  bool complete = false;      // the ternary clone was exhausted
  std::size_t examined = 0;
};

/// Breadth-first search of the ternary clone for a Maltsev term. Throws
/// CloneBudgetExceeded when the budget runs out before an answer.
MaltsevSearch find_maltsev_term(const FiniteAlgebra &alg,
                                std::size_t budget = kDefaultCloneBudget);

/// The group of a herd: G = T×T / ((x,y) ~ (m(x,y,z), z)), acting on T.
struct TorsorGroup {
  int torsor_size = 0;
  int order = 0;
  Element zero = 0;
  std::vector<Element> add;    // order × order
  std::vector<Element> neg;    // order
  std::vector<Element> action; // order × torsor_size -> torsor
  std::vector<Element> sub;    // torsor_size × torsor_size -> group

  Element plus(Element g, Element h) const { return add[static_cast<std::size_t>(g * order + h)]; }
  Element act(Element g, Element x) const {
    return action[static_cast<std::size_t>(g * torsor_size + x)];
  }
  Element minus(Element x, Element y) const {
    return sub[static_cast<std::size_t>(x * torsor_size + y)];
  }
  bool is_abelian() const;
};

/// Builds the group of an associative Maltsev table and verifies the group
/// and torsor identities. Throws NotAHerd / EmptyTorsor on bad input.
TorsorGroup torsor_to_group(const TernaryTable &m, bool require_commutative = false);

/// m'(x,y,z) = (x - y) + z.
TernaryTable reconstruct_herd(const TorsorGroup &g);

struct CentralTorsorReport {
  bool central = false;
  std::optional<Violation> violation;
  std::optional<TorsorGroup> group; // constant group, on success
};

/// Checks that a table on the mixed domain {p(x)=p(y)} is an associative
/// Maltsev operation with p(m(x,y,z)) = p(z). When `algebra` is given, the
/// table must also be a homomorphism E×_B E×E -> E of algebras. On success
/// builds the constant group as a quotient of E×_B E.
CentralTorsorReport central_torsor_check(const TernaryTable &m,
                                         const FiniteAlgebra *algebra = nullptr);

/// All group tables on {0..n-1} with identity 0.
std::vector<std::vector<Element>> enumerate_groups_with_identity_zero(int n);

/// All associative Maltsev tables on a carrier of size n, via the bijection
/// with groups whose identity is 0: m(x,y,z) = x·y⁻¹·z.
std::vector<TernaryTable> enumerate_herds(int n);

} // namespace mk
