#pragma once

#include <string>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/extension.hpp"
#include "mk/ring.hpp"

namespace mk {

/// Group (mul/2, inv/1, e/0) from a Cayley table whose identity is the
/// element e. Throws InvalidAlgebra if the table is not a group.
FiniteAlgebra group_from_table(std::string name, int size, const std::vector<Element> &mul);

FiniteAlgebra cyclic_group(int n);
/// Dihedral group of order 2n; r^i s^j is encoded as j*n + i.
FiniteAlgebra dihedral_group(int n);
/// Quaternion group: sign*4 + u with u indexing 1, i, j, k.
FiniteAlgebra quaternion_group();
/// S3 as permutations of {0,1,2} in lexicographic order; 0 is the identity.
FiniteAlgebra symmetric_group3();

/// Quasigroup (mul/2, ldiv/2, rdiv/2) from a Latin square.
FiniteAlgebra quasigroup_from_table(std::string name, int size, const std::vector<Element> &mul);

/// (Z/n, m) with m(x,y,z) = x - y + z.
FiniteAlgebra affine_cyclic(int n);
/// Two-element meet semilattice.
FiniteAlgebra semilattice2();

inline constexpr const char *kGroupMaltsevTerm = "mul(mul(x,inv(y)),z)";
inline constexpr const char *kQuasigroupMaltsevTerm = "mul(rdiv(x,ldiv(y,y)),ldiv(y,z))";

struct CorpusEntry {
  FiniteAlgebra algebra;
  std::string maltsev_term;
  bool is_group = false;
};

/// Maltsev algebras of size at most 8 used throughout the test-suite.
std::vector<CorpusEntry> maltsev_corpus();

/// Z/m as a module over the ring Z/n (m divides n), r·x = rx mod m.
LeftModule cyclic_module(const FiniteRing &zn, int m);

/// Linear forms with |R|, |M| <= 4, with and without pseudoconstants.
std::vector<LinearForm> form_corpus();

struct NamedExtension {
  std::string name;
  FormExtension ext;
};

/// Squares of linear forms; all pass crext_check except "Z2xZ2->Z2".
std::vector<NamedExtension> extension_corpus();

/// (form, ∂-bimodule) pairs: zero, 𝒞(R), R[1] and ∂ itself for each corpus
/// form, plus the bimodules induced by the valid extensions.
std::vector<DBimodule> bimodule_corpus();

} // namespace mk
