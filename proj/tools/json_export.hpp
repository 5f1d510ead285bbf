#pragma once

#include <json.hpp>

#include "mk/abelian.hpp"
#include "mk/extension.hpp"
#include "mk/maltsev.hpp"
#include "mk/monoid.hpp"
#include "mk/spec_io.hpp"

namespace mk::cli {

using Json = nlohmann::ordered_json;

Json blocks_json(const Congruence &theta);
Json algebra_json(const FiniteAlgebra &alg);
Json clone_json(const FiniteAlgebra &alg, const TermClone &clone);
Json tern_json(const TernaryTable &t);
Json group_json(const TorsorGroup &g);
Json ring_json(const FiniteRing &r);
Json module_json(const LeftModule &m);
Json form_json(const LinearForm &f);
Json bimodule_json(const Bimodule &b);
Json dbimodule_json(const DBimodule &d);
Json monoid_json(const FiniteMonoid &m);
Json system_json(const NaturalSystem &s);
Json linext_json(const MonoidExtension &e);
Json op_json(const AffinityOp &op);
Json derivation_json(const Derivation &d);
Json violation_json(const CheckResult &v);

/// Every entity, in declaration order.
Json document_json(const SpecDocument &doc);

} // namespace mk::cli
