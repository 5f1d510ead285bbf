#include "json_export.hpp"

namespace mk::cli {

namespace {

template <class T> Json arr(const T &values) {
  Json out = Json::array();
  for (const auto &v : values)
    out.push_back(v);
  return out;
}

} // namespace

Json blocks_json(const Congruence &theta) {
  Json out = Json::array();
  for (const auto &b : theta.blocks())
    out.push_back(arr(b));
  return out;
}

Json algebra_json(const FiniteAlgebra &alg) {
  Json ops = Json::array();
  for (const auto &op : alg.ops())
    ops.push_back({{"name", op.name}, {"arity", op.arity}, {"table", arr(op.table)}});
  return {{"name", alg.name()}, {"size", alg.size()}, {"ops", ops}};
}

Json clone_json(const FiniteAlgebra &alg, const TermClone &clone) {
  Json members = Json::array();
  for (const auto &m : clone.members)
    members.push_back({{"term", m.witness ? term_to_string(*m.witness, alg, clone.arity) : ""},
                       {"depth", m.depth},
                       {"table", arr(m.table)}});
  return {{"algebra", alg.name()}, {"arity", clone.arity}, {"size", clone.members.size()}, {"members", members}};
}

Json tern_json(const TernaryTable &t) {
  Json out = {{"name", t.name()}, {"size", t.size()}, {"domain", to_string(t.domain())}};
  if (t.domain() != TernaryDomain::full)
    out["over"] = arr(t.base_map());
  out["table"] = arr(t.table());
  return out;
}

Json group_json(const TorsorGroup &g) {
  return {{"order", g.order},    {"zero", g.zero},          {"abelian", g.is_abelian()}, {"add", arr(g.add)},
          {"neg", arr(g.neg)},   {"action", arr(g.action)}, {"sub", arr(g.sub)}};
}

Json ring_json(const FiniteRing &r) {
  return {{"name", r.name()}, {"size", r.size()}, {"add", arr(r.add_table())}, {"mul", arr(r.mul_table())}};
}

Json module_json(const LeftModule &m) {
  return {{"name", m.name()},
          {"over", m.ring().name()},
          {"size", m.size()},
          {"add", arr(m.add_table())},
          {"act", arr(m.act_table())}};
}

Json form_json(const LinearForm &f) {
  return {{"name", f.name()}, {"ring", ring_json(f.ring())}, {"module", module_json(f.module())}, {"d", arr(f.d_table())}};
}

Json bimodule_json(const Bimodule &b) {
  return {{"name", b.name()},          {"over", b.ring().name()},     {"size", b.size()},
          {"add", arr(b.add_table())}, {"left", arr(b.left_table())}, {"right", arr(b.right_table())}};
}

Json dbimodule_json(const DBimodule &d) {
  return {{"name", d.name()},
          {"form", d.form().name()},
          {"b", bimodule_json(d.b())},
          {"k", module_json(d.k())},
          {"delta", arr(d.delta_table())},
          {"dot", arr(d.dot_table())}};
}

Json monoid_json(const FiniteMonoid &m) {
  return {{"name", m.name()}, {"size", m.size()}, {"unit", m.unit()}, {"mul", arr(m.mul_table())}};
}

Json system_json(const NaturalSystem &s) {
  Json groups = Json::array();
  for (Element x = 0; x < s.base().size(); ++x)
    groups.push_back({{"size", s.group(x).size()}, {"add", arr(s.group(x).add_table())}});
  Json left = Json::array(), right = Json::array();
  for (const auto &m : s.left_maps())
    left.push_back(arr(m));
  for (const auto &m : s.right_maps())
    right.push_back(arr(m));
  return {{"monoid", s.base().name()}, {"groups", groups}, {"left", left}, {"right", right}};
}

Json linext_json(const MonoidExtension &e) {
  Json act = Json::array();
  for (const auto &row : e.act)
    act.push_back(arr(row));
  Json labels = Json::array();
  for (Element x = 0; x < e.total.size(); ++x)
    labels.push_back(e.label(x));
  return {{"total", monoid_json(e.total)},
          {"base", monoid_json(e.base)},
          {"proj", arr(e.proj)},
          {"act", act},
          {"labels", labels}};
}

Json op_json(const AffinityOp &op) { return to_string(op); }

Json derivation_json(const Derivation &d) { return {{"d", arr(d.d)}, {"nabla", arr(d.nabla)}}; }

Json violation_json(const CheckResult &v) {
  if (!v)
    return nullptr;
  return {{"law", v->law}, {"detail", v->detail}};
}

Json document_json(const SpecDocument &doc) {
  Json out = Json::array();
  for (const auto &[kind, name] : doc.order) {
    Json e = {{"kind", to_string(kind)}, {"name", name}};
    switch (kind) {
    case EntityKind::algebra: e["value"] = algebra_json(doc.algebras.at(name)); break;
    case EntityKind::cong:
      e["on"] = doc.congruences.at(name).algebra;
      e["blocks"] = blocks_json(doc.congruences.at(name).theta);
      break;
    case EntityKind::tern: e["value"] = tern_json(doc.terns.at(name)); break;
    case EntityKind::ring: e["value"] = ring_json(doc.rings.at(name)); break;
    case EntityKind::module: e["value"] = module_json(doc.modules.at(name).second); break;
    case EntityKind::form: e["value"] = form_json(doc.forms.at(name).second); break;
    case EntityKind::bimodule: e["value"] = bimodule_json(doc.bimodules.at(name).second); break;
    case EntityKind::dbimodule: e["value"] = dbimodule_json(doc.dbimodules.at(name).value); break;
    case EntityKind::diagram: {
      const auto &d = doc.diagrams.at(name);
      e["value"] = {{"total", d.total}, {"base", d.base}, {"p", arr(d.value.p)}, {"q", arr(d.value.q)}};
      break;
    }
    case EntityKind::monoid: e["value"] = monoid_json(doc.monoids.at(name)); break;
    case EntityKind::system: e["value"] = system_json(doc.systems.at(name).value); break;
    case EntityKind::linext: e["value"] = linext_json(doc.linexts.at(name).value); break;
    }
    out.push_back(std::move(e));
  }
  return {{"entities", out}};
}

} // namespace mk::cli
