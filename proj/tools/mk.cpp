// mk: command-line front end. One verb per invocation, JSON on stdout.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "json_export.hpp"
#include "mk/abelian.hpp"
#include "mk/affinity.hpp"
#include "mk/commutator.hpp"
#include "mk/congruence.hpp"
#include "mk/error.hpp"
#include "mk/extension.hpp"
#include "mk/maltsev.hpp"
#include "mk/monoid.hpp"
#include "mk/parallel.hpp"
#include "mk/spec_io.hpp"

namespace {

using namespace mk;
using mk::cli::Json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  unsigned threads = 1;
  std::optional<std::size_t> budget;
  std::string term;
  std::string r = "nabla", s = "nabla";
  int max_steps = 64;
  int arity = 2;
  bool golden = false;
  bool json = false;
  std::vector<std::string> ops;
};

// Files are loaded into one document; other arguments name entities.
struct Context {
  SpecDocument doc;
  std::vector<std::string> names;

  explicit Context(const Options &opt) {
    for (const auto &in : opt.inputs) {
      if (std::filesystem::is_regular_file(in))
        load_file(doc, in);
      else
        names.push_back(in);
    }
    for (const auto &n : names)
      if (!doc.contains(n))
        throw UsageError("'" + n + "' is neither a readable file nor a declared entity");
  }

  /// The named entity of this kind, else the only one in the document.
  std::string pick(EntityKind kind) const {
    for (const auto &n : names)
      if (doc.kind(n) == kind)
        return n;
    const auto all = doc.names(kind);
    if (all.size() == 1)
      return all.front();
    if (all.empty())
      throw UsageError(std::string("no ") + to_string(kind) + " given");
    throw UsageError(std::string("several ") + to_string(kind) + " entities; name one");
  }

  /// First of the given kinds present, by argument name or uniqueness.
  std::pair<EntityKind, std::string> pick_any(std::initializer_list<EntityKind> kinds) const {
    for (const auto &n : names)
      for (EntityKind k : kinds)
        if (doc.kind(n) == k)
          return {k, n};
    for (EntityKind k : kinds)
      if (doc.names(k).size() == 1)
        return {k, doc.names(k).front()};
    std::string what;
    for (EntityKind k : kinds)
      what += (what.empty() ? "" : " or ") + std::string(to_string(k));
    throw UsageError("expected exactly one " + what);
  }
};

AffinityOp parse_op(const std::string &text) {
  std::string s;
  for (char c : text)
    s += (c == '<' || c == '>' || c == ',') ? ' ' : c;
  std::istringstream in(s);
  std::vector<Element> v;
  long long x;
  while (in >> x)
    v.push_back(static_cast<Element>(x));
  in.clear();
  std::string rest;
  if (in >> rest || v.empty())
    throw UsageError("cannot read affinity operation '" + text + "'; expected <x,r1,...>");
  return AffinityOp{v[0], std::vector<Element>(v.begin() + 1, v.end())};
}

std::size_t budget_or(const Options &o, std::size_t fallback) { return o.budget.value_or(fallback); }

TermOp maltsev_term(const FiniteAlgebra &alg, const Options &o, Json &out) {
  if (!o.term.empty()) {
    TermOp t = parse_term(alg, o.term, 3);
    require_maltsev(alg, t);
    out["term"] = o.term;
    return t;
  }
  const MaltsevSearch found = find_maltsev_term(alg, budget_or(o, kDefaultCloneBudget));
  if (!found.term)
    throw NotMaltsev("'" + alg.name() + "' has no Maltsev term");
  out["term"] = term_to_string(*found.term->witness, alg, 3);
  return *found.term;
}

Congruence named_congruence(const Context &ctx, const FiniteAlgebra &alg, const std::string &name) {
  if (name == "nabla")
    return Congruence::total(alg.size());
  if (name == "delta")
    return Congruence::diagonal(alg.size());
  auto it = ctx.doc.congruences.find(name);
  if (it == ctx.doc.congruences.end())
    throw UsageError("no congruence named '" + name + "'");
  if (it->second.algebra != alg.name())
    throw DomainError("congruence '" + name + "' is on " + it->second.algebra + ", not on " + alg.name());
  return it->second.theta;
}

Json series_json(const SeriesReport &s) {
  Json out = Json::array();
  for (const auto &t : s.terms)
    out.push_back(cli::blocks_json(t));
  return out;
}

MonoidExtension extension_arg(const Context &ctx) {
  const auto [kind, name] = ctx.pick_any({EntityKind::linext, EntityKind::system});
  if (kind == EntityKind::linext)
    return ctx.doc.linexts.at(name).value;
  return trivial_extension(ctx.doc.systems.at(name).value);
}

// ---------------------------------------------------------------------------

using Verb = std::function<Json(const Options &, std::string &text)>;

std::map<std::string, std::pair<std::string, Verb>> verbs() {
  std::map<std::string, std::pair<std::string, Verb>> v;

  v["parse"] = {"load spec files and export them", [](const Options &o, std::string &text) {
                  Context ctx(o);
                  if (o.golden)
                    text = serialize(ctx.doc);
                  return cli::document_json(ctx.doc);
                }};

  v["clone"] = {"term operations of a given arity (--arity)", [](const Options &o, std::string &) {
                  Context ctx(o);
                  const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                  return cli::clone_json(alg, term_clone(alg, o.arity, budget_or(o, kDefaultCloneBudget)));
                }};

  v["maltsev-term"] = {"search the ternary clone for a Maltsev term", [](const Options &o, std::string &) {
                         Context ctx(o);
                         const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                         const MaltsevSearch r = find_maltsev_term(alg, budget_or(o, kDefaultCloneBudget));
                         Json out = {{"algebra", alg.name()}, {"found", r.term.has_value()}, {"complete", r.complete},
                                     {"examined", r.examined}};
                         out["term"] = r.term ? Json(term_to_string(*r.term->witness, alg, 3)) : Json(nullptr);
                         return out;
                       }};

  v["torsor-check"] = {"herd identities of a ternary table", [](const Options &o, std::string &) {
                         Context ctx(o);
                         const auto &t = ctx.doc.terns.at(ctx.pick(EntityKind::tern));
                         Json out = {{"tern", t.name()}, {"domain", to_string(t.domain())}};
                         if (t.domain() == TernaryDomain::mixed) {
                           const FiniteAlgebra *alg = nullptr;
                           for (const auto &n : ctx.names)
                             if (ctx.doc.kind(n) == EntityKind::algebra)
                               alg = &ctx.doc.algebras.at(n);
                           const CentralTorsorReport r = central_torsor_check(t, alg);
                           out["central"] = r.central;
                           out["violation"] = cli::violation_json(r.violation);
                           out["group"] = r.group ? cli::group_json(*r.group) : Json(nullptr);
                           return out;
                         }
                         const auto mv = maltsev_violation(t), av = associativity_violation(t),
                                    cv = commutativity_violation(t), sv = asmal_violation(t);
                         out["maltsev"] = !mv;
                         out["associative"] = !av;
                         out["commutative"] = !cv;
                         out["asmal"] = !sv;
                         out["herd"] = !mv && !av;
                         out["violations"] = {{"maltsev", cli::violation_json(mv)},
                                              {"associative", cli::violation_json(av)},
                                              {"commutative", cli::violation_json(cv)},
                                              {"asmal", cli::violation_json(sv)}};
                         return out;
                       }};

  v["torsor-group"] = {"group of a herd and its action", [](const Options &o, std::string &) {
                         Context ctx(o);
                         const auto &t = ctx.doc.terns.at(ctx.pick(EntityKind::tern));
                         const TorsorGroup g = torsor_to_group(t);
                         const TernaryTable back = reconstruct_herd(g);
                         return Json{{"tern", t.name()},
                                     {"group", cli::group_json(g)},
                                     {"reconstructs", std::ranges::equal(back.table(), t.table())}};
                       }};

  v["congruences"] = {"congruence lattice", [](const Options &o, std::string &) {
                        Context ctx(o);
                        const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                        const auto all = all_congruences(alg, budget_or(o, kDefaultLatticeBudget));
                        Json list = Json::array();
                        for (const auto &c : all)
                          list.push_back(cli::blocks_json(c));
                        return Json{{"algebra", alg.name()}, {"count", all.size()}, {"congruences", list}};
                      }};

  v["commutator"] = {"[R,S] (--R, --S name congruences; default nabla)", [](const Options &o, std::string &) {
                       Context ctx(o);
                       const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                       Json out = {{"algebra", alg.name()}};
                       const TermOp p = maltsev_term(alg, o, out);
                       const Congruence r = named_congruence(ctx, alg, o.r), s = named_congruence(ctx, alg, o.s);
                       out["R"] = cli::blocks_json(r);
                       out["S"] = cli::blocks_json(s);
                       out["commutator"] = cli::blocks_json(commutator(alg, r, s, p));
                       out["centralize"] = centralize(alg, r, s, p);
                       return out;
                     }};

  v["center"] = {"center of a Maltsev algebra", [](const Options &o, std::string &) {
                   Context ctx(o);
                   const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                   Json out = {{"algebra", alg.name()}};
                   const TermOp p = maltsev_term(alg, o, out);
                   out["center"] = cli::blocks_json(center(alg, p));
                   return out;
                 }};

  v["nilpotence"] = {"lower and upper central series (--max)", [](const Options &o, std::string &) {
                       Context ctx(o);
                       const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                       Json out = {{"algebra", alg.name()}};
                       const TermOp p = maltsev_term(alg, o, out);
                       const SeriesReport lo = lower_series(alg, p, o.max_steps);
                       const SeriesReport up = upper_series(alg, p, o.max_steps);
                       const auto cls = nilpotence_class(alg, p, o.max_steps);
                       out["class"] = cls ? Json(*cls) : Json(nullptr);
                       out["lower"] = series_json(lo);
                       out["upper"] = series_json(up);
                       out["stabilized"] = lo.stabilized && up.stabilized;
                       return out;
                     }};

  v["affinity-compose"] = {"compose --op OUTER --op INNER... and check against the interpretation",
                           [](const Options &o, std::string &) {
                             Context ctx(o);
                             const auto &form = ctx.doc.forms.at(ctx.pick(EntityKind::form)).second;
                             if (o.ops.empty())
                               throw UsageError("affinity-compose needs --op OUTER followed by one --op per argument");
                             const AffinityOp outer = parse_op(o.ops.front());
                             std::vector<AffinityOp> inners;
                             for (std::size_t i = 1; i < o.ops.size(); ++i)
                               inners.push_back(parse_op(o.ops[i]));
                             validate_affinity_op(form, outer);
                             for (const auto &in : inners)
                               validate_affinity_op(form, in);
                             const AffinityOp result = compose_affinity(outer, inners, form);
                             // Oracle: compose the interpreted tables on the canonical carrier.
                             const AffinityStructure A = canonical_affinity(form);
                             const std::vector<Element> outer_t = interpret(outer, A);
                             std::vector<std::vector<Element>> inner_t;
                             for (const auto &in : inners)
                               inner_t.push_back(interpret(in, A));
                             const std::vector<Element> result_t = interpret(result, A);
                             bool agrees = true;
                             std::vector<Element> mid(inners.size());
                             for (std::size_t idx = 0; idx < result_t.size(); ++idx) {
                               for (std::size_t i = 0; i < inners.size(); ++i)
                                 mid[i] = inner_t[i][idx];
                               agrees = agrees && result_t[idx] == outer_t[encode_tuple(mid, A.size)];
                             }
                             Json in = Json::array();
                             for (const auto &i : inners)
                               in.push_back(cli::op_json(i));
                             return Json{{"form", form.name()},        {"outer", cli::op_json(outer)},
                                         {"inners", in},                {"result", cli::op_json(result)},
                                         {"oracle_agrees", agrees}};
                           }};

  v["abelianize"] = {"linear form of an abelian Maltsev algebra", [](const Options &o, std::string &) {
                       Context ctx(o);
                       const auto &alg = ctx.doc.algebras.at(ctx.pick(EntityKind::algebra));
                       Json out = {{"algebra", alg.name()}};
                       const TermOp p = maltsev_term(alg, o, out);
                       const Abelianization ab = abelianize(alg, p, budget_or(o, kDefaultCloneBudget));
                       out["form"] = cli::form_json(ab.form);
                       Json unary = Json::array(), binary = Json::array();
                       for (const auto &u : ab.unary)
                         unary.push_back(u.witness ? term_to_string(*u.witness, alg, 1) : "");
                       for (const auto &b : ab.binary)
                         binary.push_back(b.witness ? term_to_string(*b.witness, alg, 2) : "");
                       out["module_terms"] = unary;
                       out["ring_terms"] = binary;
                       const auto pc = pseudoconstants(ab.form);
                       out["pseudoconstants"] = pc;
                       return out;
                     }};

  v["roundtrip"] = {"abelianize the realized theory and compare (--arity)", [](const Options &o, std::string &) {
                      Context ctx(o);
                      const auto &form = ctx.doc.forms.at(ctx.pick(EntityKind::form)).second;
                      const RoundtripReport r = roundtrip_check(form, o.arity, budget_or(o, kDefaultCloneBudget));
                      return Json{{"form", form.name()},
                                  {"arity_bound", o.arity},
                                  {"isomorphic", r.isomorphic},
                                  {"failure", r.failure},
                                  {"ring_map", r.ring_map},
                                  {"module_map", r.module_map},
                                  {"recovered", cli::form_json(r.recovered.form)},
                                  {"pseudoconstants", pseudoconstants(form)}};
                    }};

  v["derivations"] = {"Der, inner derivations, H0 and H1", [](const Options &o, std::string &) {
                        Context ctx(o);
                        const auto &named = ctx.doc.dbimodules.at(ctx.pick(EntityKind::dbimodule));
                        for (const auto &n : ctx.names)
                          if (ctx.doc.kind(n) == EntityKind::form && n != named.form)
                            throw DomainError("dbimodule is over " + named.form + ", not over " + n);
                        const DerivationReport r = enumerate_derivations(named.value, budget_or(o, kDefaultDerBudget));
                        Json der = Json::array(), inner = Json::array(), reps = Json::array();
                        for (const auto &d : r.der)
                          der.push_back(cli::derivation_json(d));
                        for (const auto &d : r.inner)
                          inner.push_back(cli::derivation_json(d));
                        for (const auto &d : r.h1_representatives)
                          reps.push_back(cli::derivation_json(d));
                        return Json{{"dbimodule", named.value.name()},
                                    {"form", named.form},
                                    {"K", named.value.k().size()},
                                    {"der_count", r.der.size()},
                                    {"inner_count", r.inner.size()},
                                    {"h0", r.h0},
                                    {"ker_ad", r.ker_ad},
                                    {"h1_order", r.h1_order},
                                    {"cardinality_identity", r.cardinality_identity},
                                    {"der", der},
                                    {"inner", inner},
                                    {"h1_representatives", reps}};
                      }};

  v["crext"] = {"kernel bimodule of a square of forms; --op IMAGE [--op PREIMAGE] lifts a Maltsev op",
                [](const Options &o, std::string &) {
                  Context ctx(o);
                  const std::string name = ctx.pick(EntityKind::diagram);
                  const auto &ext = ctx.doc.diagrams.at(name).value;
                  const CrextReport r = crext_check(ext);
                  Json out = {{"diagram", name},
                              {"ok", r.ok},
                              {"witness", r.witness},
                              {"b_elements", r.b_elements},
                              {"k_elements", r.k_elements}};
                  out["bimodule"] = r.bimodule ? cli::dbimodule_json(*r.bimodule) : Json(nullptr);
                  if (!o.ops.empty()) {
                    std::optional<AffinityOp> pre;
                    if (o.ops.size() > 1)
                      pre = parse_op(o.ops[1]);
                    const LiftReport l = lift_maltsev(ext, parse_op(o.ops.front()), pre);
                    out["lift"] = {{"image", cli::op_json(l.image)},
                                   {"preimage", cli::op_json(l.preimage)},
                                   {"preimage_maltsev", is_maltsev_op(ext.total, l.preimage)},
                                   {"lifted", cli::op_json(l.lifted)},
                                   {"lifted_maltsev", is_maltsev_op(ext.total, l.lifted)}};
                  }
                  return out;
                }};

  v["trivial-ext"] = {"semidirect product of a monoid with a natural system", [](const Options &o, std::string &) {
                        Context ctx(o);
                        const std::string name = ctx.pick(EntityKind::system);
                        return Json{{"system", name},
                                    {"extension", cli::linext_json(trivial_extension(ctx.doc.systems.at(name).value))}};
                      }};

  v["lin-ext-check"] = {"linear extension laws", [](const Options &o, std::string &) {
                          Context ctx(o);
                          const MonoidExtension e = extension_arg(ctx);
                          const auto v = linear_extension_violation(e);
                          return Json{{"linear", !v}, {"violation", cli::violation_json(v)}};
                        }};

  v["untwisted-check"] = {"search for an untwisting family of fiber isomorphisms",
                          [](const Options &o, std::string &) {
                            Context ctx(o);
                            const MonoidExtension e = extension_arg(ctx);
                            const auto fam = check_untwisted(e);
                            Json out = {{"untwisted", fam.has_value()}};
                            if (fam) {
                              out["psi"] = fam->psi;
                              out["phi_violation"] = cli::violation_json(phi_violation(e, fam->m));
                            }
                            return out;
                          }};

  v["counterexample"] = {"the two-element monoid report (--golden for text)", [](const Options &,
                                                                                   std::string &text) {
                           const CounterexampleReport r = counterexample_harness();
                           text = r.text();
                           Json products = Json::array();
                           for (const auto &p : r.products)
                             products.push_back({{"a", p[0]}, {"b", p[1]}, {"ab", p[2]}});
                           Json action = Json::object();
                           for (const auto &a : r.action_of_10)
                             action[a[0]] = a[1];
                           return Json{{"elements", r.total_order},
                                       {"products", products},
                                       {"S", r.s_elements},
                                       {"action_of_10", action},
                                       {"maltsev_maps", r.maltsev_maps},
                                       {"equivariant", r.equivariant},
                                       {"forced_value", r.forced_value},
                                       {"associative", r.associative},
                                       {"chain_lhs", r.chain_lhs},
                                       {"chain_rhs", r.chain_rhs},
                                       {"witnesses", r.witnesses}};
                         }};
  return v;
}

void print_error(const std::string &code, const std::string &message, const SpecError *spec = nullptr) {
  Json out = {{"error", code}, {"message", message}};
  if (spec) {
    out["source"] = spec->source();
    out["line"] = spec->line();
    out["column"] = spec->column();
  }
  std::cout << out.dump(2) << "\n";
  std::cerr << "mk: " << message << "\n";
}

} // namespace

int main(int argc, char **argv) {
  const auto table = verbs();
  CLI::App app{"finite algebra calculator"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;
  for (const auto &[name, entry] : table) {
    CLI::App *sub = app.add_subcommand(name, entry.first);
    sub->add_option("inputs", opt.inputs, "spec files and entity names");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--budget", opt.budget, "search budget");
    sub->add_option("--term", opt.term, "Maltsev term, e.g. mul(mul(x,inv(y)),z)");
    sub->add_option("--R", opt.r, "congruence name, nabla or delta");
    sub->add_option("--S", opt.s, "congruence name, nabla or delta");
    sub->add_option("--max", opt.max_steps, "series step limit");
    sub->add_option("--arity", opt.arity, "arity bound")->check(CLI::Range(1, 4));
    sub->add_option("--op", opt.ops, "affinity operation <x,r1,...>");
    sub->add_flag("--json", opt.json, "JSON output (default)");
    sub->add_flag("--golden", opt.golden, "pre-formatted text where available");
    sub->callback([&chosen, name = name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  set_thread_count(opt.threads);
  try {
    std::string text;
    const Json out = table.at(chosen).second(opt, text);
    if (opt.golden && !text.empty())
      std::cout << text;
    else
      std::cout << out.dump(2) << "\n";
    return kExitOk;
  } catch (const UsageError &e) {
    std::cerr << "mk " << chosen << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError &e) {
    print_error(e.code(), e.what(), &e);
    return kExitDomain;
  } catch (const BudgetError &e) {
    print_error(e.code(), e.what());
    return kExitBudget;
  } catch (const Error &e) {
    print_error(e.code(), e.what());
    return kExitDomain;
  }
}
