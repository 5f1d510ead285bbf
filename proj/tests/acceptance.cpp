// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "group_oracle.hpp"
#include "process.hpp"

#include "mk/abelian.hpp"
#include "mk/affinity.hpp"
#include "mk/commutator.hpp"
#include "mk/congruence.hpp"
#include "mk/corpus.hpp"
#include "mk/extension.hpp"
#include "mk/maltsev.hpp"
#include "mk/monoid.hpp"

using namespace mk;

namespace {

// Runtime limits in seconds, 0 meaning none.
constexpr double kLimit1 = 1.0;
constexpr double kLimit2 = 60.0;
constexpr double kLimit3 = 30.0;
constexpr double kLimit4 = 30.0;
constexpr double kLimit5 = 0.0;
constexpr double kLimit6 = 60.0;
constexpr double kLimit7 = 0.0;
constexpr double kLimit8 = 60.0;
constexpr double kLimit9 = 0.0;
constexpr double kLimit10 = 0.0;

// Criterion 6: every point is checked for partial composites of arity <= 3
// and simultaneous ones of arity <= 2, kPointSamples points otherwise;
// kCompositionSamples random compositions where the space is too big.
constexpr int kPointSamples = 512;
constexpr int kCompositionSamples = 2000;
constexpr std::size_t kExhaustiveCap = 200000;
constexpr unsigned kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(const std::string &why) { return {false, why}; }

// ---------------------------------------------------------------------------
// 1

Outcome criterion1() {
  const MonoidExtension e = counterexample_extension();
  std::map<std::string, Element> at;
  for (Element x = 0; x < e.total.size(); ++x)
    at[e.label(x)] = x;
  // x·00 = x·10 = 00 and x·01 = x·11 = 11 for every non-unit x
  const std::map<std::string, std::string> right_factor{{"00", "00"}, {"10", "00"}, {"01", "11"}, {"11", "11"}};
  int products = 0;
  for (const std::string a : {"00", "10", "01", "11"})
    for (const auto &[b, ab] : right_factor) {
      if (e.label(e.total.times(at.at(a), at.at(b))) != ab)
        return fail(a + "*" + b + " is not " + ab);
      ++products;
    }
  const CounterexampleReport r = counterexample_harness();
  for (const auto &p : r.products)
    if (right_factor.at(p[1]) != p[2])
      return fail("report lists " + p[0] + "*" + p[1] + " = " + p[2]);
  if (r.products.size() != 16)
    return fail("report has " + std::to_string(r.products.size()) + " products");
  if (r.forced_value != "*0")
    return fail("forced value " + r.forced_value);
  if (r.equivariant == 0 || r.associative != 0)
    return fail("equivariant " + std::to_string(r.equivariant) + ", associative " + std::to_string(r.associative));
  return {true, std::to_string(products) + " products, forced m(*0,01,11) = *0, " + std::to_string(r.maltsev_maps) +
                    " maps, " + std::to_string(r.equivariant) + " equivariant, 0 associative"};
}

// ---------------------------------------------------------------------------
// 2

Outcome criterion2() {
  const auto corpus = maltsev_corpus();
  std::size_t pairs = 0;
  for (const auto &e : corpus) {
    if (e.algebra.size() > 8)
      return fail(e.algebra.name() + " is larger than 8");
    const TermOp p = parse_term(e.algebra, e.maltsev_term, 3);
    CommutatorOracle orc(e.algebra, p);
    const auto l = all_congruences(e.algebra);
    for (const auto &r : l)
      for (const auto &s : l) {
        if (commutator(e.algebra, r, s, p) != orc(r, s))
          return fail(e.algebra.name() + " R=" + r.to_string() + " S=" + s.to_string());
        ++pairs;
      }
  }
  if (corpus.size() < 10)
    return fail("corpus has " + std::to_string(corpus.size()) + " algebras");
  return {true, std::to_string(corpus.size()) + " algebras, " + std::to_string(pairs) + " pairs"};
}

// ---------------------------------------------------------------------------
// 3

Outcome criterion3() {
  int groups = 0;
  for (const auto &e : maltsev_corpus()) {
    if (!e.is_group)
      continue;
    ++groups;
    const oracle::Group g(e.algebra);
    const TermOp p = parse_term(e.algebra, e.maltsev_term, 3);
    const std::string n = e.algebra.name();
    const auto normals = g.normal_subgroups();
    if (all_congruences(e.algebra).size() != normals.size())
      return fail(n + ": lattice size differs from the normal subgroup count");
    for (const auto &a : normals)
      for (const auto &b : normals)
        if (commutator(e.algebra, g.cosets(a), g.cosets(b), p) != g.cosets(g.commutator(a, b)))
          return fail(n + ": commutator differs");
    if (center(e.algebra, p) != g.cosets(g.center()))
      return fail(n + ": center differs");
    const auto cls = nilpotence_class(e.algebra, p);
    if (cls != g.nilpotence_class())
      return fail(n + ": class differs");
    if (g.abelian() && !(cls && *cls <= 1))
      return fail(n + ": abelian group of class above 1");
  }
  const auto cls = [](const FiniteAlgebra &a) { return nilpotence_class(a, parse_term(a, kGroupMaltsevTerm, 3)); };
  if (cls(dihedral_group(4)) != 2 || cls(quaternion_group()) != 2 || cls(symmetric_group3()).has_value())
    return fail("named classes");
  return {true, std::to_string(groups) + " groups; D4 2, Q8 2, S3 not nilpotent"};
}

// ---------------------------------------------------------------------------
// 4, 5

// Herd counts on n <= 3 by brute force over the free entries.
std::size_t count_herds_brute(int n) {
  const auto at = [n](int x, int y, int z) { return static_cast<std::size_t>((x * n + y) * n + z); };
  std::vector<std::array<int, 3>> free;
  std::vector<Element> t(tuple_count(n, 3));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (x == y)
          t[at(x, y, z)] = z;
        else if (y == z)
          t[at(x, y, z)] = x;
        else
          free.push_back({x, y, z});
      }
  const std::size_t total = tuple_count(n, static_cast<int>(free.size()));
  std::size_t found = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (const auto &f : free) {
      t[at(f[0], f[1], f[2])] = static_cast<Element>(c % static_cast<std::size_t>(n));
      c /= static_cast<std::size_t>(n);
    }
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        for (int cc = 0; cc < n && ok; ++cc)
          for (int d = 0; d < n && ok; ++d)
            for (int e = 0; e < n && ok; ++e)
              ok = t[at(t[at(a, b, cc)], d, e)] == t[at(a, b, t[at(cc, d, e)])];
    found += ok;
  }
  return found;
}

Outcome criterion4() {
  // groups on {0..n-1} with identity 0: 1, 1, 1, 4
  const std::vector<std::size_t> expected{1, 1, 1, 4};
  std::size_t tables = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto herds = enumerate_herds(n);
    if (herds.size() != expected[static_cast<std::size_t>(n - 1)])
      return fail("size " + std::to_string(n) + ": " + std::to_string(herds.size()) + " herds");
    if (n <= 3 && herds.size() != count_herds_brute(n))
      return fail("size " + std::to_string(n) + " disagrees with brute force");
    for (const auto &h : herds) {
      const TorsorGroup g = torsor_to_group(h);
      const TernaryTable back = reconstruct_herd(g);
      if (!std::equal(back.table().begin(), back.table().end(), h.table().begin(), h.table().end()))
        return fail("reconstruction differs on size " + std::to_string(n));
      if (check_commutative(h) && !g.is_abelian())
        return fail("commutative herd with non-abelian group");
      ++tables;
    }
  }
  return {true, std::to_string(tables) + " tables reconstructed"};
}

Outcome criterion5() {
  std::size_t instances = 0;
  for (int n = 1; n <= 4; ++n)
    for (const auto &h : enumerate_herds(n)) {
      // m(u,v,m(x,y,z)) = m(u,m(y,x,v),z), read off the table
      for (Element u = 0; u < n; ++u)
        for (Element v = 0; v < n; ++v)
          for (Element x = 0; x < n; ++x)
            for (Element y = 0; y < n; ++y)
              for (Element z = 0; z < n; ++z) {
                if (h(u, v, h(x, y, z)) != h(u, h(y, x, v), z))
                  return fail(h.name() + " at (" + std::to_string(u) + "," + std::to_string(v) + "," +
                              std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")");
                ++instances;
              }
      if (asmal_violation(h))
        return fail("library check disagrees on " + h.name());
    }
  return {true, std::to_string(instances) + " instances"};
}

// ---------------------------------------------------------------------------
// 6

// An affinity op as a linear map on M ⊕ R:
// ⟨x, r1..⟩(a) = (x, 0) + (1 - ∂x) a0 + Σ r_i (a_i - a0).
class PointOracle {
public:
  explicit PointOracle(const LinearForm &f) : f_(f), rs_(f.ring().size()) {}
  int size() const { return f_.module().size() * rs_; }

  Element eval(const AffinityOp &op, const std::vector<Element> &a) const {
    const FiniteRing &r = f_.ring();
    Element v = plus(op.x * rs_, scale(r.minus(r.one(), f_.d(op.x)), a[0]));
    for (std::size_t i = 0; i < op.r.size(); ++i)
      v = plus(v, scale(op.r[i], minus(a[i + 1], a[0])));
    return v;
  }

private:
  Element plus(Element a, Element b) const {
    return f_.module().plus(a / rs_, b / rs_) * rs_ + f_.ring().plus(a % rs_, b % rs_);
  }
  Element minus(Element a, Element b) const {
    return f_.module().minus(a / rs_, b / rs_) * rs_ + f_.ring().minus(a % rs_, b % rs_);
  }
  Element scale(Element r, Element a) const {
    return f_.module().scale(r, a / rs_) * rs_ + f_.ring().times(r, a % rs_);
  }

  const LinearForm &f_;
  int rs_;
};

// g reading arguments i..i+k-1 of an N-ary tuple, written with a0 as base:
// coefficient c_l on a_l is r'_l for l >= 1.
AffinityOp shifted(const LinearForm &f, const AffinityOp &g, int i, int total) {
  const FiniteRing &r = f.ring();
  std::vector<Element> coeff(static_cast<std::size_t>(total), r.zero());
  Element base = r.minus(r.one(), f.d(g.x));
  for (Element c : g.r)
    base = r.minus(base, c);
  coeff[static_cast<std::size_t>(i)] = base;
  for (std::size_t j = 0; j < g.r.size(); ++j)
    coeff[static_cast<std::size_t>(i) + j + 1] = g.r[j];
  return AffinityOp{g.x, std::vector<Element>(coeff.begin() + 1, coeff.end())};
}

// True if compose(outer, inners) agrees with evaluating the parts.
bool agrees(const PointOracle &o, const AffinityOp &outer, const std::vector<AffinityOp> &inners,
            const AffinityOp &composite, int k, int exhaustive_arity, std::mt19937 &rng) {
  const int n = o.size();
  std::vector<Element> a(static_cast<std::size_t>(k)), mid(inners.size());
  const auto check = [&]() {
    for (std::size_t j = 0; j < inners.size(); ++j)
      mid[j] = o.eval(inners[j], a);
    return o.eval(composite, a) == o.eval(outer, mid);
  };
  if (k <= exhaustive_arity) {
    for (std::size_t i = 0; i < tuple_count(n, k); ++i) {
      decode_tuple(i, n, a);
      if (!check())
        return false;
    }
    return true;
  }
  for (int s = 0; s < kPointSamples; ++s) {
    for (auto &x : a)
      x = static_cast<Element>(rng() % static_cast<unsigned>(n));
    if (!check())
      return false;
  }
  return true;
}

Outcome criterion6() {
  std::mt19937 rng(kSeed);
  const auto forms = form_corpus();
  if (forms.size() < 6)
    return fail("corpus has " + std::to_string(forms.size()) + " forms");
  std::size_t partial = 0, full = 0, assoc = 0, units = 0;
  for (const auto &f : forms) {
    if (f.ring().size() > 4 || f.module().size() > 4)
      return fail(f.name() + " is too large");
    const PointOracle o(f);
    // every pair f ∘_i g with arities up to 3
    for (int n = 1; n <= 3; ++n)
      for (int k = 1; k <= 3; ++k) {
        const int total = n + k - 1;
        for (const auto &outer : all_affinity_ops(f, n))
          for (const auto &g : all_affinity_ops(f, k))
            for (int i = 0; i < n; ++i) {
              std::vector<AffinityOp> inners;
              for (int j = 0; j < n; ++j)
                inners.push_back(j < i   ? affinity_projection(f, total, j)
                                 : j > i ? affinity_projection(f, total, j + k - 1)
                                         : shifted(f, g, i, total));
              const AffinityOp c = compose_affinity(outer, inners, f);
              if (!agrees(o, outer, inners, c, total, 3, rng))
                return fail(f.name() + ": " + to_string(outer) + " o_" + std::to_string(i) + " " + to_string(g));
              ++partial;
            }
      }
    // simultaneous composition; exhaustive where small, sampled otherwise
    for (int n = 1; n <= 3; ++n)
      for (int k = 1; k <= 3; ++k) {
        const auto outers = all_affinity_ops(f, n);
        const auto ins = all_affinity_ops(f, k);
        const std::size_t space = outers.size() * tuple_count(static_cast<int>(ins.size()), n);
        const bool exhaustive = space <= kExhaustiveCap;
        const std::size_t runs = exhaustive ? space : static_cast<std::size_t>(kCompositionSamples);
        std::vector<Element> pick(static_cast<std::size_t>(n));
        for (std::size_t run = 0; run < runs; ++run) {
          std::size_t oi;
          if (exhaustive) {
            oi = run % outers.size();
            decode_tuple(run / outers.size(), static_cast<int>(ins.size()), pick);
          } else {
            oi = rng() % outers.size();
            for (auto &p : pick)
              p = static_cast<Element>(rng() % ins.size());
          }
          std::vector<AffinityOp> inners;
          for (Element p : pick)
            inners.push_back(ins[static_cast<std::size_t>(p)]);
          const AffinityOp c = compose_affinity(outers[oi], inners, f);
          if (!agrees(o, outers[oi], inners, c, k, 2, rng))
            return fail(f.name() + ": " + to_string(outers[oi]) + " composed with " + std::to_string(n) + " ops");
          ++full;
        }
      }
    // unit laws, exhaustive to arity 3
    for (int n = 1; n <= 3; ++n)
      for (const auto &op : all_affinity_ops(f, n)) {
        std::vector<AffinityOp> ps;
        for (int i = 0; i < n; ++i)
          ps.push_back(affinity_projection(f, n, i));
        if (compose_affinity(op, ps, f) != op)
          return fail(f.name() + ": right unit fails on " + to_string(op));
        for (int i = 0; i < n; ++i)
          if (compose_affinity(affinity_projection(f, n, i), std::vector<AffinityOp>(static_cast<std::size_t>(n), op),
                               f) != op)
            return fail(f.name() + ": left unit fails on " + to_string(op));
        ++units;
      }
    // associativity f(g(h)) = (f g)(h), sampled over arities 1..3
    for (int s = 0; s < kCompositionSamples; ++s) {
      const int a = 1 + static_cast<int>(rng() % 3), b = 1 + static_cast<int>(rng() % 3),
                c = 1 + static_cast<int>(rng() % 3);
      const AffinityOp outer = affinity_op_at(f, a, rng() % affinity_op_count(f, a));
      std::vector<AffinityOp> mid, low;
      for (int i = 0; i < a; ++i)
        mid.push_back(affinity_op_at(f, b, rng() % affinity_op_count(f, b)));
      for (int i = 0; i < b; ++i)
        low.push_back(affinity_op_at(f, c, rng() % affinity_op_count(f, c)));
      std::vector<AffinityOp> mid_low;
      for (const auto &m : mid)
        mid_low.push_back(compose_affinity(m, low, f));
      if (compose_affinity(outer, mid_low, f) != compose_affinity(compose_affinity(outer, mid, f), low, f))
        return fail(f.name() + ": associativity fails at " + to_string(outer));
      ++assoc;
    }
  }
  return {true, std::to_string(forms.size()) + " forms; " + std::to_string(partial) + " partial and " +
                    std::to_string(full) + " simultaneous compositions, " + std::to_string(units) +
                    " unit checks, " + std::to_string(assoc) + " associativity samples"};
}

// ---------------------------------------------------------------------------
// 7

Outcome criterion7() {
  int with = 0, without = 0;
  for (const auto &f : form_corpus()) {
    const RoundtripReport r = roundtrip_check(f);
    if (!r.isomorphic)
      return fail(f.name() + ": " + r.failure);
    (pseudoconstants(f).empty() ? without : with)++;
  }
  if (with == 0 || without == 0)
    return fail("corpus lacks a form with or without a pseudoconstant");
  return {true, std::to_string(with + without) + " forms (" + std::to_string(with) + " with a pseudoconstant, " +
                    std::to_string(without) + " without)"};
}

// ---------------------------------------------------------------------------
// 8

Outcome criterion8() {
  std::size_t pairs = 0;
  int cones = 0, shifts = 0;
  for (const auto &x : bimodule_corpus()) {
    const DerivationReport r = enumerate_derivations(x);
    if (r.h0.size() * r.der.size() != static_cast<std::size_t>(x.k().size()) * r.h1_order)
      return fail(x.name() + ": |H0||Der| != |K||H1|");
    cones += x.name().rfind("C(", 0) == 0;
    shifts += x.name().find("[1]") != std::string::npos;
    ++pairs;
  }
  if (cones == 0 || shifts == 0)
    return fail("corpus lacks cone or shift instances");
  for (const auto &x : bimodule_corpus()) {
    if (x.name() != "C(Z4)" || x.form().name() != "id_Z4")
      continue;
    const DerivationReport r = enumerate_derivations(x);
    // H0 is a subgroup of K = Z/4 with 4 elements, so all of it
    const bool der_trivial = r.der.size() == 1 && r.der.front() == Derivation{
        std::vector<Element>(static_cast<std::size_t>(x.form().ring().size()), x.b().zero()),
        std::vector<Element>(static_cast<std::size_t>(x.form().module().size()), x.k().zero())};
    if (!der_trivial || r.h0.size() != 4 || r.h1_order != 1)
      return fail("C(Z4): |Der| " + std::to_string(r.der.size()) + ", |H0| " + std::to_string(r.h0.size()) +
                  ", |H1| " + std::to_string(r.h1_order));
    return {true, std::to_string(pairs) + " pairs; C(Z4) over id: Der 0, H0 = Z4, H1 0"};
  }
  return fail("no C(Z4) over id_Z4 in the corpus");
}

// ---------------------------------------------------------------------------
// 9

Outcome criterion9() {
  int lifted = 0;
  for (const auto &e : extension_corpus()) {
    if (!crext_check(e.ext).ok)
      continue;
    const AffinityOp image = canonical_maltsev(e.ext.base);
    std::optional<AffinityOp> bad;
    for (const auto &op : all_affinity_ops(e.ext.total, 3))
      if (project_op(e.ext, op) == image && !is_maltsev_op(e.ext.total, op)) {
        bad = op;
        break;
      }
    if (!bad)
      continue;
    const LiftReport r = lift_maltsev(e.ext, image, bad);
    // Maltsev identities on the canonical affinity of the total form
    const AffinityStructure a = canonical_affinity(e.ext.total);
    const auto t = interpret(r.lifted, a);
    for (Element x = 0; x < a.size; ++x)
      for (Element y = 0; y < a.size; ++y) {
        const std::vector<Element> xxy{x, x, y}, xyy{x, y, y};
        if (t[encode_tuple(xxy, a.size)] != y || t[encode_tuple(xyy, a.size)] != x)
          return fail(e.name + ": lift of " + to_string(*bad) + " is not Maltsev");
      }
    if (project_op(e.ext, r.lifted) != image)
      return fail(e.name + ": lift does not project to the base op");
    ++lifted;
  }
  if (lifted < 3)
    return fail("only " + std::to_string(lifted) + " extensions lifted");
  return {true, std::to_string(lifted) + " extensions lifted from non-Maltsev preimages"};
}

// ---------------------------------------------------------------------------
// 10

Outcome criterion10() {
  const std::string mk = proc::quote(MK_BINARY);
  const auto file = [](const std::string &name) { return proc::quote(std::string(MK_DATA_DIR) + "/" + name); };
  const std::vector<std::string> verbs{
      "parse " + file("d4.alg"),
      "clone " + file("z4affine.alg") + " --arity 2",
      "maltsev-term " + file("s3.alg"),
      "maltsev-term " + file("semi.alg"),
      "torsor-check " + file("herds.tern") + " Z3herd",
      "torsor-check " + file("herds.tern") + " broken",
      "torsor-check " + file("herds.tern") + " D4/Z",
      "torsor-group " + file("herds.tern") + " Z3herd",
      "congruences " + file("q8.alg"),
      "commutator " + file("d4.alg"),
      "center " + file("q8.alg"),
      "nilpotence " + file("d4.alg"),
      "affinity-compose " + file("forms.form") + " id_Z4 --op '<0,3,1>' --op '<1,1>' --op '<2,0>' --op '<0,2>'",
      "abelianize " + file("z4affine.alg"),
      "roundtrip " + file("forms.form") + " id_Z4",
      "derivations " + file("bimodules.form") + " 'C(Z4)'",
      "crext " + file("extensions.form") + " 'Z4->Z2' --op '<0,1,1>'",
      "trivial-ext " + file("counterexample.mon") + " ce.D",
      "lin-ext-check " + file("counterexample.mon") + " ce",
      "untwisted-check " + file("counterexample.mon") + " ce",
      "counterexample",
      "counterexample --golden",
  };
  const unsigned n = std::max(2u, std::thread::hardware_concurrency());
  std::set<std::string> covered;
  for (const auto &args : verbs) {
    covered.insert(args.substr(0, args.find(' ')));
    const proc::Result first = proc::run(mk + " " + args + " --threads 1");
    if (first.status != 0)
      return fail("'" + args + "' exited " + std::to_string(first.status));
    for (int i = 0; i < 2; ++i)
      if (proc::run(mk + " " + args + " --threads 1").out != first.out)
        return fail("'" + args + "' differs between runs");
    for (int i = 0; i < 3; ++i)
      if (proc::run(mk + " " + args + " --threads " + std::to_string(n)).out != first.out)
        return fail("'" + args + "' differs with " + std::to_string(n) + " threads");
  }
  return {true, std::to_string(covered.size()) + " verbs, " + std::to_string(verbs.size()) +
                    " invocations, threads 1 and " + std::to_string(n)};
}

} // namespace

int main() {
  const std::vector<std::tuple<int, double, std::function<Outcome()>>> criteria{
      {1, kLimit1, criterion1}, {2, kLimit2, criterion2}, {3, kLimit3, criterion3}, {4, kLimit4, criterion4},
      {5, kLimit5, criterion5}, {6, kLimit6, criterion6}, {7, kLimit7, criterion7}, {8, kLimit8, criterion8},
      {9, kLimit9, criterion9}, {10, kLimit10, criterion10},
  };
  int failed = 0;
  for (const auto &[id, limit, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && limit > 0 && secs >= limit)
      o = fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limit) + " s; " + o.detail);
    failed += !o.pass;
    std::printf("criterion %2d: %s (%.2f s) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
  }
  std::fflush(stdout);
  return failed;
}
