#include "mk/commutator.hpp"

#include <array>
#include <set>

#include "mk/error.hpp"
#include "mk/maltsev.hpp"
#include "mk/parallel.hpp"

namespace mk {

namespace {

Element eval3(const TermOp &p, int n, Element x, Element y, Element z) {
  return p.table[(static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(y)) *
                     static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(z)];
}

using Triple = std::array<Element, 3>;

bool centralize_unchecked(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                          const TermOp &p) {
  const int n = alg.size();
  std::vector<Triple> dom;
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      if (!r.related(x, y))
        continue;
      for (Element z = 0; z < n; ++z)
        if (s.related(y, z))
          dom.push_back({x, y, z});
    }
  std::vector<Element> pm(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const auto [x, y, z] = dom[i];
    pm[i] = eval3(p, n, x, y, z);
    if (!s.related(x, pm[i]) || !r.related(pm[i], z))
      return false;
  }
  const std::size_t d = dom.size();
  for (const auto &op : alg.ops()) {
    const int k = op.arity;
    if (k == 0) {
      const Element c = op.table[0];
      if (eval3(p, n, c, c, c) != c)
        return false;
      continue;
    }
    const bool ok = parallel_all(d, [&](std::size_t first) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
      idx[0] = first;
      std::vector<Element> xs(idx.size()), ys(idx.size()), zs(idx.size()), ms(idx.size());
      while (true) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const auto &t = dom[idx[j]];
          xs[j] = t[0];
          ys[j] = t[1];
          zs[j] = t[2];
          ms[j] = pm[idx[j]];
        }
        const Element lhs = eval3(p, n, op.table[encode_tuple(xs, n)], op.table[encode_tuple(ys, n)],
                                  op.table[encode_tuple(zs, n)]);
        if (lhs != op.table[encode_tuple(ms, n)])
          return false;
        std::size_t j = idx.size();
        while (j > 1) {
          --j;
          if (++idx[j] < d)
            break;
          idx[j] = 0;
          if (j == 1)
            return true;
        }
        if (idx.size() == 1)
          return true;
      }
    });
    if (!ok)
      return false;
  }
  return true;
}

void require_congruence(const FiniteAlgebra &alg, const Congruence &c) {
  if (c.size() != alg.size())
    throw DomainError("congruence on " + std::to_string(c.size()) + " elements used with an algebra of size " +
                      std::to_string(alg.size()));
  if (auto why = congruence_violation(alg, c))
    throw NotACongruence(*why);
}

} // namespace

void require_maltsev(const FiniteAlgebra &alg, const TermOp &p) {
  if (p.arity != 3 || p.table.size() != tuple_count(alg.size(), 3))
    throw NotMaltsev("expected a ternary term operation of '" + alg.name() + "'");
  if (!is_maltsev_term(alg, p))
    throw NotMaltsev("the supplied term is not a Maltsev operation of '" + alg.name() + "'");
}

TermOp project_term(const FiniteAlgebra &alg, const TermOp &p, const Congruence &theta) {
  const auto reps = theta.representatives();
  const int n = alg.size();
  const int qn = theta.block_count();
  TermOp out;
  out.arity = p.arity;
  out.witness = p.witness;
  out.depth = p.depth;
  out.table.resize(tuple_count(qn, p.arity));
  std::vector<Element> args(static_cast<std::size_t>(p.arity));
  for (std::size_t t = 0; t < out.table.size(); ++t) {
    decode_tuple(t, qn, args);
    for (auto &a : args)
      a = reps[static_cast<std::size_t>(a)];
    out.table[t] = theta.block_of(p.table[encode_tuple(args, n)]);
  }
  return out;
}

bool centralize(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s, const TermOp &p) {
  require_maltsev(alg, p);
  require_congruence(alg, r);
  require_congruence(alg, s);
  return centralize_unchecked(alg, r, s, p);
}

bool centralize(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                std::span<const TermOp> ps) {
  if (ps.empty())
    throw NotMaltsev("no Maltsev term supplied");
  const bool first = centralize(alg, r, s, ps[0]);
  for (std::size_t i = 1; i < ps.size(); ++i)
    if (centralize(alg, r, s, ps[i]) != first)
      throw InternalError("centrality depends on the choice of Maltsev term");
  return first;
}

Congruence commutator(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                      const TermOp &p) {
  require_maltsev(alg, p);
  require_congruence(alg, r);
  require_congruence(alg, s);
  const int n = alg.size();
  std::vector<Element> index(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  std::vector<std::pair<Element, Element>> pairs;
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (r.related(x, y)) {
        index[static_cast<std::size_t>(x * n + y)] = static_cast<Element>(pairs.size());
        pairs.emplace_back(x, y);
      }
  const int rn = static_cast<int>(pairs.size());

  std::vector<Operation> ops;
  for (const auto &op : alg.ops()) {
    Operation lifted{op.name, op.arity, std::vector<Element>(tuple_count(rn, op.arity))};
    std::vector<Element> args(static_cast<std::size_t>(op.arity)), left(args.size()), right(args.size());
    for (std::size_t t = 0; t < lifted.table.size(); ++t) {
      decode_tuple(t, rn, args);
      for (std::size_t j = 0; j < args.size(); ++j) {
        left[j] = pairs[static_cast<std::size_t>(args[j])].first;
        right[j] = pairs[static_cast<std::size_t>(args[j])].second;
      }
      const Element a = op.table[encode_tuple(left, n)];
      const Element b = op.table[encode_tuple(right, n)];
      lifted.table[t] = index[static_cast<std::size_t>(a * n + b)];
    }
    ops.push_back(std::move(lifted));
  }
  const FiniteAlgebra ralg(alg.name() + ".R", rn, std::move(ops));

  std::vector<ElementPair> gens;
  for (Element y = 0; y < n; ++y)
    for (Element z = 0; z < n; ++z)
      if (y != z && s.related(y, z))
        gens.emplace_back(index[static_cast<std::size_t>(y * n + y)], index[static_cast<std::size_t>(z * n + z)]);
  const Congruence delta = cg(ralg, gens);

  std::vector<std::vector<bool>> rel(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      const Element a = index[static_cast<std::size_t>(x * n + y)];
      if (a < 0)
        continue;
      for (Element y2 = 0; y2 < n; ++y2) {
        const Element b = index[static_cast<std::size_t>(x * n + y2)];
        if (b >= 0 && delta.related(a, b))
          rel[static_cast<std::size_t>(y)][static_cast<std::size_t>(y2)] = true;
      }
    }
  std::vector<Element> labels(static_cast<std::size_t>(n));
  for (Element y = 0; y < n; ++y) {
    labels[static_cast<std::size_t>(y)] = y;
    for (Element w = 0; w < y; ++w)
      if (rel[static_cast<std::size_t>(y)][static_cast<std::size_t>(w)]) {
        labels[static_cast<std::size_t>(y)] = labels[static_cast<std::size_t>(w)];
        break;
      }
  }
  const Congruence result = Congruence::from_labels(labels);
  for (Element y = 0; y < n; ++y)
    for (Element w = 0; w < n; ++w)
      if (result.related(y, w) != rel[static_cast<std::size_t>(y)][static_cast<std::size_t>(w)])
        throw InternalError("commutator relation is not an equivalence at (" + std::to_string(y) + "," +
                            std::to_string(w) + ")");
  if (auto why = congruence_violation(alg, result))
    throw InternalError("commutator relation is not a congruence: " + *why);
  return result;
}

CommutatorOracle::CommutatorOracle(const FiniteAlgebra &alg, const TermOp &p, std::size_t budget)
    : alg_(alg), lattice_(all_congruences(alg, budget)) {
  require_maltsev(alg, p);
  levels_.reserve(lattice_.size());
  for (const auto &t : lattice_) {
    Level level{quotient(alg, t), project_term(alg, p, t), {}};
    levels_.push_back(std::move(level));
  }
}

Congruence CommutatorOracle::operator()(const Congruence &r, const Congruence &s) {
  require_congruence(alg_, r);
  require_congruence(alg_, s);
  Congruence result = Congruence::total(alg_.size());
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    auto &level = levels_[i];
    const auto rq = quotient_congruence(alg_, r, lattice_[i]);
    const auto sq = quotient_congruence(alg_, s, lattice_[i]);
    auto key = std::make_pair(rq, sq);
    auto it = level.memo.find(key);
    if (it == level.memo.end())
      it = level.memo.emplace(std::move(key), centralize_unchecked(level.q.algebra, rq, sq, level.p)).first;
    if (it->second)
      result = meet(result, lattice_[i]);
  }
  return result;
}

Congruence commutator_oracle(const FiniteAlgebra &alg, const Congruence &r, const Congruence &s,
                             const TermOp &p, std::size_t budget) {
  CommutatorOracle oracle(alg, p, budget);
  return oracle(r, s);
}

Congruence center(const FiniteAlgebra &alg, const TermOp &p) {
  require_maltsev(alg, p);
  const int n = alg.size();
  const auto all = Congruence::total(n);
  std::set<Congruence> principal;
  for (Element a = 0; a < n; ++a)
    for (Element b = a + 1; b < n; ++b)
      principal.insert(cg(alg, a, b));
  Congruence result = Congruence::diagonal(n);
  for (const auto &c : principal)
    if (!c.leq(result) && commutator(alg, all, c, p).is_diagonal())
      result = join(alg, result, c);
  if (!commutator(alg, all, result, p).is_diagonal())
    throw InternalError("join of central principal congruences is not central");
  for (const auto &c : principal)
    if (!c.leq(result) && commutator(alg, all, join(alg, result, c), p).is_diagonal())
      throw InternalError("center is not maximal: " + c.to_string() + " could be added");
  return result;
}

SeriesReport lower_series(const FiniteAlgebra &alg, const TermOp &p, int max_steps) {
  require_maltsev(alg, p);
  SeriesReport rep;
  rep.kind = SeriesReport::Kind::lower;
  const auto all = Congruence::total(alg.size());
  rep.terms.push_back(all);
  for (int step = 0;; ++step) {
    const auto &last = rep.terms.back();
    if (last.is_diagonal()) {
      rep.nilpotence_class = static_cast<int>(rep.terms.size()) - 1;
      rep.stabilized = true;
      break;
    }
    if (step >= max_steps)
      break;
    auto next = commutator(alg, all, last, p);
    if (next == last) {
      rep.stabilized = true;
      break;
    }
    rep.terms.push_back(std::move(next));
  }
  return rep;
}

SeriesReport upper_series(const FiniteAlgebra &alg, const TermOp &p, int max_steps) {
  require_maltsev(alg, p);
  SeriesReport rep;
  rep.kind = SeriesReport::Kind::upper;
  rep.terms.push_back(Congruence::diagonal(alg.size()));
  for (int step = 0;; ++step) {
    const auto &last = rep.terms.back();
    if (last.is_total()) {
      rep.nilpotence_class = static_cast<int>(rep.terms.size()) - 1;
      rep.stabilized = true;
      break;
    }
    if (step >= max_steps)
      break;
    const auto q = quotient(alg, last);
    const auto z = center(q.algebra, project_term(alg, p, last));
    auto next = pull_back(z, q.projection);
    if (next == last) {
      rep.stabilized = true;
      break;
    }
    rep.terms.push_back(std::move(next));
  }
  return rep;
}

bool is_abelian(const FiniteAlgebra &alg, const TermOp &p) {
  require_maltsev(alg, p);
  const int n = alg.size();
  if (n == 0)
    return true;
  const auto all = Congruence::total(n);
  const bool abelian = commutator(alg, all, all, p).is_diagonal();
  const auto m = TernaryTable::from_term(alg, p).restricted(TernaryDomain::mixed,
                                                            std::vector<Element>(static_cast<std::size_t>(n), 0));
  const bool herd = central_torsor_check(m, &alg).central;
  if (abelian != herd)
    throw InternalError(std::string("abelian test disagrees with the herd criterion: [∇,∇] ") +
                        (abelian ? "= Δ" : "≠ Δ") + " but p " + (herd ? "is" : "is not") +
                        " an associative Maltsev homomorphism");
  return abelian;
}

std::optional<int> nilpotence_class(const FiniteAlgebra &alg, const TermOp &p, int max_steps) {
  const auto lower = lower_series(alg, p, max_steps);
  const auto upper = upper_series(alg, p, max_steps);
  if (lower.stabilized && upper.stabilized && lower.nilpotence_class != upper.nilpotence_class)
    throw InternalError("lower and upper central series give different classes");
  return lower.nilpotence_class;
}

} // namespace mk
