#include "mk/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "mk/error.hpp"

namespace mk {

std::size_t tuple_count(int base, int arity) {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i)
    n *= static_cast<std::size_t>(base);
  return n;
}

std::size_t encode_tuple(std::span<const Element> args, int base) {
  std::size_t index = 0;
  for (Element a : args)
    index = index * static_cast<std::size_t>(base) + static_cast<std::size_t>(a);
  return index;
}

void decode_tuple(std::size_t index, int base, std::span<Element> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Element>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
}

FiniteAlgebra::FiniteAlgebra(std::string name, int size, std::vector<Operation> ops)
    : name_(std::move(name)), size_(size), ops_(std::move(ops)) {
  if (size_ < 0)
    throw InvalidAlgebra("negative carrier size");
  std::set<std::string> names;
  for (const auto &op : ops_) {
    if (op.arity < 0)
      throw InvalidAlgebra("operation '" + op.name + "' has negative arity");
    if (!names.insert(op.name).second)
      throw InvalidAlgebra("duplicate operation name '" + op.name + "'");
    // The empty algebra has no nullary operations; other arities are vacuous.
    const std::size_t expected = (size_ == 0 && op.arity > 0) ? 0 : tuple_count(size_, op.arity);
    if (size_ == 0 && op.arity == 0)
      throw InvalidAlgebra("nullary operation '" + op.name + "' on the empty algebra");
    if (op.table.size() != expected)
      throw InvalidAlgebra("operation '" + op.name + "' has table length " +
                           std::to_string(op.table.size()) + ", expected " +
                           std::to_string(expected));
    for (Element v : op.table)
      if (v < 0 || v >= size_)
        throw InvalidAlgebra("operation '" + op.name + "' has entry " + std::to_string(v) +
                             " outside the carrier");
  }
}

std::optional<std::size_t> FiniteAlgebra::find_op(std::string_view name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name)
      return i;
  return std::nullopt;
}

Element FiniteAlgebra::apply(std::size_t op_index, std::span<const Element> args) const {
  return ops_[op_index].table[encode_tuple(args, size_)];
}

bool FiniteAlgebra::same_signature(const FiniteAlgebra &other) const {
  if (ops_.size() != other.ops_.size())
    return false;
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name != other.ops_[i].name || ops_[i].arity != other.ops_[i].arity)
      return false;
  return true;
}

FiniteAlgebra product(std::span<const FiniteAlgebra> factors) {
  if (factors.empty())
    throw SignatureError("product of an empty family");
  for (const auto &f : factors)
    if (!f.same_signature(factors.front()))
      throw SignatureError("factor '" + f.name() + "' has a different signature from '" +
                           factors.front().name() + "'");
  int size = 1;
  std::string name;
  for (const auto &f : factors) {
    size *= f.size();
    name += (name.empty() ? "" : "x") + f.name();
  }
  const std::size_t k = factors.size();
  // Coordinates of every product element.
  std::vector<std::vector<Element>> coords(static_cast<std::size_t>(size), std::vector<Element>(k));
  for (int e = 0; e < size; ++e) {
    int rest = e;
    for (std::size_t i = k; i-- > 0;) {
      coords[static_cast<std::size_t>(e)][i] = rest % factors[i].size();
      rest /= factors[i].size();
    }
  }
  std::vector<Operation> ops;
  const auto &sig = factors.front().ops();
  for (std::size_t o = 0; o < sig.size(); ++o) {
    Operation op{sig[o].name, sig[o].arity, {}};
    const std::size_t n = tuple_count(size, op.arity);
    op.table.resize(n);
    std::vector<Element> args(static_cast<std::size_t>(op.arity));
    std::vector<Element> coord_args(static_cast<std::size_t>(op.arity));
    for (std::size_t t = 0; t < n; ++t) {
      decode_tuple(t, size, args);
      Element value = 0;
      for (std::size_t i = 0; i < k; ++i) {
        for (int j = 0; j < op.arity; ++j)
          coord_args[static_cast<std::size_t>(j)] =
              coords[static_cast<std::size_t>(args[static_cast<std::size_t>(j)])][i];
        value = value * factors[i].size() + factors[i].apply(o, coord_args);
      }
      op.table[t] = value;
    }
    ops.push_back(std::move(op));
  }
  return FiniteAlgebra(name, size, std::move(ops));
}

FiniteAlgebra power(const FiniteAlgebra &alg, int exponent) {
  std::vector<FiniteAlgebra> factors(static_cast<std::size_t>(exponent), alg);
  return product(factors);
}

std::vector<Element> subuniverse_generate(const FiniteAlgebra &alg,
                                          std::span<const Element> generators) {
  std::vector<char> in(static_cast<std::size_t>(alg.size()), 0);
  std::vector<Element> members;
  auto add = [&](Element x) {
    if (!in[static_cast<std::size_t>(x)]) {
      in[static_cast<std::size_t>(x)] = 1;
      members.push_back(x);
    }
  };
  for (Element g : generators) {
    if (g < 0 || g >= alg.size())
      throw DomainError("generator " + std::to_string(g) + " outside the carrier");
    add(g);
  }
  for (std::size_t o = 0; o < alg.op_count(); ++o)
    if (alg.op(o).arity == 0)
      add(alg.op(o).table[0]);

  // Semi-naive closure: each round only visits tuples touching a member
  // added in the previous round.
  std::size_t old_end = 0;
  while (old_end < members.size()) {
    const std::size_t end = members.size();
    for (std::size_t o = 0; o < alg.op_count(); ++o) {
      const int arity = alg.op(o).arity;
      if (arity == 0)
        continue;
      const std::size_t n = tuple_count(static_cast<int>(end), arity);
      std::vector<Element> idx(static_cast<std::size_t>(arity));
      std::vector<Element> args(static_cast<std::size_t>(arity));
      for (std::size_t t = 0; t < n; ++t) {
        decode_tuple(t, static_cast<int>(end), idx);
        if (static_cast<std::size_t>(*std::max_element(idx.begin(), idx.end())) < old_end)
          continue;
        for (int j = 0; j < arity; ++j)
          args[static_cast<std::size_t>(j)] = members[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        add(alg.apply(o, args));
      }
    }
    old_end = end;
  }
  std::sort(members.begin(), members.end());
  return members;
}

FiniteAlgebra subalgebra(const FiniteAlgebra &alg, std::span<const Element> elements,
                         std::string name) {
  std::vector<Element> position(static_cast<std::size_t>(alg.size()), -1);
  for (std::size_t i = 0; i < elements.size(); ++i)
    position[static_cast<std::size_t>(elements[i])] = static_cast<Element>(i);
  const int size = static_cast<int>(elements.size());
  std::vector<Operation> ops;
  for (const auto &op : alg.ops()) {
    Operation sub{op.name, op.arity, {}};
    const std::size_t n = size == 0 && op.arity > 0 ? 0 : tuple_count(size, op.arity);
    sub.table.resize(n);
    std::vector<Element> args(static_cast<std::size_t>(op.arity));
    for (std::size_t t = 0; t < n; ++t) {
      decode_tuple(t, size, args);
      for (auto &a : args)
        a = elements[static_cast<std::size_t>(a)];
      const Element v = position[static_cast<std::size_t>(op.table[encode_tuple(args, alg.size())])];
      if (v < 0)
        throw DomainError("subset is not closed under '" + op.name + "'");
      sub.table[t] = v;
    }
    ops.push_back(std::move(sub));
  }
  return FiniteAlgebra(name.empty() ? alg.name() + "_sub" : std::move(name), size, std::move(ops));
}

std::optional<std::string> congruence_violation(const FiniteAlgebra &alg, const Congruence &theta) {
  if (theta.size() != alg.size())
    return "partition has size " + std::to_string(theta.size()) + ", algebra has size " +
           std::to_string(alg.size());
  // Compatibility with all operations is equivalent to compatibility with all
  // basic translations: vary one argument within its block.
  for (const auto &op : alg.ops()) {
    if (op.arity == 0)
      continue;
    const std::size_t n = tuple_count(alg.size(), op.arity);
    std::vector<Element> args(static_cast<std::size_t>(op.arity));
    for (std::size_t t = 0; t < n; ++t) {
      decode_tuple(t, alg.size(), args);
      const Element base = op.table[t];
      for (int pos = 0; pos < op.arity; ++pos) {
        const Element keep = args[static_cast<std::size_t>(pos)];
        for (Element y = keep + 1; y < alg.size(); ++y) {
          if (!theta.related(keep, y))
            continue;
          args[static_cast<std::size_t>(pos)] = y;
          const Element other = op.table[encode_tuple(args, alg.size())];
          if (!theta.related(base, other)) {
            std::ostringstream w;
            w << "operation '" << op.name << "' maps related arguments (position " << pos << ": "
              << keep << " ~ " << y << ") to unrelated values " << base << ", " << other;
            return w.str();
          }
        }
        args[static_cast<std::size_t>(pos)] = keep;
      }
    }
  }
  return std::nullopt;
}

Quotient quotient(const FiniteAlgebra &alg, const Congruence &theta) {
  if (auto why = congruence_violation(alg, theta))
    throw NotACongruence(*why);
  const auto reps = theta.representatives();
  const int size = theta.block_count();
  std::vector<Operation> ops;
  for (const auto &op : alg.ops()) {
    Operation q{op.name, op.arity, {}};
    const std::size_t n = size == 0 && op.arity > 0 ? 0 : tuple_count(size, op.arity);
    q.table.resize(n);
    std::vector<Element> args(static_cast<std::size_t>(op.arity));
    for (std::size_t t = 0; t < n; ++t) {
      decode_tuple(t, size, args);
      for (auto &a : args)
        a = reps[static_cast<std::size_t>(a)];
      q.table[t] = theta.block_of(op.table[encode_tuple(args, alg.size())]);
    }
    ops.push_back(std::move(q));
  }
  Quotient out{FiniteAlgebra(alg.name() + "/~", size, std::move(ops)), {}};
  out.projection.assign(theta.block_index().begin(), theta.block_index().end());
  return out;
}

std::optional<std::string> homomorphism_violation(const FiniteAlgebra &source,
                                                  const FiniteAlgebra &target,
                                                  std::span<const Element> map) {
  if (map.size() != static_cast<std::size_t>(source.size()))
    return "map has length " + std::to_string(map.size()) + ", source has size " +
           std::to_string(source.size());
  for (Element v : map)
    if (v < 0 || v >= target.size())
      return "map value " + std::to_string(v) + " outside the target carrier";
  for (std::size_t o = 0; o < source.op_count(); ++o) {
    const auto &op = source.op(o);
    const auto t_index = target.find_op(op.name);
    if (!t_index || target.op(*t_index).arity != op.arity)
      return "target lacks operation '" + op.name + "/" + std::to_string(op.arity) + "'";
    const std::size_t n = tuple_count(source.size(), op.arity);
    std::vector<Element> args(static_cast<std::size_t>(op.arity));
    std::vector<Element> images(static_cast<std::size_t>(op.arity));
    for (std::size_t t = 0; t < n; ++t) {
      decode_tuple(t, source.size(), args);
      for (std::size_t j = 0; j < args.size(); ++j)
        images[j] = map[static_cast<std::size_t>(args[j])];
      const Element lhs = map[static_cast<std::size_t>(op.table[t])];
      const Element rhs = target.apply(*t_index, images);
      if (lhs != rhs) {
        std::ostringstream w;
        w << "h(" << op.name << "(";
        for (std::size_t j = 0; j < args.size(); ++j)
          w << (j ? "," : "") << args[j];
        w << ")) = " << lhs << " but " << op.name << "(h(...)) = " << rhs;
        return w.str();
      }
    }
  }
  return std::nullopt;
}

bool is_homomorphism(const FiniteAlgebra &source, const FiniteAlgebra &target,
                     std::span<const Element> map) {
  return !homomorphism_violation(source, target, map);
}

bool is_homomorphism(const Homomorphism &h) {
  return is_homomorphism(*h.source, *h.target, h.map);
}

// ---------------------------------------------------------------------------

TermPtr Term::variable(int index) {
  auto t = std::make_shared<Term>();
  t->var = index;
  return t;
}

TermPtr Term::apply(std::size_t op, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->args = std::move(args);
  return t;
}

std::string variable_name(int index, int arity) {
  if (arity <= 3) {
    static constexpr const char *names[] = {"x", "y", "z"};
    return names[index];
  }
  return "x" + std::to_string(index);
}

std::string term_to_string(const Term &term, const FiniteAlgebra &alg, int arity) {
  if (term.var >= 0)
    return variable_name(term.var, arity);
  std::string out = alg.op(term.op).name + "(";
  for (std::size_t i = 0; i < term.args.size(); ++i) {
    if (i)
      out += ",";
    out += term_to_string(*term.args[i], alg, arity);
  }
  return out + ")";
}

TermOp projection(const FiniteAlgebra &alg, int arity, int index) {
  TermOp p{arity, std::vector<Element>(tuple_count(alg.size(), arity)), Term::variable(index), 0};
  std::vector<Element> args(static_cast<std::size_t>(arity));
  for (std::size_t t = 0; t < p.table.size(); ++t) {
    decode_tuple(t, alg.size(), args);
    p.table[t] = args[static_cast<std::size_t>(index)];
  }
  return p;
}

namespace {

std::vector<Element> compose_tables(const FiniteAlgebra &alg, std::size_t op,
                                    std::span<const std::vector<Element> *const> inner,
                                    std::size_t points) {
  const auto &table = alg.op(op).table;
  std::vector<Element> out(points);
  const auto base = static_cast<std::size_t>(alg.size());
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t index = 0;
    for (const auto *t : inner)
      index = index * base + static_cast<std::size_t>((*t)[p]);
    out[p] = table[index];
  }
  return out;
}

int term_depth(const Term &t) {
  int d = 0;
  for (const auto &a : t.args)
    d = std::max(d, term_depth(*a) + 1);
  if (t.var < 0 && t.args.empty())
    d = 1;
  return d;
}

} // namespace

TermOp evaluate_term(const FiniteAlgebra &alg, const TermPtr &term, int arity) {
  if (term->var >= 0) {
    if (term->var >= arity)
      throw ArityError("variable index " + std::to_string(term->var) + " exceeds arity " +
                       std::to_string(arity));
    return projection(alg, arity, term->var);
  }
  if (term->op >= alg.op_count())
    throw SignatureError("term refers to an unknown operation");
  if (static_cast<int>(term->args.size()) != alg.op(term->op).arity)
    throw ArityError("operation '" + alg.op(term->op).name + "' applied to " +
                     std::to_string(term->args.size()) + " arguments");
  std::vector<TermOp> inner;
  for (const auto &a : term->args)
    inner.push_back(evaluate_term(alg, a, arity));
  std::vector<const std::vector<Element> *> tables;
  for (const auto &i : inner)
    tables.push_back(&i.table);
  const std::size_t points = tuple_count(alg.size(), arity);
  return TermOp{arity, compose_tables(alg, term->op, tables, points), term, term_depth(*term)};
}

namespace {

class TermParser {
public:
  TermParser(const FiniteAlgebra &alg, std::string_view text, int arity)
      : alg_(alg), text_(text), arity_(arity) {}

  TermPtr parse() {
    auto t = term();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return t;
  }

private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw DomainError("term parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string ident() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_' || text_[pos_] == '\'' ||
                                   text_[pos_] == '.'))
      ++pos_;
    if (start == pos_)
      fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<int> as_variable(const std::string &name) const {
    for (int i = 0; i < arity_; ++i)
      if (name == variable_name(i, arity_) || name == "x" + std::to_string(i))
        return i;
    return std::nullopt;
  }

  TermPtr term() {
    const std::string name = ident();
    if (auto op = alg_.find_op(name)) {
      std::vector<TermPtr> args;
      if (accept('(')) {
        if (!accept(')')) {
          do
            args.push_back(term());
          while (accept(','));
          if (!accept(')'))
            fail("expected ')'");
        }
      }
      if (static_cast<int>(args.size()) != alg_.op(*op).arity)
        fail("operation '" + name + "' expects " + std::to_string(alg_.op(*op).arity) +
             " arguments");
      return Term::apply(*op, std::move(args));
    }
    if (auto v = as_variable(name))
      return Term::variable(*v);
    fail("unknown operation or variable '" + name + "'");
  }

  const FiniteAlgebra &alg_;
  std::string_view text_;
  int arity_;
  std::size_t pos_ = 0;
};

struct TableHash {
  const std::vector<TermOp> *members;
  std::size_t operator()(std::size_t i) const {
    std::size_t h = 1469598103934665603ull;
    for (Element v : (*members)[i].table)
      h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

struct TableEq {
  const std::vector<TermOp> *members;
  bool operator()(std::size_t a, std::size_t b) const {
    return (*members)[a].table == (*members)[b].table;
  }
};

} // namespace

TermOp parse_term(const FiniteAlgebra &alg, std::string_view text, int arity) {
  return evaluate_term(alg, TermParser(alg, text, arity).parse(), arity);
}

bool generate_clone(const FiniteAlgebra &alg, int arity, std::size_t budget,
                    const std::function<bool(const TermOp &)> &visit) {
  std::vector<TermOp> members;
  // Slot members.size() is used as a probe for lookups of candidate tables.
  std::unordered_set<std::size_t, TableHash, TableEq> seen(64, TableHash{&members},
                                                           TableEq{&members});
  const std::size_t points = tuple_count(alg.size(), arity);

  // Returns true when the visitor asks to stop.
  auto offer = [&](TermOp candidate) -> bool {
    members.push_back(std::move(candidate));
    if (seen.count(members.size() - 1)) {
      members.pop_back();
      return false;
    }
    seen.insert(members.size() - 1);
    if (members.size() > budget)
      throw CloneBudgetExceeded("term clone of arity " + std::to_string(arity) + " exceeds " +
                                std::to_string(budget) + " members");
    return visit(members.back());
  };

  for (int i = 0; i < arity; ++i)
    if (offer(projection(alg, arity, i)))
      return true;

  std::size_t prev_begin = 0;
  for (int depth = 1;; ++depth) {
    const std::size_t level_begin = members.size();
    const std::size_t count = members.size();
    for (std::size_t o = 0; o < alg.op_count(); ++o) {
      const int k = alg.op(o).arity;
      if (k == 0) {
        if (depth != 1)
          continue;
        TermOp c{arity, std::vector<Element>(points, alg.op(o).table[0]), Term::apply(o, {}), 1};
        if (offer(std::move(c)))
          return true;
        continue;
      }
      if (count == 0)
        continue;
      const std::size_t n = tuple_count(static_cast<int>(count), k);
      std::vector<Element> idx(static_cast<std::size_t>(k));
      std::vector<const std::vector<Element> *> tables(static_cast<std::size_t>(k));
      for (std::size_t t = 0; t < n; ++t) {
        decode_tuple(t, static_cast<int>(count), idx);
        if (static_cast<std::size_t>(*std::max_element(idx.begin(), idx.end())) < prev_begin)
          continue;
        std::vector<TermPtr> args;
        args.reserve(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
          tables[j] = &members[static_cast<std::size_t>(idx[j])].table;
          args.push_back(members[static_cast<std::size_t>(idx[j])].witness);
        }
        auto table = compose_tables(alg, o, tables, points);
        if (offer(TermOp{arity, std::move(table), Term::apply(o, std::move(args)), depth}))
          return true;
      }
    }
    if (members.size() == level_begin)
      return false;
    prev_begin = level_begin;
  }
}

TermClone term_clone(const FiniteAlgebra &alg, int arity, std::size_t budget) {
  TermClone clone{arity, {}};
  generate_clone(alg, arity, budget, [&](const TermOp &op) {
    clone.members.push_back(op);
    return false;
  });
  return clone;
}

} // namespace mk
