#include "mk/spec_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace mk {

SpecError::SpecError(std::string code, std::string source, int line, int column, const std::string &message)
    : Error(std::move(code), source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      source_(std::move(source)), line_(line), column_(column), message_(message) {}

const char *to_string(EntityKind kind) {
  switch (kind) {
  case EntityKind::algebra: return "algebra";
  case EntityKind::cong: return "cong";
  case EntityKind::tern: return "tern";
  case EntityKind::ring: return "ring";
  case EntityKind::module: return "module";
  case EntityKind::form: return "form";
  case EntityKind::bimodule: return "bimodule";
  case EntityKind::dbimodule: return "dbimodule";
  case EntityKind::diagram: return "diagram";
  case EntityKind::monoid: return "monoid";
  case EntityKind::system: return "system";
  case EntityKind::linext: return "linext";
  }
  return "?";
}

bool SpecDocument::contains(const std::string &name) const {
  return std::any_of(order.begin(), order.end(), [&](const auto &e) { return e.second == name; });
}

EntityKind SpecDocument::kind(const std::string &name) const {
  for (const auto &[k, n] : order)
    if (n == name)
      return k;
  throw DomainError("no entity named '" + name + "'");
}

std::vector<std::string> SpecDocument::names(EntityKind kind) const {
  std::vector<std::string> out;
  for (const auto &[k, n] : order)
    if (k == kind)
      out.push_back(n);
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum Kind { ident, string, integer, punct, end } kind = end;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;
};

std::string describe(const Token &t) {
  switch (t.kind) {
  case Token::end: return "end of input";
  case Token::string: return "string \"" + t.text + "\"";
  default: return "'" + t.text + "'";
  }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::vector<Token> lex(std::string_view s, const std::string &source) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n')
        advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j]))
        ++j;
      t.kind = Token::ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      t.kind = Token::integer;
      t.text = std::string(s.substr(i, j - i));
      if (j - i > 10)
        throw SpecError("E_SYNTAX", source, line, col, "integer " + t.text + " out of range");
      t.value = std::stoll(t.text);
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '"' && s[j] != '\n')
        ++j;
      if (j >= s.size() || s[j] != '"')
        throw SpecError("E_SYNTAX", source, line, col, "unterminated string");
      t.kind = Token::string;
      t.text = std::string(s.substr(i + 1, j - i - 1));
      advance(j - i + 1);
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      t.kind = Token::punct;
      t.text = "->";
      advance(2);
    } else if (std::string_view("{}[]|()=/:,").find(c) != std::string_view::npos) {
      t.kind = Token::punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw SpecError("E_SYNTAX", source, line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token e;
  e.line = line;
  e.col = col;
  out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

struct IntList {
  std::vector<Element> values;
  Token at;
};

class Parser {
public:
  Parser(SpecDocument &doc, std::string_view text, std::string source)
      : doc_(doc), source_(std::move(source)), toks_(lex(text, source_)) {}

  void run() {
    while (peek().kind != Token::end)
      entity();
  }

private:
  // -- token helpers

  const Token &peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void error(const std::string &code, const Token &t, const std::string &msg) const {
    throw SpecError(code, source_, t.line, t.col, msg);
  }

  bool at_punct(std::string_view p) const { return peek().kind == Token::punct && peek().text == p; }
  bool at_word(std::string_view w) const { return peek().kind == Token::ident && peek().text == w; }

  bool accept(std::string_view p) {
    if (!at_punct(p))
      return false;
    ++pos_;
    return true;
  }

  Token expect(std::string_view p) {
    if (!at_punct(p))
      error("E_SYNTAX", peek(), "expected '" + std::string(p) + "', found " + describe(peek()));
    return take();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w))
      error("E_SYNTAX", peek(), "expected '" + std::string(w) + "', found " + describe(peek()));
    ++pos_;
  }

  Token name() {
    if (peek().kind != Token::ident && peek().kind != Token::string)
      error("E_SYNTAX", peek(), "expected a name, found " + describe(peek()));
    return take();
  }

  Element integer() {
    if (peek().kind != Token::integer)
      error("E_SYNTAX", peek(), "expected an integer, found " + describe(peek()));
    const Token t = take();
    return static_cast<Element>(t.value);
  }

  int count() {
    const Token t = peek();
    const Element v = integer();
    if (v < 0)
      error("E_INVARIANT", t, "size must be non-negative");
    return v;
  }

  IntList list() {
    accept("=");
    IntList out;
    out.at = expect("[");
    while (!accept("]")) {
      if (peek().kind != Token::integer)
        error("E_SYNTAX", peek(), "expected an integer or ']', found " + describe(peek()));
      out.values.push_back(static_cast<Element>(take().value));
      accept(",");
    }
    return out;
  }

  std::vector<std::string> string_list() {
    accept("=");
    expect("[");
    std::vector<std::string> out;
    while (!accept("]")) {
      if (peek().kind != Token::string && peek().kind != Token::ident && peek().kind != Token::integer)
        error("E_SYNTAX", peek(), "expected a label or ']', found " + describe(peek()));
      out.push_back(take().text);
      accept(",");
    }
    return out;
  }

  void length(const IntList &l, std::size_t expected, const std::string &what) const {
    if (l.values.size() != expected)
      error("E_TABLE_LEN", l.at,
            what + " has " + std::to_string(l.values.size()) + " entries, expected " + std::to_string(expected));
  }

  void in_range(const IntList &l, int bound, const std::string &what) const {
    for (std::size_t i = 0; i < l.values.size(); ++i)
      if (l.values[i] < 0 || l.values[i] >= bound)
        error("E_INVARIANT", l.at,
              what + " entry " + std::to_string(i) + " = " + std::to_string(l.values[i]) + " is not below " +
                  std::to_string(bound));
  }

  template <class F> auto guarded(const Token &at, F &&build) -> decltype(build()) {
    try {
      return build();
    } catch (const SpecError &) {
      throw;
    } catch (const Error &e) {
      error("E_INVARIANT", at, e.what());
    }
  }

  // -- references

  template <class Map> const typename Map::mapped_type &ref(const Map &map, EntityKind kind, const Token &t) const {
    auto it = map.find(t.text);
    if (it == map.end()) {
      if (doc_.contains(t.text))
        error("E_DANGLING", t, "'" + t.text + "' is a " + to_string(doc_.kind(t.text)) + ", expected a " + to_string(kind));
      error("E_DANGLING", t, "no " + std::string(to_string(kind)) + " named '" + t.text + "'");
    }
    return it->second;
  }

  void declare(EntityKind kind, const Token &name) {
    if (doc_.contains(name.text))
      error("E_INVARIANT", name, "name '" + name.text + "' is already declared");
    doc_.order.emplace_back(kind, name.text);
  }

  [[noreturn]] void unexpected(const char *where) {
    error("E_SYNTAX", peek(), "unexpected " + describe(peek()) + " in " + where);
  }

  void require_size(const std::optional<int> &size, const Token &at, const char *what) {
    if (!size)
      error("E_SYNTAX", at, std::string(what) + " needs 'size' before its tables");
  }

  void require(bool present, const Token &at, const std::string &what) {
    if (!present)
      error("E_SYNTAX", at, "missing " + what);
  }

  // -- entities

  void entity() {
    const Token kw = peek();
    if (kw.kind != Token::ident)
      error("E_SYNTAX", kw, "expected an entity keyword, found " + describe(kw));
    ++pos_;
    if (kw.text == "algebra") algebra();
    else if (kw.text == "cong") cong();
    else if (kw.text == "tern") tern();
    else if (kw.text == "ring") ring();
    else if (kw.text == "module") module();
    else if (kw.text == "form") form();
    else if (kw.text == "bimodule") bimodule();
    else if (kw.text == "dbimodule") dbimodule();
    else if (kw.text == "diagram") diagram();
    else if (kw.text == "monoid") monoid();
    else if (kw.text == "system") system();
    else if (kw.text == "linext") linext();
    else error("E_SYNTAX", kw, "unknown entity keyword '" + kw.text + "'");
  }

  void algebra() {
    const Token nm = name();
    expect("{");
    std::optional<int> size;
    std::vector<Operation> ops;
    std::vector<IntList> tables;
    while (!accept("}")) {
      if (at_word("size")) {
        ++pos_;
        accept("=");
        size = count();
      } else if (at_word("op")) {
        const Token op = take();
        require_size(size, op, "algebra");
        const Token on = name();
        expect("/");
        const Token at = peek();
        const int arity = count();
        if (arity > 8)
          error("E_INVARIANT", at, "arity " + std::to_string(arity) + " is above 8");
        IntList t = list();
        length(t, tuple_count(*size, arity), "table of " + on.text + "/" + std::to_string(arity));
        in_range(t, std::max(*size, 1), "table of " + on.text);
        if (std::any_of(ops.begin(), ops.end(), [&](const Operation &o) { return o.name == on.text; }))
          error("E_INVARIANT", on, "operation '" + on.text + "' declared twice");
        ops.push_back(Operation{on.text, arity, t.values});
      } else {
        unexpected("algebra");
      }
    }
    require(size.has_value(), nm, "'size' in algebra " + nm.text);
    declare(EntityKind::algebra, nm);
    doc_.algebras[nm.text] = guarded(nm, [&] { return FiniteAlgebra(nm.text, *size, std::move(ops)); });
  }

  void cong() {
    const Token nm = name();
    expect_word("on");
    const Token an = name();
    const FiniteAlgebra &alg = ref(doc_.algebras, EntityKind::algebra, an);
    expect("{");
    expect_word("blocks");
    const Token at = expect(":");
    std::vector<std::vector<Element>> blocks(1);
    std::vector<int> seen(static_cast<std::size_t>(alg.size()), 0);
    while (!accept("}")) {
      if (accept("|")) {
        blocks.emplace_back();
        continue;
      }
      const Token t = peek();
      const Element v = integer();
      if (v < 0 || v >= alg.size())
        error("E_INVARIANT", t, "element " + std::to_string(v) + " is not in " + an.text);
      if (seen[static_cast<std::size_t>(v)]++)
        error("E_INVARIANT", t, "element " + std::to_string(v) + " appears twice");
      blocks.back().push_back(v);
    }
    for (Element x = 0; x < alg.size(); ++x)
      if (!seen[static_cast<std::size_t>(x)])
        error("E_INVARIANT", at, "element " + std::to_string(x) + " is in no block");
    std::erase_if(blocks, [](const auto &b) { return b.empty(); });
    const Congruence theta = Congruence::from_blocks(alg.size(), blocks);
    if (auto v = congruence_violation(alg, theta))
      error("E_INVARIANT", nm, "not a congruence of " + an.text + ": " + *v);
    declare(EntityKind::cong, nm);
    doc_.congruences[nm.text] = NamedCongruence{an.text, theta};
  }

  void tern() {
    const Token nm = name();
    expect("{");
    std::optional<int> size;
    std::optional<IntList> base;
    TernaryDomain domain = TernaryDomain::full;
    std::vector<Element> table;
    bool have_table = false;
    while (!accept("}")) {
      if (at_word("size")) {
        ++pos_;
        accept("=");
        size = count();
        table.assign(tuple_count(*size, 3), -1);
      } else if (at_word("over")) {
        const Token o = take();
        require_size(size, o, "tern");
        base = list();
        length(*base, static_cast<std::size_t>(*size), "base map");
        in_range(*base, std::max(*size, 1), "base map");
        domain = TernaryDomain::mixed;
        if (at_word("mixed")) {
          ++pos_;
        } else if (at_word("fibered")) {
          ++pos_;
          domain = TernaryDomain::fibered;
        }
      } else if (at_word("table")) {
        const Token t = take();
        require_size(size, t, "tern");
        expect(":");
        have_table = true;
        while (peek().kind == Token::integer || at_punct("(")) {
          const bool paren = accept("(");
          Element xyz[3];
          const Token first = peek();
          for (Element &e : xyz) {
            const Token et = peek();
            e = integer();
            if (e < 0 || e >= *size)
              error("E_INVARIANT", et, "argument " + std::to_string(e) + " is not below " + std::to_string(*size));
          }
          expect("->");
          const Token vt = peek();
          const Element v = integer();
          if (v < 0 || v >= *size)
            error("E_INVARIANT", vt, "value " + std::to_string(v) + " is not below " + std::to_string(*size));
          if (paren)
            expect(")");
          Element &slot = table[encode_tuple(std::span<const Element>(xyz, 3), *size)];
          if (slot != -1 && slot != v)
            error("E_INVARIANT", first, "entry given twice with different values");
          slot = v;
        }
      } else {
        unexpected("tern");
      }
    }
    require(size.has_value(), nm, "'size' in tern " + nm.text);
    require(have_table, nm, "'table:' in tern " + nm.text);
    std::vector<Element> bm = base ? base->values : std::vector<Element>{};
    TernaryTable tt = guarded(nm, [&] { return TernaryTable(nm.text, *size, table, domain, bm); });
    for (Element x = 0; x < *size; ++x)
      for (Element y = 0; y < *size; ++y)
        for (Element z = 0; z < *size; ++z)
          if (tt.in_domain(x, y, z) && tt.table()[encode_tuple(std::array<Element, 3>{x, y, z}, *size)] == -1)
            error("E_TABLE_LEN", nm,
                  "tern " + nm.text + " has no entry for (" + std::to_string(x) + " " + std::to_string(y) + " " +
                      std::to_string(z) + ")");
    declare(EntityKind::tern, nm);
    doc_.terns[nm.text] = std::move(tt);
  }

  void ring() {
    const Token nm = name();
    expect("{");
    std::optional<int> size;
    std::optional<IntList> add, mul;
    while (!accept("}")) {
      if (at_word("size")) {
        ++pos_;
        accept("=");
        size = count();
      } else if (at_word("add") || at_word("mul")) {
        const Token k = take();
        require_size(size, k, "ring");
        IntList l = list();
        length(l, tuple_count(*size, 2), k.text + " table");
        (k.text == "add" ? add : mul) = std::move(l);
      } else {
        unexpected("ring");
      }
    }
    require(size && add && mul, nm, "size, add or mul in ring " + nm.text);
    if (auto v = FiniteRing::violation(*size, add->values, mul->values))
      error("E_INVARIANT", nm, "ring " + nm.text + " violates " + v->to_string());
    declare(EntityKind::ring, nm);
    doc_.rings[nm.text] = guarded(nm, [&] { return FiniteRing(nm.text, *size, add->values, mul->values); });
  }

  void module() {
    const Token nm = name();
    expect_word("over");
    const Token rn = name();
    const FiniteRing &r = ref(doc_.rings, EntityKind::ring, rn);
    expect("{");
    std::optional<int> size;
    std::optional<IntList> add, act;
    while (!accept("}")) {
      if (at_word("size")) {
        ++pos_;
        accept("=");
        size = count();
      } else if (at_word("add")) {
        const Token k = take();
        require_size(size, k, "module");
        add = list();
        length(*add, tuple_count(*size, 2), "add table");
      } else if (at_word("act")) {
        const Token k = take();
        require_size(size, k, "module");
        act = list();
        length(*act, static_cast<std::size_t>(r.size()) * static_cast<std::size_t>(*size), "act table");
      } else {
        unexpected("module");
      }
    }
    require(size && add && act, nm, "size, add or act in module " + nm.text);
    if (auto v = LeftModule::violation(r, *size, add->values, act->values))
      error("E_INVARIANT", act->at, "module " + nm.text + " violates " + v->to_string());
    declare(EntityKind::module, nm);
    doc_.modules[nm.text] = {rn.text, guarded(nm, [&] { return LeftModule(nm.text, r, *size, add->values, act->values); })};
  }

  void form() {
    const Token nm = name();
    expect_word("on");
    const Token mn = name();
    const LeftModule &m = ref(doc_.modules, EntityKind::module, mn).second;
    expect("{");
    std::optional<IntList> d;
    while (!accept("}")) {
      if (at_word("d")) {
        ++pos_;
        d = list();
        length(*d, static_cast<std::size_t>(m.size()), "d");
      } else {
        unexpected("form");
      }
    }
    require(d.has_value(), nm, "d in form " + nm.text);
    if (auto v = LinearForm::violation(m, d->values))
      error("E_INVARIANT", d->at, "form " + nm.text + " violates " + v->to_string());
    declare(EntityKind::form, nm);
    doc_.forms[nm.text] = {mn.text, guarded(nm, [&] { return LinearForm(nm.text, m, d->values); })};
  }

  void bimodule() {
    const Token nm = name();
    expect_word("over");
    const Token rn = name();
    const FiniteRing &r = ref(doc_.rings, EntityKind::ring, rn);
    expect("{");
    std::optional<int> size;
    std::optional<IntList> add, left, right;
    const auto rs = static_cast<std::size_t>(r.size());
    while (!accept("}")) {
      if (at_word("size")) {
        ++pos_;
        accept("=");
        size = count();
      } else if (at_word("add") || at_word("left") || at_word("right")) {
        const Token k = take();
        require_size(size, k, "bimodule");
        IntList l = list();
        const auto n = static_cast<std::size_t>(*size);
        length(l, k.text == "add" ? n * n : rs * n, k.text + " table");
        (k.text == "add" ? add : k.text == "left" ? left : right) = std::move(l);
      } else {
        unexpected("bimodule");
      }
    }
    require(size && add && left && right, nm, "size, add, left or right in bimodule " + nm.text);
    if (auto v = Bimodule::violation(r, *size, add->values, left->values, right->values))
      error("E_INVARIANT", nm, "bimodule " + nm.text + " violates " + v->to_string());
    declare(EntityKind::bimodule, nm);
    doc_.bimodules[nm.text] = {
        rn.text, guarded(nm, [&] { return Bimodule(nm.text, r, *size, add->values, left->values, right->values); })};
  }

  void dbimodule() {
    const Token nm = name();
    expect_word("for");
    const Token fn = name();
    const LinearForm &f = ref(doc_.forms, EntityKind::form, fn).second;
    expect("{");
    std::optional<Token> bn, kn;
    std::optional<IntList> delta, dot;
    while (!accept("}")) {
      if (at_word("b") || at_word("k")) {
        const Token k = take();
        accept("=");
        (k.text == "b" ? bn : kn) = name();
      } else if (at_word("delta") || at_word("dot")) {
        const Token k = take();
        require(bn && kn, k, "'b' and 'k' before " + k.text);
        IntList l = list();
        (k.text == "delta" ? delta : dot) = std::move(l);
      } else {
        unexpected("dbimodule");
      }
    }
    require(bn && kn && delta && dot, nm, "b, k, delta or dot in dbimodule " + nm.text);
    const Bimodule &b = ref(doc_.bimodules, EntityKind::bimodule, *bn).second;
    const LeftModule &k = ref(doc_.modules, EntityKind::module, *kn).second;
    length(*delta, static_cast<std::size_t>(k.size()), "delta");
    length(*dot, static_cast<std::size_t>(b.size()) * static_cast<std::size_t>(f.module().size()), "dot");
    if (auto v = DBimodule::violation(f, b, k, delta->values, dot->values))
      error("E_INVARIANT", nm, "dbimodule " + nm.text + " violates " + v->to_string());
    declare(EntityKind::dbimodule, nm);
    doc_.dbimodules[nm.text] = NamedDBimodule{
        fn.text, bn->text, kn->text,
        guarded(nm, [&] { return DBimodule(nm.text, f, b, k, delta->values, dot->values); })};
  }

  void diagram() {
    const Token nm = name();
    expect("{");
    std::optional<Token> tn, bn;
    std::optional<IntList> p, q;
    while (!accept("}")) {
      if (at_word("total") || at_word("base")) {
        const Token k = take();
        accept("=");
        (k.text == "total" ? tn : bn) = name();
      } else if (at_word("p") || at_word("q")) {
        const Token k = take();
        (k.text == "p" ? p : q) = list();
      } else {
        unexpected("diagram");
      }
    }
    require(tn && bn && p && q, nm, "total, base, p or q in diagram " + nm.text);
    const LinearForm &total = ref(doc_.forms, EntityKind::form, *tn).second;
    const LinearForm &base = ref(doc_.forms, EntityKind::form, *bn).second;
    length(*p, static_cast<std::size_t>(total.ring().size()), "p");
    length(*q, static_cast<std::size_t>(total.module().size()), "q");
    in_range(*p, base.ring().size(), "p");
    in_range(*q, base.module().size(), "q");
    FormExtension ext{total, base, p->values, q->values};
    guarded(nm, [&] {
      validate_diagram(ext);
      return 0;
    });
    declare(EntityKind::diagram, nm);
    doc_.diagrams[nm.text] = NamedDiagram{tn->text, bn->text, std::move(ext)};
  }

  void monoid() {
    const Token nm = name();
    expect("{");
    std::optional<int> size;
    std::optional<Element> unit;
    std::optional<IntList> mul;
    Token unit_at;
    while (!accept("}")) {
      if (at_word("size")) {
        ++pos_;
        accept("=");
        size = count();
      } else if (at_word("unit")) {
        ++pos_;
        accept("=");
        unit_at = peek();
        unit = integer();
      } else if (at_word("mul")) {
        const Token k = take();
        require_size(size, k, "monoid");
        mul = list();
        length(*mul, tuple_count(*size, 2), "mul table");
      } else {
        unexpected("monoid");
      }
    }
    require(size && unit && mul, nm, "size, unit or mul in monoid " + nm.text);
    if (auto v = FiniteMonoid::violation(*size, *unit, mul->values))
      error("E_INVARIANT", mul->at, "monoid " + nm.text + " violates " + v->to_string());
    declare(EntityKind::monoid, nm);
    doc_.monoids[nm.text] = guarded(nm, [&] { return FiniteMonoid(nm.text, *size, *unit, mul->values); });
  }

  void system() {
    const Token nm = name();
    expect_word("on");
    const Token mn = name();
    const FiniteMonoid &M = ref(doc_.monoids, EntityKind::monoid, mn);
    const auto n = static_cast<std::size_t>(M.size());
    expect("{");
    std::vector<std::optional<AbelianGroup>> groups(n);
    std::vector<std::optional<std::vector<Element>>> left(n * n), right(n * n);
    const auto element = [&]() {
      const Token t = peek();
      const Element x = integer();
      if (x < 0 || x >= M.size())
        error("E_INVARIANT", t, "element " + std::to_string(x) + " is not in " + mn.text);
      return x;
    };
    const auto group = [&](Element x) -> const AbelianGroup & {
      if (!groups[static_cast<std::size_t>(x)])
        error("E_SYNTAX", peek(), "group " + std::to_string(x) + " must be declared before maps that use it");
      return *groups[static_cast<std::size_t>(x)];
    };
    while (!accept("}")) {
      if (at_word("group")) {
        ++pos_;
        const Element x = element();
        expect_word("size");
        accept("=");
        const int size = count();
        expect_word("add");
        IntList add = list();
        length(add, tuple_count(size, 2), "add table of D_" + std::to_string(x));
        if (auto v = AbelianGroup::violation(size, add.values))
          error("E_INVARIANT", add.at, "D_" + std::to_string(x) + " violates " + v->to_string());
        if (groups[static_cast<std::size_t>(x)])
          error("E_INVARIANT", add.at, "D_" + std::to_string(x) + " declared twice");
        groups[static_cast<std::size_t>(x)] = AbelianGroup(size, add.values);
      } else if (at_word("left") || at_word("right")) {
        const Token k = take();
        const Element x = element();
        const Element y = element();
        const bool is_left = k.text == "left";
        const AbelianGroup &src = group(is_left ? y : x);
        const AbelianGroup &dst = group(M.times(x, y));
        IntList l = list();
        length(l, static_cast<std::size_t>(src.size()), k.text + " map " + std::to_string(x) + " " + std::to_string(y));
        in_range(l, dst.size(), k.text + " map");
        auto &slot = (is_left ? left : right)[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(y)];
        if (slot)
          error("E_INVARIANT", l.at, k.text + " map " + std::to_string(x) + " " + std::to_string(y) + " declared twice");
        slot = l.values;
      } else {
        unexpected("system");
      }
    }
    std::vector<AbelianGroup> gs;
    for (std::size_t x = 0; x < n; ++x) {
      if (!groups[x])
        error("E_TABLE_LEN", nm, "system " + nm.text + " has no group for element " + std::to_string(x));
      gs.push_back(*groups[x]);
    }
    std::vector<std::vector<Element>> ls, rs;
    for (std::size_t i = 0; i < n * n; ++i) {
      if (!left[i] || !right[i])
        error("E_TABLE_LEN", nm,
              "system " + nm.text + " has no " + (left[i] ? "right" : "left") + " map for " + std::to_string(i / n) +
                  " " + std::to_string(i % n));
      ls.push_back(*left[i]);
      rs.push_back(*right[i]);
    }
    if (auto v = NaturalSystem::violation(M, gs, ls, rs))
      error("E_INVARIANT", nm, "system " + nm.text + " violates " + v->to_string());
    declare(EntityKind::system, nm);
    doc_.systems[nm.text] = NamedSystem{mn.text, NaturalSystem(M, gs, ls, rs)};
  }

  void linext() {
    const Token nm = name();
    expect("{");
    std::optional<Token> tn, bn, sn;
    std::optional<IntList> proj, act;
    std::vector<std::string> labels;
    Token labels_at;
    while (!accept("}")) {
      if (at_word("total") || at_word("base") || at_word("system")) {
        const Token k = take();
        accept("=");
        (k.text == "total" ? tn : k.text == "base" ? bn : sn) = name();
      } else if (at_word("proj") || at_word("act")) {
        const Token k = take();
        (k.text == "proj" ? proj : act) = list();
      } else if (at_word("labels")) {
        labels_at = take();
        labels = string_list();
      } else {
        unexpected("linext");
      }
    }
    require(tn && bn && sn && proj && act, nm, "total, base, system, proj or act in linext " + nm.text);
    MonoidExtension ext;
    ext.total = ref(doc_.monoids, EntityKind::monoid, *tn);
    ext.base = ref(doc_.monoids, EntityKind::monoid, *bn);
    const NamedSystem &sys = ref(doc_.systems, EntityKind::system, *sn);
    if (sys.monoid != bn->text)
      error("E_INVARIANT", *sn, "system " + sn->text + " is on " + sys.monoid + ", not on " + bn->text);
    ext.system = sys.value;
    const int size = ext.total.size();
    length(*proj, static_cast<std::size_t>(size), "proj");
    in_range(*proj, ext.base.size(), "proj");
    ext.proj = proj->values;
    std::size_t expected = 0;
    for (Element p : ext.proj)
      expected += static_cast<std::size_t>(ext.system.group(p).size());
    length(*act, expected, "act");
    in_range(*act, size, "act");
    std::size_t at = 0;
    for (Element p : ext.proj) {
      const auto len = static_cast<std::size_t>(ext.system.group(p).size());
      ext.act.emplace_back(act->values.begin() + static_cast<std::ptrdiff_t>(at),
                           act->values.begin() + static_cast<std::ptrdiff_t>(at + len));
      at += len;
    }
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(size))
      error("E_TABLE_LEN", labels_at,
            "labels has " + std::to_string(labels.size()) + " entries, expected " + std::to_string(size));
    ext.labels = labels;
    if (auto v = linear_extension_violation(ext))
      error("E_INVARIANT", nm, "linext " + nm.text + " violates " + v->to_string());
    declare(EntityKind::linext, nm);
    doc_.linexts[nm.text] = NamedLinext{tn->text, bn->text, sn->text, std::move(ext)};
  }

  SpecDocument &doc_;
  std::string source_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Serializer

std::string quoted(const std::string &name) {
  const bool plain = !name.empty() && ident_start(name[0]) && std::all_of(name.begin(), name.end(), ident_char);
  return plain ? name : "\"" + name + "\"";
}

template <class T> std::string list_text(const T &values) {
  std::string out = "[";
  bool first = true;
  for (auto v : values) {
    if (!first)
      out += ' ';
    first = false;
    out += std::to_string(v);
  }
  return out + "]";
}

} // namespace

void parse_into(SpecDocument &doc, std::string_view text, const std::string &source) {
  SpecDocument work = doc;
  Parser(work, text, source).run();
  doc = std::move(work);
}

SpecDocument parse(std::string_view text, const std::string &source) {
  SpecDocument doc;
  parse_into(doc, text, source);
  return doc;
}

void load_file(SpecDocument &doc, const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DomainError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_into(doc, buf.str(), path);
}

std::string serialize(const SpecDocument &doc) {
  std::ostringstream out;
  bool first = true;
  for (const auto &[kind, name] : doc.order) {
    if (!first)
      out << "\n";
    first = false;
    const std::string nm = quoted(name);
    switch (kind) {
    case EntityKind::algebra: {
      const auto &a = doc.algebras.at(name);
      out << "algebra " << nm << " {\n  size " << a.size() << "\n";
      for (const auto &op : a.ops())
        out << "  op " << quoted(op.name) << "/" << op.arity << " = " << list_text(op.table) << "\n";
      out << "}\n";
      break;
    }
    case EntityKind::cong: {
      const auto &c = doc.congruences.at(name);
      out << "cong " << nm << " on " << quoted(c.algebra) << " { blocks:";
      bool fb = true;
      for (const auto &b : c.theta.blocks()) {
        if (!fb)
          out << " |";
        fb = false;
        for (Element x : b)
          out << " " << x;
      }
      out << " }\n";
      break;
    }
    case EntityKind::tern: {
      const auto &t = doc.terns.at(name);
      out << "tern " << nm << " {\n  size " << t.size() << "\n";
      if (t.domain() != TernaryDomain::full)
        out << "  over " << list_text(t.base_map()) << " " << to_string(t.domain()) << "\n";
      out << "  table:\n";
      const int n = t.size();
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          for (Element z = 0; z < n; ++z)
            if (t.in_domain(x, y, z))
              out << "    " << x << " " << y << " " << z << " -> " << t(x, y, z) << "\n";
      out << "}\n";
      break;
    }
    case EntityKind::ring: {
      const auto &r = doc.rings.at(name);
      out << "ring " << nm << " {\n  size " << r.size() << "\n  add = " << list_text(r.add_table())
          << "\n  mul = " << list_text(r.mul_table()) << "\n}\n";
      break;
    }
    case EntityKind::module: {
      const auto &[rn, m] = doc.modules.at(name);
      out << "module " << nm << " over " << quoted(rn) << " {\n  size " << m.size() << "\n  add = "
          << list_text(m.add_table()) << "\n  act = " << list_text(m.act_table()) << "\n}\n";
      break;
    }
    case EntityKind::form: {
      const auto &[mn, f] = doc.forms.at(name);
      out << "form " << nm << " on " << quoted(mn) << " { d = " << list_text(f.d_table()) << " }\n";
      break;
    }
    case EntityKind::bimodule: {
      const auto &[rn, b] = doc.bimodules.at(name);
      out << "bimodule " << nm << " over " << quoted(rn) << " {\n  size " << b.size() << "\n  add = "
          << list_text(b.add_table()) << "\n  left = " << list_text(b.left_table()) << "\n  right = "
          << list_text(b.right_table()) << "\n}\n";
      break;
    }
    case EntityKind::dbimodule: {
      const auto &d = doc.dbimodules.at(name);
      out << "dbimodule " << nm << " for " << quoted(d.form) << " {\n  b = " << quoted(d.b) << "\n  k = "
          << quoted(d.k) << "\n  delta = " << list_text(d.value.delta_table()) << "\n  dot = "
          << list_text(d.value.dot_table()) << "\n}\n";
      break;
    }
    case EntityKind::diagram: {
      const auto &d = doc.diagrams.at(name);
      out << "diagram " << nm << " {\n  total = " << quoted(d.total) << "\n  base = " << quoted(d.base)
          << "\n  p = " << list_text(d.value.p) << "\n  q = " << list_text(d.value.q) << "\n}\n";
      break;
    }
    case EntityKind::monoid: {
      const auto &m = doc.monoids.at(name);
      out << "monoid " << nm << " {\n  size " << m.size() << "\n  unit " << m.unit() << "\n  mul = "
          << list_text(m.mul_table()) << "\n}\n";
      break;
    }
    case EntityKind::system: {
      const auto &s = doc.systems.at(name);
      const auto &D = s.value;
      const int n = D.base().size();
      out << "system " << nm << " on " << quoted(s.monoid) << " {\n";
      for (Element x = 0; x < n; ++x)
        out << "  group " << x << " size " << D.group(x).size() << " add = " << list_text(D.group(x).add_table())
            << "\n";
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          out << "  left " << x << " " << y << " = "
              << list_text(D.left_maps()[static_cast<std::size_t>(x * n + y)]) << "\n";
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          out << "  right " << x << " " << y << " = "
              << list_text(D.right_maps()[static_cast<std::size_t>(x * n + y)]) << "\n";
      out << "}\n";
      break;
    }
    case EntityKind::linext: {
      const auto &l = doc.linexts.at(name);
      std::vector<Element> flat;
      for (const auto &row : l.value.act)
        flat.insert(flat.end(), row.begin(), row.end());
      out << "linext " << nm << " {\n  total = " << quoted(l.total) << "\n  base = " << quoted(l.base)
          << "\n  system = " << quoted(l.system) << "\n  proj = " << list_text(l.value.proj)
          << "\n  act = " << list_text(flat) << "\n";
      if (!l.value.labels.empty()) {
        out << "  labels = [";
        for (std::size_t i = 0; i < l.value.labels.size(); ++i)
          out << (i ? " " : "") << "\"" << l.value.labels[i] << "\"";
        out << "]\n";
      }
      out << "}\n";
      break;
    }
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Builders

namespace {

bool same_ring(const FiniteRing &a, const FiniteRing &b) {
  return a.size() == b.size() && std::ranges::equal(a.add_table(), b.add_table()) &&
         std::ranges::equal(a.mul_table(), b.mul_table());
}

bool same_module(const LeftModule &a, const LeftModule &b) {
  return same_ring(a.ring(), b.ring()) && a.size() == b.size() && std::ranges::equal(a.add_table(), b.add_table()) &&
         std::ranges::equal(a.act_table(), b.act_table());
}

bool same_bimodule(const Bimodule &a, const Bimodule &b) {
  return same_ring(a.ring(), b.ring()) && a.size() == b.size() && std::ranges::equal(a.add_table(), b.add_table()) &&
         std::ranges::equal(a.left_table(), b.left_table()) && std::ranges::equal(a.right_table(), b.right_table());
}

bool same_form(const LinearForm &a, const LinearForm &b) {
  return same_module(a.module(), b.module()) && std::ranges::equal(a.d_table(), b.d_table());
}

std::string fresh(const SpecDocument &doc, const std::string &base) {
  if (!doc.contains(base))
    return base;
  for (int i = 2;; ++i) {
    const std::string cand = base + "." + std::to_string(i);
    if (!doc.contains(cand))
      return cand;
  }
}

// Existing name of an equal entity of the same kind, if any.
template <class Map, class Same>
std::optional<std::string> find_same(const Map &map, const Same &same) {
  for (const auto &[name, value] : map)
    if (same(value))
      return name;
  return std::nullopt;
}

std::string add_ring(SpecDocument &doc, const FiniteRing &r) {
  if (auto n = find_same(doc.rings, [&](const FiniteRing &o) { return same_ring(o, r); }))
    return *n;
  const std::string name = fresh(doc, r.name());
  doc.order.emplace_back(EntityKind::ring, name);
  doc.rings[name] = FiniteRing(name, r.size(), std::vector<Element>(r.add_table().begin(), r.add_table().end()),
                               std::vector<Element>(r.mul_table().begin(), r.mul_table().end()));
  return name;
}

std::string add_module(SpecDocument &doc, const LeftModule &m) {
  if (auto n = find_same(doc.modules, [&](const auto &o) { return same_module(o.second, m); }))
    return *n;
  const std::string rn = add_ring(doc, m.ring());
  const std::string name = fresh(doc, m.name());
  doc.order.emplace_back(EntityKind::module, name);
  doc.modules[name] = {rn, LeftModule(name, doc.rings.at(rn), m.size(),
                                      std::vector<Element>(m.add_table().begin(), m.add_table().end()),
                                      std::vector<Element>(m.act_table().begin(), m.act_table().end()))};
  return name;
}

std::string add_bimodule(SpecDocument &doc, const Bimodule &b) {
  if (auto n = find_same(doc.bimodules, [&](const auto &o) { return same_bimodule(o.second, b); }))
    return *n;
  const std::string rn = add_ring(doc, b.ring());
  const std::string name = fresh(doc, b.name());
  doc.order.emplace_back(EntityKind::bimodule, name);
  doc.bimodules[name] = {rn, Bimodule(name, doc.rings.at(rn), b.size(),
                                      std::vector<Element>(b.add_table().begin(), b.add_table().end()),
                                      std::vector<Element>(b.left_table().begin(), b.left_table().end()),
                                      std::vector<Element>(b.right_table().begin(), b.right_table().end()))};
  return name;
}

std::string add_form_named(SpecDocument &doc, const LinearForm &f) {
  if (auto n = find_same(doc.forms, [&](const auto &o) { return same_form(o.second, f); }))
    return *n;
  const std::string mn = add_module(doc, f.module());
  const std::string name = fresh(doc, f.name());
  doc.order.emplace_back(EntityKind::form, name);
  doc.forms[name] = {mn, LinearForm(name, doc.modules.at(mn).second,
                                    std::vector<Element>(f.d_table().begin(), f.d_table().end()))};
  return name;
}

std::string add_monoid(SpecDocument &doc, const FiniteMonoid &m) {
  if (auto n = find_same(doc.monoids, [&](const FiniteMonoid &o) {
        return o.size() == m.size() && o.unit() == m.unit() && std::ranges::equal(o.mul_table(), m.mul_table());
      }))
    return *n;
  const std::string name = fresh(doc, m.name());
  doc.order.emplace_back(EntityKind::monoid, name);
  doc.monoids[name] = FiniteMonoid(name, m.size(), m.unit(),
                                   std::vector<Element>(m.mul_table().begin(), m.mul_table().end()));
  return name;
}

} // namespace

void add_algebra(SpecDocument &doc, const FiniteAlgebra &alg) {
  const std::string name = fresh(doc, alg.name());
  doc.order.emplace_back(EntityKind::algebra, name);
  doc.algebras[name] = FiniteAlgebra(name, alg.size(), std::vector<Operation>(alg.ops().begin(), alg.ops().end()));
}

void add_form(SpecDocument &doc, const LinearForm &form) { add_form_named(doc, form); }

void add_dbimodule(SpecDocument &doc, const DBimodule &bim) {
  const std::string fn = add_form_named(doc, bim.form());
  const std::string bn = add_bimodule(doc, bim.b());
  const std::string kn = add_module(doc, bim.k());
  const std::string name = fresh(doc, bim.name());
  doc.order.emplace_back(EntityKind::dbimodule, name);
  doc.dbimodules[name] = NamedDBimodule{
      fn, bn, kn,
      DBimodule(name, doc.forms.at(fn).second, doc.bimodules.at(bn).second, doc.modules.at(kn).second,
                std::vector<Element>(bim.delta_table().begin(), bim.delta_table().end()),
                std::vector<Element>(bim.dot_table().begin(), bim.dot_table().end()))};
}

void add_diagram(SpecDocument &doc, const std::string &name, const FormExtension &ext) {
  const std::string tn = add_form_named(doc, ext.total);
  const std::string bn = add_form_named(doc, ext.base);
  const std::string nm = fresh(doc, name);
  doc.order.emplace_back(EntityKind::diagram, nm);
  doc.diagrams[nm] = NamedDiagram{tn, bn, FormExtension{doc.forms.at(tn).second, doc.forms.at(bn).second, ext.p, ext.q}};
}

void add_tern(SpecDocument &doc, const TernaryTable &table) {
  const std::string name = fresh(doc, table.name());
  doc.order.emplace_back(EntityKind::tern, name);
  doc.terns[name] = TernaryTable(name, table.size(), std::vector<Element>(table.table().begin(), table.table().end()),
                                 table.domain(), std::vector<Element>(table.base_map().begin(), table.base_map().end()));
}

void add_linext(SpecDocument &doc, const std::string &name, const MonoidExtension &ext) {
  const std::string tn = add_monoid(doc, ext.total);
  const std::string bn = add_monoid(doc, ext.base);
  const std::string sn = fresh(doc, name + ".D");
  doc.order.emplace_back(EntityKind::system, sn);
  const auto &D = ext.system;
  std::vector<AbelianGroup> groups;
  for (Element x = 0; x < ext.base.size(); ++x)
    groups.push_back(D.group(x));
  doc.systems[sn] = NamedSystem{bn, NaturalSystem(doc.monoids.at(bn), groups, D.left_maps(), D.right_maps())};
  const std::string nm = fresh(doc, name);
  doc.order.emplace_back(EntityKind::linext, nm);
  MonoidExtension copy = ext;
  copy.total = doc.monoids.at(tn);
  copy.base = doc.monoids.at(bn);
  copy.system = doc.systems.at(sn).value;
  doc.linexts[nm] = NamedLinext{tn, bn, sn, std::move(copy)};
}

} // namespace mk
