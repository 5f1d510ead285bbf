#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/error.hpp"
#include "mk/extension.hpp"
#include "mk/maltsev.hpp"
#include "mk/monoid.hpp"
#include "mk/partition.hpp"
#include "mk/ring.hpp"

namespace mk {

/// Parse or load failure at a position. code() is one of E_SYNTAX,
/// E_TABLE_LEN, E_INVARIANT, E_DANGLING.
class SpecError : public Error {
public:
  SpecError(std::string code, std::string source, int line, int column, const std::string &message);

  const std::string &source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string &message() const { return message_; }

private:
  std::string source_;
  int line_;
  int column_;
  std::string message_;
};

enum class EntityKind { algebra, cong, tern, ring, module, form, bimodule, dbimodule, diagram, monoid, system, linext };

const char *to_string(EntityKind kind);

struct NamedCongruence {
  std::string algebra;
  Congruence theta;
};

struct NamedDBimodule {
  std::string form;
  std::string b;
  std::string k;
  DBimodule value;
};

struct NamedDiagram {
  std::string total;
  std::string base;
  FormExtension value;
};

struct NamedSystem {
  std::string monoid;
  NaturalSystem value;
};

struct NamedLinext {
  std::string total;
  std::string base;
  std::string system;
  MonoidExtension value;
};

/// Entities in declaration order. Names are unique across kinds and every
/// reference points at an earlier entity of the right kind.
struct SpecDocument {
  std::vector<std::pair<EntityKind, std::string>> order;
  std::map<std::string, FiniteAlgebra> algebras;
  std::map<std::string, NamedCongruence> congruences;
  std::map<std::string, TernaryTable> terns;
  std::map<std::string, FiniteRing> rings;
  std::map<std::string, std::pair<std::string, LeftModule>> modules; // ring name, module
  std::map<std::string, std::pair<std::string, LinearForm>> forms;   // module name, form
  std::map<std::string, std::pair<std::string, Bimodule>> bimodules; // ring name, bimodule
  std::map<std::string, NamedDBimodule> dbimodules;
  std::map<std::string, NamedDiagram> diagrams;
  std::map<std::string, FiniteMonoid> monoids;
  std::map<std::string, NamedSystem> systems;
  std::map<std::string, NamedLinext> linexts;

  bool contains(const std::string &name) const;
  /// Kind of a declared name; throws DomainError if absent.
  EntityKind kind(const std::string &name) const;
  /// Names of one kind in declaration order.
  std::vector<std::string> names(EntityKind kind) const;
};

/// Parses `text` into `doc`, which may already hold entities from earlier
/// files. `source` names the text in diagnostics.
void parse_into(SpecDocument &doc, std::string_view text, const std::string &source = "<input>");
SpecDocument parse(std::string_view text, const std::string &source = "<input>");
/// Reads and parses a file; an unreadable file is a DomainError.
void load_file(SpecDocument &doc, const std::string &path);

/// Canonical text; parse(serialize(d)) reproduces d.
std::string serialize(const SpecDocument &doc);

/// Builders for documents assembled in code, e.g. from the corpora. Each
/// adds an entity and any not yet declared dependency under its own name.
void add_algebra(SpecDocument &doc, const FiniteAlgebra &alg);
void add_form(SpecDocument &doc, const LinearForm &form);
void add_dbimodule(SpecDocument &doc, const DBimodule &bim);
void add_diagram(SpecDocument &doc, const std::string &name, const FormExtension &ext);
void add_tern(SpecDocument &doc, const TernaryTable &table);
void add_linext(SpecDocument &doc, const std::string &name, const MonoidExtension &ext);

} // namespace mk
