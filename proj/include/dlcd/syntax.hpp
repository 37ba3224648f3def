#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dlcd {

// Exact rational numbers. mpq_class keeps values in canonical form as long
// as every value built from text goes through make_rational.
using Rational = mpq_class;

Rational make_rational(const std::string& text);
std::string to_string(const Rational& q);

// sum of coeffs[v] * v = rhs
struct LinConstraint {
  std::map<std::string, Rational> coeffs;
  Rational rhs;

  bool operator==(const LinConstraint& o) const {
    return coeffs == o.coeffs && rhs == o.rhs;
  }
};

struct DiffConstraint {
  enum class Kind { Eq, Gt, Diff, Bot };
  Kind kind = Kind::Bot;
  std::string x;
  Rational q;
  std::string y;  // only for Diff: x + q = y

  static DiffConstraint eq(std::string x, Rational q);
  static DiffConstraint gt(std::string x, Rational q);
  static DiffConstraint diff(std::string x, Rational q, std::string y);
  static DiffConstraint bot();

  bool operator==(const DiffConstraint& o) const {
    return kind == o.kind && x == o.x && q == o.q && y == o.y;
  }
};

// The definedness atom [Top(x)]: holds wherever feature x has a value.
struct Defined {
  std::string var;
  bool operator==(const Defined& o) const { return var == o.var; }
};

using Constraint = std::variant<LinConstraint, DiffConstraint, Defined>;

enum class CdKind { None, Lin, Diff };

std::string to_string(CdKind k);
std::string to_string(const LinConstraint& c);
std::string to_string(const DiffConstraint& c);
std::string to_string(const Constraint& c);

// Lin constraints are scaled so the first variable has coefficient 1;
// everything else is returned unchanged.
LinConstraint canonical(const LinConstraint& c);
Constraint canonical(const Constraint& c);
std::string canonical_key(const Constraint& c);

std::set<std::string> variables(const Constraint& c);
bool is_bot(const Constraint& c);

// Linear-form arithmetic used by elimination and certificate checking.
LinConstraint lin_scale(const LinConstraint& c, const Rational& s);
LinConstraint lin_add(const LinConstraint& a, const LinConstraint& b);

enum class ConceptKind { Top, Bot, Name, And, Or, Not, Exists, Forall, Atom };

struct ConceptNode;
using Concept = std::shared_ptr<const ConceptNode>;

struct ConceptNode {
  ConceptKind kind;
  std::string name;  // concept name or role
  Concept a;
  Concept b;
  std::shared_ptr<const Constraint> atom;
  std::string key;  // printed form, used for identity
};

Concept top();
Concept bot();
Concept name(const std::string& n);
Concept conj(Concept a, Concept b);
Concept disj(Concept a, Concept b);
Concept neg(Concept a);
Concept some(const std::string& role, Concept filler);
Concept all(const std::string& role, Concept filler);
Concept atom(Constraint c);

// Left-associated conjunction; Top for an empty list.
Concept conj_all(const std::vector<Concept>& cs);
// Left-associated disjunction; Bot for an empty list.
Concept disj_all(const std::vector<Concept>& cs);

const std::string& to_string(const Concept& c);

// Printed form with every lin atom canonicalized; two concepts that differ
// only by the scaling of their equations share this key.
std::string canon_key(const Concept& c);

struct ConceptLess {
  bool operator()(const Concept& a, const Concept& b) const {
    return a->key < b->key;
  }
};

struct Gci {
  Concept lhs;
  Concept rhs;
};

std::string to_string(const Gci& g);
std::string canon_key(const Gci& g);

struct Ontology {
  std::vector<Gci> axioms;
  CdKind cd_kind = CdKind::None;
};

// Round-trips through parse_ontology.
std::string serialize_ontology(const Ontology& o);

// True when no Not, Or or Forall occurs.
bool is_el(const Concept& c);
bool is_el(const Ontology& o);

// Subconcepts in first-occurrence order, always starting with Top and Bot.
std::vector<Concept> subconcepts(const Ontology& o);
void collect_subconcepts(const Concept& c, std::vector<Concept>& out,
                         std::set<std::string>& seen);

// Replace every atom by the concept given by f; f returns nullptr to keep it.
template <class F>
Concept map_atoms(const Concept& c, F&& f);

// Negation normal form. Negated atoms stay as Not(Atom).
Concept nnf(const Concept& c);

class AbstractionMap {
 public:
  // Name for the constraint, creating a fresh one on first sight.
  const std::string& intern(const Constraint& c);
  std::optional<std::string> lookup(const Constraint& c) const;
  bool is_abstraction(const std::string& name) const;
  const Constraint& constraint_of(const std::string& name) const;
  // Constraints in order of first occurrence.
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<std::string>& names() const { return names_; }
  size_t size() const { return names_.size(); }

  Concept abstract(const Concept& c);
  Concept abstract(const Concept& c) const;
  Gci abstract(const Gci& g);
  Concept concretize(const Concept& c) const;
  Gci concretize(const Gci& g) const;

 private:
  std::map<std::string, size_t> by_key_;
  std::map<std::string, size_t> by_name_;
  std::vector<Constraint> constraints_;
  std::vector<std::string> names_;
};

std::pair<Ontology, AbstractionMap> abstract_constraints(const Ontology& o);

// Errors carrying a position in the input text.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column);
};

// Raised when lin and diff atoms are mixed in one ontology.
struct MixedDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// hint fixes the domain when all atoms are of the shared form x = q.
Ontology parse_ontology(const std::string& text, CdKind hint = CdKind::None);
Concept parse_concept(const std::string& text, CdKind kind);
Gci parse_gci(const std::string& text, CdKind kind);
// Parses a single constraint label as printed by to_string. "Bot" yields
// the bottom diff constraint (or 0 = 1 for lin).
Constraint parse_constraint(const std::string& text, CdKind kind,
                            bool allow_self_diff = true);

template <class F>
Concept map_atoms(const Concept& c, F&& f) {
  switch (c->kind) {
    case ConceptKind::Atom: {
      Concept r = f(*c->atom);
      return r ? r : c;
    }
    case ConceptKind::And:
      return conj(map_atoms(c->a, f), map_atoms(c->b, f));
    case ConceptKind::Or:
      return disj(map_atoms(c->a, f), map_atoms(c->b, f));
    case ConceptKind::Not:
      return neg(map_atoms(c->a, f));
    case ConceptKind::Exists:
      return some(c->name, map_atoms(c->a, f));
    case ConceptKind::Forall:
      return all(c->name, map_atoms(c->a, f));
    default:
      return c;
  }
}

}  // namespace dlcd
