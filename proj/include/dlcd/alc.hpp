#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dlcd/cd.hpp"
#include "dlcd/derivation.hpp"
#include "dlcd/syntax.hpp"

namespace dlcd {

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Literal {
  enum class Kind { Pos, Neg, Exists, Forall };
  Kind kind = Kind::Pos;
  std::string role;  // only for Exists and Forall
  std::string name;

  bool operator==(const Literal& o) const {
    return kind == o.kind && role == o.role && name == o.name;
  }
  bool operator<(const Literal& o) const {
    return std::tie(kind, role, name) < std::tie(o.kind, o.role, o.name);
  }
};

std::string to_string(const Literal& l);

enum class NameKind { User, Abstraction, ExistsDefiner, ForallDefiner, Marker };

inline const std::string kLhsMarker = "$LHS";
inline const std::string kRhsMarker = "$RHS";

// Total order on literals by strata: markers, negated existential definers,
// negated universal definers, existentials, universals, then ordinary names
// with A directly below not A. Ties are broken by role and name.
class LiteralOrder {
 public:
  explicit LiteralOrder(std::map<std::string, NameKind> kinds) : kinds_(std::move(kinds)) {}
  NameKind kind_of(const std::string& name) const;
  std::tuple<int, std::string, std::string, int> rank(const Literal& l) const;
  bool less(const Literal& a, const Literal& b) const { return rank(a) < rank(b); }

 private:
  std::map<std::string, NameKind> kinds_;
};

struct Definer {
  std::string name;
  bool exists = true;
  std::string role;
  Concept filler;  // in negation normal form, over abstraction names
};

struct ClauseOrigin {
  enum class Kind { Axiom, Definer, Marker };
  Kind kind = Kind::Axiom;
  int axiom = -1;  // the axiom being normalized (for definers: the first one)
};

struct ClauseSet {
  std::vector<std::vector<Literal>> clauses;
  std::vector<ClauseOrigin> origins;
  std::vector<Definer> definers;
  std::map<std::string, NameKind> kinds;
  AbstractionMap map;
  CdKind cd_kind = CdKind::None;
  Gci goal;

  LiteralOrder order() const { return LiteralOrder(kinds); }
  const Definer* definer(const std::string& name) const;
};

// Normalizes the ontology and the goal markers into clauses. Fillers of role
// restrictions are replaced by definers shared across equal fillers.
ClauseSet alc_clausify(const Ontology& o, const Gci& goal);

struct AlcOptions {
  size_t clause_cap = 1000000;
  // Retry without the set-of-support restriction when the first pass fails.
  bool fallback = true;
};

struct AlcDerivation {
  std::string rule;  // A1, r1, r2
  std::vector<int> premises;
};

struct AlcClause {
  std::vector<Literal> lits;  // ascending in the literal order
  bool support = false;
  bool alive = true;
  int input = -1;  // index into ClauseSet::clauses
  int hook = -1;   // index into AlcResult::hooks
  std::vector<AlcDerivation> derivations;
};

struct CdHook {
  std::vector<Constraint> premises;
  std::optional<Constraint> conclusion;
  DerivationStructure ds;
};

struct AlcResult {
  bool success = false;
  int success_clause = -1;
  bool fallback_used = false;
  std::vector<AlcClause> clauses;
  std::vector<CdHook> hooks;
  size_t inferences = 0;
};

AlcResult alc_saturate(const ClauseSet& cs, const AlcOptions& opt = {});

// The GCI reading of a clause after replacing markers, definers and
// abstraction names.
Gci clause_to_gci(const ClauseSet& cs, const std::vector<Literal>& lits);

bool alc_entails(const Ontology& o, const Gci& goal, const AlcOptions& opt = {});
Proof alc_prove(const Ontology& o, const Gci& goal, ProofMetric metric = ProofMetric::Size,
                const AlcOptions& opt = {});

}  // namespace dlcd
