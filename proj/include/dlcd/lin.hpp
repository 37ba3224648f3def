#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlcd/derivation.hpp"
#include "dlcd/syntax.hpp"

namespace dlcd {

using Assignment = std::map<std::string, Rational>;

// One elimination step: conclusion = sum of label[i] * premises[i].
struct LinStep {
  std::vector<LinConstraint> premises;
  LinConstraint conclusion;
  std::vector<Rational> label;
};

struct CdVerdict {
  bool verdict = false;
  DerivationStructure ds;
};

// An implication between constraints; no conclusion means the premises are
// contradictory.
struct Implication {
  std::vector<Constraint> premises;
  std::optional<Constraint> conclusion;
};

struct PivotError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MalformedProofError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InfeasibleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rule name used for elimination steps in derivation structures.
inline const std::string kLinRule = "lin";

std::string lin_label(const LinConstraint& c);  // "Bot" for 0 = b, b != 0
std::vector<std::string> rational_labels(const std::vector<Rational>& r);

// Removes var from target using pivot. With normalize, the result is scaled
// so that its leading coefficient is 1 and the label records both factors.
LinStep lin_eliminate(const LinConstraint& target, const LinConstraint& pivot,
                      const std::string& var, bool normalize = false);

CdVerdict lin_unsat(const std::vector<LinConstraint>& ds);
CdVerdict lin_entails(const std::vector<LinConstraint>& ds, const LinConstraint& beta);

// Turns a reduction of beta to 0 = 0 into a derivation of beta.
Proof lin_reverse_proof(const Proof& forward);

bool lin_satisfies(const Assignment& a, const LinConstraint& c);
Assignment lin_witness(const std::vector<LinConstraint>& ds,
                       const std::vector<LinConstraint>& avoid);

std::vector<Implication> lin_minimal_implications(const std::vector<LinConstraint>& ds,
                                                  const std::vector<LinConstraint>& targets);

// Enumerates all subset-minimal index sets S of {0..n-1} with holds(S), for a
// monotone predicate. holds may report the indices it actually used, which
// seeds the shrinking step.
using SetPredicate =
    std::function<bool(const std::vector<size_t>&, std::vector<size_t>* used)>;
std::vector<std::vector<size_t>> minimal_sets(size_t n, const SetPredicate& holds);

}  // namespace dlcd
