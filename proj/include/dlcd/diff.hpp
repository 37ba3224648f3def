#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlcd/lin.hpp"

namespace dlcd {

// Rule names, in the spelling used in derivation structures.
namespace diff_rule {
inline const std::string kNeq = "R_neq";
inline const std::string kPlus = "R_plus";
inline const std::string kZero = "R_0";
inline const std::string kNeqPlus = "R_neq+";
inline const std::string kMinus = "R_minus";
inline const std::string kFlip = "R_flip";
inline const std::string kLt = "R_lt";
inline const std::string kEq = "R_eq";
inline const std::string kGt = "R_gt";
inline const std::string kBot = "R_bot";
inline const std::string kGtPlus = "R_gt+";
inline const std::string kGtMinus = "R_gt-";
}  // namespace diff_rule

struct DiffStep {
  std::string rule;
  std::vector<std::string> premises;
  DiffConstraint conclusion;
  std::string side_condition;
};

struct DiffState {
  // Strongest unary constraint per variable.
  std::map<std::string, DiffConstraint> unary;
  // One constraint x + q = y per ordered pair, self pairs included.
  std::map<std::pair<std::string, std::string>, DiffConstraint> binary;
  bool bot = false;
  // Variables occurring in the input, with the first input mentioning each.
  std::map<std::string, std::string> first_mention;
  // Labels of all input and derived constraints.
  std::set<std::string> known;
  std::set<std::string> inputs;
  std::vector<DiffStep> steps;
  size_t derived = 0;  // distinct derived constraints not among the inputs
  DerivationStructure ds;
};

// Accepts DiffConstraint and Defined members; Defined only registers its variable.
DiffState diff_saturate(const std::vector<Constraint>& ds);
CdVerdict diff_entails(const std::vector<Constraint>& ds, const Constraint& beta);
// Same test against an already saturated set. The structure is only filled
// in for a positive verdict.
CdVerdict diff_entails(const DiffState& st, const Constraint& beta);

bool diff_satisfies(const Assignment& a, const DiffConstraint& c);
Assignment diff_witness(const std::vector<Constraint>& ds,
                        const std::optional<Constraint>& beta);

std::vector<Implication> diff_minimal_implications(const std::vector<Constraint>& ds,
                                                   const std::vector<Constraint>& targets);

}  // namespace dlcd
