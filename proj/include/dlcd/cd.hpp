#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlcd/diff.hpp"
#include "dlcd/lin.hpp"

namespace dlcd {

// Dispatch over the two domains. Definedness atoms are handled here for
// both: Top(x) follows from any constraint mentioning x.

// Label of a constraint node; contradictions are labelled "Bot".
std::string cd_label(const Constraint& c);

CdVerdict cd_unsat(CdKind kind, const std::vector<Constraint>& ds);
// Valid also for unsatisfiable ds (then every beta follows via R_bot).
CdVerdict cd_entails(CdKind kind, const std::vector<Constraint>& ds, const Constraint& beta);
// Results per solved part, keyed by the part and its targets.
using ImplicationCache = std::map<std::string, std::vector<Implication>>;

// All subset-minimal contradictions in ds, then for each target the minimal
// subsets entailing it that are not contradictions.
std::vector<Implication> cd_minimal_implications(CdKind kind,
                                                 const std::vector<Constraint>& ds,
                                                 const std::vector<Constraint>& targets,
                                                 ImplicationCache* cache = nullptr);
bool cd_satisfies(const Assignment& a, const Constraint& c);

}  // namespace dlcd
