#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlcd/derivation.hpp"
#include "dlcd/syntax.hpp"

namespace dlcd {

// Reading a GCI C SubClassOf D as the disjunction not C or D in negation
// normal form, flattened into its disjuncts and keyed by canon_key. Bot
// disjuncts are dropped.
std::map<std::string, Concept> clause_view(const Gci& g);

// Propositional reasoning that treats names, atoms and existential
// restrictions as opaque variables (a universal restriction is the negated
// existential of the negated filler).
bool is_tautology(const Gci& g);
bool prop_entails(const Gci& premise, const Gci& conclusion);

// Verifies one concrete-domain step. Returns an explanation when it fails.
std::optional<std::string> check_cd_step(const std::string& rule,
                                         const std::vector<Constraint>& premises,
                                         const Constraint& conclusion,
                                         const std::vector<std::string>& label);

bool is_cd_rule(const std::string& rule);

// Checks leaves against the ontology (or tautologies) and replays every
// step. An empty report means the proof is valid.
std::vector<std::string> check_proof(const Proof& p, const Ontology& o);

// Checks a proof over constraint nodes whose leaves must be among premises.
std::vector<std::string> check_cd_proof(const Proof& p, CdKind kind,
                                        const std::vector<Constraint>& premises);

}  // namespace dlcd
