#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlcd/cd.hpp"
#include "dlcd/el.hpp"

namespace dlcd {

// A bridge axiom added by the classification loop together with the
// concrete-domain derivation that justifies it.
struct BridgeProof {
  Gci axiom;  // over abstraction names
  std::vector<Constraint> premises;
  std::optional<Constraint> conclusion;  // none for a contradiction
  std::string goal;                      // "Bot" or the conclusion label
  DerivationStructure ds;
  Proof proof;
};

struct EldResult {
  // Pairs over the original subconcepts (plus the extra concepts).
  Classification classification;
  Ontology final_ontology;  // the abstracted ontology with all bridges
  AbstractionMap map;
  std::vector<BridgeProof> registry;
  size_t iterations = 0;  // executions of the outer loop body (none without constraints)
  size_t bound = 0;       // |sub(O^-D)| * |C(O)|
  std::shared_ptr<ElEngine> engine;
};

// Classification by interleaving EL saturation with concrete-domain tests.
// Atoms occurring in extra become part of C(O).
EldResult eld_classify(const Ontology& o, const std::vector<Concept>& extra = {});

bool eld_entails(const Ontology& o, const Gci& goal);

// Combined proof whose leaves are axioms of o or tautologies. Throws
// NotDerivableError when the goal does not follow.
Proof eld_prove(const Ontology& o, const Gci& goal, ProofMetric metric = ProofMetric::Size);

// Splices a concrete-domain structure under the left-hand side context:
// every constraint label L becomes "context SubClassOf [L]" and Bot becomes
// "context SubClassOf Bot". Leaves are not marked.
void add_contextualized(DerivationStructure& target, const DerivationStructure& cd,
                        const Concept& context);

}  // namespace dlcd
