#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlcd/derivation.hpp"
#include "dlcd/syntax.hpp"

namespace dlcd {

namespace el_rule {
inline const std::string kSub = "R_sub";
inline const std::string kAndPlus = "R_and+";
inline const std::string kAndMinus = "R_and-";
inline const std::string kExists = "R_exists";
inline const std::string kExistsBot = "R_exists_bot";
inline const std::string kExfalso = "R_exfalso";
bool is_el_rule(const std::string& rule);
}  // namespace el_rule

// Subsumption pairs (C, D), identified by the printed forms of C and D.
struct Classification {
  std::set<std::pair<std::string, std::string>> pairs;

  bool contains(const Concept& c, const Concept& d) const {
    return pairs.count({to_string(c), to_string(d)}) > 0;
  }
  bool operator==(const Classification& o) const { return pairs == o.pairs; }
};

struct Interpretation {
  std::vector<std::string> domain;
  std::map<std::string, std::set<std::string>> concepts;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> roles;
};

// Extension of a concept; atoms are not interpreted and yield the empty set.
std::set<std::string> evaluate(const Interpretation& i, const Concept& c);
bool is_model(const Interpretation& i, const Ontology& o);

// One recorded inference between facts (lhs id, rhs id). For R_sub the
// second premise is the told axiom with index axiom.
struct ElEdge {
  int lhs;
  int rhs;
  std::string rule;
  std::vector<std::pair<int, int>> premises;
  int axiom = -1;
};

// Consequence-based saturation where every indexed concept is a context.
// The engine is incremental: axioms may be added after saturation.
class ElEngine {
 public:
  explicit ElEngine(const Ontology& o, const std::vector<Concept>& extra = {});

  void add_axioms(const std::vector<Gci>& axioms);
  // Registers a concept (and its subconcepts) as a context.
  int add_concept(const Concept& c);
  void saturate();

  int id_of(const Concept& c) const;
  bool indexed(const Concept& c) const { return ids_.count(to_string(c)) > 0; }
  const Concept& concept_at(int id) const { return concepts_[id]; }
  size_t size() const { return concepts_.size(); }
  bool has(int c, int d) const { return c < (int)facts_.size() && facts_[c].count(d) > 0; }
  bool entails(const Concept& c, const Concept& d) const;
  // Right-hand sides derived for context c, in derivation order.
  const std::vector<int>& supers(int c) const { return order_[c]; }
  size_t fact_count() const { return fact_count_; }

  const std::vector<Gci>& axioms() const { return axioms_; }
  const std::vector<ElEdge>& edges() const { return edges_; }

  // Pairs over the given concepts (all indexed ones when empty).
  Classification classification(const std::vector<Concept>& over = {}) const;
  // Labelled structure: tautologies C SubClassOf C, C SubClassOf Top and the
  // axioms are leaves.
  DerivationStructure derivations() const;

  // The model of the completeness argument: one element per satisfiable
  // context, concept names by derived facts, role edges by existentials.
  Interpretation countermodel() const;

 private:
  void derive(int c, int d, const std::string& rule, std::vector<std::pair<int, int>> premises,
              int axiom = -1);
  void process(int c, int d);

  std::vector<Concept> concepts_;
  std::map<std::string, int> ids_;
  std::vector<Gci> axioms_;
  std::set<std::string> axiom_keys_;
  std::map<int, std::vector<int>> told_;          // lhs id -> axiom indices
  std::map<int, std::vector<int>> conj_parent_;   // child id -> conjunction ids
  std::map<std::pair<std::string, int>, int> exists_;  // (role, filler) -> id
  std::vector<std::set<int>> facts_;
  std::vector<std::vector<int>> order_;
  std::map<int, std::set<std::pair<int, int>>> preds_;  // filler ctx -> (ctx, exists id)
  std::deque<std::pair<int, int>> queue_;
  std::vector<ElEdge> edges_;
  std::set<std::string> edge_keys_;
  size_t fact_count_ = 0;
  int top_ = -1;
  int bot_ = -1;
};

std::pair<Classification, DerivationStructure> el_classify(const Ontology& o);

// Countermodel for a non-subsumption c SubClassOf d; throws
// std::invalid_argument if the subsumption holds.
Interpretation el_countermodel(const Ontology& o, const Concept& c, const Concept& d);

}  // namespace dlcd
