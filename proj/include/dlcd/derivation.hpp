#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlcd {

enum class NodeKind { Gci, Constraint, Clause };

std::string to_string(NodeKind k);
NodeKind node_kind_from_string(const std::string& s);

struct Inference {
  std::string conclusion;
  std::vector<std::string> premises;
  std::string rule;
  std::vector<std::string> label;  // multipliers as rational text

  bool operator==(const Inference& o) const {
    return conclusion == o.conclusion && premises == o.premises && rule == o.rule &&
           label == o.label;
  }
};

// Hypergraph of recorded inferences over labelled statements. Vertices
// flagged as leaves (axioms, tautologies, premises of a CD query) may end a
// proof branch.
class DerivationStructure {
 public:
  void add_vertex(const std::string& label, NodeKind kind);
  void add_leaf(const std::string& label, NodeKind kind);
  // Duplicate edges are ignored. Returns true if the edge was new.
  bool add_edge(const Inference& e, NodeKind kind);
  void merge(const DerivationStructure& other);

  bool has_vertex(const std::string& label) const { return vertices_.count(label) > 0; }
  bool is_leaf(const std::string& label) const { return leaves_.count(label) > 0; }
  NodeKind kind_of(const std::string& label) const { return vertices_.at(label); }
  const std::vector<Inference>& edges() const { return edges_; }
  const std::map<std::string, NodeKind>& vertices() const { return vertices_; }
  const std::set<std::string>& leaves() const { return leaves_; }

 private:
  std::map<std::string, NodeKind> vertices_;
  std::set<std::string> leaves_;
  std::vector<Inference> edges_;
  std::set<std::string> edge_keys_;
};

struct ProofNode {
  std::string label;
  NodeKind kind;
};

struct ProofStep {
  int conclusion;
  std::vector<int> premises;
  std::string rule;
  std::vector<std::string> label;
};

// A proof: distinct statements numbered in post-order (the sink is last),
// at most one step per conclusion, no cycles. Nodes without a step are
// leaves.
struct Proof {
  std::string goal;
  std::vector<ProofNode> nodes;
  std::vector<ProofStep> steps;

  const ProofStep* step_for(int node) const;
  std::vector<int> leaves() const;
  int sink() const { return static_cast<int>(nodes.size()) - 1; }
  // Tree size (shared sub-proofs counted once per use) and depth.
  long long tree_size() const;
  int depth() const;
  bool operator==(const Proof& o) const;
};

enum class ProofMetric { Size, Depth, None };

ProofMetric metric_from_string(const std::string& s);

struct NotDerivableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Proof extract_proof(const DerivationStructure& ds, const std::string& goal,
                    ProofMetric metric = ProofMetric::Size);

std::string proof_to_json(const Proof& p);
Proof proof_from_json(const std::string& text);
std::string proof_to_dot(const Proof& p);

}  // namespace dlcd
