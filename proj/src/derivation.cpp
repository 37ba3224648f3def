#include "dlcd/derivation.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace dlcd {

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Gci: return "gci";
    case NodeKind::Constraint: return "constraint";
    default: return "clause";
  }
}

NodeKind node_kind_from_string(const std::string& s) {
  if (s == "gci") return NodeKind::Gci;
  if (s == "constraint") return NodeKind::Constraint;
  if (s == "clause") return NodeKind::Clause;
  throw std::invalid_argument("unknown node kind: " + s);
}

ProofMetric metric_from_string(const std::string& s) {
  if (s == "size") return ProofMetric::Size;
  if (s == "depth") return ProofMetric::Depth;
  if (s == "none") return ProofMetric::None;
  throw std::invalid_argument("unknown metric: " + s);
}

void DerivationStructure::add_vertex(const std::string& label, NodeKind kind) {
  vertices_.emplace(label, kind);
}

void DerivationStructure::add_leaf(const std::string& label, NodeKind kind) {
  add_vertex(label, kind);
  leaves_.insert(label);
}

namespace {

std::string edge_key(const Inference& e) {
  std::string k = e.conclusion + '\x1f' + e.rule;
  for (const auto& p : e.premises) k += '\x1e' + p;
  k += '\x1d';
  for (const auto& l : e.label) k += l + ',';
  return k;
}

}  // namespace

bool DerivationStructure::add_edge(const Inference& e, NodeKind kind) {
  if (!edge_keys_.insert(edge_key(e)).second) return false;
  add_vertex(e.conclusion, kind);
  for (const auto& p : e.premises) add_vertex(p, kind);
  edges_.push_back(e);
  return true;
}

void DerivationStructure::merge(const DerivationStructure& other) {
  for (const auto& [l, k] : other.vertices_) add_vertex(l, k);
  for (const auto& l : other.leaves_) leaves_.insert(l);
  for (const auto& e : other.edges_) add_edge(e, other.kind_of(e.conclusion));
}

const ProofStep* Proof::step_for(int node) const {
  for (const auto& s : steps) {
    if (s.conclusion == node) return &s;
  }
  return nullptr;
}

std::vector<int> Proof::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (!step_for(i)) out.push_back(i);
  }
  return out;
}

long long Proof::tree_size() const {
  std::vector<long long> memo(nodes.size(), -1);
  std::function<long long(int)> go = [&](int v) -> long long {
    if (memo[v] >= 0) return memo[v];
    long long s = 1;
    if (auto st = step_for(v)) {
      for (int p : st->premises) s += go(p);
    }
    return memo[v] = s;
  };
  return nodes.empty() ? 0 : go(sink());
}

int Proof::depth() const {
  std::vector<int> memo(nodes.size(), -1);
  std::function<int(int)> go = [&](int v) -> int {
    if (memo[v] >= 0) return memo[v];
    int d = 0;
    if (auto st = step_for(v)) {
      d = 1;
      for (int p : st->premises) d = std::max(d, 1 + go(p));
    }
    return memo[v] = d;
  };
  return nodes.empty() ? 0 : go(sink());
}

bool Proof::operator==(const Proof& o) const {
  if (goal != o.goal || nodes.size() != o.nodes.size() || steps.size() != o.steps.size())
    return false;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].label != o.nodes[i].label || nodes[i].kind != o.nodes[i].kind) return false;
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& a = steps[i];
    const auto& b = o.steps[i];
    if (a.conclusion != b.conclusion || a.premises != b.premises || a.rule != b.rule ||
        a.label != b.label)
      return false;
  }
  return true;
}

namespace {

using Cost = unsigned long long;
constexpr Cost kInf = std::numeric_limits<Cost>::max();

Cost sat_add(Cost a, Cost b) { return a > kInf - b ? kInf : a + b; }

}  // namespace

Proof extract_proof(const DerivationStructure& ds, const std::string& goal,
                    ProofMetric metric) {
  if (!ds.has_vertex(goal)) throw NotDerivableError("goal not in derivation structure: " + goal);
  std::vector<std::string> labels;
  std::map<std::string, int> index;
  for (const auto& [l, k] : ds.vertices()) {
    index[l] = static_cast<int>(labels.size());
    labels.push_back(l);
  }
  const auto& edges = ds.edges();
  size_t n = labels.size();
  std::vector<std::vector<int>> prem(edges.size());
  std::vector<int> concl(edges.size());
  std::vector<std::vector<int>> uses(n);
  for (size_t e = 0; e < edges.size(); ++e) {
    concl[e] = index.at(edges[e].conclusion);
    for (const auto& p : edges[e].premises) prem[e].push_back(index.at(p));
    std::vector<int> distinct = prem[e];
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int p : distinct) uses[p].push_back(static_cast<int>(e));
  }
  std::vector<bool> leaf(n, false);
  for (const auto& l : ds.leaves()) leaf[index.at(l)] = true;

  std::vector<int> chosen(n, -1);
  std::vector<bool> done(n, false);

  if (metric == ProofMetric::None) {
    for (size_t v = 0; v < n; ++v) done[v] = leaf[v];
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t e = 0; e < edges.size(); ++e) {
        int c = concl[e];
        if (done[c]) continue;
        bool ready = std::all_of(prem[e].begin(), prem[e].end(), [&](int p) { return done[p]; });
        if (ready) {
          done[c] = true;
          chosen[c] = static_cast<int>(e);
          changed = true;
        }
      }
    }
  } else {
    std::vector<Cost> cost(n, kInf);
    std::vector<size_t> waiting(edges.size());
    using Item = std::pair<Cost, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    auto edge_cost = [&](size_t e) {
      Cost c = metric == ProofMetric::Size ? 1 : 1;
      for (int p : prem[e]) {
        c = metric == ProofMetric::Size ? sat_add(c, cost[p]) : std::max(c, sat_add(cost[p], 1));
      }
      return c;
    };
    for (size_t v = 0; v < n; ++v) {
      if (leaf[v]) {
        cost[v] = metric == ProofMetric::Size ? 1 : 0;
        pq.push({cost[v], static_cast<int>(v)});
      }
    }
    for (size_t e = 0; e < edges.size(); ++e) {
      std::vector<int> distinct = prem[e];
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      waiting[e] = distinct.size();
      if (waiting[e] == 0) {
        Cost c = edge_cost(e);
        if (c < cost[concl[e]]) {
          cost[concl[e]] = c;
          pq.push({c, concl[e]});
        }
      }
    }
    while (!pq.empty()) {
      auto [c, v] = pq.top();
      pq.pop();
      if (done[v] || c != cost[v]) continue;
      done[v] = true;
      for (int e : uses[v]) {
        if (--waiting[e] == 0) {
          Cost ec = edge_cost(e);
          int w = concl[e];
          if (!done[w] && ec < cost[w]) {
            cost[w] = ec;
            pq.push({ec, w});
          }
        }
      }
    }
    // Among the optimal edges pick the least by rule, premise labels and label.
    for (size_t e = 0; e < edges.size(); ++e) {
      int c = concl[e];
      if (leaf[c] || !done[c]) continue;
      bool ready = std::all_of(prem[e].begin(), prem[e].end(), [&](int p) { return done[p]; });
      if (!ready || edge_cost(e) != cost[c]) continue;
      if (chosen[c] < 0) {
        chosen[c] = static_cast<int>(e);
        continue;
      }
      const Inference& a = edges[e];
      const Inference& b = edges[chosen[c]];
      if (std::tie(a.rule, a.premises, a.label) < std::tie(b.rule, b.premises, b.label))
        chosen[c] = static_cast<int>(e);
    }
  }

  int g = index.at(goal);
  if (!done[g]) throw NotDerivableError("goal not derivable: " + goal);

  Proof p;
  p.goal = goal;
  std::map<int, int> id;
  std::function<void(int)> visit = [&](int v) {
    if (id.count(v)) return;
    id[v] = -1;
    if (!leaf[v] && chosen[v] >= 0) {
      for (int q : prem[chosen[v]]) visit(q);
    }
    id[v] = static_cast<int>(p.nodes.size());
    p.nodes.push_back({labels[v], ds.kind_of(labels[v])});
  };
  visit(g);
  for (const auto& [v, i] : id) {
    if (leaf[v] || chosen[v] < 0) continue;
    const Inference& e = edges[chosen[v]];
    ProofStep s{i, {}, e.rule, e.label};
    for (int q : prem[chosen[v]]) s.premises.push_back(id.at(q));
    p.steps.push_back(s);
  }
  std::sort(p.steps.begin(), p.steps.end(),
            [](const ProofStep& a, const ProofStep& b) { return a.conclusion < b.conclusion; });
  return p;
}

std::string proof_to_json(const Proof& p) {
  nlohmann::ordered_json j;
  j["goal"] = p.goal;
  j["nodes"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    nlohmann::ordered_json n;
    n["id"] = i;
    n["label"] = p.nodes[i].label;
    n["kind"] = to_string(p.nodes[i].kind);
    j["nodes"].push_back(n);
  }
  j["inferences"] = nlohmann::ordered_json::array();
  for (const auto& s : p.steps) {
    nlohmann::ordered_json e;
    e["conclusion"] = s.conclusion;
    e["premises"] = s.premises;
    e["rule"] = s.rule;
    e["label"] = s.label;
    j["inferences"].push_back(e);
  }
  return j.dump(2) + "\n";
}

Proof proof_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Proof p;
  p.goal = j.at("goal").get<std::string>();
  const auto& nodes = j.at("nodes");
  p.nodes.resize(nodes.size());
  for (const auto& n : nodes) {
    int id = n.at("id").get<int>();
    if (id < 0 || id >= static_cast<int>(nodes.size()))
      throw std::invalid_argument("node id out of range");
    p.nodes[id] = {n.at("label").get<std::string>(),
                   node_kind_from_string(n.at("kind").get<std::string>())};
  }
  for (const auto& e : j.at("inferences")) {
    ProofStep s;
    s.conclusion = e.at("conclusion").get<int>();
    s.premises = e.at("premises").get<std::vector<int>>();
    s.rule = e.at("rule").get<std::string>();
    s.label = e.at("label").get<std::vector<std::string>>();
    auto in_range = [&](int v) { return v >= 0 && v < static_cast<int>(p.nodes.size()); };
    if (!in_range(s.conclusion) ||
        !std::all_of(s.premises.begin(), s.premises.end(), in_range))
      throw std::invalid_argument("inference refers to a missing node");
    p.steps.push_back(s);
  }
  return p;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string step_caption(const ProofStep& s) {
  std::string t = s.rule;
  if (!s.label.empty()) {
    t += " [";
    for (size_t i = 0; i < s.label.size(); ++i) t += (i ? "," : "") + s.label[i];
    t += "]";
  }
  return t;
}

}  // namespace

std::string proof_to_dot(const Proof& p) {
  std::ostringstream out;
  out << "digraph proof {\n  rankdir=BT;\n";
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    out << "  n" << i << " [shape=box, label=\"" << dot_escape(p.nodes[i].label) << "\"];\n";
  }
  int r = 0;
  for (const auto& s : p.steps) {
    if (s.premises.size() == 1) {
      out << "  n" << s.premises[0] << " -> n" << s.conclusion << " [label=\""
          << dot_escape(step_caption(s)) << "\"];\n";
      continue;
    }
    out << "  r" << r << " [shape=ellipse, label=\"" << dot_escape(step_caption(s)) << "\"];\n";
    for (int q : s.premises) out << "  n" << q << " -> r" << r << ";\n";
    out << "  r" << r << " -> n" << s.conclusion << ";\n";
    ++r;
  }
  out << "}\n";
  return out.str();
}

}  // namespace dlcd
