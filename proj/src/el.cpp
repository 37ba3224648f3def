#include "dlcd/el.hpp"

#include <stdexcept>

namespace dlcd {

bool el_rule::is_el_rule(const std::string& rule) {
  return rule == kSub || rule == kAndPlus || rule == kAndMinus || rule == kExists ||
         rule == kExistsBot || rule == kExfalso;
}

std::set<std::string> evaluate(const Interpretation& i, const Concept& c) {
  std::set<std::string> all_elems(i.domain.begin(), i.domain.end());
  switch (c->kind) {
    case ConceptKind::Top:
      return all_elems;
    case ConceptKind::Bot:
    case ConceptKind::Atom:
      return {};
    case ConceptKind::Name: {
      auto it = i.concepts.find(c->name);
      return it == i.concepts.end() ? std::set<std::string>{} : it->second;
    }
    case ConceptKind::And: {
      auto a = evaluate(i, c->a), b = evaluate(i, c->b);
      std::set<std::string> out;
      for (const auto& x : a) {
        if (b.count(x)) out.insert(x);
      }
      return out;
    }
    case ConceptKind::Or: {
      auto a = evaluate(i, c->a), b = evaluate(i, c->b);
      a.insert(b.begin(), b.end());
      return a;
    }
    case ConceptKind::Not: {
      auto a = evaluate(i, c->a);
      std::set<std::string> out;
      for (const auto& x : all_elems) {
        if (!a.count(x)) out.insert(x);
      }
      return out;
    }
    case ConceptKind::Exists:
    case ConceptKind::Forall: {
      auto f = evaluate(i, c->a);
      auto it = i.roles.find(c->name);
      std::set<std::string> out;
      for (const auto& x : all_elems) {
        bool any = false, every = true;
        if (it != i.roles.end()) {
          for (const auto& [s, t] : it->second) {
            if (s != x) continue;
            if (f.count(t)) {
              any = true;
            } else {
              every = false;
            }
          }
        }
        if (c->kind == ConceptKind::Exists ? any : every) out.insert(x);
      }
      return out;
    }
  }
  return {};
}

bool is_model(const Interpretation& i, const Ontology& o) {
  for (const auto& g : o.axioms) {
    auto l = evaluate(i, g.lhs), r = evaluate(i, g.rhs);
    for (const auto& x : l) {
      if (!r.count(x)) return false;
    }
  }
  return true;
}

ElEngine::ElEngine(const Ontology& o, const std::vector<Concept>& extra) {
  top_ = add_concept(top());
  bot_ = add_concept(bot());
  add_axioms(o.axioms);
  for (const auto& c : extra) add_concept(c);
}

int ElEngine::add_concept(const Concept& c) {
  auto it = ids_.find(to_string(c));
  if (it != ids_.end()) return it->second;
  // Children first so that every conjunct and filler is a context.
  if (c->a) add_concept(c->a);
  if (c->b) add_concept(c->b);
  int id = static_cast<int>(concepts_.size());
  concepts_.push_back(c);
  ids_[to_string(c)] = id;
  facts_.emplace_back();
  order_.emplace_back();
  if (c->kind == ConceptKind::And) {
    conj_parent_[id_of(c->a)].push_back(id);
    if (id_of(c->b) != id_of(c->a)) conj_parent_[id_of(c->b)].push_back(id);
  }
  if (c->kind == ConceptKind::Exists) exists_[{c->name, id_of(c->a)}] = id;
  derive(id, id, "", {});
  if (top_ >= 0) derive(id, top_, "", {});
  if (top_ < 0) top_ = id;  // Top itself is the first concept
  // Existing contexts may now reach the new concept through R_and+ or
  // R_exists; replay their facts.
  if (c->kind == ConceptKind::And || c->kind == ConceptKind::Exists) {
    for (int x = 0; x < id; ++x) {
      for (int d : order_[x]) queue_.push_back({x, d});
    }
  } else if (bot_ >= 0) {
    for (int x = 0; x < id; ++x) {
      if (facts_[x].count(bot_)) queue_.push_back({x, bot_});
    }
  }
  return id;
}

void ElEngine::add_axioms(const std::vector<Gci>& axioms) {
  bool added = false;
  for (const auto& g : axioms) {
    if (!axiom_keys_.insert(to_string(g)).second) continue;
    int l = add_concept(g.lhs);
    add_concept(g.rhs);
    told_[l].push_back(static_cast<int>(axioms_.size()));
    axioms_.push_back(g);
    added = true;
  }
  if (!added) return;
  for (int x = 0; x < (int)concepts_.size(); ++x) {
    for (int d : order_[x]) queue_.push_back({x, d});
  }
}

int ElEngine::id_of(const Concept& c) const {
  auto it = ids_.find(to_string(c));
  if (it == ids_.end()) throw std::out_of_range("concept not indexed: " + to_string(c));
  return it->second;
}

bool ElEngine::entails(const Concept& c, const Concept& d) const {
  if (!indexed(c) || !indexed(d)) throw std::out_of_range("query concepts must be indexed");
  return has(id_of(c), id_of(d));
}

void ElEngine::derive(int c, int d, const std::string& rule,
                      std::vector<std::pair<int, int>> premises, int axiom) {
  if (!rule.empty()) {
    std::string key = std::to_string(c) + ":" + std::to_string(d) + ":" + rule + ":" +
                      std::to_string(axiom);
    for (const auto& [a, b] : premises) key += ":" + std::to_string(a) + "," + std::to_string(b);
    if (edge_keys_.insert(key).second) edges_.push_back({c, d, rule, std::move(premises), axiom});
  }
  if (facts_[c].insert(d).second) {
    order_[c].push_back(d);
    ++fact_count_;
    queue_.push_back({c, d});
  }
}

void ElEngine::process(int c, int d) {
  const Concept& dc = concepts_[d];
  if (d == bot_) {
    for (int e = 0; e < (int)concepts_.size(); ++e) {
      if (e != bot_) derive(c, e, el_rule::kExfalso, {{c, bot_}});
    }
    for (const auto& [pc, ex] : preds_[c]) derive(pc, bot_, el_rule::kExistsBot, {{pc, ex}, {c, bot_}});
  }
  if (dc->kind == ConceptKind::And) {
    derive(c, id_of(dc->a), el_rule::kAndMinus, {{c, d}});
    derive(c, id_of(dc->b), el_rule::kAndMinus, {{c, d}});
  }
  auto cp = conj_parent_.find(d);
  if (cp != conj_parent_.end()) {
    for (int x : cp->second) {
      int a = id_of(concepts_[x]->a), b = id_of(concepts_[x]->b);
      if (facts_[c].count(a) && facts_[c].count(b)) derive(c, x, el_rule::kAndPlus, {{c, a}, {c, b}});
    }
  }
  auto told = told_.find(d);
  if (told != told_.end()) {
    for (int ax : told->second) derive(c, id_of(axioms_[ax].rhs), el_rule::kSub, {{c, d}}, ax);
  }
  if (dc->kind == ConceptKind::Exists) {
    int e = id_of(dc->a);
    preds_[e].insert({c, d});
    for (int f : std::vector<int>(order_[e])) {
      if (f == bot_) derive(c, bot_, el_rule::kExistsBot, {{c, d}, {e, bot_}});
      auto ex = exists_.find({dc->name, f});
      if (ex != exists_.end()) derive(c, ex->second, el_rule::kExists, {{c, d}, {e, f}});
    }
  }
  // (c, d) as the second premise of R_exists.
  auto pr = preds_.find(c);
  if (pr != preds_.end()) {
    for (const auto& [pc, ex] : std::set<std::pair<int, int>>(pr->second)) {
      auto target = exists_.find({concepts_[ex]->name, d});
      if (target != exists_.end()) derive(pc, target->second, el_rule::kExists, {{pc, ex}, {c, d}});
    }
  }
}

void ElEngine::saturate() {
  while (!queue_.empty()) {
    auto [c, d] = queue_.front();
    queue_.pop_front();
    process(c, d);
  }
}

Classification ElEngine::classification(const std::vector<Concept>& over) const {
  Classification out;
  std::vector<int> ids;
  if (over.empty()) {
    for (int i = 0; i < (int)concepts_.size(); ++i) ids.push_back(i);
  } else {
    for (const auto& c : over) ids.push_back(id_of(c));
  }
  std::set<int> keep(ids.begin(), ids.end());
  for (int c : ids) {
    for (int d : order_[c]) {
      if (keep.count(d)) out.pairs.insert({to_string(concepts_[c]), to_string(concepts_[d])});
    }
  }
  return out;
}

DerivationStructure ElEngine::derivations() const {
  DerivationStructure ds;
  auto label = [&](int c, int d) { return to_string(Gci{concepts_[c], concepts_[d]}); };
  for (int c = 0; c < (int)concepts_.size(); ++c) {
    ds.add_leaf(label(c, c), NodeKind::Gci);
    ds.add_leaf(label(c, top_), NodeKind::Gci);
  }
  for (const auto& g : axioms_) ds.add_leaf(to_string(g), NodeKind::Gci);
  for (const auto& e : edges_) {
    Inference inf{label(e.lhs, e.rhs), {}, e.rule, {}};
    for (const auto& [a, b] : e.premises) inf.premises.push_back(label(a, b));
    if (e.axiom >= 0) inf.premises.push_back(to_string(axioms_[e.axiom]));
    ds.add_edge(inf, NodeKind::Gci);
  }
  return ds;
}

Interpretation ElEngine::countermodel() const {
  Interpretation m;
  std::vector<bool> alive(concepts_.size());
  for (int c = 0; c < (int)concepts_.size(); ++c) {
    alive[c] = !facts_[c].count(bot_);
    if (alive[c]) m.domain.push_back(to_string(concepts_[c]));
  }
  for (int c = 0; c < (int)concepts_.size(); ++c) {
    if (!alive[c]) continue;
    for (int d : order_[c]) {
      const Concept& dc = concepts_[d];
      if (dc->kind == ConceptKind::Name) {
        m.concepts[dc->name].insert(to_string(concepts_[c]));
      } else if (dc->kind == ConceptKind::Exists) {
        int f = id_of(dc->a);
        if (alive[f]) m.roles[dc->name].insert({to_string(concepts_[c]), to_string(dc->a)});
      }
    }
  }
  return m;
}

std::pair<Classification, DerivationStructure> el_classify(const Ontology& o) {
  ElEngine e(o);
  e.saturate();
  return {e.classification(subconcepts(o)), e.derivations()};
}

Interpretation el_countermodel(const Ontology& o, const Concept& c, const Concept& d) {
  ElEngine e(o, {c, d});
  e.saturate();
  if (e.entails(c, d))
    throw std::invalid_argument("subsumption holds: " + to_string(Gci{c, d}));
  return e.countermodel();
}

}  // namespace dlcd
