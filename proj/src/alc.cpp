#include "dlcd/alc.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "dlcd/check.hpp"
#include "dlcd/eld.hpp"

namespace dlcd {

std::string to_string(const Literal& l) {
  switch (l.kind) {
    case Literal::Kind::Pos: return l.name;
    case Literal::Kind::Neg: return "not " + l.name;
    case Literal::Kind::Exists: return l.role + " some " + l.name;
    case Literal::Kind::Forall: return l.role + " all " + l.name;
  }
  return {};
}

NameKind LiteralOrder::kind_of(const std::string& name) const {
  auto it = kinds_.find(name);
  return it == kinds_.end() ? NameKind::User : it->second;
}

std::tuple<int, std::string, std::string, int> LiteralOrder::rank(const Literal& l) const {
  using LK = Literal::Kind;
  NameKind k = kind_of(l.name);
  switch (l.kind) {
    case LK::Exists: return {3, l.role, l.name, 0};
    case LK::Forall: return {4, l.role, l.name, 0};
    case LK::Neg:
      if (k == NameKind::ExistsDefiner) return {1, "", l.name, 0};
      if (k == NameKind::ForallDefiner) return {2, "", l.name, 0};
      return {5, "", l.name, 1};
    case LK::Pos:
      if (k == NameKind::Marker) return {0, "", l.name, 0};
      return {5, "", l.name, 0};
  }
  return {};
}

const Definer* ClauseSet::definer(const std::string& name) const {
  for (const auto& d : definers) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

namespace {

using LK = Literal::Kind;
using Cnf = std::vector<std::vector<Literal>>;

struct Clausifier {
  ClauseSet& cs;
  std::map<std::string, std::string> definer_by_key;
  int current_axiom = -1;

  void emit(std::vector<Literal> lits, ClauseOrigin origin) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    cs.clauses.push_back(std::move(lits));
    cs.origins.push_back(origin);
  }

  std::string definer(bool exists, const std::string& role, const Concept& filler) {
    std::string key = std::string(exists ? "E" : "A") + "|" + role + "|" + to_string(filler);
    auto it = definer_by_key.find(key);
    if (it != definer_by_key.end()) return it->second;
    std::string n = "$d" + std::to_string(cs.definers.size());
    definer_by_key[key] = n;
    cs.definers.push_back({n, exists, role, filler});
    cs.kinds[n] = exists ? NameKind::ExistsDefiner : NameKind::ForallDefiner;
    for (auto k : cnf(filler)) {
      k.push_back({LK::Neg, "", n});
      emit(std::move(k), {ClauseOrigin::Kind::Definer, current_axiom});
    }
    return n;
  }

  Cnf cnf(const Concept& c) {
    switch (c->kind) {
      case ConceptKind::Top: return {};
      case ConceptKind::Bot: return {{}};
      case ConceptKind::Name: return {{{LK::Pos, "", c->name}}};
      case ConceptKind::Not:
        if (c->a->kind != ConceptKind::Name)
          throw std::logic_error("clausification expects negation normal form");
        return {{{LK::Neg, "", c->a->name}}};
      case ConceptKind::And: {
        Cnf a = cnf(c->a), b = cnf(c->b);
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case ConceptKind::Or: {
        Cnf a = cnf(c->a), b = cnf(c->b), out;
        for (const auto& x : a) {
          for (const auto& y : b) {
            auto k = x;
            k.insert(k.end(), y.begin(), y.end());
            out.push_back(std::move(k));
          }
        }
        return out;
      }
      case ConceptKind::Exists:
        return {{{LK::Exists, c->name, definer(true, c->name, c->a)}}};
      case ConceptKind::Forall:
        return {{{LK::Forall, c->name, definer(false, c->name, c->a)}}};
      case ConceptKind::Atom:
        break;
    }
    throw std::logic_error("atoms must be abstracted before clausification");
  }
};

CdKind kind_of_atoms(const std::vector<Concept>& cs) {
  CdKind k = CdKind::None;
  for (const auto& c : cs) {
    std::vector<Concept> subs;
    std::set<std::string> seen;
    collect_subconcepts(c, subs, seen);
    for (const auto& s : subs) {
      if (s->kind == ConceptKind::Atom && !std::holds_alternative<Defined>(*s->atom))
        k = std::holds_alternative<DiffConstraint>(*s->atom) ? CdKind::Diff : CdKind::Lin;
    }
  }
  return k;
}

}  // namespace

ClauseSet alc_clausify(const Ontology& o, const Gci& goal) {
  ClauseSet cs;
  auto [abs, map] = abstract_constraints(o);
  Gci goal_abs = map.abstract(goal);
  cs.map = map;
  cs.goal = goal;
  cs.cd_kind = o.cd_kind != CdKind::None ? o.cd_kind : kind_of_atoms({goal.lhs, goal.rhs});
  for (const auto& n : cs.map.names()) cs.kinds[n] = NameKind::Abstraction;
  cs.kinds[kLhsMarker] = NameKind::Marker;
  cs.kinds[kRhsMarker] = NameKind::Marker;

  Clausifier cl{cs, {}, -1};
  for (size_t i = 0; i < abs.axioms.size(); ++i) {
    cl.current_axiom = static_cast<int>(i);
    const Gci& g = abs.axioms[i];
    for (auto k : cl.cnf(nnf(disj(neg(g.lhs), g.rhs))))
      cl.emit(std::move(k), {ClauseOrigin::Kind::Axiom, static_cast<int>(i)});
  }
  cl.current_axiom = -1;
  for (auto k : cl.cnf(nnf(goal_abs.lhs))) {
    k.push_back({LK::Pos, "", kLhsMarker});
    cl.emit(std::move(k), {ClauseOrigin::Kind::Marker, -1});
  }
  for (auto k : cl.cnf(nnf(neg(goal_abs.rhs)))) {
    k.push_back({LK::Pos, "", kRhsMarker});
    cl.emit(std::move(k), {ClauseOrigin::Kind::Marker, -1});
  }
  return cs;
}

namespace {

class Saturator {
 public:
  Saturator(const ClauseSet& cs, const AlcOptions& opt, bool all_support)
      : cs_(cs), opt_(opt), order_(cs.order()), all_support_(all_support) {}

  AlcResult run() {
    for (size_t i = 0; i < cs_.clauses.size(); ++i) {
      bool marker = cs_.origins[i].kind == ClauseOrigin::Kind::Marker;
      std::vector<int> lits;
      for (const auto& l : cs_.clauses[i]) lits.push_back(intern(l));
      int id = add(std::move(lits), marker || all_support_, {}, static_cast<int>(i), -1);
      if (res_.success) return finish();
      if (id >= 0 && !res_.clauses[id].support) processed_[id] = true;
    }
    while (!queue_.empty()) {
      int g = queue_.front();
      queue_.pop_front();
      if (!res_.clauses[g].alive) continue;
      processed_[g] = true;
      infer(g);
      if (res_.success) break;
      if (cd_dirty_) run_hook();
      if (res_.success) break;
    }
    return finish();
  }

 private:
  const ClauseSet& cs_;
  const AlcOptions& opt_;
  LiteralOrder order_;
  bool all_support_;
  AlcResult res_;

  std::vector<Literal> lits_;
  std::map<Literal, int> lit_ids_;
  std::vector<std::tuple<int, std::string, std::string, int>> rank_;
  std::map<std::vector<int>, int> by_key_;
  std::vector<std::vector<int>> clause_lits_;
  std::vector<char> processed_;
  std::deque<int> queue_;
  std::map<int, std::vector<int>> by_max_;         // max literal -> clauses
  std::map<std::string, std::vector<int>> by_max_exists_;  // role -> clauses
  std::vector<int> negdef_;                         // clauses of negated definers only
  std::map<std::string, std::vector<int>> with_negdef_;  // definer -> clauses containing its negation
  std::set<size_t> cd_support_;  // constraint indices with a positive name in support
  std::set<size_t> cd_targets_;
  bool cd_dirty_ = false;
  std::set<std::string> hooks_done_;
  ImplicationCache imp_cache_;

  int intern(const Literal& l) {
    auto it = lit_ids_.find(l);
    if (it != lit_ids_.end()) return it->second;
    int id = static_cast<int>(lits_.size());
    lits_.push_back(l);
    lit_ids_[l] = id;
    rank_.push_back(order_.rank(l));
    return id;
  }

  bool rank_less(int a, int b) const { return rank_[a] < rank_[b]; }

  bool is_definer(const std::string& n) const {
    NameKind k = order_.kind_of(n);
    return k == NameKind::ExistsDefiner || k == NameKind::ForallDefiner;
  }

  std::optional<size_t> constraint_index(const std::string& n) const {
    if (order_.kind_of(n) != NameKind::Abstraction) return std::nullopt;
    const auto& names = cs_.map.names();
    return static_cast<size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  }

  bool subset(const std::vector<int>& a, const std::vector<int>& b) const {
    return std::includes(b.begin(), b.end(), a.begin(), a.end(),
                         [&](int x, int y) { return rank_less(x, y); });
  }

  void normalize(std::vector<int>& lits) const {
    std::sort(lits.begin(), lits.end(), [&](int x, int y) { return rank_less(x, y); });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  }

  bool tautology(const std::vector<int>& lits) const {
    for (int l : lits) {
      const Literal& x = lits_[l];
      if (x.kind != LK::Pos) continue;
      auto it = lit_ids_.find({LK::Neg, "", x.name});
      if (it != lit_ids_.end() && std::binary_search(lits.begin(), lits.end(), it->second,
                                                     [&](int p, int q) { return rank_less(p, q); }))
        return true;
    }
    return false;
  }

  bool is_success(const std::vector<int>& lits) const {
    for (int l : lits) {
      const Literal& x = lits_[l];
      if (x.kind != LK::Pos || order_.kind_of(x.name) != NameKind::Marker) return false;
    }
    return true;
  }

  void make_support(int id) {
    AlcClause& c = res_.clauses[id];
    if (c.support || !c.alive) return;
    c.support = true;
    queue_.push_back(id);
    for (int l : clause_lits_[id]) {
      const Literal& x = lits_[l];
      if (x.kind == LK::Exists || x.kind == LK::Forall) {
        auto it = with_negdef_.find(x.name);
        if (it != with_negdef_.end()) {
          for (int other : std::vector<int>(it->second)) make_support(other);
        }
        pulled_.insert(x.name);
      } else if (x.kind == LK::Pos) {
        if (auto ci = constraint_index(x.name)) {
          if (cd_support_.insert(*ci).second) cd_dirty_ = true;
        }
      }
    }
  }
  std::set<std::string> pulled_;  // definers whose negations are support

  // Adds a clause unless it is a tautology, a duplicate or subsumed.
  // Returns the id of the new clause or -1.
  int add(std::vector<int> lits, bool support, const AlcDerivation& der, int input, int hook) {
    normalize(lits);
    if (tautology(lits)) return -1;
    auto dup = by_key_.find(lits);
    if (dup != by_key_.end()) {
      AlcClause& c = res_.clauses[dup->second];
      if (!der.rule.empty()) c.derivations.push_back(der);
      if (support) make_support(dup->second);
      return -1;
    }
    for (size_t i = 0; i < res_.clauses.size(); ++i) {
      if (res_.clauses[i].alive && subset(clause_lits_[i], lits)) {
        if (support) make_support(static_cast<int>(i));
        return -1;
      }
    }
    for (size_t i = 0; i < res_.clauses.size(); ++i) {
      if (res_.clauses[i].alive && subset(lits, clause_lits_[i])) res_.clauses[i].alive = false;
    }
    int id = static_cast<int>(res_.clauses.size());
    if (res_.clauses.size() >= opt_.clause_cap)
      throw ResourceLimitError("clause limit of " + std::to_string(opt_.clause_cap) + " reached");
    AlcClause c;
    for (int l : lits) c.lits.push_back(lits_[l]);
    c.input = input;
    c.hook = hook;
    if (!der.rule.empty()) c.derivations.push_back(der);
    res_.clauses.push_back(std::move(c));
    clause_lits_.push_back(lits);
    processed_.push_back(0);
    by_key_[lits] = id;

    bool all_negdef = true;
    for (int l : lits) {
      const Literal& x = lits_[l];
      if (x.kind == LK::Neg && is_definer(x.name)) {
        with_negdef_[x.name].push_back(id);
        if (pulled_.count(x.name)) support = true;
      } else {
        all_negdef = false;
      }
      if (x.kind == LK::Neg) {
        if (auto ci = constraint_index(x.name)) {
          if (cd_targets_.insert(*ci).second && !cd_support_.empty()) cd_dirty_ = true;
        }
      }
    }
    if (!lits.empty()) {
      by_max_[lits.back()].push_back(id);
      const Literal& m = lits_[lits.back()];
      if (m.kind == LK::Exists) by_max_exists_[m.role].push_back(id);
    }
    if (all_negdef && !lits.empty()) negdef_.push_back(id);
    if (is_success(lits)) {
      res_.success = true;
      res_.success_clause = id;
    }
    if (support) make_support(id);
    return id;
  }

  bool usable(int id) const { return res_.clauses[id].alive && processed_[id]; }

  void conclude(const std::string& rule, const std::vector<int>& premises,
                const std::vector<std::vector<int>>& parts) {
    bool any_support = false;
    for (int p : premises) any_support = any_support || res_.clauses[p].support;
    if (!any_support) return;
    std::vector<int> lits;
    for (const auto& part : parts) lits.insert(lits.end(), part.begin(), part.end());
    ++res_.inferences;
    add(std::move(lits), true, {rule, premises}, -1, -1);
  }

  static std::vector<int> without_max(const std::vector<int>& lits) {
    return std::vector<int>(lits.begin(), lits.end() - 1);
  }

  void infer(int g) {
    const auto& gl = clause_lits_[g];
    if (gl.empty()) return;
    const Literal& m = lits_[gl.back()];
    if ((m.kind == LK::Pos || m.kind == LK::Neg) && order_.kind_of(m.name) != NameKind::Marker &&
        !is_definer(m.name)) {
      Literal comp{m.kind == LK::Pos ? LK::Neg : LK::Pos, "", m.name};
      auto ci = lit_ids_.find(comp);
      if (ci != lit_ids_.end()) {
        auto it = by_max_.find(ci->second);
        if (it != by_max_.end()) {
          for (int p : std::vector<int>(it->second)) {
            if (!usable(p) || !res_.clauses[g].alive) continue;
            int pos = m.kind == LK::Pos ? g : p, negc = m.kind == LK::Pos ? p : g;
            conclude("A1", {pos, negc}, {without_max(clause_lits_[pos]), without_max(clause_lits_[negc])});
            if (res_.success) return;
          }
        }
      }
    }
    if (m.kind == LK::Exists) {
      for (int n : std::vector<int>(negdef_)) {
        if (usable(n)) role_step(g, n, g);
        if (res_.success) return;
      }
    } else if (m.kind == LK::Forall) {
      auto nit = with_negdef_.find(m.name);
      if (nit == with_negdef_.end()) return;
      auto eit = by_max_exists_.find(m.role);
      if (eit == by_max_exists_.end()) return;
      for (int n : std::vector<int>(nit->second)) {
        if (!usable(n) || !is_negdef(n)) continue;
        for (int e : std::vector<int>(eit->second)) {
          if (usable(e)) role_step(e, n, g);
          if (res_.success) return;
        }
      }
    }
    if (is_negdef(g)) {
      for (auto& [role, es] : by_max_exists_) {
        for (int e : std::vector<int>(es)) {
          if (usable(e)) role_step(e, g, g);
          if (res_.success) return;
        }
      }
    }
  }

  bool is_negdef(int id) const {
    const auto& ls = clause_lits_[id];
    if (ls.empty()) return false;
    for (int l : ls) {
      if (lits_[l].kind != LK::Neg || !is_definer(lits_[l].name)) return false;
    }
    return true;
  }

  // r1/r2 with existential premise e and final clause n; g must take part.
  void role_step(int e, int n, int g) {
    const Literal& ex = lits_[clause_lits_[e].back()];
    std::vector<std::string> needed;
    bool r2 = false;
    for (int l : clause_lits_[n]) {
      if (lits_[l].name == ex.name) {
        r2 = true;
      } else {
        needed.push_back(lits_[l].name);
      }
    }
    if (!r2 && needed.empty()) return;
    std::vector<std::vector<int>> cands;
    for (const auto& d : needed) {
      auto li = lit_ids_.find({LK::Forall, ex.role, d});
      if (li == lit_ids_.end()) return;
      auto it = by_max_.find(li->second);
      if (it == by_max_.end()) return;
      std::vector<int> ok;
      for (int f : it->second) {
        if (usable(f)) ok.push_back(f);
      }
      if (ok.empty()) return;
      cands.push_back(std::move(ok));
    }
    std::vector<int> pick(cands.size());
    std::function<void(size_t)> rec = [&](size_t i) {
      if (res_.success) return;
      if (i == cands.size()) {
        std::vector<int> premises{e};
        premises.insert(premises.end(), pick.begin(), pick.end());
        premises.push_back(n);
        if (std::find(premises.begin(), premises.end(), g) == premises.end()) return;
        std::vector<std::vector<int>> parts{without_max(clause_lits_[e])};
        for (int f : pick) parts.push_back(without_max(clause_lits_[f]));
        conclude(r2 ? "r2" : "r1", premises, parts);
        return;
      }
      for (int f : cands[i]) {
        pick[i] = f;
        rec(i + 1);
      }
    };
    rec(0);
  }

  void run_hook() {
    cd_dirty_ = false;
    if (cs_.cd_kind == CdKind::None || cd_support_.empty()) return;
    const auto& all = cs_.map.constraints();
    std::vector<size_t> dlist(cd_support_.begin(), cd_support_.end());
    std::vector<Constraint> ds, targets;
    for (size_t i : dlist) ds.push_back(all[i]);
    for (size_t i : cd_targets_) targets.push_back(all[i]);
    for (const auto& imp : cd_minimal_implications(cs_.cd_kind, ds, targets, &imp_cache_)) {
      std::string key;
      std::vector<int> lits;
      for (const auto& p : imp.premises) {
        const std::string& n = *cs_.map.lookup(p);
        key += n + ",";
        lits.push_back(intern({LK::Neg, "", n}));
      }
      key += "->";
      if (imp.conclusion) {
        const std::string& n = *cs_.map.lookup(*imp.conclusion);
        key += n;
        lits.push_back(intern({LK::Pos, "", n}));
      }
      if (!hooks_done_.insert(key).second) continue;
      CdHook h{imp.premises, imp.conclusion, {}};
      h.ds = imp.conclusion ? cd_entails(cs_.cd_kind, imp.premises, *imp.conclusion).ds
                            : cd_unsat(cs_.cd_kind, imp.premises).ds;
      int hid = static_cast<int>(res_.hooks.size());
      res_.hooks.push_back(std::move(h));
      int id = add(std::move(lits), false, {}, -1, hid);
      if (res_.success) return;
      if (id >= 0 && !res_.clauses[id].support) queue_.push_back(id);
    }
  }

  AlcResult finish() { return std::move(res_); }
};

Concept literal_concept(const ClauseSet& cs, const Literal& l) {
  auto filler = [&](const std::string& n) {
    const Definer* d = cs.definer(n);
    if (!d) throw std::logic_error("unknown definer " + n);
    return cs.map.concretize(d->filler);
  };
  auto base = [&](const std::string& n) -> Concept {
    if (n == kLhsMarker) return neg(cs.goal.lhs);
    if (n == kRhsMarker) return cs.goal.rhs;
    if (cs.map.is_abstraction(n)) return atom(cs.map.constraint_of(n));
    if (cs.definer(n)) return filler(n);
    return name(n);
  };
  switch (l.kind) {
    case LK::Pos: return base(l.name);
    case LK::Neg: return neg(base(l.name));
    case LK::Exists: return some(l.role, filler(l.name));
    case LK::Forall: return all(l.role, filler(l.name));
  }
  return top();
}

}  // namespace

AlcResult alc_saturate(const ClauseSet& cs, const AlcOptions& opt) {
  AlcResult r = Saturator(cs, opt, false).run();
  if (!r.success && opt.fallback) {
    r = Saturator(cs, opt, true).run();
    r.fallback_used = true;
  }
  return r;
}

Gci clause_to_gci(const ClauseSet& cs, const std::vector<Literal>& lits) {
  std::vector<Concept> lhs, rhs;
  for (const auto& l : lits) {
    Concept x = literal_concept(cs, l);
    if (x->kind == ConceptKind::Not) {
      lhs.push_back(x->a);
    } else if (x->kind == ConceptKind::Forall && x->a->kind == ConceptKind::Bot) {
      lhs.push_back(some(x->name, top()));
    } else if (x->kind == ConceptKind::Exists && x->a->kind == ConceptKind::Not) {
      lhs.push_back(all(x->name, x->a->a));
    } else if (x->kind == ConceptKind::Forall && x->a->kind == ConceptKind::Not) {
      lhs.push_back(some(x->name, x->a->a));
    } else {
      rhs.push_back(x);
    }
  }
  return Gci{lhs.empty() ? top() : conj_all(lhs), disj_all(rhs)};
}

bool alc_entails(const Ontology& o, const Gci& goal, const AlcOptions& opt) {
  return alc_saturate(alc_clausify(o, goal), opt).success;
}

Proof alc_prove(const Ontology& o, const Gci& goal, ProofMetric metric, const AlcOptions& opt) {
  ClauseSet cs = alc_clausify(o, goal);
  AlcResult r = alc_saturate(cs, opt);
  if (!r.success) throw NotDerivableError("not entailed: " + to_string(goal));

  DerivationStructure ds;
  for (const auto& g : o.axioms) ds.add_leaf(to_string(g), NodeKind::Gci);
  std::vector<Gci> gcis;
  std::vector<std::string> labels;
  for (const auto& c : r.clauses) {
    gcis.push_back(clause_to_gci(cs, c.lits));
    labels.push_back(to_string(gcis.back()));
  }
  for (size_t i = 0; i < r.clauses.size(); ++i) {
    const AlcClause& c = r.clauses[i];
    if (is_tautology(gcis[i])) ds.add_leaf(labels[i], NodeKind::Gci);
    if (c.input >= 0) {
      const ClauseOrigin& origin = cs.origins[c.input];
      if (origin.kind == ClauseOrigin::Kind::Axiom) {
        ds.add_edge({labels[i], {to_string(o.axioms[origin.axiom])}, "clausify", {}}, NodeKind::Gci);
      }
    }
    if (c.hook >= 0) {
      const CdHook& h = r.hooks[c.hook];
      add_contextualized(ds, h.ds, gcis[i].lhs);
      for (const auto& leaf : h.ds.leaves()) {
        ds.add_leaf(to_string(gcis[i].lhs) + " SubClassOf [" + leaf + "]", NodeKind::Gci);
      }
    }
    for (const auto& d : c.derivations) {
      Inference inf{labels[i], {}, d.rule, {}};
      for (int p : d.premises) inf.premises.push_back(labels[p]);
      ds.add_edge(inf, NodeKind::Gci);
    }
  }
  std::string goal_label = to_string(goal);
  const std::string& done = labels[r.success_clause];
  if (done != goal_label) ds.add_edge({goal_label, {done}, "weaken", {}}, NodeKind::Gci);
  Proof p = extract_proof(ds, goal_label, metric);
  p.goal = goal_label;
  return p;
}

}  // namespace dlcd
