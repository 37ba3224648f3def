#include "dlcd/eld.hpp"

#include <map>
#include <set>

namespace dlcd {

namespace {

struct ContextResult {
  bool unsat = false;
  DerivationStructure unsat_ds;
  std::vector<std::pair<size_t, DerivationStructure>> entailed;  // constraint index, ds
};

std::string label_in_context(const std::string& context, const std::string& l) {
  return context + " SubClassOf " + (l == "Bot" ? std::string("Bot") : "[" + l + "]");
}

}  // namespace

void add_contextualized(DerivationStructure& target, const DerivationStructure& cd,
                        const Concept& context) {
  const std::string& ctx = to_string(context);
  for (const auto& [v, k] : cd.vertices()) target.add_vertex(label_in_context(ctx, v), NodeKind::Gci);
  for (const auto& e : cd.edges()) {
    Inference inf{label_in_context(ctx, e.conclusion), {}, e.rule, e.label};
    for (const auto& p : e.premises) inf.premises.push_back(label_in_context(ctx, p));
    target.add_edge(inf, NodeKind::Gci);
  }
}

EldResult eld_classify(const Ontology& o, const std::vector<Concept>& extra) {
  EldResult r;
  auto [abs, map] = abstract_constraints(o);
  std::vector<Concept> extra_abs;
  for (const auto& c : extra) extra_abs.push_back(map.abstract(c));
  r.map = map;
  CdKind kind = o.cd_kind;
  if (kind == CdKind::None) {
    for (const auto& c : extra) {
      std::vector<Concept> subs;
      std::set<std::string> seen;
      collect_subconcepts(c, subs, seen);
      for (const auto& s : subs) {
        if (s->kind == ConceptKind::Atom) {
          kind = std::holds_alternative<DiffConstraint>(*s->atom) ? CdKind::Diff : CdKind::Lin;
        }
      }
    }
  }

  std::vector<Concept> contexts = subconcepts(abs);
  {
    std::set<std::string> seen;
    for (const auto& c : contexts) seen.insert(c->key);
    for (const auto& c : extra_abs) collect_subconcepts(c, contexts, seen);
  }
  const auto& constraints = r.map.constraints();
  r.bound = contexts.size() * constraints.size();

  r.engine = std::make_shared<ElEngine>(abs, extra_abs);
  ElEngine& engine = *r.engine;
  std::vector<int> name_ids;
  for (const auto& n : r.map.names()) name_ids.push_back(engine.add_concept(name(n)));
  std::vector<int> context_ids;
  for (const auto& c : contexts) context_ids.push_back(engine.id_of(c));
  int bot_id = engine.id_of(bot());

  std::map<std::string, ContextResult> cache;
  std::set<std::string> bridges;
  for (const auto& g : abs.axioms) bridges.insert(to_string(g));  // never re-added

  // CL(O') is compared on the contexts; bridge conjunctions only add
  // bookkeeping facts.
  std::set<int> relevant(context_ids.begin(), context_ids.end());
  relevant.insert(name_ids.begin(), name_ids.end());
  auto cl_size = [&] {
    size_t n = 0;
    for (int c : context_ids) {
      for (int d : engine.supers(c)) n += relevant.count(d);
    }
    return n;
  };
  size_t known = static_cast<size_t>(-1);
  // Without constraints O' is O^-D and one saturation is the whole answer.
  if (constraints.empty()) engine.saturate();
  while (!constraints.empty()) {
    engine.saturate();
    size_t now = cl_size();
    if (now == known) break;
    known = now;
    ++r.iterations;

    std::vector<Gci> fresh;
    for (int c : context_ids) {
      if (engine.has(c, bot_id)) continue;
      std::vector<size_t> dc;
      for (size_t i = 0; i < constraints.size(); ++i) {
        if (engine.has(c, name_ids[i])) dc.push_back(i);
      }
      std::string key;
      for (size_t i : dc) key += std::to_string(i) + ",";
      auto it = cache.find(key);
      if (it == cache.end()) {
        ContextResult res;
        std::vector<Constraint> ds;
        for (size_t i : dc) ds.push_back(constraints[i]);
        if (kind == CdKind::Diff) {
          DiffState st = diff_saturate(ds);
          res.unsat = st.bot;
          if (res.unsat) {
            res.unsat_ds = std::move(st.ds);
          } else {
            std::set<size_t> in(dc.begin(), dc.end());
            for (size_t i = 0; i < constraints.size(); ++i) {
              if (in.count(i)) continue;
              CdVerdict v = diff_entails(st, constraints[i]);
              if (v.verdict) res.entailed.push_back({i, std::move(v.ds)});
            }
          }
          it = cache.emplace(key, std::move(res)).first;
        }
      }
      if (it == cache.end()) {
        ContextResult res;
        std::vector<Constraint> ds;
        for (size_t i : dc) ds.push_back(constraints[i]);
        CdVerdict u = cd_unsat(kind, ds);
        res.unsat = u.verdict;
        if (res.unsat) {
          res.unsat_ds = std::move(u.ds);
        } else {
          std::set<size_t> in(dc.begin(), dc.end());
          for (size_t i = 0; i < constraints.size(); ++i) {
            if (in.count(i)) continue;
            CdVerdict v = cd_entails(kind, ds, constraints[i]);
            if (v.verdict) res.entailed.push_back({i, std::move(v.ds)});
          }
        }
        it = cache.emplace(key, std::move(res)).first;
      }
      const ContextResult& res = it->second;
      std::vector<Concept> names;
      std::vector<Constraint> premises;
      for (size_t i : dc) {
        names.push_back(name(r.map.names()[i]));
        premises.push_back(constraints[i]);
      }
      Concept lhs = conj_all(names);
      auto add_bridge = [&](const Gci& g, std::optional<Constraint> concl,
                            const DerivationStructure& ds) {
        if (!bridges.insert(to_string(g)).second) return;
        BridgeProof b{g, premises, concl, concl ? cd_label(*concl) : "Bot", ds, {}};
        b.proof = extract_proof(b.ds, b.goal, ProofMetric::Size);
        r.registry.push_back(std::move(b));
        fresh.push_back(g);
      };
      if (res.unsat) {
        add_bridge(Gci{lhs, bot()}, std::nullopt, res.unsat_ds);
      } else {
        for (const auto& [i, ds] : res.entailed)
          add_bridge(Gci{lhs, name(r.map.names()[i])}, constraints[i], ds);
      }
    }
    engine.add_axioms(fresh);
  }

  r.final_ontology.axioms = engine.axioms();
  r.final_ontology.cd_kind = CdKind::None;
  std::vector<Concept> originals = subconcepts(o);
  {
    std::set<std::string> seen;
    for (const auto& c : originals) seen.insert(c->key);
    for (const auto& c : extra) collect_subconcepts(c, originals, seen);
  }
  for (const auto& c : originals) {
    int ci = engine.id_of(r.map.abstract(c));
    for (const auto& d : originals) {
      if (engine.has(ci, engine.id_of(r.map.abstract(d))))
        r.classification.pairs.insert({to_string(c), to_string(d)});
    }
  }
  return r;
}

bool eld_entails(const Ontology& o, const Gci& goal) {
  EldResult r = eld_classify(o, {goal.lhs, goal.rhs});
  return r.classification.contains(goal.lhs, goal.rhs);
}

Proof eld_prove(const Ontology& o, const Gci& goal, ProofMetric metric) {
  EldResult r = eld_classify(o, {goal.lhs, goal.rhs});
  const ElEngine& engine = *r.engine;
  int gl = engine.id_of(r.map.abstract(goal.lhs));
  int gr = engine.id_of(r.map.abstract(goal.rhs));
  if (!engine.has(gl, gr)) throw NotDerivableError("not entailed: " + to_string(goal));

  std::vector<Concept> concrete;
  for (size_t i = 0; i < engine.size(); ++i) concrete.push_back(r.map.concretize(engine.concept_at(i)));
  auto label = [&](int c, int d) { return to_string(Gci{concrete[c], concrete[d]}); };
  int top_id = engine.id_of(top());

  std::map<std::string, const BridgeProof*> bridge_of;
  for (const auto& b : r.registry) bridge_of[to_string(b.axiom)] = &b;

  DerivationStructure ds;
  for (int c = 0; c < (int)engine.size(); ++c) {
    ds.add_leaf(label(c, c), NodeKind::Gci);
    ds.add_leaf(label(c, top_id), NodeKind::Gci);
  }
  for (const auto& g : o.axioms) ds.add_leaf(to_string(r.map.concretize(r.map.abstract(g))), NodeKind::Gci);
  for (const auto& e : engine.edges()) {
    if (e.axiom >= 0) {
      auto b = bridge_of.find(to_string(engine.axioms()[e.axiom]));
      if (b != bridge_of.end()) {
        add_contextualized(ds, b->second->ds, concrete[e.lhs]);
        continue;
      }
    }
    Inference inf{label(e.lhs, e.rhs), {}, e.rule, {}};
    for (const auto& [a, b] : e.premises) inf.premises.push_back(label(a, b));
    if (e.axiom >= 0) inf.premises.push_back(to_string(r.map.concretize(engine.axioms()[e.axiom])));
    ds.add_edge(inf, NodeKind::Gci);
  }
  Proof p = extract_proof(ds, label(gl, gr), metric);
  p.goal = to_string(goal);
  return p;
}

}  // namespace dlcd
