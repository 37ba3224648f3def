#include "dlcd/check.hpp"

#include <functional>
#include <set>

#include "dlcd/diff.hpp"
#include "dlcd/el.hpp"

namespace dlcd {

namespace {

using K = DiffConstraint::Kind;

// Propositional variable for a literal concept in NNF; the flag is its sign.
std::pair<std::string, bool> prop_literal(const Concept& c) {
  switch (c->kind) {
    case ConceptKind::Not:
      return {canon_key(c->a), false};
    case ConceptKind::Forall:
      return {canon_key(some(c->name, nnf(neg(c->a)))), false};
    default:
      return {canon_key(c), true};
  }
}

bool is_literal(const Concept& c) {
  return c->kind != ConceptKind::And && c->kind != ConceptKind::Or &&
         c->kind != ConceptKind::Top && c->kind != ConceptKind::Bot;
}

// Tableau over formulas in NNF.
bool sat(std::vector<Concept> todo, std::map<std::string, bool> lits) {
  std::vector<Concept> ors;
  while (!todo.empty()) {
    Concept c = todo.back();
    todo.pop_back();
    switch (c->kind) {
      case ConceptKind::Top:
        break;
      case ConceptKind::Bot:
        return false;
      case ConceptKind::And:
        todo.push_back(c->a);
        todo.push_back(c->b);
        break;
      case ConceptKind::Or:
        ors.push_back(c);
        break;
      default: {
        auto [k, s] = prop_literal(c);
        auto it = lits.find(k);
        if (it == lits.end()) {
          lits[k] = s;
        } else if (it->second != s) {
          return false;
        }
      }
    }
  }
  auto holds = [&](const Concept& c) {
    if (c->kind == ConceptKind::Top) return true;
    if (!is_literal(c)) return false;
    auto [k, s] = prop_literal(c);
    auto it = lits.find(k);
    return it != lits.end() && it->second == s;
  };
  for (size_t i = 0; i < ors.size(); ++i) {
    const Concept& o = ors[i];
    if (holds(o->a) || holds(o->b)) continue;
    std::vector<Concept> rest(ors.begin() + i + 1, ors.end());
    for (const Concept& pick : {o->a, o->b}) {
      std::vector<Concept> next = rest;
      next.push_back(pick);
      if (sat(next, lits)) return true;
    }
    return false;
  }
  return true;
}

void flatten_or(const Concept& c, std::map<std::string, Concept>& out) {
  if (c->kind == ConceptKind::Or) {
    flatten_or(c->a, out);
    flatten_or(c->b, out);
  } else if (c->kind != ConceptKind::Bot) {
    out.emplace(canon_key(c), c);
  }
}

std::map<std::string, Concept> flat(const Concept& c) {
  std::map<std::string, Concept> out;
  flatten_or(nnf(c), out);
  return out;
}

bool subset_of(const std::map<std::string, Concept>& a,
               const std::map<std::string, Concept>& b) {
  for (const auto& [k, v] : a) {
    if (!b.count(k)) return false;
  }
  return true;
}

std::optional<LinConstraint> as_lin(const Constraint& c) {
  if (auto l = std::get_if<LinConstraint>(&c)) return *l;
  if (auto d = std::get_if<DiffConstraint>(&c)) {
    if (d->kind == K::Eq) {
      LinConstraint l;
      l.coeffs[d->x] = 1;
      l.rhs = d->q;
      return l;
    }
  }
  return std::nullopt;
}

std::optional<DiffConstraint> as_diff(const Constraint& c) {
  if (auto d = std::get_if<DiffConstraint>(&c)) return *d;
  if (auto l = std::get_if<LinConstraint>(&c)) {
    // A lin atom 1 x = q is the shared form x = q.
    if (l->coeffs.size() == 1 && l->coeffs.begin()->second == 1)
      return DiffConstraint::eq(l->coeffs.begin()->first, l->rhs);
    if (l->coeffs.empty() && l->rhs != 0) return DiffConstraint::bot();
  }
  return std::nullopt;
}

std::string str(const Constraint& c) { return is_bot(c) ? "Bot" : to_string(c); }

std::optional<std::string> check_lin(const std::vector<Constraint>& premises,
                                     const Constraint& conclusion,
                                     const std::vector<std::string>& label) {
  if (label.size() != premises.size()) return "label arity differs from premise count";
  LinConstraint sum;
  for (size_t i = 0; i < premises.size(); ++i) {
    auto l = as_lin(premises[i]);
    if (!l) return "premise " + str(premises[i]) + " is not a linear equation";
    Rational m;
    try {
      m = make_rational(label[i]);
    } catch (const std::exception&) {
      return "unreadable multiplier " + label[i];
    }
    sum = lin_add(sum, lin_scale(*l, m));
  }
  if (is_bot(conclusion)) {
    if (sum.coeffs.empty() && sum.rhs != 0) return std::nullopt;
    return "combination " + to_string(sum) + " is not a contradiction";
  }
  auto c = as_lin(conclusion);
  if (!c) return "conclusion is not a linear equation";
  if (sum == *c) return std::nullopt;
  return "combination gives " + to_string(sum) + ", not " + to_string(*c);
}

}  // namespace

std::map<std::string, Concept> clause_view(const Gci& g) {
  return flat(disj(neg(g.lhs), g.rhs));
}

bool is_tautology(const Gci& g) {
  return !sat({nnf(g.lhs), nnf(neg(g.rhs))}, {});
}

bool prop_entails(const Gci& premise, const Gci& conclusion) {
  return !sat({nnf(disj(neg(premise.lhs), premise.rhs)), nnf(conclusion.lhs),
               nnf(neg(conclusion.rhs))},
              {});
}

bool is_cd_rule(const std::string& rule) {
  static const std::set<std::string> rules = {
      kLinRule,         diff_rule::kNeq,  diff_rule::kPlus,    diff_rule::kZero,
      diff_rule::kNeqPlus, diff_rule::kMinus, diff_rule::kFlip, diff_rule::kLt,
      diff_rule::kEq,   diff_rule::kGt,   diff_rule::kBot,     diff_rule::kGtPlus,
      diff_rule::kGtMinus, "R_defined"};
  return rules.count(rule) > 0;
}

std::optional<std::string> check_cd_step(const std::string& rule,
                                         const std::vector<Constraint>& premises,
                                         const Constraint& conclusion,
                                         const std::vector<std::string>& label) {
  if (rule == kLinRule) return check_lin(premises, conclusion, label);
  auto arity = [&](size_t n) -> std::optional<std::string> {
    if (premises.size() != n) return rule + " expects " + std::to_string(n) + " premises";
    return std::nullopt;
  };
  if (rule == "R_defined") {
    if (auto e = arity(1)) return e;
    auto d = std::get_if<Defined>(&conclusion);
    if (!d) return "conclusion is not a definedness atom";
    if (is_bot(premises[0]) || !variables(premises[0]).count(d->var))
      return "premise does not mention " + d->var;
    return std::nullopt;
  }
  if (rule == diff_rule::kBot) {
    if (auto e = arity(1)) return e;
    if (!is_bot(premises[0])) return "premise is not Bot";
    return std::nullopt;
  }
  if (rule == diff_rule::kZero) {
    if (auto e = arity(1)) return e;
    auto c = as_diff(conclusion);
    if (!c || c->kind != K::Diff || c->x != c->y || c->q != 0) return "conclusion is not x + 0 = x";
    if (!variables(premises[0]).count(c->x)) return "premise does not mention " + c->x;
    return std::nullopt;
  }
  std::vector<DiffConstraint> p;
  for (const auto& c : premises) {
    auto d = as_diff(c);
    if (!d) return "premise " + str(c) + " is not a difference constraint";
    p.push_back(*d);
  }
  auto concl = as_diff(conclusion);
  if (!concl) return "conclusion is not a difference constraint";
  const DiffConstraint& c = *concl;
  auto fail = [&](const std::string& why) -> std::optional<std::string> { return rule + ": " + why; };
  auto is = [](const DiffConstraint& d, K k) { return d.kind == k; };

  if (rule == diff_rule::kNeq) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Eq) || !is(p[1], K::Eq) || p[0].x != p[1].x || p[0].q == p[1].q ||
        !is(c, K::Bot))
      return fail("needs x = q, x = p with q != p and conclusion Bot");
    return std::nullopt;
  }
  if (rule == diff_rule::kNeqPlus) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Diff) || !is(p[1], K::Diff) || p[0].x != p[1].x || p[0].y != p[1].y ||
        p[0].q == p[1].q || !is(c, K::Bot))
      return fail("needs x + q = y, x + p = y with q != p and conclusion Bot");
    return std::nullopt;
  }
  if (rule == diff_rule::kLt) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Eq) || !is(p[1], K::Gt) || p[0].x != p[1].x || p[0].q > p[1].q ||
        !is(c, K::Bot))
      return fail("needs x = q, x > p with q <= p and conclusion Bot");
    return std::nullopt;
  }
  if (rule == diff_rule::kPlus) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Diff) || !is(p[1], K::Diff) || p[0].y != p[1].x ||
        !(c == DiffConstraint::diff(p[0].x, p[0].q + p[1].q, p[1].y)))
      return fail("conclusion must be x + (q + p) = z");
    return std::nullopt;
  }
  if (rule == diff_rule::kMinus) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Eq) || !is(p[1], K::Eq) ||
        !(c == DiffConstraint::diff(p[0].x, p[1].q - p[0].q, p[1].x)))
      return fail("conclusion must be x + (p - q) = y");
    return std::nullopt;
  }
  if (rule == diff_rule::kFlip) {
    if (auto e = arity(1)) return e;
    if (!is(p[0], K::Diff) || !(c == DiffConstraint::diff(p[0].y, -p[0].q, p[0].x)))
      return fail("conclusion must be y + (-q) = x");
    return std::nullopt;
  }
  if (rule == diff_rule::kEq) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Eq) || !is(p[1], K::Diff) || p[0].x != p[1].x ||
        !(c == DiffConstraint::eq(p[1].y, p[0].q + p[1].q)))
      return fail("conclusion must be y = q + p");
    return std::nullopt;
  }
  if (rule == diff_rule::kGt) {
    if (auto e = arity(2)) return e;
    if (!is(p[0], K::Gt) || !is(p[1], K::Diff) || p[0].x != p[1].x ||
        !(c == DiffConstraint::gt(p[1].y, p[0].q + p[1].q)))
      return fail("conclusion must be y > q + p");
    return std::nullopt;
  }
  if (rule == diff_rule::kGtPlus) {
    if (auto e = arity(1)) return e;
    if (!is(p[0], K::Eq) || !is(c, K::Gt) || p[0].x != c.x || !(p[0].q > c.q))
      return fail("needs x = p and conclusion x > q with p > q");
    return std::nullopt;
  }
  if (rule == diff_rule::kGtMinus) {
    if (auto e = arity(1)) return e;
    if (!is(p[0], K::Gt) || !is(c, K::Gt) || p[0].x != c.x || !(p[0].q >= c.q))
      return fail("needs x > p and conclusion x > q with p >= q");
    return std::nullopt;
  }
  return "unknown concrete-domain rule " + rule;
}

namespace {

bool same(const Concept& a, const Concept& b) { return canon_key(a) == canon_key(b); }

std::optional<std::string> check_el(const std::string& rule, const std::vector<Gci>& p,
                                    const Gci& c) {
  auto arity = [&](size_t n) -> std::optional<std::string> {
    if (p.size() != n) return rule + " expects " + std::to_string(n) + " premises";
    return std::nullopt;
  };
  auto fail = [&](const std::string& why) -> std::optional<std::string> { return rule + ": " + why; };
  if (rule == el_rule::kSub) {
    if (auto e = arity(2)) return e;
    if (!same(p[0].lhs, c.lhs) || !same(p[0].rhs, p[1].lhs) || !same(p[1].rhs, c.rhs))
      return fail("premises C SubClassOf D, D SubClassOf E do not give the conclusion");
    return std::nullopt;
  }
  if (rule == el_rule::kAndPlus) {
    if (auto e = arity(2)) return e;
    if (c.rhs->kind != ConceptKind::And || !same(p[0].lhs, c.lhs) || !same(p[1].lhs, c.lhs) ||
        !same(p[0].rhs, c.rhs->a) || !same(p[1].rhs, c.rhs->b))
      return fail("conclusion must conjoin the premise right-hand sides");
    return std::nullopt;
  }
  if (rule == el_rule::kAndMinus) {
    if (auto e = arity(1)) return e;
    if (p[0].rhs->kind != ConceptKind::And || !same(p[0].lhs, c.lhs) ||
        !(same(p[0].rhs->a, c.rhs) || same(p[0].rhs->b, c.rhs)))
      return fail("conclusion must be a conjunct of the premise");
    return std::nullopt;
  }
  if (rule == el_rule::kExists) {
    if (auto e = arity(2)) return e;
    if (p[0].rhs->kind != ConceptKind::Exists || c.rhs->kind != ConceptKind::Exists ||
        p[0].rhs->name != c.rhs->name || !same(p[0].lhs, c.lhs) ||
        !same(p[0].rhs->a, p[1].lhs) || !same(p[1].rhs, c.rhs->a))
      return fail("premises C SubClassOf some r.D, D SubClassOf E must give C SubClassOf some r.E");
    return std::nullopt;
  }
  if (rule == el_rule::kExistsBot) {
    if (auto e = arity(2)) return e;
    if (p[0].rhs->kind != ConceptKind::Exists || !same(p[0].lhs, c.lhs) ||
        !same(p[0].rhs->a, p[1].lhs) || p[1].rhs->kind != ConceptKind::Bot ||
        c.rhs->kind != ConceptKind::Bot)
      return fail("premises C SubClassOf some r.D, D SubClassOf Bot must give C SubClassOf Bot");
    return std::nullopt;
  }
  if (rule == el_rule::kExfalso) {
    if (auto e = arity(1)) return e;
    if (p[0].rhs->kind != ConceptKind::Bot || !same(p[0].lhs, c.lhs))
      return fail("premise must be C SubClassOf Bot");
    return std::nullopt;
  }
  return std::nullopt;
}

// A1: resolution on a literal X of one premise against the negation of X
// contained in the other.
bool check_a1(const Gci& p1, const Gci& p2, const Gci& c) {
  auto v1 = clause_view(p1), v2 = clause_view(p2), vc = clause_view(c);
  auto try_order = [&](const auto& a, const auto& b) {
    for (const auto& [k, x] : a) {
      auto nx = flat(neg(x));
      if (nx.empty() || !subset_of(nx, b)) continue;
      bool ok = true;
      for (const auto& [k2, y] : a) {
        if (k2 != k && !vc.count(k2)) ok = false;
      }
      for (const auto& [k2, y] : b) {
        if (!nx.count(k2) && !vc.count(k2)) ok = false;
      }
      if (ok) return true;
    }
    return false;
  };
  return try_order(v1, v2) || try_order(v2, v1);
}

// r1/r2: premises [exists clause, forall clauses..., clause over the fillers].
bool check_r(bool r2, const std::vector<Gci>& p, const Gci& c) {
  if (p.size() < 2) return false;
  auto ve = clause_view(p.front());
  auto vn = clause_view(p.back());
  auto vc = clause_view(c);
  std::vector<std::map<std::string, Concept>> vf;
  for (size_t i = 1; i + 1 < p.size(); ++i) vf.push_back(clause_view(p[i]));
  for (const auto& [ek, ex] : ve) {
    if (ex->kind != ConceptKind::Exists) continue;
    const std::string& role = ex->name;
    bool rest_ok = true;
    for (const auto& [k, y] : ve) {
      if (k != ek && !vc.count(k)) rest_ok = false;
    }
    if (!rest_ok) continue;
    std::map<std::string, Concept> allowed;
    if (r2) {
      auto f = flat(neg(ex->a));
      allowed.insert(f.begin(), f.end());
    }
    std::function<bool(size_t, std::map<std::string, Concept>)> pick =
        [&](size_t i, std::map<std::string, Concept> acc) -> bool {
      if (i == vf.size()) return subset_of(vn, acc);
      for (const auto& [fk, fx] : vf[i]) {
        if (fx->kind != ConceptKind::Forall || fx->name != role) continue;
        bool ok = true;
        for (const auto& [k, y] : vf[i]) {
          if (k != fk && !vc.count(k)) ok = false;
        }
        if (!ok) continue;
        auto next = acc;
        auto f = flat(neg(fx->a));
        next.insert(f.begin(), f.end());
        if (pick(i + 1, next)) return true;
      }
      return false;
    };
    if (pick(0, allowed)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> check_proof(const Proof& p, const Ontology& o) {
  std::vector<std::string> report;
  CdKind kind = o.cd_kind == CdKind::None ? CdKind::Lin : o.cd_kind;
  if (p.nodes.empty()) return {"proof has no nodes"};

  std::set<std::string> axioms;
  for (const auto& a : o.axioms) axioms.insert(canon_key(a));

  std::vector<std::optional<Gci>> gcis(p.nodes.size());
  std::vector<std::optional<Constraint>> cons(p.nodes.size());
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    const auto& n = p.nodes[i];
    try {
      if (n.kind == NodeKind::Constraint) {
        cons[i] = parse_constraint(n.label, kind);
      } else {
        gcis[i] = parse_gci(n.label, kind);
      }
    } catch (const std::exception& e) {
      report.push_back("unreadable node " + std::to_string(i) + " '" + n.label + "': " + e.what());
    }
  }
  if (!report.empty()) return report;

  std::set<int> concluded;
  for (const auto& s : p.steps) {
    if (s.conclusion < 0 || s.conclusion >= static_cast<int>(p.nodes.size())) {
      report.push_back("step with invalid conclusion id");
      continue;
    }
    if (!concluded.insert(s.conclusion).second)
      report.push_back("two steps conclude node " + std::to_string(s.conclusion));
    for (int q : s.premises) {
      if (q < 0 || q >= s.conclusion) {
        report.push_back("step for node " + std::to_string(s.conclusion) +
                         " uses a premise that is not earlier in the proof");
      }
    }
  }
  if (!report.empty()) return report;

  for (int l : p.leaves()) {
    const auto& n = p.nodes[l];
    if (n.kind == NodeKind::Constraint) {
      report.push_back("leaf-not-in-ontology: " + n.label);
      continue;
    }
    if (axioms.count(canon_key(*gcis[l])) || is_tautology(*gcis[l])) continue;
    report.push_back("leaf-not-in-ontology: " + n.label);
  }

  for (const auto& s : p.steps) {
    std::string where = "step-invalid at node " + std::to_string(s.conclusion) + " (" +
                        s.rule + ", " + p.nodes[s.conclusion].label + "): ";
    std::optional<std::string> err;
    if (is_cd_rule(s.rule)) {
      std::vector<Constraint> prem;
      std::optional<Constraint> concl;
      std::optional<std::string> ctx;
      auto unwrap = [&](int id) -> std::optional<Constraint> {
        if (cons[id]) {
          if (ctx && !ctx->empty()) err = "mixes constraint and GCI nodes";
          ctx = std::string();
          return cons[id];
        }
        const Gci& g = *gcis[id];
        std::string key = canon_key(g.lhs);
        if (ctx && *ctx != key) err = "premises and conclusion have different left-hand sides";
        ctx = key;
        if (g.rhs->kind == ConceptKind::Bot) return Constraint(DiffConstraint::bot());
        if (g.rhs->kind == ConceptKind::Atom) return *g.rhs->atom;
        err = "right-hand side of " + p.nodes[id].label + " is not a constraint";
        return std::nullopt;
      };
      concl = unwrap(s.conclusion);
      for (int q : s.premises) {
        auto c = unwrap(q);
        if (c) prem.push_back(*c);
      }
      if (!err && concl) err = check_cd_step(s.rule, prem, *concl, s.label);
    } else if (s.rule == "clausify" || s.rule == "weaken") {
      if (s.premises.size() != 1 || !gcis[s.premises[0]]) {
        err = s.rule + " expects one premise";
      } else if (!prop_entails(*gcis[s.premises[0]], *gcis[s.conclusion])) {
        err = "conclusion does not follow propositionally";
      }
    } else if (s.rule == "A1" || s.rule == "r1" || s.rule == "r2") {
      std::vector<Gci> prem;
      for (int q : s.premises) {
        if (gcis[q]) prem.push_back(*gcis[q]);
      }
      if (prem.size() != s.premises.size()) {
        err = "premises must be GCIs";
      } else if (s.rule == "A1") {
        if (prem.size() != 2 || !check_a1(prem[0], prem[1], *gcis[s.conclusion]))
          err = "not a resolution on complementary literals";
      } else if (!check_r(s.rule == "r2", prem, *gcis[s.conclusion])) {
        err = "not an instance of the role rule";
      }
    } else if (el_rule::is_el_rule(s.rule)) {
      std::vector<Gci> prem;
      for (int q : s.premises) {
        if (gcis[q]) prem.push_back(*gcis[q]);
      }
      if (prem.size() != s.premises.size() || !gcis[s.conclusion]) {
        err = "EL steps relate GCIs";
      } else {
        err = check_el(s.rule, prem, *gcis[s.conclusion]);
      }
    } else {
      err = "unknown rule";
    }
    if (err) report.push_back(where + *err);
  }

  const auto& sink = p.nodes[p.sink()];
  bool goal_ok = sink.label == p.goal;
  if (!goal_ok && gcis[p.sink()]) {
    try {
      goal_ok = canon_key(parse_gci(p.goal, kind)) == canon_key(*gcis[p.sink()]);
    } catch (const std::exception&) {
    }
  }
  if (!goal_ok) report.push_back("sink '" + sink.label + "' does not match the goal '" + p.goal + "'");
  return report;
}

std::vector<std::string> check_cd_proof(const Proof& p, CdKind kind,
                                        const std::vector<Constraint>& premises) {
  std::vector<std::string> report;
  if (p.nodes.empty()) return {"proof has no nodes"};
  std::set<std::string> allowed;
  for (const auto& c : premises) {
    allowed.insert(str(c));
    allowed.insert(canonical_key(c));
  }
  std::vector<Constraint> cons;
  for (const auto& n : p.nodes) {
    try {
      cons.push_back(parse_constraint(n.label, kind));
    } catch (const std::exception& e) {
      return {"unreadable node '" + n.label + "': " + e.what()};
    }
  }
  for (int l : p.leaves()) {
    if (!allowed.count(p.nodes[l].label) && !allowed.count(canonical_key(cons[l])))
      report.push_back("leaf-not-in-premises: " + p.nodes[l].label);
  }
  for (const auto& s : p.steps) {
    std::vector<Constraint> prem;
    for (int q : s.premises) prem.push_back(cons.at(q));
    if (auto e = check_cd_step(s.rule, prem, cons.at(s.conclusion), s.label))
      report.push_back("step-invalid at node " + std::to_string(s.conclusion) + ": " + *e);
  }
  if (p.nodes[p.sink()].label != p.goal) report.push_back("sink does not match the goal");
  return report;
}

}  // namespace dlcd
