#include "dlcd/lin.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace dlcd {

std::string lin_label(const LinConstraint& c) {
  if (c.coeffs.empty() && c.rhs != 0) return "Bot";
  return to_string(c);
}

std::vector<std::string> rational_labels(const std::vector<Rational>& r) {
  std::vector<std::string> out;
  for (const auto& q : r) out.push_back(to_string(q));
  return out;
}

LinStep lin_eliminate(const LinConstraint& target, const LinConstraint& pivot,
                      const std::string& var, bool normalize) {
  auto pv = pivot.coeffs.find(var);
  if (pv == pivot.coeffs.end())
    throw PivotError("pivot " + to_string(pivot) + " does not mention " + var);
  auto tv = target.coeffs.find(var);
  Rational c = tv == target.coeffs.end() ? Rational(0) : Rational(-tv->second / pv->second);
  LinConstraint res = lin_add(target, lin_scale(pivot, c));
  LinStep step{{target, pivot}, res, {1, c}};
  if (normalize && !res.coeffs.empty()) {
    Rational s = 1 / res.coeffs.begin()->second;
    step.conclusion = lin_scale(res, s);
    step.label = {s, s * c};
  }
  return step;
}

namespace {

Inference make_edge(const std::string& concl, std::vector<std::string> prem,
                    const std::vector<Rational>& label) {
  return Inference{concl, std::move(prem), kLinRule, rational_labels(label)};
}

// Echelon basis built by inserting constraints in order; every reduction
// step is recorded in ds.
struct Basis {
  std::map<std::string, LinConstraint> rows;  // leading variable -> row
  bool unsat = false;
  DerivationStructure ds;

  // Variables of c, in order, that are eliminated against existing rows.
  std::vector<std::string> pivots(LinConstraint c) const {
    std::vector<std::string> out;
    std::string last;
    bool started = false;
    while (true) {
      auto it = started ? c.coeffs.upper_bound(last) : c.coeffs.begin();
      for (; it != c.coeffs.end(); ++it) {
        if (rows.count(it->first)) break;
      }
      if (it == c.coeffs.end()) break;
      std::string v = it->first;
      c = lin_eliminate(c, rows.at(v), v).conclusion;
      out.push_back(v);
      last = v;
      started = true;
    }
    return out;
  }

  void insert(const LinConstraint& d) {
    if (unsat) return;
    std::string label = to_string(d);
    ds.add_leaf(label, NodeKind::Constraint);
    if (d.coeffs.empty()) {
      if (d.rhs != 0) {
        ds.add_edge(make_edge("Bot", {label}, {1}), NodeKind::Constraint);
        unsat = true;
      }
      return;
    }
    auto vars = pivots(d);
    LinConstraint cur = d;
    for (size_t i = 0; i < vars.size(); ++i) {
      const LinConstraint& row = rows.at(vars[i]);
      LinStep s = lin_eliminate(cur, row, vars[i], i + 1 == vars.size());
      if (s.conclusion.coeffs.empty() && s.conclusion.rhs == 0) return;
      ds.add_edge(make_edge(lin_label(s.conclusion), {to_string(cur), to_string(row)}, s.label),
                  NodeKind::Constraint);
      if (s.conclusion.coeffs.empty()) {
        unsat = true;
        return;
      }
      cur = s.conclusion;
    }
    rows[cur.coeffs.begin()->first] = cur;
  }
};

Basis build_basis(const std::vector<LinConstraint>& ds) {
  Basis b;
  for (const auto& d : ds) b.insert(d);
  return b;
}

struct ChainStep {
  std::string sigma;
  std::string rho;
  Rational a;
  Rational b;
  std::string tau;
};

// Reverses tau = a*sigma + b*rho into sigma = (-b/a)*rho + (1/a)*tau; the
// final step ends in 0 = 0, which is dropped.
std::vector<Inference> reverse_chain(const std::vector<ChainStep>& chain) {
  std::vector<Inference> out;
  for (size_t i = 0; i < chain.size(); ++i) {
    const auto& s = chain[i];
    if (s.a == 0) throw MalformedProofError("step with zero multiplier on the reduced side");
    Rational nb = -s.b / s.a;
    Rational ia = 1 / s.a;
    if (i + 1 == chain.size()) {
      out.push_back(make_edge(s.sigma, {s.rho}, {nb}));
    } else {
      out.push_back(make_edge(s.sigma, {s.rho, s.tau}, {nb, ia}));
    }
  }
  return out;
}

}  // namespace

CdVerdict lin_unsat(const std::vector<LinConstraint>& ds) {
  Basis b = build_basis(ds);
  return {b.unsat, std::move(b.ds)};
}

CdVerdict lin_entails(const std::vector<LinConstraint>& ds, const LinConstraint& beta) {
  Basis basis = build_basis(ds);
  CdVerdict out;
  out.ds = std::move(basis.ds);
  std::string goal = to_string(beta);
  if (basis.unsat) {
    out.verdict = true;
    if (goal != "Bot") out.ds.add_edge({goal, {"Bot"}, "R_bot", {}}, NodeKind::Constraint);
    return out;
  }
  for (const auto& d : ds) {
    if (to_string(d) == goal) {
      out.verdict = true;
      return out;
    }
  }
  if (beta.coeffs.empty()) {
    out.verdict = beta.rhs == 0;
    if (out.verdict) out.ds.add_edge({goal, {}, kLinRule, {}}, NodeKind::Constraint);
    return out;
  }
  std::vector<ChainStep> chain;
  LinConstraint cur = beta;
  for (const auto& v : basis.pivots(beta)) {
    const LinConstraint& row = basis.rows.at(v);
    LinStep s = lin_eliminate(cur, row, v);
    chain.push_back({to_string(cur), to_string(row), s.label[0], s.label[1],
                     to_string(s.conclusion)});
    cur = s.conclusion;
  }
  if (!cur.coeffs.empty() || cur.rhs != 0) return out;
  out.verdict = true;
  for (const auto& e : reverse_chain(chain)) out.ds.add_edge(e, NodeKind::Constraint);
  return out;
}

Proof lin_reverse_proof(const Proof& forward) {
  if (forward.nodes.empty()) throw MalformedProofError("empty proof");
  int sink = forward.sink();
  Constraint end;
  try {
    end = parse_constraint(forward.nodes[sink].label, CdKind::Lin);
  } catch (const std::exception& e) {
    throw MalformedProofError(std::string("unreadable sink: ") + e.what());
  }
  auto* z = std::get_if<LinConstraint>(&end);
  if (!z || !z->coeffs.empty() || z->rhs != 0)
    throw MalformedProofError("forward proof must end in 0 = 0");

  std::vector<ChainStep> chain;
  std::set<int> chain_steps;
  int current = sink;
  while (const ProofStep* st = forward.step_for(current)) {
    if (st->premises.size() != 2 || st->label.size() != 2)
      throw MalformedProofError("forward steps must combine two premises");
    const std::string& sigma = forward.nodes[st->premises[0]].label;
    const std::string& rho = forward.nodes[st->premises[1]].label;
    Rational a, b;
    LinConstraint cs, cr, ct;
    try {
      a = make_rational(st->label[0]);
      b = make_rational(st->label[1]);
      cs = std::get<LinConstraint>(parse_constraint(sigma, CdKind::Lin));
      cr = std::get<LinConstraint>(parse_constraint(rho, CdKind::Lin));
      ct = std::get<LinConstraint>(parse_constraint(forward.nodes[current].label, CdKind::Lin));
    } catch (const std::exception& e) {
      throw MalformedProofError(std::string("unreadable step: ") + e.what());
    }
    if (!(lin_add(lin_scale(cs, a), lin_scale(cr, b)) == ct))
      throw MalformedProofError("forward step does not recompute: " +
                                forward.nodes[current].label);
    chain.insert(chain.begin(), {sigma, rho, a, b, forward.nodes[current].label});
    chain_steps.insert(current);
    current = st->premises[0];
  }
  if (chain.empty()) throw MalformedProofError("forward proof has no reduction steps");
  std::string beta = forward.nodes[current].label;

  DerivationStructure ds;
  std::set<int> rho_nodes;
  for (const auto& s : forward.steps) {
    if (chain_steps.count(s.conclusion)) {
      rho_nodes.insert(s.premises[1]);
      continue;
    }
    Inference e{forward.nodes[s.conclusion].label, {}, s.rule, s.label};
    for (int p : s.premises) e.premises.push_back(forward.nodes[p].label);
    ds.add_edge(e, forward.nodes[s.conclusion].kind);
  }
  for (int l : forward.leaves()) {
    if (l != current || rho_nodes.count(l)) ds.add_leaf(forward.nodes[l].label, NodeKind::Constraint);
  }
  for (const auto& e : reverse_chain(chain)) ds.add_edge(e, NodeKind::Constraint);
  return extract_proof(ds, beta, ProofMetric::Size);
}

bool lin_satisfies(const Assignment& a, const LinConstraint& c) {
  Rational s = 0;
  for (const auto& [v, k] : c.coeffs) {
    auto it = a.find(v);
    if (it == a.end()) return false;
    s += k * it->second;
  }
  return s == c.rhs;
}

namespace {

Assignment solve_with(const Basis& b, const std::vector<std::string>& free_vars,
                      const std::vector<Rational>& values) {
  Assignment a;
  for (size_t i = 0; i < free_vars.size(); ++i) a[free_vars[i]] = values[i];
  for (auto it = b.rows.rbegin(); it != b.rows.rend(); ++it) {
    const LinConstraint& row = it->second;
    Rational s = row.rhs;
    for (const auto& [v, k] : row.coeffs) {
      if (v != it->first) s -= k * a.at(v);
    }
    a[it->first] = s / row.coeffs.at(it->first);
  }
  return a;
}

}  // namespace

Assignment lin_witness(const std::vector<LinConstraint>& ds,
                       const std::vector<LinConstraint>& avoid) {
  Basis b = build_basis(ds);
  if (b.unsat) throw InfeasibleError("constraint set is unsatisfiable");
  for (const auto& a : avoid) {
    if (lin_entails(ds, a).verdict)
      throw InfeasibleError("avoided constraint is entailed: " + to_string(a));
  }
  std::set<std::string> vars;
  for (const auto& d : ds) for (const auto& kv : d.coeffs) vars.insert(kv.first);
  for (const auto& d : avoid) for (const auto& kv : d.coeffs) vars.insert(kv.first);
  std::vector<std::string> free_vars;
  for (const auto& v : vars) {
    if (!b.rows.count(v)) free_vars.push_back(v);
  }
  std::vector<Rational> values;
  for (size_t i = 0; i < free_vars.size(); ++i) values.emplace_back(static_cast<long>(i + 1));
  auto ok = [&](const Assignment& a) {
    return std::none_of(avoid.begin(), avoid.end(),
                        [&](const LinConstraint& c) { return lin_satisfies(a, c); });
  };
  Assignment a = solve_with(b, free_vars, values);
  if (ok(a)) return a;
  std::mt19937_64 rng(0x6c696eULL);
  long range = 4;
  for (int attempt = 0; attempt < 4000; ++attempt) {
    if (attempt % 8 == 7) range *= 2;
    std::uniform_int_distribution<long> dist(-range, range);
    for (auto& v : values) v = dist(rng);
    a = solve_with(b, free_vars, values);
    if (ok(a)) return a;
  }
  throw InfeasibleError("no assignment avoiding all constraints was found");
}

std::vector<std::vector<size_t>> minimal_sets(size_t n, const SetPredicate& holds) {
  std::vector<std::vector<size_t>> found;
  std::set<std::vector<size_t>> seen;
  std::vector<std::vector<size_t>> queue{{}};
  seen.insert({});
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    std::vector<size_t> excluded = queue[qi];
    std::vector<size_t> label;
    bool reused = false;
    for (const auto& m : found) {
      bool disjoint = std::none_of(m.begin(), m.end(), [&](size_t e) {
        return std::binary_search(excluded.begin(), excluded.end(), e);
      });
      if (disjoint) {
        label = m;
        reused = true;
        break;
      }
    }
    if (!reused) {
      std::vector<size_t> universe;
      for (size_t i = 0; i < n; ++i) {
        if (!std::binary_search(excluded.begin(), excluded.end(), i)) universe.push_back(i);
      }
      std::vector<size_t> used;
      if (!holds(universe, &used)) continue;
      std::vector<size_t> cur = universe;
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      bool hint_ok = !used.empty() && used.size() < cur.size() &&
                     std::includes(cur.begin(), cur.end(), used.begin(), used.end()) &&
                     holds(used, nullptr);
      if (hint_ok) cur = used;
      for (size_t i = 0; i < cur.size();) {
        std::vector<size_t> smaller = cur;
        smaller.erase(smaller.begin() + static_cast<long>(i));
        if (holds(smaller, nullptr)) {
          cur = smaller;
        } else {
          ++i;
        }
      }
      label = cur;
      found.push_back(cur);
    }
    for (size_t e : label) {
      std::vector<size_t> child = excluded;
      child.insert(std::upper_bound(child.begin(), child.end(), e), e);
      if (seen.insert(child).second) queue.push_back(child);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

namespace {

std::vector<LinConstraint> pick(const std::vector<LinConstraint>& ds,
                                const std::vector<size_t>& idx) {
  std::vector<LinConstraint> out;
  for (size_t i : idx) out.push_back(ds[i]);
  return out;
}

void used_leaves(const DerivationStructure& d, const std::string& goal,
                 const std::vector<LinConstraint>& ds, const std::vector<size_t>& idx,
                 std::vector<size_t>* used) {
  if (!used) return;
  Proof p = extract_proof(d, goal, ProofMetric::Size);
  std::set<std::string> leaves;
  for (int l : p.leaves()) leaves.insert(p.nodes[l].label);
  for (size_t i : idx) {
    if (leaves.count(to_string(ds[i]))) used->push_back(i);
  }
}

}  // namespace

std::vector<Implication> lin_minimal_implications(const std::vector<LinConstraint>& ds,
                                                  const std::vector<LinConstraint>& targets) {
  std::vector<Implication> out;
  auto unsat_pred = [&](const std::vector<size_t>& idx, std::vector<size_t>* used) {
    CdVerdict v = lin_unsat(pick(ds, idx));
    if (v.verdict) used_leaves(v.ds, "Bot", ds, idx, used);
    return v.verdict;
  };
  auto bots = minimal_sets(ds.size(), unsat_pred);
  std::set<std::vector<size_t>> bot_set(bots.begin(), bots.end());
  for (const auto& s : bots) {
    Implication imp;
    for (size_t i : s) imp.premises.push_back(ds[i]);
    out.push_back(imp);
  }
  std::set<std::string> done;
  for (const auto& beta : targets) {
    std::string goal = to_string(beta);
    if (!done.insert(goal).second) continue;
    auto pred = [&](const std::vector<size_t>& idx, std::vector<size_t>* used) {
      CdVerdict v = lin_entails(pick(ds, idx), beta);
      if (v.verdict) used_leaves(v.ds, goal, ds, idx, used);
      return v.verdict;
    };
    for (const auto& s : minimal_sets(ds.size(), pred)) {
      if (bot_set.count(s)) continue;
      Implication imp;
      for (size_t i : s) imp.premises.push_back(ds[i]);
      imp.conclusion = beta;
      out.push_back(imp);
    }
  }
  return out;
}

}  // namespace dlcd
