#include "dlcd/cd.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace dlcd {

namespace {

std::vector<LinConstraint> lin_part(const std::vector<Constraint>& ds) {
  std::vector<LinConstraint> out;
  for (const auto& c : ds) {
    if (auto l = std::get_if<LinConstraint>(&c)) {
      out.push_back(*l);
    } else if (auto d = std::get_if<DiffConstraint>(&c)) {
      // x = q reads the same in both domains.
      if (d->kind != DiffConstraint::Kind::Eq)
        throw std::invalid_argument("difference constraint given to the linear solver");
      LinConstraint l;
      l.coeffs[d->x] = 1;
      l.rhs = d->q;
      out.push_back(l);
    }
  }
  return out;
}

LinConstraint as_lin(const Constraint& c) { return lin_part({c}).at(0); }

}  // namespace

std::string cd_label(const Constraint& c) {
  if (is_bot(c)) return "Bot";
  return to_string(c);
}

CdVerdict cd_unsat(CdKind kind, const std::vector<Constraint>& ds) {
  if (kind == CdKind::Diff) {
    DiffState st = diff_saturate(ds);
    return {st.bot, std::move(st.ds)};
  }
  CdVerdict v = lin_unsat(lin_part(ds));
  for (const auto& c : ds) {
    if (std::holds_alternative<Defined>(c)) v.ds.add_leaf(to_string(c), NodeKind::Constraint);
  }
  return v;
}

CdVerdict cd_entails(CdKind kind, const std::vector<Constraint>& ds, const Constraint& beta) {
  if (kind == CdKind::Diff) return diff_entails(ds, beta);
  if (auto d = std::get_if<Defined>(&beta)) {
    CdVerdict v = lin_unsat(lin_part(ds));
    for (const auto& c : ds) v.ds.add_leaf(to_string(c), NodeKind::Constraint);
    std::string label = to_string(beta);
    for (const auto& c : ds) {
      if (to_string(c) == label) {
        v.verdict = true;
        return v;
      }
    }
    for (const auto& c : ds) {
      if (variables(c).count(d->var)) {
        v.ds.add_edge({label, {to_string(c)}, "R_defined", {}}, NodeKind::Constraint);
        v.verdict = true;
        return v;
      }
    }
    if (v.verdict) v.ds.add_edge({label, {"Bot"}, "R_bot", {}}, NodeKind::Constraint);
    return v;
  }
  CdVerdict v = lin_entails(lin_part(ds), as_lin(beta));
  for (const auto& c : ds) {
    if (std::holds_alternative<Defined>(c)) v.ds.add_leaf(to_string(c), NodeKind::Constraint);
  }
  return v;
}

namespace {

// Decision-only elimination for the enumeration below; no derivation is kept.
class FastBasis {
 public:
  // False once the rows are contradictory.
  bool insert(LinConstraint r) {
    reduce(r);
    if (r.coeffs.empty()) {
      if (r.rhs != 0) unsat_ = true;
      return !unsat_;
    }
    Rational lead = r.coeffs.begin()->second;
    for (auto& [v, q] : r.coeffs) q /= lead;
    r.rhs /= lead;
    rows_.push_back(std::move(r));
    return !unsat_;
  }
  bool unsat() const { return unsat_; }
  bool entails(LinConstraint b) const {
    if (unsat_) return true;
    reduce(b);
    return b.coeffs.empty() && b.rhs == 0;
  }

 private:
  void reduce(LinConstraint& r) const {
    for (const auto& row : rows_) {
      const std::string& p = row.coeffs.begin()->first;
      auto it = r.coeffs.find(p);
      if (it == r.coeffs.end()) continue;
      Rational f = it->second;
      for (const auto& [v, q] : row.coeffs) {
        Rational& t = r.coeffs[v];
        t -= f * q;
        if (t == 0) r.coeffs.erase(v);
      }
      r.rhs -= f * row.rhs;
    }
  }
  std::vector<LinConstraint> rows_;
  bool unsat_ = false;
};

bool lin_decide(const std::vector<Constraint>& ds, const Constraint* beta) {
  FastBasis basis;
  for (const auto& l : lin_part(ds)) basis.insert(l);
  if (!beta) return basis.unsat();
  if (auto d = std::get_if<Defined>(beta)) {
    if (basis.unsat()) return true;
    for (const auto& c : ds) {
      if (variables(c).count(d->var)) return true;
    }
    return false;
  }
  return basis.entails(as_lin(*beta));
}

std::vector<Implication> implications_in(CdKind kind, const std::vector<Constraint>& ds,
                                         const std::vector<Constraint>& targets) {
  if (kind == CdKind::Diff) return diff_minimal_implications(ds, targets);
  // The linear solver ignores definedness atoms, so they are handled by the
  // generic enumeration over the full list.
  std::vector<Implication> out;
  auto pick = [&](const std::vector<size_t>& idx) {
    std::vector<Constraint> s;
    for (size_t i : idx) s.push_back(ds[i]);
    return s;
  };
  auto used_leaves = [&](const DerivationStructure& d, const std::string& goal,
                         const std::vector<size_t>& idx, std::vector<size_t>* used) {
    if (!used) return;
    Proof p = extract_proof(d, goal, ProofMetric::Size);
    std::set<std::string> leaves;
    for (int l : p.leaves()) leaves.insert(p.nodes[l].label);
    for (size_t i : idx) {
      if (leaves.count(to_string(ds[i]))) used->push_back(i);
    }
  };
  auto bots = minimal_sets(ds.size(), [&](const std::vector<size_t>& idx,
                                          std::vector<size_t>* used) {
    if (!lin_decide(pick(idx), nullptr)) return false;
    if (!used) return true;
    CdVerdict v = cd_unsat(kind, pick(idx));
    if (v.verdict) used_leaves(v.ds, "Bot", idx, used);
    return v.verdict;
  });
  std::set<std::vector<size_t>> bot_set(bots.begin(), bots.end());
  for (const auto& s : bots) out.push_back({pick(s), std::nullopt});
  std::set<std::string> done;
  for (const auto& beta : targets) {
    std::string goal = to_string(beta);
    if (!done.insert(goal).second) continue;
    auto sets = minimal_sets(ds.size(), [&](const std::vector<size_t>& idx,
                                            std::vector<size_t>* used) {
      if (!lin_decide(pick(idx), &beta)) return false;
      if (!used) return true;
      CdVerdict v = cd_entails(kind, pick(idx), beta);
      if (v.verdict) used_leaves(v.ds, goal, idx, used);
      return v.verdict;
    });
    for (const auto& s : sets) {
      if (!bot_set.count(s)) out.push_back({pick(s), beta});
    }
  }
  return out;
}

}  // namespace

// Minimal sets never straddle variable-disjoint parts: a minimal
// contradiction is connected, and a satisfiable set entails beta through the
// part sharing variables with beta alone.
std::vector<Implication> cd_minimal_implications(CdKind kind, const std::vector<Constraint>& ds,
                                                 const std::vector<Constraint>& targets,
                                                 ImplicationCache* cache) {
  std::vector<size_t> parent(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  std::map<std::string, size_t> owner;
  for (size_t i = 0; i < ds.size(); ++i) {
    for (const auto& v : variables(ds[i])) {
      auto [it, fresh] = owner.emplace(v, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }
  std::map<size_t, std::vector<size_t>> parts;
  for (size_t i = 0; i < ds.size(); ++i) parts[find(i)].push_back(i);

  auto solve = [&](const std::vector<size_t>& idx, const std::vector<Constraint>& tg) {
    std::vector<Constraint> sub;
    std::string key = to_string(kind) + "|";
    for (size_t i : idx) {
      sub.push_back(ds[i]);
      key += canonical_key(ds[i]) + ";";
    }
    key += "|";
    for (const auto& t : tg) key += canonical_key(t) + ";";
    if (cache) {
      auto it = cache->find(key);
      if (it != cache->end()) return it->second;
    }
    std::vector<Implication> r = implications_in(kind, sub, tg);
    if (cache) (*cache)[key] = r;
    return r;
  };

  std::vector<Implication> out;
  for (const auto& [root, idx] : parts) {
    for (auto& imp : solve(idx, {})) out.push_back(std::move(imp));
  }
  std::set<std::string> done;
  for (const auto& beta : targets) {
    if (!done.insert(to_string(beta)).second) continue;
    std::set<size_t> roots;
    for (const auto& v : variables(beta)) {
      auto it = owner.find(v);
      if (it != owner.end()) roots.insert(find(it->second));
    }
    std::vector<size_t> idx;
    for (size_t r : roots) idx.insert(idx.end(), parts[r].begin(), parts[r].end());
    std::sort(idx.begin(), idx.end());
    for (auto& imp : solve(idx, {beta})) {
      if (imp.conclusion) out.push_back(std::move(imp));
    }
  }
  return out;
}

bool cd_satisfies(const Assignment& a, const Constraint& c) {
  if (auto l = std::get_if<LinConstraint>(&c)) return lin_satisfies(a, *l);
  if (auto d = std::get_if<DiffConstraint>(&c)) return diff_satisfies(a, *d);
  return a.count(std::get<Defined>(c).var) > 0;
}

}  // namespace dlcd
