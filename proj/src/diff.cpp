#include "dlcd/diff.hpp"

#include <algorithm>

namespace dlcd {

namespace {

using K = DiffConstraint::Kind;
namespace R = diff_rule;

struct Saturator {
  DiffState st;

  void record(const std::string& rule, std::vector<std::string> premises,
              const DiffConstraint& concl, std::string side = {}) {
    std::string label = to_string(concl);
    st.ds.add_edge({label, premises, rule, {}}, NodeKind::Constraint);
    st.steps.push_back({rule, std::move(premises), concl, std::move(side)});
    if (st.known.insert(label).second) ++st.derived;
    if (concl.kind == K::Bot) st.bot = true;
  }

  // Merges a unary constraint whose derivation is already recorded.
  void merge_unary(const DiffConstraint& c) {
    auto it = st.unary.find(c.x);
    if (it == st.unary.end()) {
      st.unary[c.x] = c;
      return;
    }
    DiffConstraint u = it->second;
    if (c.kind == K::Eq && u.kind == K::Eq) {
      if (c.q != u.q)
        record(R::kNeq, {to_string(u), to_string(c)}, DiffConstraint::bot(),
               to_string(u.q) + " != " + to_string(c.q));
    } else if (c.kind == K::Eq && u.kind == K::Gt) {
      if (c.q <= u.q) {
        record(R::kLt, {to_string(c), to_string(u)}, DiffConstraint::bot(),
               to_string(c.q) + " <= " + to_string(u.q));
      } else {
        it->second = c;
      }
    } else if (c.kind == K::Gt && u.kind == K::Eq) {
      if (u.q <= c.q)
        record(R::kLt, {to_string(u), to_string(c)}, DiffConstraint::bot(),
               to_string(u.q) + " <= " + to_string(c.q));
    } else if (c.q > u.q) {
      it->second = c;
    }
  }

  // Merges a binary constraint; returns true if the pair was new.
  bool merge_binary(const DiffConstraint& c) {
    auto key = std::make_pair(c.x, c.y);
    auto it = st.binary.find(key);
    if (it == st.binary.end()) {
      st.binary[key] = c;
      return true;
    }
    if (it->second.q != c.q)
      record(R::kNeqPlus, {to_string(it->second), to_string(c)}, DiffConstraint::bot(),
             to_string(it->second.q) + " != " + to_string(c.q));
    return false;
  }

  void input(const Constraint& c) {
    std::string label = to_string(c);
    st.ds.add_leaf(label, NodeKind::Constraint);
    st.known.insert(label);
    st.inputs.insert(label);
    for (const auto& v : variables(c)) st.first_mention.emplace(v, label);
    auto d = std::get_if<DiffConstraint>(&c);
    if (!d) return;
    switch (d->kind) {
      case K::Bot: st.bot = true; break;
      case K::Diff: merge_binary(*d); break;
      default: merge_unary(*d); break;
    }
  }

  void minus() {
    std::vector<DiffConstraint> eqs;
    for (const auto& [v, u] : st.unary) {
      if (u.kind == K::Eq) eqs.push_back(u);
    }
    for (size_t i = 0; i < eqs.size() && !st.bot; ++i) {
      for (size_t j = i + 1; j < eqs.size() && !st.bot; ++j) {
        auto c = DiffConstraint::diff(eqs[i].x, eqs[j].q - eqs[i].q, eqs[j].x);
        record(R::kMinus, {to_string(eqs[i]), to_string(eqs[j])}, c);
        merge_binary(c);
      }
    }
  }

  void flip() {
    auto snapshot = st.binary;
    for (const auto& [k, b] : snapshot) {
      if (st.bot) return;
      if (b.x == b.y) continue;
      auto c = DiffConstraint::diff(b.y, -b.q, b.x);
      record(R::kFlip, {to_string(b)}, c);
      merge_binary(c);
    }
  }

  void zero() {
    for (const auto& [v, first] : st.first_mention) {
      if (st.bot) return;
      auto c = DiffConstraint::diff(v, 0, v);
      record(R::kZero, {first}, c);
      merge_binary(c);
    }
  }

  void plus() {
    bool changed = true;
    while (changed && !st.bot) {
      changed = false;
      auto snapshot = st.binary;
      for (const auto& [k1, b1] : snapshot) {
        if (b1.x == b1.y) continue;
        auto lo = snapshot.lower_bound({b1.y, std::string()});
        for (auto it = lo; it != snapshot.end() && it->first.first == b1.y; ++it) {
          const auto& b2 = it->second;
          if (b2.x == b2.y) continue;
          auto c = DiffConstraint::diff(b1.x, b1.q + b2.q, b2.y);
          record(R::kPlus, {to_string(b1), to_string(b2)}, c);
          if (merge_binary(c)) changed = true;
          if (st.bot) return;
        }
      }
    }
  }

  void eq() {
    auto snapshot = st.unary;
    for (const auto& [x, u] : snapshot) {
      if (u.kind != K::Eq) continue;
      auto lo = st.binary.lower_bound({x, std::string()});
      std::vector<DiffConstraint> edges;
      for (auto it = lo; it != st.binary.end() && it->first.first == x; ++it) {
        edges.push_back(it->second);
      }
      for (const auto& b : edges) {
        if (st.bot) return;
        if (b.y == x) continue;
        auto sy = snapshot.find(b.y);
        if (sy != snapshot.end() && sy->second.kind == K::Eq) continue;
        auto c = DiffConstraint::eq(b.y, u.q + b.q);
        record(R::kEq, {to_string(u), to_string(b)}, c);
        merge_unary(c);
      }
    }
  }

  void gt() {
    auto snapshot = st.unary;
    std::map<std::string, Rational> best;
    for (const auto& [k, b] : st.binary) {
      if (b.x == b.y) continue;
      auto sx = snapshot.find(b.x);
      if (sx == snapshot.end() || sx->second.kind != K::Gt) continue;
      auto sy = snapshot.find(b.y);
      if (sy != snapshot.end() && sy->second.kind == K::Eq) continue;
      Rational v = sx->second.q + b.q;
      auto bi = best.find(b.y);
      if (bi == best.end() || v > bi->second) best[b.y] = v;
    }
    for (const auto& [y, v] : best) {
      auto sy = snapshot.find(y);
      if (sy != snapshot.end() && sy->second.q >= v) continue;
      auto c = DiffConstraint::gt(y, v);
      for (const auto& [k, b] : st.binary) {
        if (b.y != y || b.x == y) continue;
        auto sx = snapshot.find(b.x);
        if (sx == snapshot.end() || sx->second.kind != K::Gt) continue;
        if (sx->second.q + b.q == v) record(R::kGt, {to_string(sx->second), to_string(b)}, c);
      }
      merge_unary(c);
      if (st.bot) return;
    }
  }
};

}  // namespace

DiffState diff_saturate(const std::vector<Constraint>& ds) {
  Saturator s;
  for (const auto& c : ds) {
    if (std::holds_alternative<LinConstraint>(c))
      throw std::invalid_argument("linear equation given to the difference solver");
    s.input(c);
    if (s.st.bot) return s.st;
  }
  s.minus();
  if (!s.st.bot) s.flip();
  if (!s.st.bot) s.zero();
  if (!s.st.bot) s.plus();
  if (!s.st.bot) s.eq();
  if (!s.st.bot) s.gt();
  return s.st;
}

CdVerdict diff_entails(const std::vector<Constraint>& ds, const Constraint& beta) {
  return diff_entails(diff_saturate(ds), beta);
}

CdVerdict diff_entails(const DiffState& st, const Constraint& beta) {
  CdVerdict out;
  std::string label = to_string(beta);
  std::optional<Inference> last;
  if (is_bot(beta)) {
    out.verdict = st.bot;
  } else if (st.known.count(label)) {
    out.verdict = true;
  } else if (auto d = std::get_if<Defined>(&beta);
             d && st.first_mention.count(d->var)) {
    last = Inference{label, {st.first_mention.at(d->var)}, "R_defined", {}};
  } else if (auto g = std::get_if<DiffConstraint>(&beta);
             g && g->kind == K::Gt && st.unary.count(g->x) &&
             ((st.unary.at(g->x).kind == K::Eq && st.unary.at(g->x).q > g->q) ||
              (st.unary.at(g->x).kind == K::Gt && st.unary.at(g->x).q >= g->q))) {
    const DiffConstraint& u = st.unary.at(g->x);
    last = Inference{label, {to_string(u)}, u.kind == K::Eq ? R::kGtPlus : R::kGtMinus, {}};
  } else if (st.bot) {
    last = Inference{label, {"Bot"}, R::kBot, {}};
  }
  if (last) out.verdict = true;
  if (!out.verdict) return out;
  out.ds = st.ds;
  if (last) out.ds.add_edge(*last, NodeKind::Constraint);
  return out;
}

bool diff_satisfies(const Assignment& a, const DiffConstraint& c) {
  auto val = [&](const std::string& v) -> const Rational* {
    auto it = a.find(v);
    return it == a.end() ? nullptr : &it->second;
  };
  switch (c.kind) {
    case K::Eq: {
      auto x = val(c.x);
      return x && *x == c.q;
    }
    case K::Gt: {
      auto x = val(c.x);
      return x && *x > c.q;
    }
    case K::Diff: {
      auto x = val(c.x);
      auto y = val(c.y);
      return x && y && *x + c.q == *y;
    }
    default:
      return false;
  }
}

namespace {

bool satisfies(const Assignment& a, const Constraint& c) {
  if (auto d = std::get_if<DiffConstraint>(&c)) return diff_satisfies(a, *d);
  if (auto d = std::get_if<Defined>(&c)) return a.count(d->var) > 0;
  return false;
}

}  // namespace

Assignment diff_witness(const std::vector<Constraint>& ds,
                        const std::optional<Constraint>& beta) {
  DiffState st = diff_saturate(ds);
  if (st.bot) throw InfeasibleError("constraint set is unsatisfiable");
  if (beta && diff_entails(ds, *beta).verdict)
    throw InfeasibleError("constraint is entailed: " + to_string(*beta));

  // Components of the graph of difference edges.
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& v) {
    auto it = parent.find(v);
    if (it == parent.end() || it->second == v) return v;
    return it->second = find(it->second);
  };
  for (const auto& [v, f] : st.first_mention) parent[v] = v;
  for (const auto& [k, b] : st.binary) {
    std::string a = find(b.x), c = find(b.y);
    if (a != c) parent[std::max(a, c)] = std::min(a, c);
  }
  std::map<std::string, std::vector<std::string>> cliques;
  for (const auto& [v, f] : st.first_mention) cliques[find(v)].push_back(v);

  struct Clique {
    std::string anchor;
    bool fixed = false;
    Rational base;
  };
  std::map<std::string, Clique> info;
  auto offset = [&](const std::string& a, const std::string& y) -> Rational {
    return a == y ? Rational(0) : st.binary.at({a, y}).q;
  };
  for (const auto& [root, members] : cliques) {
    Clique c;
    c.anchor = members.front();
    c.fixed = std::any_of(members.begin(), members.end(), [&](const std::string& y) {
      auto u = st.unary.find(y);
      return u != st.unary.end() && u->second.kind == K::Eq;
    });
    bool bounded = false;
    Rational low;
    for (const auto& y : members) {
      auto u = st.unary.find(y);
      if (u == st.unary.end() || u->second.kind != K::Gt) continue;
      Rational l = u->second.q - offset(c.anchor, y);
      if (!bounded || l > low) low = l;
      bounded = true;
    }
    c.base = bounded ? Rational(low + 1) : Rational(0);
    info[root] = c;
  }
  auto build = [&](const std::map<std::string, Rational>& anchors) {
    Assignment a;
    for (const auto& [root, members] : cliques) {
      const Clique& c = info.at(root);
      for (const auto& y : members) {
        if (c.fixed) {
          a[y] = st.unary.at(y).q;
        } else {
          a[y] = anchors.at(root) + offset(c.anchor, y);
        }
      }
    }
    return a;
  };
  std::map<std::string, Rational> anchors;
  for (const auto& [root, c] : info) anchors[root] = c.base;
  Assignment result = build(anchors);

  if (beta) {
    auto in_ds = [&](const std::string& v) { return st.first_mention.count(v) > 0; };
    auto free_clique = [&](const std::string& v) -> std::optional<std::string> {
      if (!in_ds(v)) return std::nullopt;
      std::string r = find(v);
      if (info.at(r).fixed) return std::nullopt;
      return r;
    };
    auto try_shift = [&](const std::string& root) {
      for (int k = 0; k < 3 && satisfies(result, *beta); ++k) {
        anchors[root] = info.at(root).base + k;
        result = build(anchors);
      }
    };
    if (auto d = std::get_if<DiffConstraint>(&*beta)) {
      switch (d->kind) {
        case K::Gt:
          if (!in_ds(d->x)) {
            result[d->x] = d->q;
          } else if (auto r = free_clique(d->x)) {
            anchors[*r] = d->q - offset(info.at(*r).anchor, d->x);
            result = build(anchors);
          }
          break;
        case K::Eq:
          if (!in_ds(d->x)) {
            result[d->x] = d->q + 1;
          } else if (auto r = free_clique(d->x)) {
            try_shift(*r);
          }
          break;
        case K::Diff: {
          bool hx = in_ds(d->x), hy = in_ds(d->y);
          if (!hx && !hy) {
            result[d->x] = 0;
            if (d->y != d->x) result[d->y] = d->q + 1;
          } else if (!hy) {
            result[d->y] = result.at(d->x) + d->q + 1;
          } else if (!hx) {
            result[d->x] = result.at(d->y) - d->q + 1;
          } else if (find(d->x) != find(d->y)) {
            if (auto r = free_clique(d->y)) {
              try_shift(*r);
            } else if (auto r2 = free_clique(d->x)) {
              try_shift(*r2);
            }
          }
          break;
        }
        default:
          break;
      }
    }
  }
  for (const auto& c : ds) {
    if (!satisfies(result, c))
      throw InfeasibleError("witness construction failed on " + to_string(c));
  }
  if (beta && satisfies(result, *beta))
    throw InfeasibleError("witness construction failed to violate " + to_string(*beta));
  return result;
}

std::vector<Implication> diff_minimal_implications(const std::vector<Constraint>& ds,
                                                   const std::vector<Constraint>& targets) {
  auto pick = [&](const std::vector<size_t>& idx) {
    std::vector<Constraint> out;
    for (size_t i : idx) out.push_back(ds[i]);
    return out;
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
  std::vector<Implication> out;
  auto bots = minimal_sets(ds.size(), [&](const std::vector<size_t>& idx,
                                          std::vector<size_t>* used) {
    DiffState st = diff_saturate(pick(idx));
    if (st.bot) used_leaves(st.ds, "Bot", idx, used);
    return st.bot;
  });
  std::set<std::vector<size_t>> bot_set(bots.begin(), bots.end());
  for (const auto& s : bots) out.push_back({pick(s), std::nullopt});
  std::set<std::string> done;
  for (const auto& beta : targets) {
    std::string goal = to_string(beta);
    if (!done.insert(goal).second) continue;
    auto sets = minimal_sets(ds.size(), [&](const std::vector<size_t>& idx,
                                            std::vector<size_t>* used) {
      CdVerdict v = diff_entails(pick(idx), beta);
      if (v.verdict) used_leaves(v.ds, goal, idx, used);
      return v.verdict;
    });
    for (const auto& s : sets) {
      if (bot_set.count(s)) continue;
      out.push_back({pick(s), beta});
    }
  }
  return out;
}

}  // namespace dlcd
