#include "dlcd/syntax.hpp"

#include <sstream>

namespace dlcd {

Rational make_rational(const std::string& text) {
  Rational q(text, 10);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

DiffConstraint DiffConstraint::eq(std::string x, Rational q) {
  return {Kind::Eq, std::move(x), std::move(q), {}};
}
DiffConstraint DiffConstraint::gt(std::string x, Rational q) {
  return {Kind::Gt, std::move(x), std::move(q), {}};
}
DiffConstraint DiffConstraint::diff(std::string x, Rational q, std::string y) {
  return {Kind::Diff, std::move(x), std::move(q), std::move(y)};
}
DiffConstraint DiffConstraint::bot() { return {Kind::Bot, {}, 0, {}}; }

std::string to_string(CdKind k) {
  switch (k) {
    case CdKind::Lin: return "lin";
    case CdKind::Diff: return "diff";
    default: return "none";
  }
}

std::string to_string(const LinConstraint& c) {
  std::string out;
  bool first = true;
  for (const auto& [v, a] : c.coeffs) {
    Rational mag = abs(a);
    std::string term = mag == 1 ? v : to_string(mag) + " " + v;
    if (first) {
      out += (sgn(a) < 0 ? "-" : "") + term;
    } else {
      out += (sgn(a) < 0 ? " - " : " + ") + term;
    }
    first = false;
  }
  if (first) out = "0";
  return out + " = " + to_string(c.rhs);
}

std::string to_string(const DiffConstraint& c) {
  using K = DiffConstraint::Kind;
  switch (c.kind) {
    case K::Eq: return c.x + " = " + to_string(c.q);
    case K::Gt: return c.x + " > " + to_string(c.q);
    case K::Diff:
      if (sgn(c.q) < 0) return c.x + " - " + to_string(Rational(-c.q)) + " = " + c.y;
      return c.x + " + " + to_string(c.q) + " = " + c.y;
    default: return "Bot";
  }
}

std::string to_string(const Constraint& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Defined>) {
          return "Top(" + v.var + ")";
        } else {
          return to_string(v);
        }
      },
      c);
}

LinConstraint canonical(const LinConstraint& c) {
  if (c.coeffs.empty()) {
    LinConstraint r;
    r.rhs = c.rhs == 0 ? 0 : 1;
    return r;
  }
  Rational s = 1 / c.coeffs.begin()->second;
  return lin_scale(c, s);
}

Constraint canonical(const Constraint& c) {
  if (auto l = std::get_if<LinConstraint>(&c)) return canonical(*l);
  return c;
}

std::string canonical_key(const Constraint& c) { return to_string(canonical(c)); }

std::set<std::string> variables(const Constraint& c) {
  std::set<std::string> out;
  if (auto l = std::get_if<LinConstraint>(&c)) {
    for (const auto& kv : l->coeffs) out.insert(kv.first);
  } else if (auto d = std::get_if<DiffConstraint>(&c)) {
    if (d->kind != DiffConstraint::Kind::Bot) out.insert(d->x);
    if (d->kind == DiffConstraint::Kind::Diff) out.insert(d->y);
  } else {
    out.insert(std::get<Defined>(c).var);
  }
  return out;
}

bool is_bot(const Constraint& c) {
  if (auto l = std::get_if<LinConstraint>(&c)) return l->coeffs.empty() && l->rhs != 0;
  if (auto d = std::get_if<DiffConstraint>(&c)) return d->kind == DiffConstraint::Kind::Bot;
  return false;
}

LinConstraint lin_scale(const LinConstraint& c, const Rational& s) {
  LinConstraint r;
  if (s == 0) return r;
  for (const auto& [v, a] : c.coeffs) r.coeffs[v] = a * s;
  r.rhs = c.rhs * s;
  return r;
}

LinConstraint lin_add(const LinConstraint& a, const LinConstraint& b) {
  LinConstraint r = a;
  for (const auto& [v, x] : b.coeffs) {
    Rational s = r.coeffs[v] + x;
    if (s == 0) {
      r.coeffs.erase(v);
    } else {
      r.coeffs[v] = s;
    }
  }
  r.rhs = a.rhs + b.rhs;
  return r;
}

namespace {

bool is_kind(const Concept& c, ConceptKind k1, ConceptKind k2) {
  return c->kind == k1 || c->kind == k2;
}

std::string wrap(const Concept& c, bool paren) {
  return paren ? "(" + c->key + ")" : c->key;
}

Concept make(ConceptKind kind, std::string name, Concept a, Concept b,
             std::shared_ptr<const Constraint> at) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = kind;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  n->atom = std::move(at);
  switch (kind) {
    case ConceptKind::Top: n->key = "Top"; break;
    case ConceptKind::Bot: n->key = "Bot"; break;
    case ConceptKind::Name: n->key = n->name; break;
    case ConceptKind::Atom: n->key = "[" + to_string(*n->atom) + "]"; break;
    case ConceptKind::And:
      n->key = wrap(n->a, n->a->kind == ConceptKind::Or) + " and " +
               wrap(n->b, is_kind(n->b, ConceptKind::And, ConceptKind::Or));
      break;
    case ConceptKind::Or:
      n->key = n->a->key + " or " + wrap(n->b, n->b->kind == ConceptKind::Or);
      break;
    case ConceptKind::Not:
      n->key = "not " + wrap(n->a, is_kind(n->a, ConceptKind::And, ConceptKind::Or));
      break;
    case ConceptKind::Exists:
      n->key = n->name + " some " +
               wrap(n->a, is_kind(n->a, ConceptKind::And, ConceptKind::Or));
      break;
    case ConceptKind::Forall:
      n->key = n->name + " all " +
               wrap(n->a, is_kind(n->a, ConceptKind::And, ConceptKind::Or));
      break;
  }
  return n;
}

}  // namespace

Concept top() {
  static const Concept t = make(ConceptKind::Top, "", nullptr, nullptr, nullptr);
  return t;
}
Concept bot() {
  static const Concept b = make(ConceptKind::Bot, "", nullptr, nullptr, nullptr);
  return b;
}
Concept name(const std::string& n) {
  return make(ConceptKind::Name, n, nullptr, nullptr, nullptr);
}
Concept conj(Concept a, Concept b) {
  return make(ConceptKind::And, "", std::move(a), std::move(b), nullptr);
}
Concept disj(Concept a, Concept b) {
  return make(ConceptKind::Or, "", std::move(a), std::move(b), nullptr);
}
Concept neg(Concept a) { return make(ConceptKind::Not, "", std::move(a), nullptr, nullptr); }
Concept some(const std::string& role, Concept filler) {
  return make(ConceptKind::Exists, role, std::move(filler), nullptr, nullptr);
}
Concept all(const std::string& role, Concept filler) {
  return make(ConceptKind::Forall, role, std::move(filler), nullptr, nullptr);
}
Concept atom(Constraint c) {
  return make(ConceptKind::Atom, "", nullptr, nullptr,
              std::make_shared<const Constraint>(std::move(c)));
}

Concept conj_all(const std::vector<Concept>& cs) {
  if (cs.empty()) return top();
  Concept r = cs[0];
  for (size_t i = 1; i < cs.size(); ++i) r = conj(r, cs[i]);
  return r;
}

Concept disj_all(const std::vector<Concept>& cs) {
  if (cs.empty()) return bot();
  Concept r = cs[0];
  for (size_t i = 1; i < cs.size(); ++i) r = disj(r, cs[i]);
  return r;
}

const std::string& to_string(const Concept& c) { return c->key; }

std::string canon_key(const Concept& c) {
  return map_atoms(c, [](const Constraint& a) { return atom(canonical(a)); })->key;
}

std::string to_string(const Gci& g) { return g.lhs->key + " SubClassOf " + g.rhs->key; }

std::string canon_key(const Gci& g) {
  return canon_key(g.lhs) + " SubClassOf " + canon_key(g.rhs);
}

std::string serialize_ontology(const Ontology& o) {
  std::ostringstream out;
  if (o.cd_kind != CdKind::None) out << "#!domain " << to_string(o.cd_kind) << "\n";
  for (const auto& g : o.axioms) out << to_string(g) << " .\n";
  return out.str();
}

bool is_el(const Concept& c) {
  switch (c->kind) {
    case ConceptKind::Not:
    case ConceptKind::Or:
    case ConceptKind::Forall:
      return false;
    case ConceptKind::And:
      return is_el(c->a) && is_el(c->b);
    case ConceptKind::Exists:
      return is_el(c->a);
    default:
      return true;
  }
}

bool is_el(const Ontology& o) {
  for (const auto& g : o.axioms) {
    if (!is_el(g.lhs) || !is_el(g.rhs)) return false;
  }
  return true;
}

void collect_subconcepts(const Concept& c, std::vector<Concept>& out,
                         std::set<std::string>& seen) {
  if (!seen.insert(c->key).second) return;
  out.push_back(c);
  if (c->a) collect_subconcepts(c->a, out, seen);
  if (c->b) collect_subconcepts(c->b, out, seen);
}

std::vector<Concept> subconcepts(const Ontology& o) {
  std::vector<Concept> out;
  std::set<std::string> seen;
  collect_subconcepts(top(), out, seen);
  collect_subconcepts(bot(), out, seen);
  for (const auto& g : o.axioms) {
    collect_subconcepts(g.lhs, out, seen);
    collect_subconcepts(g.rhs, out, seen);
  }
  return out;
}

Concept nnf(const Concept& c) {
  switch (c->kind) {
    case ConceptKind::And: return conj(nnf(c->a), nnf(c->b));
    case ConceptKind::Or: return disj(nnf(c->a), nnf(c->b));
    case ConceptKind::Exists: return some(c->name, nnf(c->a));
    case ConceptKind::Forall: return all(c->name, nnf(c->a));
    case ConceptKind::Not: {
      const Concept& x = c->a;
      switch (x->kind) {
        case ConceptKind::Top: return bot();
        case ConceptKind::Bot: return top();
        case ConceptKind::Not: return nnf(x->a);
        case ConceptKind::And: return disj(nnf(neg(x->a)), nnf(neg(x->b)));
        case ConceptKind::Or: return conj(nnf(neg(x->a)), nnf(neg(x->b)));
        case ConceptKind::Exists: return all(x->name, nnf(neg(x->a)));
        case ConceptKind::Forall: return some(x->name, nnf(neg(x->a)));
        default: return c;
      }
    }
    default:
      return c;
  }
}

namespace {

template <class F>
Concept map_names(const Concept& c, F&& f) {
  switch (c->kind) {
    case ConceptKind::Name: {
      Concept r = f(c->name);
      return r ? r : c;
    }
    case ConceptKind::And: return conj(map_names(c->a, f), map_names(c->b, f));
    case ConceptKind::Or: return disj(map_names(c->a, f), map_names(c->b, f));
    case ConceptKind::Not: return neg(map_names(c->a, f));
    case ConceptKind::Exists: return some(c->name, map_names(c->a, f));
    case ConceptKind::Forall: return all(c->name, map_names(c->a, f));
    default: return c;
  }
}

}  // namespace

const std::string& AbstractionMap::intern(const Constraint& c) {
  std::string k = canonical_key(c);
  auto it = by_key_.find(k);
  if (it != by_key_.end()) return names_[it->second];
  size_t i = names_.size();
  names_.push_back("$c" + std::to_string(i + 1));
  constraints_.push_back(c);
  by_key_[k] = i;
  by_name_[names_.back()] = i;
  return names_.back();
}

std::optional<std::string> AbstractionMap::lookup(const Constraint& c) const {
  auto it = by_key_.find(canonical_key(c));
  if (it == by_key_.end()) return std::nullopt;
  return names_[it->second];
}

bool AbstractionMap::is_abstraction(const std::string& n) const {
  return by_name_.count(n) > 0;
}

const Constraint& AbstractionMap::constraint_of(const std::string& n) const {
  return constraints_.at(by_name_.at(n));
}

Concept AbstractionMap::abstract(const Concept& c) {
  return map_atoms(c, [this](const Constraint& a) { return name(intern(a)); });
}

Concept AbstractionMap::abstract(const Concept& c) const {
  return map_atoms(c, [this](const Constraint& a) -> Concept {
    auto n = lookup(a);
    if (!n) throw std::out_of_range("constraint without abstraction name: " + to_string(a));
    return name(*n);
  });
}

Gci AbstractionMap::abstract(const Gci& g) { return {abstract(g.lhs), abstract(g.rhs)}; }

Concept AbstractionMap::concretize(const Concept& c) const {
  return map_names(c, [this](const std::string& n) -> Concept {
    auto it = by_name_.find(n);
    if (it == by_name_.end()) return nullptr;
    return atom(constraints_[it->second]);
  });
}

Gci AbstractionMap::concretize(const Gci& g) const {
  return {concretize(g.lhs), concretize(g.rhs)};
}

std::pair<Ontology, AbstractionMap> abstract_constraints(const Ontology& o) {
  AbstractionMap m;
  Ontology r;
  r.cd_kind = o.cd_kind;
  for (const auto& g : o.axioms) r.axioms.push_back(m.abstract(g));
  return {r, m};
}

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) +
                         ": " + msg),
      line(l),
      column(c) {}

}  // namespace dlcd
