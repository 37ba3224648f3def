#include "dlcd/bench.hpp"

#include <random>
#include <set>
#include <stdexcept>

#include "dlcd/eld.hpp"

namespace dlcd {

namespace {

// Portable draws: the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  int64_t between(int64_t lo, int64_t hi) {  // inclusive
    return lo + static_cast<int64_t>(gen_() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool coin() { return gen_() & 1; }

 private:
  std::mt19937_64 gen_;
};

Concept lin(std::map<std::string, Rational> coeffs, Rational rhs) {
  LinConstraint c;
  for (auto& [v, q] : coeffs) {
    q.canonicalize();
    if (q != 0) c.coeffs[v] = q;
  }
  c.rhs = rhs;
  c.rhs.canonicalize();
  return atom(c);
}

std::string idx(const std::string& base, int i) { return base + std::to_string(i); }

void sub(Ontology& o, Concept l, Concept r) { o.axioms.push_back({std::move(l), std::move(r)}); }

// Given constraints x_k - x_{k+1} = d_k and x_n = a on A. Step i derives
// x_1 + i x_n = a + sum(d) + i a, which needs all n of them, and
// C_i and that atom imply C_{i+1} (C_n is B).
BenchInstance artificial(int n, Rng& rng) {
  Ontology o;
  o.cd_kind = CdKind::Lin;
  Concept a = name("A");
  auto chain = [&](int i) { return i == n ? name("B") : name(idx("C", i)); };
  sub(o, a, chain(0));
  Rational total = 0;
  for (int k = 1; k < n; ++k) {
    Rational d = rng.between(-9, 9);
    total += d;
    sub(o, a, lin({{idx("x", k), 1}, {idx("x", k + 1), -1}}, d));
  }
  Rational last = rng.between(1, 9);
  sub(o, a, lin({{idx("x", n), 1}}, last));
  Rational first = last + total;
  for (int i = 0; i < n; ++i) {
    std::map<std::string, Rational> cs{{"x1", 1}};
    cs[idx("x", n)] += i;
    sub(o, conj(chain(i), lin(cs, first + Rational(i) * last)), chain(i + 1));
  }
  return {o, Gci{a, name("B")}};
}

struct Category {
  std::string name;
  int carbs, protein, fat;  // percent
};

const std::vector<Category> kCategories = {
    {"WellBalanced", 55, 20, 25}, {"LowerCarb", 45, 25, 30}, {"LowerCarbAndFat", 45, 30, 25}};

// Products 1..n with calories per nutrient, one sum per nutrient over all
// products, the energy total, and categories as conjunctions of percentage
// equations.
BenchInstance diet(int n, Rng& rng) {
  Ontology o;
  o.cd_kind = CdKind::Lin;
  const Category& target = kCategories[rng.between(0, kCategories.size() - 1)];
  const int energy = 200 * n;
  Concept meal = name("Meal");
  const std::vector<std::pair<std::string, int>> nutrients = {
      {"carbs", target.carbs}, {"protein", target.protein}, {"fat", target.fat}};
  for (const auto& [nut, pct] : nutrients) {
    int goal = energy * pct / 100;
    int cap = 2 * pct - 10;  // keeps the last product positive
    int used = 0;
    std::map<std::string, Rational> sum{{nut, -1}};
    for (int k = 1; k <= n; ++k) {
      std::string var = nut + "_" + std::to_string(k);
      int v = k < n ? static_cast<int>(rng.between(1, cap)) : goal - used;
      used += v;
      sub(o, meal, lin({{var, 1}}, v));
      sum[var] = 1;
    }
    sub(o, meal, lin(sum, 0));
  }
  sub(o, meal, lin({{"carbs", 1}, {"protein", 1}, {"fat", 1}, {"energy", -1}}, 0));
  for (const auto& c : kCategories) {
    auto share = [](int pct) { return Rational(-pct, 100); };
    Concept def = conj(conj(lin({{"carbs", 1}, {"energy", share(c.carbs)}}, 0),
                            lin({{"protein", 1}, {"energy", share(c.protein)}}, 0)),
                       lin({{"fat", 1}, {"energy", share(c.fat)}}, 0));
    sub(o, def, name(c.name));
  }
  return {o, Gci{meal, name(target.name)}};
}

Concept diff_eq(const std::string& x, Rational q) { return atom(DiffConstraint::eq(x, q)); }
Concept diff_gt(const std::string& x, Rational q) { return atom(DiffConstraint::gt(x, q)); }
Concept diff_rel(const std::string& x, Rational q, const std::string& y) {
  return atom(DiffConstraint::diff(x, q, y));
}

// One drone at a known position and n objects at given distances from it.
// Each object is safe once its position exceeds a threshold; an alert fires
// for a fixed short distance that never occurs.
BenchInstance dsbj(int n, Rng& rng) {
  Ontology o;
  o.cd_kind = CdKind::Diff;
  Concept sit = name("Situation");
  Rational drone = rng.between(0, 20);
  sub(o, sit, diff_eq("drone", drone));
  const Rational too_close = 1;
  std::vector<Concept> safe;
  for (int k = 1; k <= n; ++k) {
    std::string obj = idx("obj", k);
    Rational dist = rng.between(5, 30);
    sub(o, sit, diff_rel("drone", dist, obj));
    sub(o, diff_gt(obj, drone + rng.between(2, 4)), name(idx("SafeFrom", k)));
    sub(o, diff_rel("drone", too_close, obj), name("NeedAttention"));
    safe.push_back(name(idx("SafeFrom", k)));
  }
  sub(o, conj_all(safe), name("AllSafe"));
  return {o, Gci{sit, name("AllSafe")}};
}

// n drones and three objects. Every drone-object pair has its own offset
// feature measured from the object, and each pair must clear a threshold.
BenchInstance dobj(int n, Rng& rng) {
  Ontology o;
  o.cd_kind = CdKind::Diff;
  Concept scene = name("Scene");
  std::vector<Rational> objects;
  for (int m = 1; m <= 3; ++m) {
    objects.push_back(rng.between(0, 10));
    sub(o, scene, diff_eq(idx("obj", m), objects.back()));
  }
  std::vector<Concept> safe;
  for (int j = 1; j <= n; ++j) {
    for (int m = 1; m <= 3; ++m) {
      std::string pair = "d" + std::to_string(j) + "_o" + std::to_string(m);
      sub(o, scene, diff_rel(idx("obj", m), rng.between(5, 30), pair));
      Concept ok = name("Safe_" + pair);
      sub(o, diff_gt(pair, objects[m - 1] + 4), ok);
      safe.push_back(ok);
    }
  }
  sub(o, conj_all(safe), name("AllSafe"));
  return {o, Gci{scene, name("AllSafe")}};
}

Rational small_rational(Rng& rng, bool nonzero = false) {
  while (true) {
    Rational q(rng.between(-3, 3), rng.between(1, 2));
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

Constraint random_constraint(Rng& rng, const RandomOptions& opt) {
  int vars = std::max(1, opt.max_variables);
  auto var = [&] { return idx("x", rng.between(0, vars - 1)); };
  if (opt.kind == CdKind::Lin) {
    LinConstraint c;
    int width = rng.between(1, std::min(3, vars));
    while ((int)c.coeffs.size() < width) c.coeffs[var()] = small_rational(rng, true);
    c.rhs = small_rational(rng);
    return c;
  }
  switch (rng.between(0, 2)) {
    case 0:
      return DiffConstraint::eq(var(), small_rational(rng));
    case 1:
      return DiffConstraint::gt(var(), small_rational(rng));
    default: {
      std::string x = var(), y = var();
      if (vars > 1) {
        while (y == x) y = var();
      }
      return DiffConstraint::diff(x, small_rational(rng), y);
    }
  }
}

BenchInstance random_instance(int n, uint64_t seed) {
  RandomOptions opt;
  opt.kind = seed % 2 == 0 ? CdKind::Lin : CdKind::Diff;
  opt.min_axioms = opt.max_axioms = 2 * n + 3;
  opt.min_constraints = std::min(n, opt.max_constraints);
  Ontology o = random_ontology(seed, opt);
  EldResult r = eld_classify(o);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<std::string, std::string>> cands;
  for (const auto& [c, d] : r.classification.pairs) {
    if (c != d && d != "Top" && c.rfind("A", 0) == 0 && c.size() <= 3) cands.push_back({c, d});
  }
  if (cands.empty()) return {o, Gci{name("A0"), name("A0")}};
  const auto& [c, d] = cands[rng.between(0, cands.size() - 1)];
  return {o, Gci{parse_concept(c, opt.kind), parse_concept(d, opt.kind)}};
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Diet:
      return "diet";
    case Family::Artificial:
      return "artificial";
    case Family::Dsbj:
      return "dsbj";
    case Family::Dobj:
      return "dobj";
    case Family::Random:
      return "random";
  }
  return "";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::Diet, Family::Artificial, Family::Dsbj, Family::Dobj, Family::Random}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown benchmark family: " + s);
}

Ontology random_ontology(uint64_t seed, const RandomOptions& opt) {
  Rng rng(seed);
  Ontology o;
  o.cd_kind = opt.kind;
  std::vector<Concept> atoms;
  int na = rng.between(std::max(1, opt.min_constraints), std::max(1, opt.max_constraints));
  std::set<std::string> seen;
  for (int i = 0; i < na; ++i) {
    Constraint c = random_constraint(rng, opt);
    if (seen.insert(canonical_key(c)).second) atoms.push_back(atom(c));
  }
  auto nm = [&] { return name(idx("A", rng.between(0, opt.names - 1))); };
  auto at = [&] { return atoms[rng.between(0, atoms.size() - 1)]; };
  auto role = [&] { return rng.coin() ? std::string("r") : std::string("s"); };
  int axioms = rng.between(std::max(1, opt.min_axioms), std::max(1, opt.max_axioms));
  for (int i = 0; i < axioms; ++i) {
    switch (rng.between(0, 8)) {
      case 0:
        sub(o, nm(), nm());
        break;
      case 1:
        sub(o, nm(), some(role(), nm()));
        break;
      case 2:
        sub(o, some(role(), nm()), nm());
        break;
      case 3:
        sub(o, conj(nm(), nm()), nm());
        break;
      case 4:
        sub(o, nm(), at());
        break;
      case 5:
        sub(o, at(), nm());
        break;
      case 6:
        sub(o, conj(nm(), at()), nm());
        break;
      case 7:
        sub(o, nm(), some(role(), at()));
        break;
      default:
        sub(o, rng.between(0, 3) == 0 ? nm() : conj(at(), at()), rng.coin() ? nm() : bot());
        break;
    }
  }
  return o;
}

size_t constraint_count(const Ontology& o) {
  auto [abs, map] = abstract_constraints(o);
  return map.size();
}

size_t expected_constraint_count(Family f, int n) {
  switch (f) {
    case Family::Artificial:
      return 2 * n - (n == 1 ? 1 : 0);
    case Family::Diet:
      return 3 * n + 11;
    case Family::Dsbj:
      return 3 * n + 1;
    case Family::Dobj:
      return 6 * n + 3;
    case Family::Random:
      return 0;
  }
  return 0;
}

BenchInstance generate_benchmark(const BenchSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("benchmark size must be positive");
  Rng rng(spec.seed);
  BenchInstance b;
  switch (spec.family) {
    case Family::Artificial:
      b = artificial(spec.n, rng);
      break;
    case Family::Diet:
      b = diet(spec.n, rng);
      break;
    case Family::Dsbj:
      b = dsbj(spec.n, rng);
      break;
    case Family::Dobj:
      b = dobj(spec.n, rng);
      break;
    case Family::Random:
      b = random_instance(spec.n, spec.seed);
      break;
  }
  if (!eld_entails(b.ontology, b.goal))
    throw std::logic_error("generated goal is not entailed: " + to_string(b.goal));
  return b;
}

}  // namespace dlcd
