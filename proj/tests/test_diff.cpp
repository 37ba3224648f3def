#include <gtest/gtest.h>

#include "dlcd/cd.hpp"
#include "dlcd/check.hpp"
#include "dlcd/diff.hpp"
#include "oracles.hpp"

using namespace dlcd;

namespace {

Constraint D(const std::string& text) { return parse_constraint(text, CdKind::Diff); }

std::vector<Constraint> Ds(std::initializer_list<const char*> texts) {
  std::vector<Constraint> out;
  for (const char* t : texts) out.push_back(D(t));
  return out;
}

DiffConstraint as_diff(const std::string& label) {
  if (label == "Bot") return DiffConstraint::bot();
  return std::get<DiffConstraint>(D(label));
}

using K = DiffConstraint::Kind;

// Rule schemas written out independently of the saturation code. Binary
// rules are accepted with their premises in either order.
bool schema_holds(const std::string& rule, const std::vector<DiffConstraint>& p,
                  const DiffConstraint& c) {
  auto both = [&](auto f) { return p.size() == 2 && (f(p[0], p[1]) || f(p[1], p[0])); };
  if (rule == "R_neq") {
    return c.kind == K::Bot && both([](const auto& a, const auto& b) {
             return a.kind == K::Eq && b.kind == K::Eq && a.x == b.x && a.q != b.q;
           });
  }
  if (rule == "R_lt") {
    return c.kind == K::Bot && both([](const auto& a, const auto& b) {
             return a.kind == K::Eq && b.kind == K::Gt && a.x == b.x && a.q <= b.q;
           });
  }
  if (rule == "R_neq+") {
    return c.kind == K::Bot && both([](const auto& a, const auto& b) {
             return a.kind == K::Diff && b.kind == K::Diff && a.x == b.x && a.y == b.y &&
                    a.q != b.q;
           });
  }
  if (rule == "R_plus") {
    return c.kind == K::Diff && both([&](const auto& a, const auto& b) {
             return a.kind == K::Diff && b.kind == K::Diff && a.y == b.x && c.x == a.x &&
                    c.y == b.y && c.q == a.q + b.q;
           });
  }
  if (rule == "R_0") {
    if (c.kind != K::Diff || c.x != c.y || c.q != 0 || p.size() != 1) return false;
    return variables(p[0]).count(c.x) > 0;
  }
  if (rule == "R_minus") {
    return c.kind == K::Diff && both([&](const auto& a, const auto& b) {
             return a.kind == K::Eq && b.kind == K::Eq && c.x == a.x && c.y == b.x &&
                    c.q == b.q - a.q;
           });
  }
  if (rule == "R_flip") {
    return p.size() == 1 && p[0].kind == K::Diff && c.kind == K::Diff && c.x == p[0].y &&
           c.y == p[0].x && c.q == -p[0].q;
  }
  if (rule == "R_eq") {
    return c.kind == K::Eq && both([&](const auto& a, const auto& b) {
             return a.kind == K::Eq && b.kind == K::Diff && a.x == b.x && c.x == b.y &&
                    c.q == a.q + b.q;
           });
  }
  if (rule == "R_gt") {
    return c.kind == K::Gt && both([&](const auto& a, const auto& b) {
             return a.kind == K::Gt && b.kind == K::Diff && a.x == b.x && c.x == b.y &&
                    c.q == a.q + b.q;
           });
  }
  if (rule == "R_gt+") {
    return p.size() == 1 && p[0].kind == K::Eq && c.kind == K::Gt && p[0].x == c.x &&
           p[0].q > c.q;
  }
  if (rule == "R_gt-") {
    return p.size() == 1 && p[0].kind == K::Gt && c.kind == K::Gt && p[0].x == c.x &&
           p[0].q >= c.q;
  }
  if (rule == "R_bot") return p.size() == 1 && p[0].kind == K::Bot;
  return false;
}

void expect_replay(const DerivationStructure& ds) {
  for (const auto& e : ds.edges()) {
    if (e.rule == "R_defined") continue;
    std::vector<DiffConstraint> prem;
    for (const auto& p : e.premises) prem.push_back(as_diff(p));
    EXPECT_TRUE(schema_holds(e.rule, prem, as_diff(e.conclusion)))
        << e.rule << " -> " << e.conclusion;
  }
}

bool substitute(const Assignment& a, const DiffConstraint& c) {
  switch (c.kind) {
    case K::Eq: return a.count(c.x) && a.at(c.x) == c.q;
    case K::Gt: return a.count(c.x) && a.at(c.x) > c.q;
    case K::Diff: return a.count(c.x) && a.count(c.y) && a.at(c.x) + c.q == a.at(c.y);
    default: return false;
  }
}

std::vector<Constraint> random_set(oracle::Rng& rng, int vars, int m) {
  std::vector<Constraint> ds;
  for (int k = 0; k < m; ++k) ds.push_back(oracle::random_diff(rng, vars));
  return ds;
}

std::vector<DiffConstraint> plain(const std::vector<Constraint>& ds) {
  std::vector<DiffConstraint> out;
  for (const auto& c : ds) out.push_back(std::get<DiffConstraint>(c));
  return out;
}

// A query that holds about half the time: a random constraint, a premise,
// or a weakened lower bound.
DiffConstraint random_query(oracle::Rng& rng, const std::vector<Constraint>& ds, int vars) {
  if (ds.empty() || rng.coin()) return oracle::random_diff(rng, vars);
  DiffConstraint base = std::get<DiffConstraint>(ds[rng.between(0, ds.size() - 1)]);
  if (base.kind == K::Gt && rng.coin()) return DiffConstraint::gt(base.x, base.q - 1);
  return base;
}

std::set<oracle::ImpKey> keys(const std::vector<Implication>& imps) {
  std::set<oracle::ImpKey> out;
  for (const auto& i : imps) {
    std::set<std::string> p;
    for (const auto& c : i.premises) p.insert(to_string(c));
    out.insert({p, i.conclusion ? to_string(*i.conclusion) : "Bot"});
  }
  return out;
}

}  // namespace

TEST(DiffSaturate, EqualityPropagates) {
  DiffState st = diff_saturate(Ds({"x = 3", "x + 2 = y"}));
  EXPECT_TRUE(st.known.count("y = 5"));
  Proof p = extract_proof(st.ds, "y = 5");
  EXPECT_EQ(p.step_for(p.sink())->rule, diff_rule::kEq);
  expect_replay(st.ds);
}

TEST(DiffSaturate, ConflictingEqualities) {
  DiffState st = diff_saturate(Ds({"x = 1", "x = 2"}));
  EXPECT_TRUE(st.bot);
  EXPECT_EQ(extract_proof(st.ds, "Bot").steps.back().rule, diff_rule::kNeq);
}

TEST(DiffSaturate, Chaining) {
  DiffState st = diff_saturate(Ds({"x + 2 = y", "y + 3 = z"}));
  EXPECT_TRUE(st.known.count("x + 5 = z"));
  Proof p = extract_proof(st.ds, "x + 5 = z");
  EXPECT_EQ(p.step_for(p.sink())->rule, diff_rule::kPlus);
  expect_replay(st.ds);
}

TEST(DiffSaturate, OneUnaryPerVariable) {
  DiffState st = diff_saturate(Ds({"x > 1", "x > 3", "x > 2"}));
  ASSERT_EQ(st.unary.size(), 1u);
  EXPECT_EQ(to_string(st.unary.at("x")), "x > 3");
  st = diff_saturate(Ds({"x > 1", "x = 4"}));
  EXPECT_EQ(to_string(st.unary.at("x")), "x = 4");
}

TEST(DiffSaturate, DerivedCountWithinQuadraticBound) {
  oracle::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    int vars = static_cast<int>(rng.between(2, 8));
    auto ds = random_set(rng, vars, static_cast<int>(rng.between(1, 14)));
    DiffState st = diff_saturate(ds);
    size_t v = st.first_mention.size();
    EXPECT_LE(st.derived, 2 * v * v + 2 * v + 1) << i;
    expect_replay(st.ds);
  }
}

TEST(DiffEntails, ExFalso) {
  CdVerdict v = diff_entails(Ds({"x = 1", "x = 2"}), D("y > 0"));
  ASSERT_TRUE(v.verdict);
  Proof p = extract_proof(v.ds, "y > 0");
  EXPECT_EQ(p.step_for(p.sink())->rule, diff_rule::kBot);
  EXPECT_TRUE(check_cd_proof(p, CdKind::Diff, Ds({"x = 1", "x = 2"})).empty());
}

TEST(DiffEntails, WeakerLowerBound) {
  CdVerdict v = diff_entails(Ds({"x > 5"}), D("x > 3"));
  ASSERT_TRUE(v.verdict);
  Proof p = extract_proof(v.ds, "x > 3");
  EXPECT_EQ(p.step_for(p.sink())->rule, diff_rule::kGtMinus);
  v = diff_entails(Ds({"x = 5"}), D("x > 3"));
  ASSERT_TRUE(v.verdict);
  EXPECT_EQ(extract_proof(v.ds, "x > 3").steps.back().rule, diff_rule::kGtPlus);
  EXPECT_FALSE(diff_entails(Ds({"x = 3"}), D("x > 3")).verdict);
}

TEST(DiffEntails, DifferentOffset) {
  EXPECT_FALSE(diff_entails(Ds({"x + 1 = y"}), D("x + 2 = y")).verdict);
}

TEST(DiffEntails, OwnDerivationPreferredOverExFalso) {
  // Bot rules fire eagerly, so a goal present alongside Bot is an input.
  CdVerdict v = diff_entails(Ds({"y = 2", "y = 3"}), D("y = 2"));
  ASSERT_TRUE(v.verdict);
  EXPECT_EQ(extract_proof(v.ds, "y = 2").nodes.size(), 1u);
}

TEST(DiffEntails, SaturatedStateOverload) {
  auto ds = Ds({"x = 3", "x + 2 = y", "z > 1"});
  DiffState st = diff_saturate(ds);
  for (const char* q : {"y = 5", "z > 0", "y > 4", "z > 2", "x + 1 = y"}) {
    EXPECT_EQ(diff_entails(st, D(q)).verdict, diff_entails(ds, D(q)).verdict) << q;
  }
}

TEST(DiffEntails, AgreesWithShortestPathOracle) {
  oracle::Rng rng(4242);
  int pos = 0, neg = 0;
  for (int i = 0; i < 500; ++i) {
    int vars = static_cast<int>(rng.between(2, 6));
    auto ds = random_set(rng, vars, static_cast<int>(rng.between(0, 6)));
    DiffConstraint beta = random_query(rng, ds, vars);
    bool expected = oracle::diff_oracle_entails(plain(ds), beta);
    CdVerdict v = diff_entails(ds, beta);
    ASSERT_EQ(v.verdict, expected) << i;
    EXPECT_EQ(diff_saturate(ds).bot, oracle::diff_oracle_unsat(plain(ds))) << i;
    if (expected) {
      ++pos;
      Proof p = extract_proof(v.ds, to_string(beta));
      EXPECT_TRUE(check_cd_proof(p, CdKind::Diff, ds).empty()) << i;
      expect_replay(v.ds);
    } else {
      ++neg;
      Assignment w = diff_witness(ds, Constraint(beta));
      for (const auto& d : plain(ds)) EXPECT_TRUE(substitute(w, d)) << i;
      EXPECT_FALSE(substitute(w, beta)) << i;
    }
  }
  EXPECT_GT(pos, 50);
  EXPECT_GT(neg, 50);
}

TEST(DiffWitness, Examples) {
  Assignment a = diff_witness(Ds({"x + 1 = y"}), D("x + 2 = y"));
  EXPECT_TRUE(substitute(a, as_diff("x + 1 = y")));
  EXPECT_FALSE(substitute(a, as_diff("x + 2 = y")));

  Assignment b = diff_witness(Ds({"x > 1"}), D("x > 2"));
  EXPECT_TRUE(b.at("x") > 1 && b.at("x") <= 2);

  EXPECT_TRUE(diff_witness({}, std::nullopt).empty());
}

TEST(DiffWitness, EntailedTargetIsRejected) {
  EXPECT_THROW(diff_witness(Ds({"x = 2"}), D("x > 1")), InfeasibleError);
}

TEST(DiffMinimal, Examples) {
  auto a = keys(diff_minimal_implications(Ds({"x = 3", "x + 2 = y", "z = 9"}), Ds({"y = 5"})));
  EXPECT_EQ(a, (std::set<oracle::ImpKey>{{{"x = 3", "x + 2 = y"}, "y = 5"}}));

  auto b = keys(diff_minimal_implications(Ds({"x = 1", "x = 2", "y = 0"}), {}));
  EXPECT_EQ(b, (std::set<oracle::ImpKey>{{{"x = 1", "x = 2"}, "Bot"}}));

  EXPECT_TRUE(diff_minimal_implications(Ds({"x > 1"}), Ds({"x = 2"})).empty());
}

TEST(DiffMinimal, AgreesWithBruteForce) {
  oracle::Rng rng(8);
  for (int i = 0; i < 150; ++i) {
    int vars = static_cast<int>(rng.between(2, 4));
    auto ds = random_set(rng, vars, static_cast<int>(rng.between(1, 6)));
    std::vector<Constraint> targets{random_query(rng, ds, vars), random_query(rng, ds, vars)};
    ASSERT_EQ(keys(diff_minimal_implications(ds, targets)),
              oracle::brute_force_implications(ds, targets))
        << i;
    ASSERT_EQ(keys(cd_minimal_implications(CdKind::Diff, ds, targets)),
              oracle::brute_force_implications(ds, targets))
        << i;
  }
}

TEST(CdDispatch, DefinednessFollowsFromMentions) {
  EXPECT_TRUE(cd_entails(CdKind::Diff, Ds({"hr = 173"}), Defined{"hr"}).verdict);
  EXPECT_FALSE(cd_entails(CdKind::Diff, Ds({"hr = 173"}), Defined{"age"}).verdict);
  LinConstraint l = std::get<LinConstraint>(parse_constraint("x + y = 2", CdKind::Lin));
  EXPECT_TRUE(cd_entails(CdKind::Lin, {l}, Defined{"y"}).verdict);
}

TEST(CdDispatch, CachedImplicationsMatchUncached) {
  oracle::Rng rng(12);
  ImplicationCache cache;
  for (int i = 0; i < 60; ++i) {
    int vars = static_cast<int>(rng.between(2, 5));
    auto ds = random_set(rng, vars, static_cast<int>(rng.between(1, 6)));
    std::vector<Constraint> targets{random_query(rng, ds, vars)};
    auto plain_run = keys(cd_minimal_implications(CdKind::Diff, ds, targets));
    EXPECT_EQ(keys(cd_minimal_implications(CdKind::Diff, ds, targets, &cache)), plain_run);
    EXPECT_EQ(keys(cd_minimal_implications(CdKind::Diff, ds, targets, &cache)), plain_run);
  }
}
