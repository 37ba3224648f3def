#include <gtest/gtest.h>

#include "dlcd/syntax.hpp"
#include "oracles.hpp"

using namespace dlcd;

namespace {

Concept random_concept(oracle::Rng& rng, CdKind kind, int depth) {
  int pick = static_cast<int>(rng.between(0, depth <= 0 ? 3 : 9));
  switch (pick) {
    case 0:
      return name(std::string(1, static_cast<char>('A' + rng.between(0, 3))));
    case 1:
      return rng.coin() ? top() : bot();
    case 2:
    case 3:
      if (kind == CdKind::Lin) return atom(oracle::random_lin(rng, 3));
      return atom(oracle::random_diff(rng, 3, 2));
    case 4:
    case 5:
      return conj(random_concept(rng, kind, depth - 1), random_concept(rng, kind, depth - 1));
    case 6:
      return disj(random_concept(rng, kind, depth - 1), random_concept(rng, kind, depth - 1));
    case 7:
      return neg(random_concept(rng, kind, depth - 1));
    case 8:
      return some(rng.coin() ? "r" : "s", random_concept(rng, kind, depth - 1));
    default:
      return all(rng.coin() ? "r" : "s", random_concept(rng, kind, depth - 1));
  }
}

Ontology random_alc_ontology(uint64_t seed, CdKind kind) {
  oracle::Rng rng(seed);
  Ontology o;
  o.cd_kind = kind;
  int n = static_cast<int>(rng.between(0, 6));
  for (int i = 0; i < n; ++i) o.axioms.push_back({random_concept(rng, kind, 3), random_concept(rng, kind, 3)});
  return o;
}

std::vector<std::string> printed(const Ontology& o) {
  std::vector<std::string> out;
  for (const auto& g : o.axioms) out.push_back(to_string(g));
  return out;
}

}  // namespace

TEST(Rational, FieldAxiomsOnRandomInputs) {
  oracle::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Rational a = rng.rational(-50, 50, 12), b = rng.rational(-50, 50, 12),
             c = rng.rational(-50, 50, 12);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    if (b != 0) {
      Rational q = a / b;
      EXPECT_EQ(q * b, a);
    }
    Rational s = a + b;
    EXPECT_GT(s.get_den(), 0);
    EXPECT_EQ(gcd(s.get_num(), s.get_den()), 1);
  }
}

TEST(Rational, ParsesFractionsInCanonicalForm) {
  Rational q = make_rational("6/-4");
  EXPECT_EQ(to_string(q), "-3/2");
  EXPECT_EQ(to_string(make_rational("10/5")), "2");
}

TEST(Parse, PulsePressureAxiom) {
  Ontology o = parse_ontology("Patient and [sys - dia - pp = 0] SubClassOf NeedAttention .");
  ASSERT_EQ(o.axioms.size(), 1u);
  EXPECT_EQ(o.cd_kind, CdKind::Lin);
  const Concept& lhs = o.axioms[0].lhs;
  ASSERT_EQ(lhs->kind, ConceptKind::And);
  ASSERT_EQ(lhs->b->kind, ConceptKind::Atom);
  const auto& l = std::get<LinConstraint>(*lhs->b->atom);
  EXPECT_EQ(l.coeffs.at("sys"), 1);
  EXPECT_EQ(l.coeffs.at("dia"), -1);
  EXPECT_EQ(l.coeffs.at("pp"), -1);
  EXPECT_EQ(l.rhs, 0);
  EXPECT_EQ(to_string(o.axioms[0].rhs), "NeedAttention");
}

TEST(Parse, MixedDomainsAreRejected) {
  EXPECT_THROW(parse_ontology("A SubClassOf [x > 2] .\nB SubClassOf [x + y = 3] ."),
               MixedDomainError);
  EXPECT_THROW(parse_ontology("A SubClassOf [x > 2] .\nB SubClassOf [2 x = 3] ."),
               MixedDomainError);
}

TEST(Parse, EmptyInput) {
  Ontology o = parse_ontology("");
  EXPECT_TRUE(o.axioms.empty());
  EXPECT_EQ(o.cd_kind, CdKind::None);
}

TEST(Parse, SharedFormFollowsTheOtherAtoms) {
  EXPECT_EQ(parse_ontology("A SubClassOf [x = 3] .").cd_kind, CdKind::Lin);
  EXPECT_EQ(parse_ontology("A SubClassOf [x = 3] .\nB SubClassOf [y > 1] .").cd_kind,
            CdKind::Diff);
  EXPECT_EQ(parse_ontology("#!domain diff\nA SubClassOf [x = 3] .").cd_kind, CdKind::Diff);
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse_ontology("A SubClassOf B .\nC SubClassOf .");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_GT(e.column, 1);
  }
  EXPECT_THROW(parse_ontology("A SubClassOf [x + = 2] ."), ParseError);
  EXPECT_THROW(parse_ontology("A SubClassOf $c1 ."), ParseError);
}

TEST(Parse, CommentsAndKeywords) {
  Ontology o = parse_ontology(
      "# a comment\nA and not B SubClassOf r some (C or s all Bot) .  # trailing\n"
      "Top SubClassOf [x > 1/2] .\n[x + 2 = y] SubClassOf Bot .");
  EXPECT_EQ(o.axioms.size(), 3u);
  EXPECT_EQ(o.cd_kind, CdKind::Diff);
}

TEST(Parse, DefinednessAtom) {
  Ontology o = parse_ontology("A SubClassOf [Top(hr)] .\nA SubClassOf [hr + age = 3] .");
  ASSERT_EQ(o.axioms[0].rhs->kind, ConceptKind::Atom);
  EXPECT_TRUE(std::holds_alternative<Defined>(*o.axioms[0].rhs->atom));
}

TEST(Parse, RoundTripProperty) {
  for (uint64_t seed = 0; seed < 300; ++seed) {
    CdKind kind = seed % 2 ? CdKind::Lin : CdKind::Diff;
    Ontology o = random_alc_ontology(seed, kind);
    std::string text = serialize_ontology(o);
    Ontology back = parse_ontology(text);
    ASSERT_EQ(printed(back), printed(o)) << text;
    EXPECT_EQ(serialize_ontology(back), text);
  }
}

TEST(Subconcepts, ExistentialClosure) {
  Ontology o = parse_ontology("A SubClassOf r some B .");
  std::set<std::string> got;
  for (const auto& c : subconcepts(o)) got.insert(to_string(c));
  EXPECT_EQ(got, (std::set<std::string>{"A", "r some B", "B", "Top", "Bot"}));
}

TEST(Subconcepts, Conjunction) {
  Ontology o = parse_ontology("A and B SubClassOf C .");
  std::set<std::string> got;
  for (const auto& c : subconcepts(o)) got.insert(to_string(c));
  EXPECT_EQ(got, (std::set<std::string>{"A and B", "A", "B", "C", "Top", "Bot"}));
}

TEST(Subconcepts, EmptyOntology) {
  std::vector<Concept> s = subconcepts(Ontology{});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(to_string(s[0]), "Top");
  EXPECT_EQ(to_string(s[1]), "Bot");
}

TEST(Subconcepts, ClosedUnderSubterms) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Ontology o = random_alc_ontology(seed, CdKind::Lin);
    std::set<std::string> all;
    for (const auto& c : subconcepts(o)) all.insert(to_string(c));
    for (const auto& c : subconcepts(o)) {
      if (c->a) EXPECT_TRUE(all.count(to_string(c->a)));
      if (c->b) EXPECT_TRUE(all.count(to_string(c->b)));
    }
  }
}

TEST(Abstraction, GoldenConstraint) {
  Ontology o = parse_ontology("C SubClassOf [2 x + 3 y = 5] .");
  auto [abs, map] = abstract_constraints(o);
  ASSERT_EQ(map.size(), 1u);
  EXPECT_EQ(abs.axioms[0].rhs->kind, ConceptKind::Name);
  EXPECT_EQ(abs.axioms[0].rhs->name, map.names()[0]);
  EXPECT_EQ(to_string(map.constraints()[0]), "2 x + 3 y = 5");
  EXPECT_TRUE(map.is_abstraction(map.names()[0]));
  EXPECT_FALSE(map.is_abstraction("C"));
}

TEST(Abstraction, NoConstraintsMeansIdentity) {
  Ontology o = parse_ontology("A SubClassOf r some B .\nB and C SubClassOf D .");
  auto [abs, map] = abstract_constraints(o);
  EXPECT_EQ(map.size(), 0u);
  EXPECT_EQ(printed(abs), printed(o));
}

TEST(Abstraction, EqualAndScaledAtomsShareAName) {
  Ontology o = parse_ontology("A SubClassOf [x + y = 1] .\nB SubClassOf [2 x + 2 y = 2] .\n"
                              "C SubClassOf [x + y = 1] .");
  auto [abs, map] = abstract_constraints(o);
  EXPECT_EQ(map.size(), 1u);
  EXPECT_EQ(to_string(abs.axioms[0].rhs), to_string(abs.axioms[1].rhs));
  EXPECT_EQ(to_string(abs.axioms[0].rhs), to_string(abs.axioms[2].rhs));
}

TEST(Abstraction, InverseSubstitutionRestoresTheOntology) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    CdKind kind = seed % 2 ? CdKind::Lin : CdKind::Diff;
    Ontology o = random_alc_ontology(seed, kind);
    auto [abs, map] = abstract_constraints(o);
    for (size_t i = 0; i < o.axioms.size(); ++i) {
      // Scaled duplicates come back as the first occurrence, so compare
      // canonical keys.
      EXPECT_EQ(canon_key(map.concretize(abs.axioms[i])), canon_key(o.axioms[i]));
      EXPECT_EQ(to_string(abs.axioms[i]).find('['), std::string::npos);
    }
  }
}

TEST(Nnf, PushesNegationsToNamesAndAtoms) {
  Concept c = parse_concept("not (A and r some (B or not [x = 1]))", CdKind::Diff);
  EXPECT_EQ(to_string(nnf(c)), "not A or r all (not B and [x = 1])");
}
