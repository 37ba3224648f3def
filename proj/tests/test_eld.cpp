#include <gtest/gtest.h>

#include "dlcd/bench.hpp"
#include "dlcd/check.hpp"
#include "dlcd/eld.hpp"
#include "oracles.hpp"

using namespace dlcd;

namespace {

const char* kGolden = "C SubClassOf [2 x + 3 y = 5] .\nC SubClassOf [4 y = 3] .";

const char* kPatient =
    "CurrentPatient SubClassOf ICUpatient .\n"
    "CurrentPatient SubClassOf [age = 42] .\n"
    "CurrentPatient SubClassOf [hr = 173] .\n"
    "ICUpatient SubClassOf [maxHR + age = 220] .\n"
    "[maxHR - hr = 5] SubClassOf NeedAttention .";

const std::string& node_label(const Proof& p, int i) { return p.nodes[i].label; }

int find_node(const Proof& p, const std::string& label) {
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    if (p.nodes[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

RandomOptions options(CdKind kind) {
  RandomOptions opt;
  opt.kind = kind;
  return opt;
}

}  // namespace

TEST(EldClassify, GoldenWithConsumer) {
  Ontology o = parse_ontology(std::string(kGolden) + "\n[4 x - 6 y = 1] SubClassOf E .");
  EldResult r = eld_classify(o);
  EXPECT_TRUE(r.classification.pairs.count({"C", "E"}));
  EXPECT_EQ(r.classification, oracle::od_classify(o));
  EXPECT_LE(r.iterations, r.bound);
}

TEST(EldClassify, DiffContradiction) {
  Ontology o = parse_ontology("C SubClassOf [x = 1] .\nC SubClassOf [x = 2] .", CdKind::Diff);
  EXPECT_EQ(o.cd_kind, CdKind::Diff);
  EldResult r = eld_classify(o);
  EXPECT_TRUE(r.classification.pairs.count({"C", "Bot"}));
  ASSERT_EQ(r.registry.size(), 1u);
  EXPECT_FALSE(r.registry[0].conclusion.has_value());
  EXPECT_EQ(to_string(r.registry[0].axiom.rhs), "Bot");
}

TEST(EldClassify, ConstraintFreeMatchesEl) {
  for (bool unsat : {false, true}) {
    Ontology o = parse_ontology(
        "A SubClassOf r some B .\nB SubClassOf C .\nr some C SubClassOf D .\nD and A SubClassOf E .");
    if (unsat) o.axioms.push_back({name("E"), bot()});
    EldResult r = eld_classify(o);
    EXPECT_EQ(r.classification, el_classify(o).first);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_TRUE(r.registry.empty());
  }
}

TEST(EldClassify, AgreesWithExponentialConstruction) {
  for (CdKind kind : {CdKind::Lin, CdKind::Diff}) {
    for (uint64_t seed = 0; seed < 60; ++seed) {
      Ontology o = random_ontology(seed, options(kind));
      EldResult r = eld_classify(o);
      ASSERT_EQ(r.classification, oracle::od_classify(o)) << to_string(kind) << " " << seed
                                                            << "\n" << serialize_ontology(o);
      EXPECT_LE(r.iterations, r.bound);
    }
  }
}

TEST(EldClassify, BridgesHaveOneCheckedProofEach) {
  for (CdKind kind : {CdKind::Lin, CdKind::Diff}) {
    for (uint64_t seed = 100; seed < 140; ++seed) {
      Ontology o = random_ontology(seed, options(kind));
      EldResult r = eld_classify(o);
      std::set<std::string> abstract_axioms;
      for (const auto& g : abstract_constraints(o).first.axioms) abstract_axioms.insert(to_string(g));
      std::map<std::string, int> registered;
      for (const auto& b : r.registry) {
        ++registered[to_string(b.axiom)];
        auto report = check_cd_proof(b.proof, o.cd_kind, b.premises);
        EXPECT_TRUE(report.empty()) << report[0];
        EXPECT_EQ(b.proof.nodes[b.proof.sink()].label, b.goal);
      }
      for (const auto& g : r.final_ontology.axioms) {
        std::string key = to_string(g);
        if (abstract_axioms.count(key)) continue;
        EXPECT_EQ(registered[key], 1) << key;
      }
    }
  }
}

TEST(EldClassify, IterationBoundHoldsOnBenchmarks) {
  for (Family f : {Family::Artificial, Family::Diet, Family::Dsbj, Family::Dobj}) {
    for (int n = 1; n <= 3; ++n) {
      BenchInstance b = generate_benchmark({f, n, 7});
      EldResult r = eld_classify(b.ontology);
      EXPECT_GE(r.iterations, 1u);
      EXPECT_LE(r.iterations, r.bound) << to_string(f) << " " << n;
    }
  }
}

TEST(EldProve, Golden) {
  Ontology o = parse_ontology(kGolden);
  Proof p = eld_prove(o, parse_gci("C SubClassOf [4 x - 6 y = 1]", o.cd_kind));
  ASSERT_EQ(p.nodes.size(), 4u);
  EXPECT_EQ(node_label(p, p.sink()), "C SubClassOf [4 x - 6 y = 1]");
  int mid = find_node(p, "C SubClassOf [-12 y = -9]");
  ASSERT_GE(mid, 0);
  EXPECT_EQ(p.step_for(mid)->label, (std::vector<std::string>{"-3"}));
  EXPECT_EQ(p.step_for(p.sink())->label, (std::vector<std::string>{"2", "1"}));
  std::set<std::string> leaves;
  for (int l : p.leaves()) leaves.insert(node_label(p, l));
  EXPECT_EQ(leaves, (std::set<std::string>{"C SubClassOf [2 x + 3 y = 5]",
                                           "C SubClassOf [4 y = 3]"}));
  EXPECT_TRUE(check_proof(p, o).empty());
}

TEST(EldProve, Patient) {
  Ontology o = parse_ontology(kPatient);
  Gci goal = parse_gci("CurrentPatient SubClassOf NeedAttention", o.cd_kind);
  EXPECT_TRUE(eld_entails(o, goal));
  Proof p = eld_prove(o, goal);
  auto report = check_proof(p, o);
  EXPECT_TRUE(report.empty()) << report[0];
  EXPECT_NE(find_node(p, "CurrentPatient SubClassOf [-hr + maxHR = 5]"), -1);
}

TEST(EldProve, TautologyGoal) {
  Ontology o = parse_ontology(kGolden);
  Proof p = eld_prove(o, parse_gci("C SubClassOf C", o.cd_kind));
  EXPECT_EQ(p.nodes.size(), 1u);
  EXPECT_TRUE(check_proof(p, o).empty());
}

TEST(EldProve, NotEntailed) {
  Ontology o = parse_ontology(kGolden);
  EXPECT_THROW(eld_prove(o, parse_gci("C SubClassOf [x = 1]", o.cd_kind)), NotDerivableError);
  EXPECT_FALSE(eld_entails(o, parse_gci("C SubClassOf D", o.cd_kind)));
}

TEST(EldProve, ComplexGoalsOutsideTheOntology) {
  Ontology o = parse_ontology(kPatient);
  Gci goal = parse_gci("CurrentPatient and ICUpatient SubClassOf [maxHR = 178]", o.cd_kind);
  Proof p = eld_prove(o, goal);
  EXPECT_TRUE(check_proof(p, o).empty());
}

TEST(EldProve, EveryEntailedPairHasACheckedProof) {
  for (CdKind kind : {CdKind::Lin, CdKind::Diff}) {
    for (uint64_t seed = 200; seed < 240; ++seed) {
      Ontology o = random_ontology(seed, options(kind));
      EldResult r = eld_classify(o);
      int n = 0;
      for (const auto& [c, d] : r.classification.pairs) {
        if (c == d || d == "Top" || ++n > 12) continue;
        Gci goal = parse_gci(c + " SubClassOf " + d, o.cd_kind);
        for (ProofMetric m : {ProofMetric::Size, ProofMetric::Depth}) {
          Proof p = eld_prove(o, goal, m);
          auto report = check_proof(p, o);
          EXPECT_TRUE(report.empty()) << seed << " " << to_string(goal) << ": " << report[0];
        }
      }
    }
  }
}

TEST(EldProve, SizeNeverExceedsDepthMetricProof) {
  for (uint64_t seed = 300; seed < 308; ++seed) {
    Ontology o = random_ontology(seed, options(CdKind::Lin));
    EldResult r = eld_classify(o);
    for (const auto& [c, d] : r.classification.pairs) {
      if (c == d) continue;
      Gci goal = parse_gci(c + " SubClassOf " + d, o.cd_kind);
      Proof s = eld_prove(o, goal, ProofMetric::Size);
      Proof dp = eld_prove(o, goal, ProofMetric::Depth);
      EXPECT_LE(s.tree_size(), dp.tree_size());
      EXPECT_LE(dp.depth(), s.depth());
    }
  }
}
