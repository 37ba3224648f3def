// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "dlcd/alc.hpp"
#include "dlcd/bench.hpp"
#include "dlcd/check.hpp"
#include "dlcd/eld.hpp"
#include "oracles.hpp"

using namespace dlcd;

namespace {

// Tolerances and sizes.
constexpr double kGoldenSeconds = 1.0;
constexpr int kOracleOntologies = 200;
constexpr double kOracleSeconds = 60.0;
constexpr int kSolverQueries = 500;
constexpr int kMaxBenchN = 8;
constexpr int kAgreementInstances = 100;
constexpr int kAgreementPairs = 5;
constexpr int kSaturations = 100;
constexpr int kMaxDiffVars = 8;
constexpr int kDeterminismMaxN = 4;

const char* kGolden = "C SubClassOf [2 x + 3 y = 5] .\nC SubClassOf [4 y = 3] .";
const char* kGoldenGoal = "C SubClassOf [4 x - 6 y = 1]";
const char* kPatient =
    "CurrentPatient SubClassOf ICUpatient .\n"
    "CurrentPatient SubClassOf [age = 42] .\n"
    "CurrentPatient SubClassOf [hr = 173] .\n"
    "ICUpatient SubClassOf [maxHR + age = 220] .\n"
    "[maxHR - hr = 5] SubClassOf NeedAttention .";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Iteration counts of every eld_classify call made while checking the
// other criteria, together with a bound recomputed here.
struct IterationLog {
  size_t runs = 0;
  size_t violations = 0;
  std::string first_violation;

  EldResult classify(const Ontology& o, const std::string& what) {
    EldResult r = eld_classify(o);
    size_t bound = subconcepts(abstract_constraints(o).first).size() * constraint_count(o);
    ++runs;
    if (r.iterations > bound) {
      if (violations++ == 0)
        first_violation = what + ": " + std::to_string(r.iterations) + " > " + std::to_string(bound);
    }
    return r;
  }
};

IterationLog g_iterations;

bool lin_holds(const Assignment& a, const LinConstraint& c) {
  Rational s = 0;
  for (const auto& [v, q] : c.coeffs) {
    auto it = a.find(v);
    if (it == a.end()) return false;
    s += q * it->second;
  }
  return s == c.rhs;
}

bool diff_holds(const Assignment& a, const DiffConstraint& c) {
  using K = DiffConstraint::Kind;
  auto val = [&](const std::string& v) { return a.find(v); };
  switch (c.kind) {
    case K::Eq: return val(c.x) != a.end() && val(c.x)->second == c.q;
    case K::Gt: return val(c.x) != a.end() && val(c.x)->second > c.q;
    case K::Diff:
      return val(c.x) != a.end() && val(c.y) != a.end() && val(c.x)->second + c.q == val(c.y)->second;
    default: return false;
  }
}

Outcome criterion1() {
  Outcome out;
  auto t = Clock::now();
  Ontology o = parse_ontology(kGolden);
  Proof p = eld_prove(o, parse_gci(kGoldenGoal, o.cd_kind));
  std::string json = proof_to_json(p);
  double secs = seconds_since(t);
  Proof q = proof_from_json(json);
  auto label_of = [&](int i) {
    const ProofStep* s = q.step_for(i);
    return s ? s->label : std::vector<std::string>{};
  };
  std::string mid;
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    if (!q.step_for(static_cast<int>(i)) || static_cast<int>(i) == q.sink()) continue;
    mid = q.nodes[i].label;
    if (label_of(static_cast<int>(i)) == std::vector<std::string>{"-3"} &&
        mid == "C SubClassOf [-12 y = -9]" &&
        label_of(q.sink()) == std::vector<std::string>{"2", "1"})
      out.detail = "labels [-3], [2,1]";
    if (label_of(static_cast<int>(i)) == std::vector<std::string>{"-1/12", "1/6"} &&
        mid == "C SubClassOf [y = 3/4]")
      out.detail = "normalized labels [-1/12,1/6]";
  }
  out.pass = q.nodes.size() == 4 && q.nodes[q.sink()].label == kGoldenGoal && !out.detail.empty() &&
             check_proof(q, o).empty() && secs < kGoldenSeconds;
  std::ostringstream ss;
  ss << q.nodes.size() << " nodes, intermediate " << mid << ", "
     << (out.detail.empty() ? "unexpected labels" : out.detail) << ", " << secs << " s";
  out.detail = ss.str();
  return out;
}

Outcome criterion2() {
  Outcome out;
  auto t = Clock::now();
  int mismatches = 0;
  std::string first;
  for (CdKind kind : {CdKind::Lin, CdKind::Diff}) {
    for (int i = 0; i < kOracleOntologies; ++i) {
      RandomOptions opt;
      opt.kind = kind;
      uint64_t seed = 10000 + i;
      Ontology o = random_ontology(seed, opt);
      EldResult r = g_iterations.classify(o, "random " + to_string(kind) + " " + std::to_string(seed));
      if (r.classification != oracle::od_classify(o) && mismatches++ == 0)
        first = to_string(kind) + " seed " + std::to_string(seed);
    }
  }
  double secs = seconds_since(t);
  out.pass = mismatches == 0 && secs < kOracleSeconds;
  std::ostringstream ss;
  ss << 2 * kOracleOntologies << " ontologies, " << mismatches << " mismatches" << (first.empty() ? "" : " (first " + first + ")")
     << ", " << secs << " s";
  out.detail = ss.str();
  return out;
}

Outcome criterion3() {
  oracle::Rng rng(31337);
  int lin_bad = 0, diff_bad = 0, lin_neg = 0, diff_neg = 0;
  for (int i = 0; i < kSolverQueries; ++i) {
    int vars = static_cast<int>(rng.between(2, 5));
    std::vector<LinConstraint> ds;
    int m = static_cast<int>(rng.between(0, 4));
    for (int k = 0; k < m; ++k) ds.push_back(oracle::random_lin(rng, vars));
    LinConstraint beta;
    if (ds.empty() || rng.coin()) {
      beta = oracle::random_lin(rng, vars);
    } else {
      for (const auto& d : ds) beta = lin_add(beta, lin_scale(d, rng.between(-3, 3)));
      if (beta.coeffs.empty()) beta = ds[0];
    }
    bool expected = oracle::lin_oracle_entails(ds, beta);
    CdVerdict v = lin_entails(ds, beta);
    bool ok = v.verdict == expected;
    if (ok && expected) {
      std::vector<Constraint> prem(ds.begin(), ds.end());
      ok = check_cd_proof(extract_proof(v.ds, lin_label(beta)), CdKind::Lin, prem).empty();
    } else if (ok) {
      ++lin_neg;
      Assignment w = lin_witness(ds, {beta});
      for (const auto& d : ds) ok = ok && lin_holds(w, d);
      ok = ok && !lin_holds(w, beta);
    }
    lin_bad += !ok;
  }
  for (int i = 0; i < kSolverQueries; ++i) {
    int vars = static_cast<int>(rng.between(2, 6));
    std::vector<Constraint> ds;
    std::vector<DiffConstraint> plain;
    int m = static_cast<int>(rng.between(0, 6));
    for (int k = 0; k < m; ++k) {
      plain.push_back(oracle::random_diff(rng, vars));
      ds.push_back(plain.back());
    }
    DiffConstraint beta = oracle::random_diff(rng, vars);
    if (!plain.empty() && rng.coin()) {
      beta = plain[rng.between(0, plain.size() - 1)];
      if (beta.kind == DiffConstraint::Kind::Gt && rng.coin()) beta.q -= 1;
    }
    bool expected = oracle::diff_oracle_entails(plain, beta);
    CdVerdict v = diff_entails(ds, beta);
    bool ok = v.verdict == expected;
    if (ok && expected) {
      ok = check_cd_proof(extract_proof(v.ds, to_string(beta)), CdKind::Diff, ds).empty();
    } else if (ok) {
      ++diff_neg;
      Assignment w = diff_witness(ds, Constraint(beta));
      for (const auto& d : plain) ok = ok && diff_holds(w, d);
      ok = ok && !diff_holds(w, beta);
    }
    diff_bad += !ok;
  }
  Outcome out;
  out.pass = lin_bad == 0 && diff_bad == 0;
  std::ostringstream ss;
  ss << "lin " << kSolverQueries << " queries (" << lin_neg << " negative), " << lin_bad
     << " disagreements; diff " << kSolverQueries << " queries (" << diff_neg << " negative), "
     << diff_bad << " disagreements";
  out.detail = ss.str();
  return out;
}

Outcome criterion4() {
  int proofs = 0, bridges = 0, failures = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };
  for (Family f : {Family::Diet, Family::Artificial, Family::Dsbj, Family::Dobj, Family::Random}) {
    for (int n = 1; n <= kMaxBenchN; ++n) {
      std::string what = to_string(f) + " " + std::to_string(n);
      BenchInstance b = generate_benchmark({f, n, static_cast<uint64_t>(n)});
      EldResult r = g_iterations.classify(b.ontology, what);
      for (const auto& br : r.registry) {
        ++bridges;
        if (!check_cd_proof(br.proof, b.ontology.cd_kind, br.premises).empty()) fail(what + " bridge");
      }
      try {
        ++proofs;
        auto report = check_proof(eld_prove(b.ontology, b.goal), b.ontology);
        if (!report.empty()) fail(what + " el: " + report[0]);
      } catch (const std::exception& e) {
        fail(what + " el: " + e.what());
      }
      try {
        ++proofs;
        auto report = check_proof(alc_prove(b.ontology, b.goal), b.ontology);
        if (!report.empty()) fail(what + " alc: " + report[0]);
      } catch (const std::exception& e) {
        fail(what + " alc: " + e.what());
      }
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = std::to_string(proofs) + " proofs, " + std::to_string(bridges) + " bridge proofs, " +
               std::to_string(failures) + " failures" + (first.empty() ? "" : " (first " + first + ")");
  return out;
}

Outcome criterion5() {
  int disagreements = 0, limits = 0, positive = 0;
  std::string first;
  for (int i = 0; i < kAgreementInstances; ++i) {
    RandomOptions opt;
    opt.kind = i % 2 ? CdKind::Diff : CdKind::Lin;
    uint64_t seed = 20000 + i;
    Ontology o = random_ontology(seed, opt);
    Classification cl = g_iterations.classify(o, "agreement " + std::to_string(seed)).classification;
    std::vector<Concept> subs = subconcepts(o);
    oracle::Rng rng(seed);
    for (int k = 0; k < kAgreementPairs; ++k) {
      // Every other pair is drawn from the entailed ones so both verdicts occur.
      Gci g{subs[rng.between(0, subs.size() - 1)], subs[rng.between(0, subs.size() - 1)]};
      if (k % 2 == 1) {
        std::vector<std::pair<std::string, std::string>> pairs(cl.pairs.begin(), cl.pairs.end());
        const auto& [c, d] = pairs[rng.between(0, pairs.size() - 1)];
        g = Gci{parse_concept(c, o.cd_kind), parse_concept(d, o.cd_kind)};
      }
      bool expected = cl.contains(g.lhs, g.rhs);
      positive += expected;
      try {
        if (alc_entails(o, g) != expected && disagreements++ == 0)
          first = std::to_string(seed) + " " + to_string(g);
      } catch (const ResourceLimitError&) {
        ++limits;
      }
    }
  }
  Outcome out;
  out.pass = disagreements == 0 && limits == 0;
  out.detail = std::to_string(kAgreementInstances * kAgreementPairs) + " goals (" +
               std::to_string(positive) + " entailed), " + std::to_string(disagreements) +
               " disagreements, " + std::to_string(limits) + " resource limits" +
               (first.empty() ? "" : " (first " + first + ")");
  return out;
}

Outcome criterion6() {
  oracle::Rng rng(6006);
  int violations = 0;
  size_t worst_v = 0, worst_derived = 0;
  for (int i = 0; i < kSaturations; ++i) {
    int vars = static_cast<int>(rng.between(2, kMaxDiffVars));
    int m = static_cast<int>(rng.between(1, 2 * vars));
    std::vector<Constraint> ds;
    for (int k = 0; k < m; ++k) ds.push_back(oracle::random_diff(rng, vars));
    DiffState st = diff_saturate(ds);
    size_t v = st.first_mention.size();
    if (v > static_cast<size_t>(kMaxDiffVars)) ++violations;
    if (st.derived > 2 * v * v + 2 * v + 1) ++violations;
    if (st.derived > worst_derived) {
      worst_derived = st.derived;
      worst_v = v;
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(kSaturations) + " saturations, " + std::to_string(violations) +
               " violations, max derived " + std::to_string(worst_derived) + " at v = " +
               std::to_string(worst_v);
  return out;
}

Outcome criterion7() {
  std::vector<long long> sizes;
  for (int n = 2; n <= 6; ++n) {
    BenchInstance b = generate_benchmark({Family::Artificial, n, 1});
    sizes.push_back(eld_prove(b.ontology, b.goal, ProofMetric::Size).tree_size());
  }
  bool ok = true;
  for (size_t i = 1; i < sizes.size(); ++i) ok = ok && sizes[i] > sizes[i - 1];
  for (size_t i = 2; i < sizes.size(); ++i)
    ok = ok && sizes[i] - sizes[i - 1] >= sizes[i - 1] - sizes[i - 2];
  Outcome out;
  out.pass = ok;
  out.detail = "s(2..6) =";
  for (long long s : sizes) out.detail += " " + std::to_string(s);
  return out;
}

Outcome criterion8() {
  Outcome out;
  out.pass = g_iterations.violations == 0 && g_iterations.runs > 0;
  out.detail = std::to_string(g_iterations.runs) + " classifications, " +
               std::to_string(g_iterations.violations) + " over the bound" +
               (g_iterations.first_violation.empty() ? "" : " (first " + g_iterations.first_violation + ")");
  return out;
}

// Proof JSON for every goal of the corpus, concatenated.
std::string corpus_outputs() {
  std::string all;
  auto emit = [&](const std::string& tag, const std::function<Proof()>& make) {
    all += tag + "\n";
    try {
      all += proof_to_json(make());
    } catch (const std::exception& e) {
      all += std::string("error: ") + e.what();
    }
    all += "\n";
  };
  Ontology golden = parse_ontology(kGolden);
  Gci golden_goal = parse_gci(kGoldenGoal, golden.cd_kind);
  Ontology ex3 = parse_ontology(kPatient);
  Gci ex3_goal = parse_gci("CurrentPatient SubClassOf NeedAttention", ex3.cd_kind);
  for (ProofMetric m : {ProofMetric::Size, ProofMetric::Depth, ProofMetric::None}) {
    emit("golden el", [&] { return eld_prove(golden, golden_goal, m); });
    emit("golden alc", [&] { return alc_prove(golden, golden_goal, m); });
    emit("patient el", [&] { return eld_prove(ex3, ex3_goal, m); });
    emit("patient alc", [&] { return alc_prove(ex3, ex3_goal, m); });
  }
  for (Family f : {Family::Diet, Family::Artificial, Family::Dsbj, Family::Dobj, Family::Random}) {
    for (int n = 1; n <= kDeterminismMaxN; ++n) {
      BenchInstance b = generate_benchmark({f, n, 99});
      std::string tag = to_string(f) + " " + std::to_string(n);
      emit(tag + " el", [&] { return eld_prove(b.ontology, b.goal); });
      emit(tag + " alc", [&] { return alc_prove(b.ontology, b.goal); });
    }
  }
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RandomOptions opt;
    opt.kind = seed % 2 ? CdKind::Diff : CdKind::Lin;
    Ontology o = random_ontology(30000 + seed, opt);
    Classification cl = eld_classify(o).classification;
    int k = 0;
    for (const auto& [c, d] : cl.pairs) {
      if (c == d || ++k > 3) continue;
      Gci g = parse_gci(c + " SubClassOf " + d, o.cd_kind);
      emit("random " + std::to_string(seed) + " " + to_string(g), [&] { return eld_prove(o, g); });
    }
  }
  return all;
}

Outcome criterion9() {
  std::string a = corpus_outputs();
  std::string b = corpus_outputs();
  Outcome out;
  out.pass = a == b && a.find("error:") == std::string::npos;
  out.detail = std::to_string(a.size()) + " bytes per run, " + (a == b ? "identical" : "different");
  if (a.find("error:") != std::string::npos) out.detail += ", corpus run reported an error";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden proof", criterion1},
      {"classification equals the exponential construction", criterion2},
      {"lin and diff solvers agree with the oracles", criterion3},
      {"every benchmark proof passes the checker", criterion4},
      {"ALC and EL verdicts agree", criterion5},
      {"diff saturation size bound", criterion6},
      {"artificial proof sizes grow convexly", criterion7},
      {"outer loop iteration bound", criterion8},
      {"repeated runs give identical proofs", criterion9},
  };
  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto t = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s criterion %zu: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
