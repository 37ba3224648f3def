#include "dlcd/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "dlcd/alc.hpp"
#include "dlcd/bench.hpp"
#include "dlcd/check.hpp"
#include "dlcd/eld.hpp"

namespace dlcd {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

bool within_el(const Ontology& o, const Gci* goal) {
  return is_el(o) && (!goal || (is_el(goal->lhs) && is_el(goal->rhs)));
}

int classify(const std::string& file, std::ostream& out) {
  Ontology o = parse_ontology(read_file(file));
  Classification cl;
  if (within_el(o, nullptr)) {
    cl = eld_classify(o).classification;
  } else {
    std::vector<Concept> subs = subconcepts(o);
    for (const auto& c : subs) {
      for (const auto& d : subs) {
        if (alc_entails(o, Gci{c, d})) cl.pairs.insert({to_string(c), to_string(d)});
      }
    }
  }
  for (const auto& [c, d] : cl.pairs) out << c << " SubClassOf " << d << "\n";
  return kExitOk;
}

struct ProveArgs {
  std::string ontology, goal, logic, minimize = "size", out, dot;
};

int prove(const ProveArgs& a, std::ostream& out, std::ostream& err) {
  Ontology o = parse_ontology(read_file(a.ontology));
  Gci goal = parse_gci(a.goal, o.cd_kind);
  std::string logic = a.logic.empty() ? (within_el(o, &goal) ? "el" : "alc") : a.logic;
  if (logic == "el" && !within_el(o, &goal))
    throw UsageError("--logic el needs an ontology and goal without not, or, all");
  ProofMetric metric = metric_from_string(a.minimize);
  Proof p;
  try {
    p = logic == "el" ? eld_prove(o, goal, metric) : alc_prove(o, goal, metric);
  } catch (const NotDerivableError& e) {
    err << e.what() << "\n";
    return kExitNegative;
  }
  std::string json = proof_to_json(p);
  if (a.out.empty()) {
    out << json;
  } else {
    write_file(a.out, json);
  }
  if (!a.dot.empty()) write_file(a.dot, proof_to_dot(p));
  return kExitOk;
}

int check(const std::string& ontology, const std::string& proof, std::ostream& out,
          std::ostream& err) {
  Ontology o = parse_ontology(read_file(ontology));
  Proof p = proof_from_json(read_file(proof));
  std::vector<std::string> errors = check_proof(p, o);
  for (const auto& e : errors) err << e << "\n";
  if (!errors.empty()) return kExitNegative;
  out << "valid\n";
  return kExitOk;
}

int bench(const std::string& family, int n, uint64_t seed, const std::string& path) {
  BenchInstance b = generate_benchmark({family_from_string(family), n, seed});
  std::string text = "# goal: " + to_string(b.goal) + "\n" + serialize_ontology(b.ontology);
  write_file(path, text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reasoning and proofs for description logics with concrete domains", "dlcd"};
  app.require_subcommand(1);

  std::string classify_file;
  auto* cmd_classify = app.add_subcommand("classify", "Print all subsumptions between subconcepts");
  cmd_classify->add_option("file", classify_file, "Ontology file")->required();

  ProveArgs pa;
  auto* cmd_prove = app.add_subcommand("prove", "Prove a GCI and write the proof as JSON");
  cmd_prove->add_option("--ontology", pa.ontology, "Ontology file")->required();
  cmd_prove->add_option("--goal", pa.goal, "Goal, e.g. \"A SubClassOf B\"")->required();
  cmd_prove->add_option("--logic", pa.logic, "el or alc")
      ->check(CLI::IsMember({"el", "alc"}));
  cmd_prove->add_option("--minimize", pa.minimize, "size, depth or none")
      ->check(CLI::IsMember({"size", "depth", "none"}));
  cmd_prove->add_option("--out", pa.out, "Proof JSON file (default: standard output)");
  cmd_prove->add_option("--dot", pa.dot, "Also write the proof in DOT format");

  std::string check_ontology, check_proof_file;
  auto* cmd_check = app.add_subcommand("check", "Validate a proof against an ontology");
  cmd_check->add_option("--ontology", check_ontology, "Ontology file")->required();
  cmd_check->add_option("--proof", check_proof_file, "Proof JSON file")->required();

  std::string family, bench_out;
  int n = 1;
  uint64_t seed = 0;
  auto* cmd_bench = app.add_subcommand("bench", "Write a generated benchmark ontology");
  cmd_bench->add_option("--family", family, "diet, artificial, dsbj, dobj or random")
      ->required()
      ->check(CLI::IsMember({"diet", "artificial", "dsbj", "dobj", "random"}));
  cmd_bench->add_option("--n", n, "Size parameter")->required()->check(CLI::PositiveNumber);
  cmd_bench->add_option("--seed", seed, "Random seed")->required();
  cmd_bench->add_option("--out", bench_out, "Output file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_classify) return classify(classify_file, out);
    if (*cmd_prove) return prove(pa, out, err);
    if (*cmd_check) return check(check_ontology, check_proof_file, out, err);
    if (*cmd_bench) return bench(family, n, seed, bench_out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dlcd
