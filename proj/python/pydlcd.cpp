#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlcd/alc.hpp"
#include "dlcd/bench.hpp"
#include "dlcd/check.hpp"
#include "dlcd/eld.hpp"

namespace py = pybind11;
using namespace dlcd;

namespace {

bool within_el(const Ontology& o, const Gci& g) {
  return is_el(o) && is_el(g.lhs) && is_el(g.rhs);
}

}  // namespace

PYBIND11_MODULE(pydlcd, m) {
  m.doc() = "Reasoning and proofs for description logics with concrete domains";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotDerivableError>(m, "NotDerivableError", PyExc_ValueError);

  m.def(
      "classify",
      [](const std::string& text) {
        Ontology o = parse_ontology(text);
        if (!is_el(o)) throw std::invalid_argument("classify expects an EL ontology");
        return eld_classify(o).classification.pairs;
      },
      py::arg("ontology"), "Subsumption pairs between all subconcepts.");

  m.def(
      "entails",
      [](const std::string& text, const std::string& goal) {
        Ontology o = parse_ontology(text);
        Gci g = parse_gci(goal, o.cd_kind);
        return within_el(o, g) ? eld_entails(o, g) : alc_entails(o, g);
      },
      py::arg("ontology"), py::arg("goal"));

  m.def(
      "prove",
      [](const std::string& text, const std::string& goal, const std::string& minimize) {
        Ontology o = parse_ontology(text);
        Gci g = parse_gci(goal, o.cd_kind);
        ProofMetric metric = metric_from_string(minimize);
        Proof p = within_el(o, g) ? eld_prove(o, g, metric) : alc_prove(o, g, metric);
        return proof_to_json(p);
      },
      py::arg("ontology"), py::arg("goal"), py::arg("minimize") = "size",
      "Proof as JSON text.");

  m.def(
      "check",
      [](const std::string& text, const std::string& proof_json) {
        return check_proof(proof_from_json(proof_json), parse_ontology(text));
      },
      py::arg("ontology"), py::arg("proof"), "Problems found; empty when the proof is valid.");

  m.def(
      "bench",
      [](const std::string& family, int n, uint64_t seed) {
        BenchInstance b = generate_benchmark({family_from_string(family), n, seed});
        return py::make_tuple(serialize_ontology(b.ontology), to_string(b.goal));
      },
      py::arg("family"), py::arg("n"), py::arg("seed") = 0, "(ontology text, goal text)");
}
