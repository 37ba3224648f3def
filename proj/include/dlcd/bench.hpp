#pragma once

#include <cstdint>
#include <string>

#include "dlcd/syntax.hpp"

namespace dlcd {

enum class Family { Diet, Artificial, Dsbj, Dobj, Random };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct BenchSpec {
  Family family = Family::Artificial;
  int n = 1;
  uint64_t seed = 0;
};

struct BenchInstance {
  Ontology ontology;
  Gci goal;
};

// Pure function of its argument. The goal is checked to be entailed before the
// instance is returned (std::logic_error otherwise).
BenchInstance generate_benchmark(const BenchSpec& spec);

// Number of distinct constraint atoms each family produces for size n.
size_t expected_constraint_count(Family f, int n);
size_t constraint_count(const Ontology& o);

struct RandomOptions {
  CdKind kind = CdKind::Lin;
  int min_axioms = 1;
  int max_axioms = 15;
  int min_constraints = 1;
  int max_constraints = 6;
  int max_variables = 4;
  int names = 5;
};

// Random EL ontology with constraint atoms; constants in -3..3 with
// denominators up to 2.
Ontology random_ontology(uint64_t seed, const RandomOptions& opt);

}  // namespace dlcd
