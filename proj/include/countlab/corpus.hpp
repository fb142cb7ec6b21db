#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "countlab/formula.hpp"

namespace countlab {

// Families cycled through by make_corpus.
enum class CorpusFamily {
  Random1,     // random 3-CNF, clause/variable ratio 1
  Random2,     // ratio 2
  Random3,     // ratio 3
  Random426,   // ratio 4.26
  Unsat,       // random 3-CNF plus (x1) and (-x1)
  Tautology,   // no clauses
  SingleModel  // one unit clause per variable
};

struct CorpusSpec {
  std::size_t count = 200;
  std::uint32_t min_vars = 1;
  std::uint32_t max_vars = 8;
  std::uint64_t seed = 0;
};

// Random k-CNF with distinct variables per clause (width clamps to n).
CnfFormula random_kcnf(std::uint32_t num_vars, std::size_t num_clauses,
                       std::uint32_t width, std::mt19937_64& rng);

CnfFormula make_family_member(CorpusFamily family, std::uint32_t num_vars,
                              std::mt19937_64& rng);

// Exactly `models` models over n variables (n <= 20): the assignments whose
// bit pattern, x_v as bit v-1, is below `models`. One blocking clause per
// excluded assignment.
CnfFormula formula_with_models(std::uint32_t num_vars, std::uint64_t models);

// Deterministic mixed corpus: formula i belongs to family i mod 7.
std::vector<CnfFormula> make_corpus(const CorpusSpec& spec);

}  // namespace countlab
