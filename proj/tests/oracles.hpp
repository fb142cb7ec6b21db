// Test-only reference computations. Everything here goes through
// countlab::evaluate on explicit assignments and shares no code with the
// counting engines or the gadget constructions it is used to check.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "countlab/formula.hpp"

namespace oracle {

inline std::uint64_t count_by_evaluation(const countlab::CnfFormula& f) {
  std::uint64_t models = 0;
  for (std::uint64_t bits = 0; bits < (1ULL << f.num_vars()); ++bits) {
    models += countlab::evaluate(f, countlab::Assignment::from_bits(bits, f.num_vars()));
  }
  return models;
}

inline std::uint64_t count_by_evaluation(const countlab::DnfFormula& d) {
  std::uint64_t models = 0;
  for (std::uint64_t bits = 0; bits < (1ULL << d.num_vars()); ++bits) {
    models += countlab::evaluate(d, countlab::Assignment::from_bits(bits, d.num_vars()));
  }
  return models;
}

// Number of extensions of the first `prefix` variables (given by
// `prefix_bits`) to the remaining ones that satisfy f.
inline std::uint64_t extensions(const countlab::CnfFormula& f, std::uint32_t prefix,
                                std::uint64_t prefix_bits) {
  const std::uint32_t rest = f.num_vars() - prefix;
  std::uint64_t total = 0;
  for (std::uint64_t hi = 0; hi < (1ULL << rest); ++hi) {
    const std::uint64_t bits = prefix_bits | (hi << prefix);
    total += countlab::evaluate(f, countlab::Assignment::from_bits(bits, f.num_vars()));
  }
  return total;
}

// A formula over n variables whose models are exactly the assignments with
// bits < `models`; every other assignment is excluded by its own clause.
inline countlab::CnfFormula with_models(std::uint32_t n, std::uint64_t models) {
  std::vector<countlab::Clause> clauses;
  for (std::uint64_t bits = models; bits < (1ULL << n); ++bits) {
    countlab::Clause block;
    for (std::uint32_t v = 1; v <= n; ++v) {
      const auto lit = static_cast<countlab::Literal>(v);
      block.push_back(((bits >> (v - 1)) & 1) ? -lit : lit);
    }
    clauses.push_back(std::move(block));
  }
  return countlab::CnfFormula(n, std::move(clauses));
}

// Random acyclic circuit over `inputs` inputs with `gates` gates.
inline countlab::Circuit random_circuit(std::uint32_t inputs, std::uint32_t gates,
                                        std::mt19937_64& rng) {
  using countlab::Signal;
  countlab::Circuit c(inputs);
  auto pick = [&](std::uint32_t made) {
    const std::uint64_t r = rng() % (inputs + made);
    return r < inputs ? Signal::input(static_cast<std::uint32_t>(r + 1))
                      : Signal::gate(static_cast<std::uint32_t>(r - inputs));
  };
  for (std::uint32_t g = 0; g < gates; ++g) {
    switch (rng() % 3) {
      case 0:
        c.add_not(pick(g));
        break;
      case 1: {
        std::vector<Signal> ops;
        for (std::uint64_t i = rng() % 4; i > 0; --i) ops.push_back(pick(g));
        c.add_and(std::move(ops));
        break;
      }
      default: {
        std::vector<Signal> ops;
        for (std::uint64_t i = rng() % 4; i > 0; --i) ops.push_back(pick(g));
        c.add_or(std::move(ops));
        break;
      }
    }
  }
  return c;
}

}  // namespace oracle
