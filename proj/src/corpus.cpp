#include "countlab/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "countlab/errors.hpp"

namespace countlab {

namespace {

// std::uniform_int_distribution is implementation-defined; this keeps
// corpora identical across standard libraries.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

CnfFormula random_kcnf(std::uint32_t num_vars, std::size_t num_clauses,
                       std::uint32_t width, std::mt19937_64& rng) {
  width = std::min(width, num_vars);
  std::vector<Clause> clauses;
  clauses.reserve(num_clauses);
  for (std::size_t c = 0; c < num_clauses; ++c) {
    Clause clause;
    while (clause.size() < width) {
      const auto v = static_cast<Literal>(1 + below(rng, num_vars));
      if (std::any_of(clause.begin(), clause.end(),
                      [v](Literal l) { return var_of(l) == var_of(v); })) {
        continue;
      }
      clause.push_back(below(rng, 2) ? v : -v);
    }
    clauses.push_back(std::move(clause));
  }
  return CnfFormula(num_vars, std::move(clauses));
}

CnfFormula make_family_member(CorpusFamily family, std::uint32_t num_vars,
                              std::mt19937_64& rng) {
  auto at_ratio = [&](double ratio) {
    const auto m = static_cast<std::size_t>(
        std::max(1.0, std::round(ratio * static_cast<double>(num_vars))));
    return random_kcnf(num_vars, m, 3, rng);
  };
  switch (family) {
    case CorpusFamily::Random1:
      return at_ratio(1.0);
    case CorpusFamily::Random2:
      return at_ratio(2.0);
    case CorpusFamily::Random3:
      return at_ratio(3.0);
    case CorpusFamily::Random426:
      return at_ratio(4.26);
    case CorpusFamily::Unsat: {
      std::vector<Clause> clauses = at_ratio(1.0).clauses();
      clauses.push_back({1});
      clauses.push_back({-1});
      return CnfFormula(num_vars, std::move(clauses));
    }
    case CorpusFamily::Tautology:
      return CnfFormula(num_vars, {});
    case CorpusFamily::SingleModel: {
      std::vector<Clause> clauses;
      for (std::uint32_t v = 1; v <= num_vars; ++v) {
        const auto lit = static_cast<Literal>(v);
        clauses.push_back({below(rng, 2) ? lit : -lit});
      }
      return CnfFormula(num_vars, std::move(clauses));
    }
  }
  throw ContractViolation("unknown corpus family");
}

CnfFormula formula_with_models(std::uint32_t num_vars, std::uint64_t models) {
  if (num_vars == 0 || num_vars > 20) {
    throw ContractViolation("formula_with_models: need 1 <= n <= 20");
  }
  const std::uint64_t total = 1ULL << num_vars;
  if (models > total) throw ContractViolation("formula_with_models: models > 2^n");
  std::vector<Clause> clauses;
  clauses.reserve(total - models);
  for (std::uint64_t bits = models; bits < total; ++bits) {
    Clause block;
    for (std::uint32_t v = 1; v <= num_vars; ++v) {
      const auto lit = static_cast<Literal>(v);
      block.push_back(((bits >> (v - 1)) & 1) ? -lit : lit);
    }
    clauses.push_back(std::move(block));
  }
  return CnfFormula(num_vars, std::move(clauses));
}

std::vector<CnfFormula> make_corpus(const CorpusSpec& spec) {
  if (spec.min_vars == 0 || spec.max_vars < spec.min_vars) {
    throw ContractViolation("corpus: need 1 <= min_vars <= max_vars");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<CnfFormula> out;
  out.reserve(spec.count);
  const std::uint64_t span = spec.max_vars - spec.min_vars + 1;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto n = static_cast<std::uint32_t>(spec.min_vars + below(rng, span));
    out.push_back(make_family_member(static_cast<CorpusFamily>(i % 7), n, rng));
  }
  return out;
}

}  // namespace countlab
