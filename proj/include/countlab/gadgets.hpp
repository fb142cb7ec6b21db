#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countlab/counting.hpp"
#include "countlab/formula.hpp"

namespace countlab {

// Symbolic record of a gadget's intended count as a function of its input
// count `a`. A pipeline of steps applied left to right; adjacent affine steps
// are merged.
class CountExpression {
 public:
  static CountExpression identity() { return CountExpression{}; }
  // a -> mul*a + add
  static CountExpression affine(BigInt mul, BigInt add);
  // a -> sum_{j=1..q} C(a, j)
  static CountExpression subset_sum(std::uint32_t q);

  // outer(this(a))
  CountExpression then(const CountExpression& outer) const;

  BigInt operator()(const BigInt& a) const;
  std::string to_string() const;

  bool operator==(const CountExpression&) const = default;

 private:
  struct Step {
    bool is_affine = true;
    BigInt mul = 1;
    BigInt add = 0;
    std::uint32_t q = 0;
    bool operator==(const Step&) const = default;
  };
  std::vector<Step> steps_;
};

BigInt binomial(const BigInt& n, std::uint32_t k);

struct GadgetResult {
  CnfFormula formula;
  // Variables 1..machine_vars are the machine's path variables; anything
  // above is a functionally determined circuit variable.
  std::uint32_t machine_vars;
  CountExpression count;
  // Set when the formula is total gate definitions plus a final unit clause
  // on this literal: every machine assignment then extends uniquely with the
  // literal's value saying accept or reject.
  std::optional<Literal> output{};

  // Profile of this machine given its model count.
  CountProfile profile(const BigInt& models) const {
    return CountProfile::make(models, machine_vars);
  }
};

// Plain formula as a machine: every variable is a path variable.
GadgetResult as_machine(const CnfFormula& formula);

// "countlab: machine vars=W output=L", the shape record kept in emitted
// DIMACS so a machine survives a round trip through a file.
std::string machine_comment(const GadgetResult& machine);

// Reads the last machine comment back; a formula without one is a plain
// machine. The count expression starts over as the identity.
GadgetResult read_machine(const CnfFormula& formula);

// ---------------------------------------------------------------------------
// Circuit building blocks

// True iff the unsigned number spelled by `bits` (bits[0] most significant)
// is below k. Folds constants, so it spends at most two gates per bit.
Signal add_less_than_const(Circuit& circuit, std::span<const Signal> bits,
                           const BigInt& k);

// Strict lexicographic a < b over equal-length bit vectors, MSB first.
Signal add_lex_less(Circuit& circuit, std::span<const Signal> a,
                    std::span<const Signal> b);

// ---------------------------------------------------------------------------
// Count-arithmetic gadgets

// Exactly k models over machine variables 1..m: the comparator
// "value(x_1..x_m) < k" with x_1 the most significant bit.
CnfFormula exactly_k(std::uint32_t m, const BigInt& k);

// count * (2^t - 1): conjoins (~y_1 | ... | ~y_t) over t fresh variables.
GadgetResult multiply_mersenne(const CnfFormula& formula, std::uint32_t t);
GadgetResult multiply_mersenne(const GadgetResult& inner, std::uint32_t t);

// count + c. Selector s = width+1 chooses between F with padding
// variables n+1..width forced false (s = 0) and an exactly_k(width, c)
// block (s = 1).
GadgetResult add_const(const CnfFormula& formula, const BigInt& c,
                       std::uint32_t width);
GadgetResult add_const(const GadgetResult& inner, const BigInt& c,
                       std::uint32_t width);

// 2^n - count. A plain formula is negated through its circuit form; a
// machine with a known output literal gets that final unit clause flipped.
// Other machines with auxiliary variables are refused.
GadgetResult complement(const CnfFormula& formula);
GadgetResult complement(const GadgetResult& inner);

// count * 2^k via k unconstrained fresh variables.
GadgetResult pad_pow2(const CnfFormula& formula, std::uint32_t k);
GadgetResult pad_pow2(const GadgetResult& inner, std::uint32_t k);

}  // namespace countlab
