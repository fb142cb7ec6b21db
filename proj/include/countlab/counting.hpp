#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "countlab/formula.hpp"

namespace countlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(std::uint32_t k) { return BigInt(1) << k; }

// Outcome of one machine run: `accepted` of the 2^path_exponent paths accept.
struct CountProfile {
  BigInt accepted;
  std::uint32_t path_exponent = 0;

  // Throws ContractViolation unless 0 <= accepted <= 2^path_exponent.
  static CountProfile make(BigInt accepted, std::uint32_t path_exponent);

  BigInt total_paths() const { return pow2(path_exponent); }
  BigInt rejected() const { return total_paths() - accepted; }

  bool operator==(const CountProfile&) const = default;
};

std::string to_string(const CountProfile& profile);

// #accept - #reject of the originating profile.
struct GapValue {
  BigInt gap;
  bool operator==(const GapValue&) const = default;
};

GapValue gap_value(const CountProfile& profile);

// ---------------------------------------------------------------------------
// Model counters. All return path_exponent = formula.num_vars().

inline constexpr std::uint32_t kDefaultEnumerationCap = 26;
inline constexpr std::uint64_t kDefaultEnumerationBudget = 1ULL << 31;

// Reference oracle: tries every one of the 2^n total assignments. Refuses
// (EnumerationRefused) when n exceeds `cap`.
CountProfile count_bruteforce(const CnfFormula& formula,
                              std::uint32_t cap = kDefaultEnumerationCap);

// Exhaustive depth-first enumeration in variable order 1..n. A branch is
// abandoned only once some clause has every literal assigned false; every
// model is reached and counted individually. Suited to circuit translations
// whose auxiliary variables sit above the machine variables: each auxiliary
// is pinned the moment it is assigned, so the cost is about 2^machine_vars.
// Refuses when more than `node_budget` nodes would be visited.
CountProfile count_enumerate(const CnfFormula& formula,
                             std::uint64_t node_budget = kDefaultEnumerationBudget);

// DPLL counter: unit propagation, independent components counted
// separately, a cache keyed on the residual clause set, and branching on the
// lowest-index variable of a component. Variables that drop out of every
// unsatisfied clause are credited as free.
CountProfile count_dpll(const CnfFormula& formula);

enum class Engine { Bruteforce, Enumerate, Dpll };

CountProfile count_models(const CnfFormula& formula, Engine engine);
const char* engine_name(Engine engine);

// ---------------------------------------------------------------------------
// Arithmetic predicates

// v = 2^t - 1 with t >= 1.
bool is_mersenne(const BigInt& v);
// v = 2^t with t >= 0.
bool is_power_of_two(const BigInt& v);

// Every Mersenne number of at most `bit_bound` bits, increasing:
// 2^t - 1 for t = 1..bit_bound.
std::vector<BigInt> mersenne_prefix(std::uint32_t bit_bound);

// Finite-prefix non-gappiness: every element except the last has a
// successor m in `values` with m/n <= k. `values` must be nonempty, positive
// and strictly increasing.
bool non_gappy_check(std::span<const BigInt> values, const Rational& k);

}  // namespace countlab
