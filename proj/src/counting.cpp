#include "countlab/counting.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <unordered_map>

#include "countlab/errors.hpp"

namespace countlab {

CountProfile CountProfile::make(BigInt accepted, std::uint32_t path_exponent) {
  if (accepted < 0 || accepted > pow2(path_exponent)) {
    throw ContractViolation("profile needs 0 <= accepted <= 2^" +
                            std::to_string(path_exponent) + ", got " +
                            accepted.str());
  }
  return CountProfile{std::move(accepted), path_exponent};
}

std::string to_string(const CountProfile& profile) {
  std::ostringstream out;
  out << "accepted=" << profile.accepted << " paths=2^" << profile.path_exponent;
  return out.str();
}

GapValue gap_value(const CountProfile& profile) {
  return GapValue{profile.accepted - profile.rejected()};
}

// ---------------------------------------------------------------------------

CountProfile count_bruteforce(const CnfFormula& formula, std::uint32_t cap) {
  const std::uint32_t n = formula.num_vars();
  if (n > cap || n > 63) {
    throw EnumerationRefused("bruteforce: " + std::to_string(n) +
                             " variables exceeds enumeration cap " +
                             std::to_string(cap) + "; use count_dpll");
  }
  struct Masks {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
  };
  std::vector<Masks> masks;
  masks.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses()) {
    Masks m;
    for (Literal l : c) {
      const std::uint64_t bit = 1ULL << (var_of(l) - 1);
      (l > 0 ? m.pos : m.neg) |= bit;
    }
    masks.push_back(m);
  }
  const std::uint64_t end = 1ULL << n;
  std::uint64_t models = 0;
  for (std::uint64_t a = 0; a < end; ++a) {
    bool ok = true;
    for (const Masks& m : masks) {
      if (((a & m.pos) | (~a & m.neg)) == 0) {
        ok = false;
        break;
      }
    }
    models += ok;
  }
  return CountProfile{BigInt(models), n};
}

// ---------------------------------------------------------------------------

namespace {

class OrderedEnumerator {
 public:
  OrderedEnumerator(const CnfFormula& formula, std::uint64_t budget)
      : n_(formula.num_vars()),
        budget_(budget),
        value_(n_ + 1, 0),
        closing_(n_ + 1) {
    for (const Clause& c : formula.clauses()) {
      if (c.empty()) {
        unsat_ = true;
        continue;
      }
      std::uint32_t max_var = 0;
      for (Literal l : c) max_var = std::max(max_var, var_of(l));
      closing_[max_var].push_back(&c);
    }
  }

  std::uint64_t run() {
    if (unsat_) return 0;
    return descend(1);
  }

 private:
  bool closes_cleanly(std::uint32_t var) const {
    for (const Clause* c : closing_[var]) {
      bool sat = false;
      for (Literal l : *c) {
        if ((l > 0) == static_cast<bool>(value_[var_of(l)])) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
    return true;
  }

  std::uint64_t descend(std::uint32_t var) {
    if (var > n_) return 1;
    std::uint64_t total = 0;
    for (std::uint8_t v : {0, 1}) {
      if (++visited_ > budget_) {
        throw EnumerationRefused("enumerate: node budget of " +
                                 std::to_string(budget_) + " exhausted");
      }
      value_[var] = v;
      if (closes_cleanly(var)) total += descend(var + 1);
    }
    return total;
  }

  std::uint32_t n_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  bool unsat_ = false;
  std::vector<std::uint8_t> value_;
  std::vector<std::vector<const Clause*>> closing_;
};

}  // namespace

CountProfile count_enumerate(const CnfFormula& formula,
                             std::uint64_t node_budget) {
  OrderedEnumerator e(formula, node_budget);
  return CountProfile{BigInt(e.run()), formula.num_vars()};
}

// ---------------------------------------------------------------------------

namespace {

// Counter-based propagation: each clause tracks how many of its literals are
// currently true and false. Assignments are undone in trail order, so the
// counters are restored exactly even after a conflict.
class DpllCounter {
 public:
  explicit DpllCounter(const CnfFormula& formula)
      : n_(formula.num_vars()),
        clauses_(formula.clauses()),
        value_(n_ + 1, kUnassigned),
        occurs_(2 * (n_ + 1)),
        num_true_(clauses_.size(), 0),
        num_false_(clauses_.size(), 0),
        parent_(n_ + 1, 0),
        group_of_(n_ + 1, 0),
        seen_(n_ + 1, 0) {
    for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
      if (clauses_[c].empty()) conflict_ = true;
      for (Literal l : clauses_[c]) occurs_[slot(l)].push_back(c);
    }
  }

  BigInt run() {
    if (conflict_) return 0;
    // Initial unit clauses.
    for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
      if (clauses_[c].size() == 1) queue_.push_back(c);
    }
    if (!propagate()) return 0;
    std::vector<std::uint32_t> open;
    for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
      if (num_true_[c] == 0) open.push_back(c);
    }
    const std::size_t scope = scope_size(open);
    return count(open) * pow2(static_cast<std::uint32_t>(n_ - trail_.size() - scope));
  }

 private:
  static constexpr std::int8_t kUnassigned = -1;

  std::size_t slot(Literal l) const {
    return 2 * var_of(l) + (l < 0 ? 1 : 0);
  }

  bool is_true(Literal l) const {
    const std::int8_t v = value_[var_of(l)];
    return v != kUnassigned && (v == 1) == (l > 0);
  }

  void assign(Literal l) {
    value_[var_of(l)] = l > 0 ? 1 : 0;
    trail_.push_back(l);
    for (std::uint32_t c : occurs_[slot(l)]) {
      ++num_true_[c];
    }
    for (std::uint32_t c : occurs_[slot(-l)]) {
      ++num_false_[c];
      if (num_true_[c] != 0) continue;
      const std::size_t size = clauses_[c].size();
      if (num_false_[c] == size) {
        conflict_ = true;
      } else if (num_false_[c] + 1 == size) {
        queue_.push_back(c);
      }
    }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const Literal l = trail_.back();
      trail_.pop_back();
      for (std::uint32_t c : occurs_[slot(l)]) {
        --num_true_[c];
      }
      for (std::uint32_t c : occurs_[slot(-l)]) --num_false_[c];
      value_[var_of(l)] = kUnassigned;
    }
    conflict_ = false;
    queue_.clear();
  }

  bool propagate() {
    while (!conflict_ && !queue_.empty()) {
      const std::uint32_t c = queue_.back();
      queue_.pop_back();
      if (num_true_[c] != 0) continue;
      for (Literal l : clauses_[c]) {
        if (value_[var_of(l)] == kUnassigned) {
          assign(l);
          break;
        }
      }
    }
    return !conflict_;
  }

  std::size_t scope_size(const std::vector<std::uint32_t>& open) {
    ++stamp_;
    std::size_t size = 0;
    for (std::uint32_t c : open) {
      for (Literal l : clauses_[c]) {
        const std::uint32_t v = var_of(l);
        if (value_[v] == kUnassigned && seen_[v] != stamp_) {
          seen_[v] = stamp_;
          ++size;
        }
      }
    }
    return size;
  }

  // Splits unsatisfied clauses into groups that share no unassigned variable.
  std::vector<std::vector<std::uint32_t>> components(
      const std::vector<std::uint32_t>& open) {
    for (std::uint32_t c : open) {
      for (Literal l : clauses_[c]) parent_[var_of(l)] = var_of(l);
    }
    auto find = [&](std::uint32_t v) {
      while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
      return v;
    };
    for (std::uint32_t c : open) {
      std::uint32_t root = 0;
      for (Literal l : clauses_[c]) {
        const std::uint32_t v = var_of(l);
        if (value_[v] != kUnassigned) continue;
        if (root == 0) {
          root = find(v);
        } else {
          parent_[find(v)] = root;
        }
      }
    }
    std::vector<std::vector<std::uint32_t>> groups;
    ++stamp_;
    for (std::uint32_t c : open) {
      std::uint32_t root = 0;
      for (Literal l : clauses_[c]) {
        if (value_[var_of(l)] == kUnassigned) {
          root = find(var_of(l));
          break;
        }
      }
      if (seen_[root] != stamp_) {
        seen_[root] = stamp_;
        group_of_[root] = static_cast<std::uint32_t>(groups.size());
        groups.emplace_back();
      }
      groups[group_of_[root]].push_back(c);
    }
    return groups;
  }

  // Residual clauses, unassigned literals only, in canonical order.
  std::string residual_key(const std::vector<std::uint32_t>& group) const {
    std::vector<std::vector<Literal>> residual;
    residual.reserve(group.size());
    for (std::uint32_t c : group) {
      std::vector<Literal> lits;
      for (Literal l : clauses_[c]) {
        if (value_[var_of(l)] == kUnassigned) lits.push_back(l);
      }
      std::sort(lits.begin(), lits.end());
      residual.push_back(std::move(lits));
    }
    std::sort(residual.begin(), residual.end());
    std::string key;
    for (const auto& lits : residual) {
      for (Literal l : lits) key.append(reinterpret_cast<const char*>(&l), sizeof l);
      const Literal end = 0;
      key.append(reinterpret_cast<const char*>(&end), sizeof end);
    }
    return key;
  }

  // Models of the unsatisfied clauses `open` over the unassigned variables
  // occurring in them.
  BigInt count(const std::vector<std::uint32_t>& open) {
    BigInt product = 1;
    for (const auto& group : components(open)) {
      product *= count_component(group);
      if (product == 0) break;
    }
    return product;
  }

  BigInt count_component(const std::vector<std::uint32_t>& group) {
    std::string key = residual_key(group);
    if (auto hit = cache_.find(key); hit != cache_.end()) return hit->second;

    std::uint32_t branch = 0;
    for (std::uint32_t c : group) {
      for (Literal l : clauses_[c]) {
        const std::uint32_t v = var_of(l);
        if (value_[v] == kUnassigned && (branch == 0 || v < branch)) branch = v;
      }
    }
    const std::size_t scope = scope_size(group);
    BigInt total = 0;
    for (Literal l : {static_cast<Literal>(branch), -static_cast<Literal>(branch)}) {
      const std::size_t mark = trail_.size();
      assign(l);
      if (propagate()) {
        std::vector<std::uint32_t> open;
        for (std::uint32_t c : group) {
          if (num_true_[c] == 0) open.push_back(c);
        }
        const std::size_t assigned = trail_.size() - mark;
        const std::size_t left = scope_size(open);
        total += count(open) *
                 pow2(static_cast<std::uint32_t>(scope - assigned - left));
      }
      undo_to(mark);
    }
    if (cache_.size() >= kCacheLimit) cache_.clear();
    cache_.emplace(std::move(key), total);
    return total;
  }

  std::uint32_t n_;
  const std::vector<Clause>& clauses_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::uint32_t>> occurs_;
  std::vector<std::uint32_t> num_true_;
  std::vector<std::uint32_t> num_false_;
  std::vector<Literal> trail_;
  std::vector<std::uint32_t> queue_;
  bool conflict_ = false;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> group_of_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
  std::unordered_map<std::string, BigInt> cache_;
  static constexpr std::size_t kCacheLimit = 1 << 20;
};

}  // namespace

CountProfile count_dpll(const CnfFormula& formula) {
  DpllCounter counter(formula);
  return CountProfile{counter.run(), formula.num_vars()};
}

CountProfile count_models(const CnfFormula& formula, Engine engine) {
  switch (engine) {
    case Engine::Bruteforce:
      return count_bruteforce(formula);
    case Engine::Enumerate:
      return count_enumerate(formula);
    case Engine::Dpll:
      return count_dpll(formula);
  }
  throw ContractViolation("unknown engine");
}

const char* engine_name(Engine engine) {
  switch (engine) {
    case Engine::Bruteforce:
      return "bruteforce";
    case Engine::Enumerate:
      return "enumerate";
    case Engine::Dpll:
      return "dpll";
  }
  return "?";
}

// ---------------------------------------------------------------------------

bool is_mersenne(const BigInt& v) {
  if (v < 1) return false;
  const BigInt next = v + 1;
  return boost::multiprecision::lsb(next) == boost::multiprecision::msb(next);
}

bool is_power_of_two(const BigInt& v) {
  if (v < 1) return false;
  return boost::multiprecision::lsb(v) == boost::multiprecision::msb(v);
}

std::vector<BigInt> mersenne_prefix(std::uint32_t bit_bound) {
  if (bit_bound == 0) throw ContractViolation("mersenne_prefix: bit_bound >= 1");
  std::vector<BigInt> out;
  out.reserve(bit_bound);
  BigInt value = 1;
  for (std::uint32_t t = 1; t <= bit_bound; ++t) {
    out.push_back(value);
    value = 2 * value + 1;
  }
  return out;
}

bool non_gappy_check(std::span<const BigInt> values, const Rational& k) {
  if (values.empty()) throw ContractViolation("non_gappy_check: empty set");
  if (k <= 0) throw ContractViolation("non_gappy_check: k must be positive");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0 || (i > 0 && values[i] <= values[i - 1])) {
      throw ContractViolation(
          "non_gappy_check: values must be positive and strictly increasing");
    }
  }
  // The nearest successor gives the smallest ratio.
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (Rational(values[i + 1], values[i]) > k) return false;
  }
  return true;
}

}  // namespace countlab
