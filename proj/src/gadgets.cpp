#include "countlab/gadgets.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "countlab/errors.hpp"

namespace countlab {

CountExpression CountExpression::affine(BigInt mul, BigInt add) {
  CountExpression e;
  e.steps_.push_back(Step{true, std::move(mul), std::move(add), 0});
  return e;
}

CountExpression CountExpression::subset_sum(std::uint32_t q) {
  CountExpression e;
  e.steps_.push_back(Step{false, 1, 0, q});
  return e;
}

CountExpression CountExpression::then(const CountExpression& outer) const {
  CountExpression out = *this;
  for (const Step& s : outer.steps_) {
    if (s.is_affine && !out.steps_.empty() && out.steps_.back().is_affine) {
      Step& last = out.steps_.back();
      last.add = s.mul * last.add + s.add;
      last.mul = s.mul * last.mul;
    } else {
      out.steps_.push_back(s);
    }
  }
  return out;
}

BigInt binomial(const BigInt& n, std::uint32_t k) {
  if (n < 0 || BigInt(k) > n) return 0;
  BigInt r = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
  }
  return r;
}

BigInt CountExpression::operator()(const BigInt& a) const {
  BigInt v = a;
  for (const Step& s : steps_) {
    if (s.is_affine) {
      v = s.mul * v + s.add;
    } else {
      BigInt sum = 0;
      for (std::uint32_t j = 1; j <= s.q; ++j) sum += binomial(v, j);
      v = sum;
    }
  }
  return v;
}

std::string CountExpression::to_string() const {
  std::string expr = "a";
  bool atomic = true;
  for (const Step& s : steps_) {
    if (!s.is_affine) {
      expr = "sum_{j=1.." + std::to_string(s.q) + "} C(" + expr + ", j)";
      atomic = true;
      continue;
    }
    if (s.mul == 1 && s.add == 0) continue;
    std::ostringstream out;
    const std::string inner = atomic ? expr : "(" + expr + ")";
    if (s.mul == 0) {
      out << s.add;
    } else {
      if (s.mul == -1 && s.add != 0) {
        out << s.add << " - " << inner;
      } else {
        if (s.mul == -1) {
          out << "-" << inner;
        } else if (s.mul != 1) {
          out << s.mul << "*" << inner;
        } else {
          out << inner;
        }
        if (s.add > 0) out << " + " << s.add;
        if (s.add < 0) out << " - " << BigInt(-s.add);
      }
    }
    expr = out.str();
    atomic = false;
  }
  return expr;
}

GadgetResult as_machine(const CnfFormula& formula) {
  return GadgetResult{formula, formula.num_vars(), CountExpression::identity()};
}

namespace {

constexpr std::string_view kMachinePrefix = "countlab: machine ";

bool ends_with_unit(const CnfFormula& f, Literal lit) {
  return !f.clauses().empty() && f.clauses().back() == Clause{lit};
}

}  // namespace

std::string machine_comment(const GadgetResult& machine) {
  std::string out = std::string(kMachinePrefix) + "vars=" +
                    std::to_string(machine.machine_vars);
  if (machine.output) out += " output=" + std::to_string(*machine.output);
  return out;
}

GadgetResult read_machine(const CnfFormula& formula) {
  GadgetResult m = as_machine(formula);
  const auto& comments = formula.comments();
  auto it = std::find_if(comments.rbegin(), comments.rend(), [](const std::string& c) {
    return c.rfind(kMachinePrefix, 0) == 0;
  });
  if (it == comments.rend()) return m;

  std::istringstream fields(it->substr(kMachinePrefix.size()));
  std::string field;
  bool have_vars = false;
  while (fields >> field) {
    const auto eq = field.find('=');
    const std::string key = field.substr(0, eq);
    long long value = 0;
    try {
      if (eq == std::string::npos) throw std::invalid_argument(field);
      std::size_t used = 0;
      value = std::stoll(field.substr(eq + 1), &used);
      if (used != field.size() - eq - 1) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw FormulaError("bad machine comment field: " + field);
    }
    if (key == "vars") {
      if (value < 1 || value > formula.num_vars()) {
        throw FormulaError("machine comment: vars out of range");
      }
      m.machine_vars = static_cast<std::uint32_t>(value);
      have_vars = true;
    } else if (key == "output") {
      const auto lit = static_cast<Literal>(value);
      if (value == 0 || var_of(lit) > formula.num_vars() || !ends_with_unit(formula, lit)) {
        throw FormulaError("machine comment: output must be the final unit clause");
      }
      m.output = lit;
    } else {
      throw FormulaError("machine comment: unknown field " + key);
    }
  }
  if (!have_vars) throw FormulaError("machine comment without vars=");
  return m;
}

// ---------------------------------------------------------------------------

Signal add_less_than_const(Circuit& circuit, std::span<const Signal> bits,
                           const BigInt& k) {
  const auto m = static_cast<std::uint32_t>(bits.size());
  if (k < 0) throw ContractViolation("comparator constant must be nonnegative");
  if (k >= pow2(m)) return circuit.add_constant(true);

  // Suffix comparison built from the least significant bit upwards.
  // `known` holds the suffix result while it is still a constant.
  std::optional<bool> known = false;
  Signal suffix{};
  for (std::uint32_t i = m; i-- > 0;) {
    const bool k_bit = boost::multiprecision::bit_test(k, m - 1 - i);
    if (k_bit) {
      // x_i = 0 already makes the value smaller; otherwise defer.
      if (known == true) continue;
      const Signal not_x = circuit.add_not(bits[i]);
      suffix = known ? not_x : circuit.add_or({not_x, suffix});
    } else {
      if (known == false) continue;
      const Signal not_x = circuit.add_not(bits[i]);
      suffix = known ? not_x : circuit.add_and({not_x, suffix});
    }
    known.reset();
  }
  if (known) return circuit.add_constant(*known);
  return suffix;
}

Signal add_lex_less(Circuit& circuit, std::span<const Signal> a,
                    std::span<const Signal> b) {
  if (a.size() != b.size()) throw ContractViolation("lex compare: width mismatch");
  std::optional<Signal> suffix;  // empty: equal suffixes are not "less"
  for (std::size_t i = a.size(); i-- > 0;) {
    const Signal not_a = circuit.add_not(a[i]);
    const Signal here_less = circuit.add_and({not_a, b[i]});
    if (!suffix) {
      suffix = here_less;
      continue;
    }
    const Signal not_b = circuit.add_not(b[i]);
    const Signal here_greater = circuit.add_and({a[i], not_b});
    const Signal not_greater = circuit.add_not(here_greater);
    const Signal carry = circuit.add_and({not_greater, *suffix});
    suffix = circuit.add_or({here_less, carry});
  }
  if (!suffix) return circuit.add_constant(false);
  return *suffix;
}

namespace {

std::vector<Signal> input_range(const Circuit& circuit, std::uint32_t first,
                                std::uint32_t count) {
  std::vector<Signal> out;
  out.reserve(count);
  for (std::uint32_t v = first; v < first + count; ++v) {
    out.push_back(circuit.input(v));
  }
  return out;
}

CnfFormula stamp(CnfFormula out, const CnfFormula& source,
                 const std::string& name, const std::string& params) {
  std::vector<std::string> comments = source.comments();
  comments.push_back("countlab: gadget=" + name + " params=" + params);
  return CnfFormula(out.num_vars(), out.clauses(), std::move(comments));
}

GadgetResult chain(const GadgetResult& inner, GadgetResult outer) {
  outer.count = inner.count.then(outer.count);
  return outer;
}

}  // namespace

CnfFormula exactly_k(std::uint32_t m, const BigInt& k) {
  if (m == 0) throw ContractViolation("exactly_k: m must be positive");
  if (k < 0 || k > pow2(m)) {
    throw ContractViolation("exactly_k: k must lie in [0, 2^" +
                            std::to_string(m) + "]");
  }
  Circuit circuit(m);
  const auto bits = input_range(circuit, 1, m);
  circuit.set_output(add_less_than_const(circuit, bits, k));
  return tseitin(circuit, m).with_comment(
      "countlab: gadget=exactly_k params=m=" + std::to_string(m) +
      ",k=" + k.str());
}

namespace {

// Renumbers the auxiliary variables of `inner` (those above machine_vars)
// to start at `aux_base`; machine variables keep their numbers.
std::vector<std::uint32_t> aux_shift(const GadgetResult& inner,
                                     std::uint32_t aux_base) {
  std::vector<std::uint32_t> map(inner.formula.num_vars());
  for (std::uint32_t v = 1; v <= inner.formula.num_vars(); ++v) {
    map[v - 1] = v <= inner.machine_vars ? v : aux_base + (v - inner.machine_vars - 1);
  }
  return map;
}

std::vector<Clause> relabel(const CnfFormula& formula,
                            const std::vector<std::uint32_t>& map) {
  std::vector<Clause> out;
  out.reserve(formula.num_clauses());
  for (const Clause& clause : formula.clauses()) {
    Clause c;
    c.reserve(clause.size());
    for (Literal lit : clause) {
      const auto v = static_cast<Literal>(map[var_of(lit) - 1]);
      c.push_back(lit > 0 ? v : -v);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Inserts k fresh machine variables right after the inner machine ones.
std::pair<std::vector<Clause>, std::uint32_t> widen(const GadgetResult& inner,
                                                    std::uint32_t k) {
  const std::uint32_t m = inner.machine_vars;
  return {relabel(inner.formula, aux_shift(inner, m + k + 1)),
          inner.formula.num_vars() + k};
}

}  // namespace

GadgetResult multiply_mersenne(const GadgetResult& inner, std::uint32_t t) {
  if (t == 0) throw ContractViolation("multiply_mersenne: t must be positive");
  const std::uint32_t m = inner.machine_vars;
  auto [clauses, total] = widen(inner, t);
  Clause not_all_ones;
  for (std::uint32_t i = 1; i <= t; ++i) {
    not_all_ones.push_back(-static_cast<Literal>(m + i));
  }
  clauses.push_back(std::move(not_all_ones));
  CnfFormula out(total, std::move(clauses));
  return chain(inner, GadgetResult{stamp(std::move(out), inner.formula, "multiply_mersenne",
                                         "t=" + std::to_string(t)),
                                   m + t, CountExpression::affine(pow2(t) - 1, 0)});
}

GadgetResult multiply_mersenne(const CnfFormula& formula, std::uint32_t t) {
  return multiply_mersenne(as_machine(formula), t);
}

GadgetResult add_const(const GadgetResult& inner, const BigInt& c,
                       std::uint32_t width) {
  const std::uint32_t m = inner.machine_vars;
  if (width < m) {
    throw ContractViolation("add_const: width " + std::to_string(width) +
                            " below machine width " + std::to_string(m));
  }
  if (c < 0 || c > pow2(width)) {
    throw ContractViolation("add_const: c must lie in [0, 2^" +
                            std::to_string(width) + "]");
  }
  const std::uint32_t aux = inner.formula.num_vars() - m;
  const std::uint32_t inputs = width + 1 + aux;
  Circuit circuit(inputs);
  const Signal selector = circuit.input(width + 1);

  std::vector<Signal> formula_branch{
      add_cnf(circuit, inner.formula, aux_shift(inner, width + 2))};
  for (std::uint32_t v = m + 1; v <= width; ++v) {
    formula_branch.push_back(circuit.add_not(circuit.input(v)));
  }
  formula_branch.push_back(circuit.add_not(selector));
  const Signal take_formula = circuit.add_and(std::move(formula_branch));

  // The inner machine's own auxiliary variables are pinned to 0 on this side.
  const auto bits = input_range(circuit, 1, width);
  std::vector<Signal> block_branch{selector, add_less_than_const(circuit, bits, c)};
  for (std::uint32_t v = width + 2; v <= inputs; ++v) {
    block_branch.push_back(circuit.add_not(circuit.input(v)));
  }
  const Signal take_block = circuit.add_and(std::move(block_branch));
  circuit.add_or({take_formula, take_block});

  std::ostringstream params;
  params << "c=" << c << ",width=" << width;
  CnfFormula out = tseitin(circuit, inputs);
  const Literal output = out.clauses().back().front();
  return chain(inner, GadgetResult{stamp(std::move(out), inner.formula, "add_const",
                                         params.str()),
                                   width + 1, CountExpression::affine(1, c), output});
}

GadgetResult add_const(const CnfFormula& formula, const BigInt& c,
                       std::uint32_t width) {
  return add_const(as_machine(formula), c, width);
}

GadgetResult complement(const GadgetResult& inner) {
  const std::uint32_t n = inner.machine_vars;
  const CountExpression flip = CountExpression::affine(-1, pow2(n));
  if (n == inner.formula.num_vars()) {
    Circuit circuit(n);
    circuit.add_not(add_cnf(circuit, inner.formula));
    CnfFormula out = tseitin(circuit, n);
    const Literal output = out.clauses().back().front();
    return chain(inner, GadgetResult{stamp(std::move(out), inner.formula, "complement", "-"),
                                     n, flip, output});
  }
  // Negating a formula with auxiliary variables does not negate its
  // projection unless the auxiliaries are total gate definitions.
  if (!inner.output || !ends_with_unit(inner.formula, *inner.output)) {
    throw ContractViolation(
        "complement: machine has auxiliary variables but no output literal");
  }
  std::vector<Clause> clauses = inner.formula.clauses();
  clauses.back() = {-*inner.output};
  CnfFormula out(inner.formula.num_vars(), std::move(clauses));
  return chain(inner, GadgetResult{stamp(std::move(out), inner.formula, "complement", "-"),
                                   n, flip, -*inner.output});
}

GadgetResult complement(const CnfFormula& formula) {
  return complement(as_machine(formula));
}

GadgetResult pad_pow2(const GadgetResult& inner, std::uint32_t k) {
  const std::uint32_t m = inner.machine_vars;
  auto [clauses, total] = widen(inner, k);
  std::optional<Literal> output;
  if (inner.output) {
    const auto map = aux_shift(inner, m + k + 1);
    const auto shifted = static_cast<Literal>(map[var_of(*inner.output) - 1]);
    output = *inner.output > 0 ? shifted : -shifted;
  }
  CnfFormula out(total, std::move(clauses));
  return chain(inner, GadgetResult{stamp(std::move(out), inner.formula, "pad_pow2",
                                         "k=" + std::to_string(k)),
                                   m + k, CountExpression::affine(pow2(k), 0), output});
}

GadgetResult pad_pow2(const CnfFormula& formula, std::uint32_t k) {
  return pad_pow2(as_machine(formula), k);
}

}  // namespace countlab
