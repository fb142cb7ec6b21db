#include "countlab/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "countlab/errors.hpp"

namespace countlab {

namespace {

// Collapses duplicates in place and rejects complementary pairs. Shared by
// clauses and terms: a tautological clause and a contradictory term are the
// same shape.
void normalize_literals(std::vector<Literal>& lits, std::uint32_t num_vars,
                        const char* what) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (Literal lit : lits) {
    if (lit == 0) throw FormulaError(std::string("zero literal inside ") + what);
    if (var_of(lit) > num_vars) {
      throw FormulaError("literal " + std::to_string(lit) +
                         " out of range (num_vars=" + std::to_string(num_vars) +
                         ")");
    }
    if (std::find(out.begin(), out.end(), -lit) != out.end()) {
      throw FormulaError(std::string(what) + " contains both " +
                         std::to_string(var_of(lit)) + " and -" +
                         std::to_string(var_of(lit)));
    }
    if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(lit);
  }
  lits = std::move(out);
}

}  // namespace

CnfFormula::CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses,
                       std::vector<std::string> comments)
    : num_vars_(num_vars),
      clauses_(std::move(clauses)),
      comments_(std::move(comments)) {
  if (num_vars_ == 0) throw FormulaError("formula needs at least one variable");
  for (Clause& c : clauses_) normalize_literals(c, num_vars_, "clause");
}

CnfFormula CnfFormula::with_comment(std::string comment) const {
  CnfFormula copy = *this;
  copy.comments_.push_back(std::move(comment));
  return copy;
}

DnfFormula::DnfFormula(std::uint32_t num_vars, std::vector<Term> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  if (num_vars_ == 0) throw FormulaError("formula needs at least one variable");
  for (Term& t : terms_) normalize_literals(t, num_vars_, "term");
}

Assignment Assignment::from_bits(std::uint64_t bits, std::uint32_t num_vars) {
  if (num_vars > 64) throw ContractViolation("from_bits supports at most 64 variables");
  std::vector<bool> values(num_vars);
  for (std::uint32_t i = 0; i < num_vars; ++i) values[i] = (bits >> i) & 1U;
  return Assignment(std::move(values));
}

bool evaluate(const CnfFormula& formula, const Assignment& assignment) {
  if (assignment.num_vars() != formula.num_vars()) {
    throw ContractViolation("assignment covers " +
                            std::to_string(assignment.num_vars()) +
                            " variables, formula has " +
                            std::to_string(formula.num_vars()));
  }
  return std::all_of(formula.clauses().begin(), formula.clauses().end(),
                     [&](const Clause& c) {
                       return std::any_of(c.begin(), c.end(), [&](Literal l) {
                         return assignment.satisfies(l);
                       });
                     });
}

bool evaluate(const DnfFormula& formula, const Assignment& assignment) {
  if (assignment.num_vars() != formula.num_vars()) {
    throw ContractViolation("assignment does not match DNF variable count");
  }
  return std::any_of(formula.terms().begin(), formula.terms().end(),
                     [&](const Term& t) {
                       return std::all_of(t.begin(), t.end(), [&](Literal l) {
                         return assignment.satisfies(l);
                       });
                     });
}

CnfFormula dnf_complement_cnf(const DnfFormula& formula) {
  std::vector<Clause> clauses;
  clauses.reserve(formula.terms().size());
  for (const Term& t : formula.terms()) {
    Clause c;
    c.reserve(t.size());
    for (Literal l : t) c.push_back(-l);
    clauses.push_back(std::move(c));
  }
  return CnfFormula(formula.num_vars(), std::move(clauses));
}

// ---------------------------------------------------------------------------

Circuit::Circuit(std::uint32_t num_inputs)
    : num_inputs_(num_inputs), output_(Signal::gate(0)) {}

Circuit::Circuit(std::uint32_t num_inputs, std::vector<Gate> gates,
                 Signal output)
    : num_inputs_(num_inputs), gates_(std::move(gates)), output_(output) {
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    if (gate.kind == GateKind::Not && gate.operands.size() != 1) {
      throw CircuitError("NOT gate " + std::to_string(g) +
                         " needs exactly one operand");
    }
    for (Signal s : gate.operands) check_operand(s, g);
  }
  check_operand(output_, gates_.size());
}

void Circuit::check_operand(Signal s, std::size_t gate_pos) const {
  if (s.source == Signal::Source::Input) {
    if (s.index == 0 || s.index > num_inputs_) {
      throw CircuitError("input " + std::to_string(s.index) + " out of range");
    }
    return;
  }
  if (s.index >= gate_pos) {
    throw CircuitError("gate " + std::to_string(gate_pos) +
                       " references gate " + std::to_string(s.index) +
                       " which is not earlier (cycle)");
  }
}

Signal Circuit::input(std::uint32_t var) const {
  if (var == 0 || var > num_inputs_) {
    throw CircuitError("input " + std::to_string(var) + " out of range");
  }
  return Signal::input(var);
}

Signal Circuit::push(GateKind kind, std::vector<Signal> operands) {
  for (Signal s : operands) check_operand(s, gates_.size());
  gates_.push_back(Gate{kind, std::move(operands)});
  output_ = Signal::gate(static_cast<std::uint32_t>(gates_.size() - 1));
  return output_;
}

Signal Circuit::add_and(std::vector<Signal> operands) {
  return push(GateKind::And, std::move(operands));
}

Signal Circuit::add_or(std::vector<Signal> operands) {
  return push(GateKind::Or, std::move(operands));
}

Signal Circuit::add_not(Signal operand) { return push(GateKind::Not, {operand}); }

void Circuit::set_output(Signal output) {
  check_operand(output, gates_.size());
  output_ = output;
}

bool Circuit::evaluate(const Assignment& inputs) const {
  if (inputs.num_vars() < num_inputs_) {
    throw ContractViolation("circuit evaluation needs every input assigned");
  }
  if (gates_.empty() && output_.source == Signal::Source::Gate) {
    throw ContractViolation("circuit has no output");
  }
  std::vector<bool> value(gates_.size());
  auto read = [&](Signal s) {
    return s.source == Signal::Source::Input ? inputs[s.index]
                                             : static_cast<bool>(value[s.index]);
  };
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    switch (gate.kind) {
      case GateKind::And:
        value[g] = std::all_of(gate.operands.begin(), gate.operands.end(), read);
        break;
      case GateKind::Or:
        value[g] = std::any_of(gate.operands.begin(), gate.operands.end(), read);
        break;
      case GateKind::Not:
        value[g] = !read(gate.operands.front());
        break;
    }
  }
  return read(output_);
}

Signal add_cnf(Circuit& circuit, const CnfFormula& formula,
               std::span<const std::uint32_t> var_map) {
  if (var_map.size() < formula.num_vars()) {
    throw ContractViolation("variable map shorter than formula");
  }
  std::map<std::uint32_t, Signal> negated;
  auto literal = [&](Literal lit) {
    Signal pos = circuit.input(var_map[var_of(lit) - 1]);
    if (lit > 0) return pos;
    auto it = negated.find(pos.index);
    if (it == negated.end()) {
      it = negated.emplace(pos.index, circuit.add_not(pos)).first;
    }
    return it->second;
  };
  std::vector<Signal> clause_signals;
  clause_signals.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses()) {
    std::vector<Signal> lits;
    lits.reserve(c.size());
    for (Literal l : c) lits.push_back(literal(l));
    // A unit clause needs no OR gate of its own.
    clause_signals.push_back(lits.size() == 1 ? lits.front()
                                              : circuit.add_or(std::move(lits)));
  }
  if (clause_signals.size() == 1) return clause_signals.front();
  return circuit.add_and(std::move(clause_signals));
}

Signal add_cnf(Circuit& circuit, const CnfFormula& formula) {
  std::vector<std::uint32_t> identity(formula.num_vars());
  for (std::uint32_t v = 0; v < formula.num_vars(); ++v) identity[v] = v + 1;
  return add_cnf(circuit, formula, identity);
}

CnfFormula tseitin(const Circuit& circuit, std::uint32_t total_vars) {
  if (total_vars < circuit.num_inputs()) {
    throw ContractViolation("tseitin: total_vars below circuit input count");
  }
  if (circuit.num_gates() == 0 &&
      circuit.output().source == Signal::Source::Gate) {
    throw ContractViolation("tseitin: circuit has no output");
  }
  auto var = [&](Signal s) -> Literal {
    return static_cast<Literal>(s.source == Signal::Source::Input
                                    ? s.index
                                    : total_vars + 1 + s.index);
  };

  std::vector<Clause> clauses;
  const auto& gates = circuit.gates();
  for (std::uint32_t g = 0; g < gates.size(); ++g) {
    const Literal out = static_cast<Literal>(total_vars + 1 + g);
    const Gate& gate = gates[g];
    switch (gate.kind) {
      case GateKind::And: {
        // out -> a_i for each i; (a_1 & ... & a_k) -> out
        Clause back{out};
        for (Signal s : gate.operands) {
          clauses.push_back({-out, var(s)});
          back.push_back(-var(s));
        }
        clauses.push_back(std::move(back));
        break;
      }
      case GateKind::Or: {
        Clause fwd{-out};
        for (Signal s : gate.operands) {
          clauses.push_back({out, -var(s)});
          fwd.push_back(var(s));
        }
        clauses.push_back(std::move(fwd));
        break;
      }
      case GateKind::Not: {
        const Literal a = var(gate.operands.front());
        clauses.push_back({-out, -a});
        clauses.push_back({out, a});
        break;
      }
    }
  }
  clauses.push_back({var(circuit.output())});
  return CnfFormula(total_vars + circuit.num_gates(), std::move(clauses));
}

// ---------------------------------------------------------------------------

namespace {

std::optional<long long> to_integer(std::string_view tok) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

CnfFormula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::uint32_t> num_vars;
  long long declared_clauses = 0;
  std::vector<std::string> comments;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t current_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == 'c') {
      std::string_view text(line);
      text.remove_prefix(1);
      if (!text.empty() && text[0] == ' ') text.remove_prefix(1);
      comments.emplace_back(text);
      continue;
    }
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (tokens[0] == "p") {
      if (num_vars) throw ParseError(line_no, "duplicate header");
      if (tokens.size() != 4 || tokens[1] != "cnf") {
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      auto v = to_integer(tokens[2]);
      auto c = to_integer(tokens[3]);
      if (!v || !c || *v < 1 || *c < 0 || *v > (1LL << 30)) {
        throw ParseError(line_no, "malformed header counts");
      }
      num_vars = static_cast<std::uint32_t>(*v);
      declared_clauses = *c;
      continue;
    }
    if (!num_vars) throw ParseError(line_no, "clause data before header");

    for (std::string_view tok : tokens) {
      auto lit = to_integer(tok);
      if (!lit) {
        throw ParseError(line_no, "bad literal '" + std::string(tok) + "'");
      }
      if (current.empty()) current_line = line_no;
      if (*lit == 0) {
        try {
          clauses.push_back(CnfFormula(*num_vars, {current}).clauses().front());
        } catch (const FormulaError& e) {
          throw ParseError(current_line, e.what());
        }
        current.clear();
        continue;
      }
      if (*lit > static_cast<long long>(*num_vars) ||
          -*lit > static_cast<long long>(*num_vars)) {
        throw ParseError(line_no, "literal " + std::string(tok) +
                                      " out of range (num_vars=" +
                                      std::to_string(*num_vars) + ")");
      }
      current.push_back(static_cast<Literal>(*lit));
    }
  }
  if (!num_vars) throw ParseError(line_no, "missing 'p cnf' header");
  if (!current.empty()) {
    throw ParseError(line_no, "last clause is not terminated by 0");
  }
  if (static_cast<long long>(clauses.size()) != declared_clauses) {
    throw ParseError(line_no, "header declares " +
                                  std::to_string(declared_clauses) +
                                  " clauses, found " +
                                  std::to_string(clauses.size()));
  }
  return CnfFormula(*num_vars, std::move(clauses), std::move(comments));
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

namespace {

void emit_body(std::ostream& out, const CnfFormula& formula) {
  out << "p cnf " << formula.num_vars() << ' ' << formula.num_clauses() << '\n';
  for (const Clause& c : formula.clauses()) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
}

}  // namespace

void emit_dimacs(std::ostream& out, const CnfFormula& formula) {
  for (const std::string& comment : formula.comments()) {
    out << "c " << comment << '\n';
  }
  emit_body(out, formula);
}

std::string emit_dimacs(const CnfFormula& formula) {
  std::ostringstream out;
  emit_dimacs(out, formula);
  return out.str();
}

std::uint64_t digest(const CnfFormula& formula) {
  std::ostringstream out;
  emit_body(out, formula);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : out.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(const CnfFormula& formula) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(digest(formula)));
  return buf;
}

}  // namespace countlab
