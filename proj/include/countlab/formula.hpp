#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace countlab {

// DIMACS-style literal: +v is variable v, -v its negation. Never zero.
using Literal = std::int32_t;
using Clause = std::vector<Literal>;
using Term = std::vector<Literal>;

inline std::uint32_t var_of(Literal lit) {
  return static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
}

// Conjunction of clauses over variables 1..num_vars.
//
// Construction normalizes each clause: duplicate literals are collapsed
// (first occurrence wins, so order is otherwise preserved) and a clause
// holding both v and -v is rejected. An empty clause is legal and makes the
// formula unsatisfiable. Comments are free-form provenance lines, emitted
// as `c <text>` ahead of the DIMACS header.
class CnfFormula {
 public:
  CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses,
             std::vector<std::string> comments = {});

  std::uint32_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const std::vector<std::string>& comments() const noexcept {
    return comments_;
  }

  CnfFormula with_comment(std::string comment) const;

  bool operator==(const CnfFormula&) const = default;

 private:
  std::uint32_t num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::string> comments_;
};

// Disjunction of conjunctive terms. No terms means constant false; an empty
// term is constant true.
class DnfFormula {
 public:
  DnfFormula(std::uint32_t num_vars, std::vector<Term> terms);

  std::uint32_t num_vars() const noexcept { return num_vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  bool operator==(const DnfFormula&) const = default;

 private:
  std::uint32_t num_vars_;
  std::vector<Term> terms_;
};

// Total truth assignment over variables 1..num_vars.
class Assignment {
 public:
  explicit Assignment(std::vector<bool> values) : values_(std::move(values)) {}

  // Bit (v-1) of `bits` is the value of variable v. num_vars <= 64.
  static Assignment from_bits(std::uint64_t bits, std::uint32_t num_vars);

  std::uint32_t num_vars() const noexcept {
    return static_cast<std::uint32_t>(values_.size());
  }
  bool operator[](std::uint32_t var) const { return values_.at(var - 1); }
  bool satisfies(Literal lit) const {
    return lit > 0 ? (*this)[var_of(lit)] : !(*this)[var_of(lit)];
  }

 private:
  std::vector<bool> values_;
};

bool evaluate(const CnfFormula& formula, const Assignment& assignment);
bool evaluate(const DnfFormula& formula, const Assignment& assignment);

// De Morgan negation of a DNF as a CNF over the same variables.
CnfFormula dnf_complement_cnf(const DnfFormula& formula);

// ---------------------------------------------------------------------------
// Circuits

enum class GateKind { And, Or, Not };

struct Signal {
  enum class Source : std::uint8_t { Input, Gate };
  Source source = Source::Input;
  // Input: variable id (1-based). Gate: position in the gate list.
  std::uint32_t index = 0;

  static Signal input(std::uint32_t var) { return {Source::Input, var}; }
  static Signal gate(std::uint32_t pos) { return {Source::Gate, pos}; }
  bool operator==(const Signal&) const = default;
};

struct Gate {
  GateKind kind;
  std::vector<Signal> operands;  // AND() is true, OR() is false
};

// Boolean gate graph over inputs 1..num_inputs. Gates only reference inputs
// or earlier gates, so the list is its own topological order. The most
// recently added gate is the output until set_output says otherwise.
class Circuit {
 public:
  explicit Circuit(std::uint32_t num_inputs);
  // Validating constructor: rejects forward or self references (cycles)
  // and out-of-range inputs with CircuitError.
  Circuit(std::uint32_t num_inputs, std::vector<Gate> gates, Signal output);

  Signal input(std::uint32_t var) const;
  Signal add_and(std::vector<Signal> operands);
  Signal add_or(std::vector<Signal> operands);
  Signal add_not(Signal operand);
  Signal add_constant(bool value) {
    return value ? add_and({}) : add_or({});
  }
  void set_output(Signal output);

  std::uint32_t num_inputs() const noexcept { return num_inputs_; }
  std::uint32_t num_gates() const noexcept {
    return static_cast<std::uint32_t>(gates_.size());
  }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  Signal output() const noexcept { return output_; }

  // Evaluates on the first num_inputs variables of `inputs`.
  bool evaluate(const Assignment& inputs) const;

 private:
  void check_operand(Signal s, std::size_t gate_pos) const;
  Signal push(GateKind kind, std::vector<Signal> operands);

  std::uint32_t num_inputs_;
  std::vector<Gate> gates_;
  Signal output_;
};

// Adds the AND-of-ORs circuit form of `formula`, mapping formula variable v
// to circuit input var_map[v-1]. Returns the signal that is true iff the
// formula holds.
Signal add_cnf(Circuit& circuit, const CnfFormula& formula,
               std::span<const std::uint32_t> var_map);
// Identity mapping: formula variable v is circuit input v.
Signal add_cnf(Circuit& circuit, const CnfFormula& formula);

// Parsimonious CNF translation. Circuit inputs keep ids 1..num_inputs,
// ids num_inputs+1..total_vars pass through unconstrained, and gate g gets
// variable total_vars+1+g. A unit clause asserts the output.
CnfFormula tseitin(const Circuit& circuit, std::uint32_t total_vars);

// ---------------------------------------------------------------------------
// DIMACS

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);

void emit_dimacs(std::ostream& out, const CnfFormula& formula);
std::string emit_dimacs(const CnfFormula& formula);

// FNV-1a over the comment-free DIMACS text; stable across runs and hosts.
std::uint64_t digest(const CnfFormula& formula);
std::string digest_hex(const CnfFormula& formula);

}  // namespace countlab
