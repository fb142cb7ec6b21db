#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "countlab/classes.hpp"
#include "countlab/counting.hpp"
#include "countlab/formula.hpp"
#include "countlab/gadgets.hpp"

namespace countlab {

// ---------------------------------------------------------------------------
// Oracles

struct OracleAnswer {
  CountProfile profile;
  bool yes = false;
};

// Decides membership of one query machine. The built-in oracles count the
// query formula exactly and judge the profile (accepted = model count,
// path exponent = machine width).
using Oracle = std::function<OracleAnswer(const GadgetResult& query)>;

Oracle mersenne_oracle(Engine engine = Engine::Dpll);  // MNS
Oracle equal_oracle(Engine engine = Engine::Dpll);     // C=P: #acc = 2^(p-1)
Oracle unique_oracle(Engine engine = Engine::Dpll);    // US: #acc = 1

// ---------------------------------------------------------------------------
// Traces

struct OracleQuery {
  std::string parameter;  // "k" or "i"
  std::uint64_t value = 0;
  GadgetResult query;
  OracleAnswer answer;
};

// One run of an NP machine with an oracle, with the nondeterministic
// choice unrolled into an explicit loop.
struct OracleTrace {
  std::string machine;
  // Empty when the machine has no satisfiability gate.
  std::optional<bool> gate_satisfiable;
  std::vector<OracleQuery> queries;
  Verdict verdict = Verdict::Reject;
};

// Disjunctive truth-table reduction: decision = OR of the oracle answers.
struct DttReduction {
  std::vector<OracleQuery> queries;  // answers not yet filled in
};

struct DttOutcome {
  std::vector<OracleQuery> queries;  // with answers, in query order
  bool accepted = false;
};

std::string to_text(const OracleTrace& trace);
nlohmann::json to_json(const OracleTrace& trace);
nlohmann::json to_json(const DttOutcome& outcome);

// ---------------------------------------------------------------------------
// Constructions

// Output counts sum_{j=1..q} C(a, j), which is 2^a - 1 whenever a <= q. Each
// of q blocks holds a candidate model plus a used bit; used blocks form a
// prefix, hold models of F in strictly increasing order, and unused blocks
// are all-false.
GadgetResult fewp_to_mnp(const CnfFormula& formula, std::uint32_t q);

// a * (2^n - 1): Mersenne iff a = 1 for a in 0..2^n.
GadgetResult us_to_mns(const CnfFormula& formula);

// Majority via NP with an MNS oracle: rejects outright when F is
// unsatisfiable, else asks about a + 2^n - 1 + k for k < 2^(n-1).
// Requires n >= 2.
OracleTrace majority_np_mns(const CnfFormula& formula, const Oracle& oracle);

// Parity via NP with an MNS oracle: asks about a + k for every even k < 2^n.
OracleTrace parity_np_mns(const CnfFormula& formula, const Oracle& oracle);

struct ParityAgreement {
  Verdict mnp;
  Verdict parity;
  bool promise_violated;
  bool agree;
};

ParityAgreement mnp_in_parity_check(const CountProfile& profile);

// F over n+1 variables (n >= 1) to a machine of width 2n+2 whose count is
// (2^(2n) - 1) + (2^(n+1) - a) + a(2^n - 1).
GadgetResult cequal_to_mns(const CnfFormula& formula);

// Queries i = 1..n, each a width-(n+1) machine counting a + 2^n - 2^i + 1.
// An Equal oracle answers YES on query i iff a = 2^i - 1.
DttReduction mns_to_cequal(const CnfFormula& formula);

DttOutcome dtt_evaluate(const DttReduction& reduction, const Oracle& oracle);

// Does D have exactly 2^n - 1 models? Asks the US oracle about the
// complement CNF.
bool max_mersenne_dnf(const DnfFormula& formula, const Oracle& us_oracle);

}  // namespace countlab
