#include "countlab/reductions.hpp"

#include <sstream>

#include "countlab/errors.hpp"

namespace countlab {

namespace {

Oracle counting_oracle(Engine engine,
                       std::function<bool(const CountProfile&)> language) {
  return [engine, language = std::move(language)](const GadgetResult& query) {
    const CountProfile counted = count_models(query.formula, engine);
    CountProfile profile = query.profile(counted.accepted);
    const bool yes = language(profile);
    return OracleAnswer{std::move(profile), yes};
  };
}

GadgetResult relabel(GadgetResult g, const std::string& construction,
                     const std::string& params) {
  g.formula = g.formula.with_comment("countlab: construction=" + construction +
                                     " params=" + params);
  return g;
}

std::string param_string(const std::string& name, std::uint64_t value) {
  return name + "=" + std::to_string(value);
}

}  // namespace

Oracle mersenne_oracle(Engine engine) {
  return counting_oracle(engine, [](const CountProfile& p) {
    return is_mersenne(p.accepted);
  });
}

Oracle equal_oracle(Engine engine) {
  return counting_oracle(engine, [](const CountProfile& p) {
    return 2 * p.accepted == p.total_paths();
  });
}

Oracle unique_oracle(Engine engine) {
  return counting_oracle(engine,
                         [](const CountProfile& p) { return p.accepted == 1; });
}

// ---------------------------------------------------------------------------

GadgetResult fewp_to_mnp(const CnfFormula& formula, std::uint32_t q) {
  if (q == 0) throw ContractViolation("fewp_to_mnp: q must be positive");
  const std::uint32_t n = formula.num_vars();
  const std::uint32_t block = n + 1;
  const std::uint32_t width = q * block;

  Circuit circuit(width);
  auto x_vars = [&](std::uint32_t j) {
    std::vector<std::uint32_t> vars(n);
    for (std::uint32_t i = 0; i < n; ++i) vars[i] = j * block + 1 + i;
    return vars;
  };
  auto x_signals = [&](std::uint32_t j) {
    std::vector<Signal> out;
    for (std::uint32_t v : x_vars(j)) out.push_back(circuit.input(v));
    return out;
  };
  auto used = [&](std::uint32_t j) { return circuit.input(j * block + block); };

  std::vector<Signal> constraints{used(0)};
  for (std::uint32_t j = 0; j < q; ++j) {
    const Signal unused = circuit.add_not(used(j));
    // used -> F(x^j)
    const auto vars = x_vars(j);
    constraints.push_back(circuit.add_or({unused, add_cnf(circuit, formula, vars)}));
    // unused -> x^j = 0
    std::vector<Signal> zeros;
    for (Signal s : x_signals(j)) zeros.push_back(circuit.add_not(s));
    constraints.push_back(circuit.add_or({used(j), circuit.add_and(std::move(zeros))}));
    if (j == 0) continue;
    // used prefix, and strictly increasing models
    constraints.push_back(circuit.add_or({unused, used(j - 1)}));
    const auto prev = x_signals(j - 1);
    const auto cur = x_signals(j);
    constraints.push_back(circuit.add_or({unused, add_lex_less(circuit, prev, cur)}));
  }
  circuit.add_and(std::move(constraints));

  GadgetResult out{tseitin(circuit, width), width, CountExpression::subset_sum(q)};
  out.output = out.formula.clauses().back().front();
  std::vector<std::string> comments = formula.comments();
  comments.push_back("countlab: construction=fewp_to_mnp params=q=" +
                     std::to_string(q));
  out.formula = CnfFormula(out.formula.num_vars(), out.formula.clauses(),
                           std::move(comments));
  return out;
}

GadgetResult us_to_mns(const CnfFormula& formula) {
  const std::uint32_t n = formula.num_vars();
  return relabel(multiply_mersenne(formula, n), "us_to_mns",
                 param_string("n", n));
}

OracleTrace majority_np_mns(const CnfFormula& formula, const Oracle& oracle) {
  const std::uint32_t n = formula.num_vars();
  if (n < 2) throw ContractViolation("majority_np_mns: needs n >= 2 variables");
  OracleTrace trace;
  trace.machine = "majority_np_mns";
  trace.gate_satisfiable = count_dpll(formula).accepted > 0;
  if (!*trace.gate_satisfiable) {
    trace.verdict = Verdict::Reject;
    return trace;
  }
  const std::uint64_t choices = 1ULL << (n - 1);
  bool any = false;
  for (std::uint64_t k = 0; k < choices; ++k) {
    const BigInt immediate = pow2(n) - 1 + k;
    GadgetResult query = relabel(add_const(formula, immediate, n + 1),
                                 "majority_np_mns", param_string("k", k));
    OracleAnswer answer = oracle(query);
    any = any || answer.yes;
    trace.queries.push_back(OracleQuery{"k", k, std::move(query), std::move(answer)});
  }
  trace.verdict = any ? Verdict::Accept : Verdict::Reject;
  return trace;
}

OracleTrace parity_np_mns(const CnfFormula& formula, const Oracle& oracle) {
  const std::uint32_t n = formula.num_vars();
  if (n > 62) throw ContractViolation("parity_np_mns: too many variables");
  OracleTrace trace;
  trace.machine = "parity_np_mns";
  const std::uint64_t bound = 1ULL << n;
  bool any = false;
  for (std::uint64_t k = 0; k < bound; k += 2) {
    GadgetResult query = relabel(add_const(formula, BigInt(k), n),
                                 "parity_np_mns", param_string("k", k));
    OracleAnswer answer = oracle(query);
    any = any || answer.yes;
    trace.queries.push_back(OracleQuery{"k", k, std::move(query), std::move(answer)});
  }
  trace.verdict = any ? Verdict::Accept : Verdict::Reject;
  return trace;
}

ParityAgreement mnp_in_parity_check(const CountProfile& profile) {
  const Verdict mnp = classify(profile, *find_class("MNP"));
  const Verdict parity = classify(profile, *find_class("ParityP"));
  const bool violated = mnp == Verdict::PromiseViolated;
  return ParityAgreement{mnp, parity, violated, !violated && mnp == parity};
}

GadgetResult cequal_to_mns(const CnfFormula& formula) {
  if (formula.num_vars() < 2) {
    throw ContractViolation("cequal_to_mns: F needs n+1 >= 2 variables");
  }
  const std::uint32_t n = formula.num_vars() - 1;
  const std::uint32_t width = 2 * n + 2;
  Circuit circuit(width);
  const Signal selector = circuit.input(width);

  // Branch 0: the immediate block of 2^(2n) - 1 paths over 2n+1 variables.
  std::vector<Signal> low_bits;
  for (std::uint32_t v = 1; v <= 2 * n + 1; ++v) low_bits.push_back(circuit.input(v));
  const Signal immediate = add_less_than_const(circuit, low_bits, pow2(2 * n) - 1);

  // Branch 1: x = 1..n+1 runs F, y = n+2..2n+1 fans out accepting paths.
  const Signal accepts = add_cnf(circuit, formula);
  const Signal rejects = circuit.add_not(accepts);
  std::vector<Signal> y_bits;
  std::vector<Signal> y_zero;
  for (std::uint32_t v = n + 2; v <= 2 * n + 1; ++v) {
    y_bits.push_back(circuit.input(v));
    y_zero.push_back(circuit.add_not(circuit.input(v)));
  }
  const Signal y_is_zero = circuit.add_and(std::move(y_zero));
  const Signal y_not_all_ones = circuit.add_not(circuit.add_and(std::move(y_bits)));
  const Signal simulate = circuit.add_or({circuit.add_and({rejects, y_is_zero}),
                                          circuit.add_and({accepts, y_not_all_ones})});

  const Signal take_immediate = circuit.add_and({circuit.add_not(selector), immediate});
  const Signal take_simulate = circuit.add_and({selector, simulate});
  circuit.add_or({take_immediate, take_simulate});

  const BigInt constant = pow2(2 * n) - 1 + pow2(n + 1);
  GadgetResult out{tseitin(circuit, width), width,
                   CountExpression::affine(pow2(n) - 2, constant)};
  out.output = out.formula.clauses().back().front();
  std::vector<std::string> comments = formula.comments();
  comments.push_back("countlab: construction=cequal_to_mns params=n=" +
                     std::to_string(n));
  out.formula = CnfFormula(out.formula.num_vars(), out.formula.clauses(),
                           std::move(comments));
  return out;
}

DttReduction mns_to_cequal(const CnfFormula& formula) {
  const std::uint32_t n = formula.num_vars();
  DttReduction reduction;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const BigInt immediate = pow2(n) - pow2(i) + 1;
    GadgetResult query = relabel(add_const(formula, immediate, n),
                                 "mns_to_cequal", param_string("i", i));
    reduction.queries.push_back(OracleQuery{"i", i, std::move(query), {}});
  }
  return reduction;
}

DttOutcome dtt_evaluate(const DttReduction& reduction, const Oracle& oracle) {
  if (reduction.queries.empty()) {
    throw ContractViolation("dtt_evaluate: reduction has no queries");
  }
  DttOutcome outcome;
  outcome.queries = reduction.queries;
  for (OracleQuery& q : outcome.queries) {
    q.answer = oracle(q.query);
    outcome.accepted = outcome.accepted || q.answer.yes;
  }
  return outcome;
}

bool max_mersenne_dnf(const DnfFormula& formula, const Oracle& us_oracle) {
  const CnfFormula negated = dnf_complement_cnf(formula);
  GadgetResult query{negated, negated.num_vars(),
                     CountExpression::affine(-1, pow2(negated.num_vars()))};
  return us_oracle(query).yes;
}

// ---------------------------------------------------------------------------

std::string to_text(const OracleTrace& trace) {
  std::ostringstream out;
  out << "machine: " << trace.machine << '\n';
  out << "gate: "
      << (!trace.gate_satisfiable ? "none"
          : *trace.gate_satisfiable ? "satisfiable"
                                    : "unsatisfiable")
      << '\n';
  for (const OracleQuery& q : trace.queries) {
    out << "query " << q.parameter << '=' << q.value << " digest="
        << digest_hex(q.query.formula) << " count=" << q.answer.profile.accepted
        << " width=" << q.query.machine_vars
        << " answer=" << (q.answer.yes ? "YES" : "NO") << '\n';
  }
  out << "verdict: " << to_string(trace.verdict) << '\n';
  return out.str();
}

namespace {

nlohmann::json query_json(const OracleQuery& q) {
  return nlohmann::json{
      {"parameter", q.parameter},
      {"value", q.value},
      {"digest", digest_hex(q.query.formula)},
      {"machine_vars", q.query.machine_vars},
      {"num_vars", q.query.formula.num_vars()},
      {"count", q.answer.profile.accepted.str()},
      {"answer", q.answer.yes},
  };
}

}  // namespace

nlohmann::json to_json(const OracleTrace& trace) {
  nlohmann::json j;
  j["machine"] = trace.machine;
  j["gate_satisfiable"] = trace.gate_satisfiable
                              ? nlohmann::json(*trace.gate_satisfiable)
                              : nlohmann::json(nullptr);
  j["queries"] = nlohmann::json::array();
  for (const OracleQuery& q : trace.queries) j["queries"].push_back(query_json(q));
  j["verdict"] = to_string(trace.verdict);
  return j;
}

nlohmann::json to_json(const DttOutcome& outcome) {
  nlohmann::json j;
  j["machine"] = "dtt";
  j["queries"] = nlohmann::json::array();
  for (const OracleQuery& q : outcome.queries) j["queries"].push_back(query_json(q));
  j["decision"] = outcome.accepted;
  return j;
}

}  // namespace countlab
