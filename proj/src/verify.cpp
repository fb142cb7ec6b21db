#include "countlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "countlab/classes.hpp"
#include "countlab/corpus.hpp"
#include "countlab/errors.hpp"
#include "countlab/gadgets.hpp"
#include "countlab/reductions.hpp"

namespace countlab {

namespace {

class Recorder {
 public:
  Recorder(VerificationReport& report, std::string replay)
      : report_(report), replay_(std::move(replay)) {}

  void check(bool ok, const std::string& parameters, const std::string& expected,
             const std::string& observed) {
    ++report_.checks_run;
    if (ok) return;
    ++report_.total_failures;
    if (report_.failures.size() < kMaxRecordedFailures) {
      report_.failures.push_back(FailureRecord{parameters, expected, observed, replay_});
    }
  }

  void check_flag(bool ok, const std::string& parameters, bool expected, bool observed) {
    check(ok, parameters, std::string(expected ? "true" : "false"),
          std::string(observed ? "true" : "false"));
  }

 private:
  VerificationReport& report_;
  std::string replay_;
};

std::string str(const BigInt& v) { return v.str(); }

std::string kv(const std::string& k, const BigInt& v) { return k + "=" + v.str(); }

std::string formula_tag(std::size_t index, const CnfFormula& f) {
  return "formula=#" + std::to_string(index) + " vars=" + std::to_string(f.num_vars());
}

std::vector<CnfFormula> corpus(const VerifyOptions& o, std::uint32_t max_vars) {
  return make_corpus({o.corpus_size, 1, max_vars, o.seed});
}

BigInt brute(const CnfFormula& f) { return count_bruteforce(f).accepted; }

// Machine-level brute force: enumerates path variables, gate variables are
// pinned as they are reached.
BigInt brute_machine(const GadgetResult& g) { return count_enumerate(g.formula).accepted; }

struct Context {
  const VerifyOptions& options;
  std::uint32_t n_max;
  Recorder& rec;
  VerificationReport& report;
};

// ---------------------------------------------------------------------------
// Suites

void suite_t2(Context& c) {
  constexpr std::uint32_t kMaxQ = 5;
  c.report.parameter_ranges = "corpus n=1.." + std::to_string(c.n_max) +
                              ", a <= q <= " + std::to_string(kMaxQ);
  const auto formulas = corpus(c.options, c.n_max);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const CnfFormula& f = formulas[i];
    const BigInt a = brute(f);
    if (a > kMaxQ) continue;
    for (auto q = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(a)); q <= kMaxQ;
         ++q) {
      const GadgetResult g = fewp_to_mnp(f, q);
      const BigInt got = count_dpll(g.formula).accepted;
      const BigInt want = pow2(static_cast<std::uint32_t>(a)) - 1;
      c.rec.check(got == want,
                  formula_tag(i, f) + " " + kv("a", a) + " q=" + std::to_string(q),
                  str(want), str(got));
    }
  }
  const auto prefix = mersenne_prefix(64);
  c.rec.check_flag(non_gappy_check(prefix, 3), "non_gappy_check(mersenne_prefix(64), 3)",
              true, non_gappy_check(prefix, 3));
  c.rec.check(prefix.size() == 64 && prefix.back() == pow2(64) - 1,
              "mersenne_prefix(64) last", str(pow2(64) - 1), str(prefix.back()));
}

void suite_t3(Context& c) {
  const std::uint32_t formula_n = std::min<std::uint32_t>(4, c.n_max);
  c.report.parameter_ranges = "n=1.." + std::to_string(c.n_max) +
                              ", k=1..2^n; formulas n<=" + std::to_string(formula_n);
  for (std::uint32_t n = 1; n <= c.n_max; ++n) {
    const BigInt m = pow2(n) - 1;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t k = 1; k <= total; ++k) {
      const bool mersenne = is_mersenne(m * k);
      c.rec.check_flag(mersenne == (k == 1),
                  "n=" + std::to_string(n) + " k=" + std::to_string(k), k == 1, mersenne);
    }
  }
  const auto formulas = corpus(c.options, formula_n);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const CnfFormula& f = formulas[i];
    const BigInt a = brute(f);
    const GadgetResult g = us_to_mns(f);
    const BigInt got = brute(g.formula);
    const std::string tag = formula_tag(i, f) + " " + kv("a", a);
    c.rec.check(got == g.count(a), tag + " count", str(g.count(a)), str(got));
    c.rec.check_flag(is_mersenne(got) == (a == 1), tag + " mersenne", a == 1, is_mersenne(got));
  }
}

void suite_t4(Context& c) {
  c.report.parameter_ranges = "corpus n=2.." + std::to_string(c.n_max) +
                              "; uniqueness n=2.." + std::to_string(c.n_max) +
                              ", a=1..2^n, k<2^(n-1)";
  const Oracle oracle = mersenne_oracle(Engine::Dpll);
  const auto formulas = corpus(c.options, c.n_max);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const CnfFormula& f = formulas[i];
    if (f.num_vars() < 2) continue;
    const BigInt a = brute(f);
    const OracleTrace t = majority_np_mns(f, oracle);
    const bool want = 2 * a > pow2(f.num_vars());
    const bool got = t.verdict == Verdict::Accept;
    const std::string tag = formula_tag(i, f) + " " + kv("a", a);
    c.rec.check_flag(want == got, tag + " verdict", want, got);
    if (a == 0) {
      c.rec.check(t.queries.empty(), tag + " queries", "0",
                  std::to_string(t.queries.size()));
    }
    for (const OracleQuery& q : t.queries) {
      const BigInt expected = q.query.count(a);
      c.rec.check(q.answer.profile.accepted == expected,
                  tag + " k=" + std::to_string(q.value), str(expected),
                  str(q.answer.profile.accepted));
    }
  }
  for (std::uint32_t n = 2; n <= c.n_max; ++n) {
    const BigInt top = pow2(n + 1) - 1;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t a = 1; a <= total; ++a) {
      for (std::uint64_t k = 0; k < total / 2; ++k) {
        const BigInt v = BigInt(a) + total - 1 + k;
        const bool mersenne = is_mersenne(v);
        c.rec.check_flag(mersenne == (v == top),
                    "n=" + std::to_string(n) + " a=" + std::to_string(a) +
                        " k=" + std::to_string(k),
                    v == top, mersenne);
      }
    }
  }
}

void suite_t5(Context& c) {
  c.report.parameter_ranges = "corpus n=1.." + std::to_string(c.n_max);
  const Oracle oracle = mersenne_oracle(Engine::Dpll);
  const auto formulas = corpus(c.options, c.n_max);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const CnfFormula& f = formulas[i];
    const BigInt a = brute(f);
    const OracleTrace t = parity_np_mns(f, oracle);
    const bool want = bit_test(a, 0);
    const bool got = t.verdict == Verdict::Accept;
    c.rec.check_flag(want == got, formula_tag(i, f) + " " + kv("a", a), want, got);
  }
}

void suite_t6(Context& c) {
  c.report.parameter_ranges = "p=" + std::to_string(c.n_max) + ", accepted=0..2^p";
  const std::uint64_t total = 1ULL << c.n_max;
  for (std::uint64_t a = 0; a <= total; ++a) {
    const ParityAgreement r = mnp_in_parity_check(CountProfile{BigInt(a), c.n_max});
    if (r.mnp != Verdict::Accept) {
      ++c.report.checks_run;
      continue;
    }
    c.rec.check(r.parity == Verdict::Accept, "a=" + std::to_string(a), "Accept",
                std::string(to_string(r.parity)));
  }
}

void interval_checks(Context& c) {
  for (std::uint32_t n = 1; n <= c.n_max; ++n) {
    const CountExpression e = cequal_to_mns(CnfFormula(n + 1, {})).count;
    const std::uint32_t m = 2 * n + 2;
    const BigInt low = pow2(m - 2) - 1;
    const BigInt high = pow2(m) - 1;
    const std::uint64_t total = 2ULL << n;
    const std::string ns = "n=" + std::to_string(n);
    for (std::uint64_t a = 0; a <= total; ++a) {
      const BigInt v = e(a);
      c.rec.check(low < v && v < high, ns + " a=" + std::to_string(a) + " interval",
                  "(" + str(low) + ", " + str(high) + ")", str(v));
    }
    const BigInt at_half = e(pow2(n));
    c.rec.check(at_half == pow2(2 * n + 1) - 1, ns + " a=2^n value",
                str(pow2(2 * n + 1) - 1), str(at_half));
    const BigInt bound = pow2(2 * n + 1) + pow2(2 * n) - pow2(n + 1) - 1;
    const BigInt at_max = e(pow2(n + 1));
    c.rec.check(at_max == bound, ns + " a=2^(n+1) value", str(bound), str(at_max));
  }
}

void suite_t7(Context& c) {
  const std::uint32_t formula_n = std::min<std::uint32_t>(3, c.n_max);
  c.report.parameter_ranges = "n=1.." + std::to_string(c.n_max) +
                              ", a=0..2^(n+1); formulas n<=" + std::to_string(formula_n);
  for (std::uint32_t n = 1; n <= c.n_max; ++n) {
    const CountExpression e = cequal_to_mns(CnfFormula(n + 1, {})).count;
    const std::uint64_t total = 2ULL << n;
    for (std::uint64_t a = 0; a <= total; ++a) {
      const bool mersenne = is_mersenne(e(a));
      const bool half = a == (1ULL << n);
      c.rec.check_flag(mersenne == half,
                  "n=" + std::to_string(n) + " a=" + std::to_string(a) + " count=" +
                      str(e(a)),
                  half, mersenne);
    }
  }
  interval_checks(c);

  auto formula_check = [&](const CnfFormula& f, const std::string& tag) {
    const std::uint32_t n = f.num_vars() - 1;
    const BigInt a = brute(f);
    const GadgetResult g = cequal_to_mns(f);
    const BigInt got = brute_machine(g);
    c.rec.check(got == g.count(a), tag + " " + kv("a", a) + " count", str(g.count(a)),
                str(got));
    const bool half = a == pow2(n);
    c.rec.check_flag(is_mersenne(got) == half, tag + " " + kv("a", a) + " mersenne", half,
                is_mersenne(got));
  };
  for (std::uint32_t n = 1; n <= formula_n; ++n) {
    for (std::uint64_t a = 0; a <= (2ULL << n); ++a) {
      formula_check(formula_with_models(n + 1, a), "exact n=" + std::to_string(n));
    }
  }
  const auto formulas = make_corpus({c.options.corpus_size, 2, formula_n + 1, c.options.seed});
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    formula_check(formulas[i], formula_tag(i, formulas[i]));
  }
}

void suite_t8(Context& c) {
  const std::uint32_t formula_n = std::min<std::uint32_t>(4, c.n_max);
  c.report.parameter_ranges = "n=1.." + std::to_string(c.n_max) +
                              ", a=0..2^n; formulas n<=" + std::to_string(formula_n);
  for (std::uint32_t n = 1; n <= c.n_max; ++n) {
    const DttReduction r = mns_to_cequal(CnfFormula(n, {}));
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t a = 0; a <= total; ++a) {
      bool decision = false;
      for (const OracleQuery& q : r.queries) {
        decision = decision || 2 * q.query.count(a) == pow2(q.query.machine_vars);
      }
      const bool want = is_mersenne(BigInt(a));
      c.rec.check_flag(decision == want, "n=" + std::to_string(n) + " a=" + std::to_string(a),
                  want, decision);
    }
  }
  const Oracle oracle = equal_oracle(Engine::Enumerate);
  auto formula_check = [&](const CnfFormula& f, const std::string& tag) {
    const BigInt a = brute(f);
    const DttOutcome out = dtt_evaluate(mns_to_cequal(f), oracle);
    c.rec.check_flag(out.accepted == is_mersenne(a), tag + " " + kv("a", a), is_mersenne(a),
                out.accepted);
  };
  for (std::uint32_t n = 1; n <= formula_n; ++n) {
    for (std::uint64_t a = 0; a <= (1ULL << n); ++a) {
      formula_check(formula_with_models(n, a), "exact n=" + std::to_string(n));
    }
  }
  const auto formulas = corpus(c.options, formula_n);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    formula_check(formulas[i], formula_tag(i, formulas[i]));
  }
}

void intersection_checks(Context& c, std::uint32_t p) {
  const ClassSpec ep = *find_class("EP");
  const ClassSpec mnp = *find_class("MNP");
  const ClassSpec up = *find_class("UP");
  const std::uint64_t total = 1ULL << p;
  for (std::uint64_t a = 0; a <= total; ++a) {
    const CountProfile profile{BigInt(a), p};
    const bool both = classify(profile, ep) == Verdict::Accept &&
                      classify(profile, mnp) == Verdict::Accept;
    const bool unique = classify(profile, up) == Verdict::Accept;
    c.rec.check_flag(both == unique, "EP&MNP a=" + std::to_string(a), unique, both);
  }
}

void suite_intersection(Context& c) {
  c.report.parameter_ranges = "p=" + std::to_string(c.n_max) + ", accepted=0..2^p";
  intersection_checks(c, c.n_max);
}

void suite_interval(Context& c) {
  c.report.parameter_ranges = "n=1.." + std::to_string(c.n_max) + ", a=0..2^(n+1)";
  interval_checks(c);
}

void suite_classes(Context& c) {
  constexpr std::uint32_t kIntersectionExponent = 20;
  c.report.parameter_ranges = "p=0.." + std::to_string(c.n_max) +
                              "; intersection accepted<=2^" +
                              std::to_string(kIntersectionExponent);
  // Sample aux values; RP and BPP are also checked without a margin.
  std::vector<ClassSpec> specs;
  for (const ClassSpec& s : spec_catalog()) {
    ClassSpec base = s.with(AuxKind::Target, 3)
                         .with(AuxKind::GapTarget, 4)
                         .with(AuxKind::FewBound, 2)
                         .with(AuxKind::AmbiguityBound, 2);
    specs.push_back(base);
    if (s.name == "RP" || s.name == "BPP") {
      specs.push_back(base.with(AuxKind::Margin, 1));
      specs.push_back(base.with(AuxKind::Margin, 3));
    }
  }
  for (const ClassSpec& s : specs) {
    for (std::uint32_t p = 0; p <= c.n_max; ++p) {
      for (std::uint64_t a = 0; a <= (1ULL << p); ++a) {
        const CountProfile profile{BigInt(a), p};
        const bool acc = s.accept(profile, s.aux);
        const bool rej = s.reject(profile, s.aux);
        const std::string tag =
            s.name + " p=" + std::to_string(p) + " a=" + std::to_string(a);
        c.rec.check(!(acc && rej), tag + " disjoint", "accept xor reject", "both");
        if (s.kind == ClassKind::Syntactic) {
          c.rec.check(acc || rej, tag + " total", "accept or reject", "neither");
        }
      }
    }
  }
  intersection_checks(c, kIntersectionExponent);

  const ClassSpec upk = find_class("UP_O(k)")->with(AuxKind::AmbiguityBound, 2);
  const ClassSpec fewp = find_class("FewP")->with(AuxKind::FewBound, 2);
  const std::vector<std::pair<ClassSpec, ClassSpec>> chains{
      {upk, *find_class("UP")},
      {fewp, upk},
      {*find_class("EP"), fewp},
      {*find_class("MNS"), *find_class("US")},
      {*find_class("MNS"), *find_class("MNP")},
      {satisfiability_spec(), *find_class("MNP")},
  };
  for (const auto& [outer, inner] : chains) {
    const auto w = containment_witness_scan(outer, inner, c.n_max);
    c.rec.check(w.empty(), inner.name + " in " + outer.name, "no witness",
                w.empty() ? "none" : to_string(w.front()));
  }
}

void suite_engines(Context& c) {
  constexpr std::size_t kFormulas = 500;
  c.report.parameter_ranges = std::to_string(kFormulas) + " formulas, n=1.." +
                              std::to_string(c.n_max);
  const auto formulas = make_corpus({kFormulas, 1, c.n_max, c.options.seed});
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const CnfFormula& f = formulas[i];
    const BigInt a = brute(f);
    const BigInt d = count_dpll(f).accepted;
    const BigInt e = count_enumerate(f).accepted;
    c.rec.check(d == a, formula_tag(i, f) + " dpll", str(a), str(d));
    c.rec.check(e == a, formula_tag(i, f) + " enumerate", str(a), str(e));
  }
}

void suite_gadgets(Context& c) {
  c.report.parameter_ranges = "corpus n=1.." + std::to_string(c.n_max) +
                              "; multiply_mersenne, add_const, complement, pad_pow2";
  std::mt19937_64 rng(c.options.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto formulas = corpus(c.options, c.n_max);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const CnfFormula& f = formulas[i];
    const BigInt a = brute(f);
    const std::uint32_t n = f.num_vars();
    const auto t = static_cast<std::uint32_t>(1 + rng() % 3);
    const auto k = static_cast<std::uint32_t>(rng() % 3);
    const std::uint32_t width = n + static_cast<std::uint32_t>(rng() % 2);
    const BigInt constant = BigInt(rng() % ((1ULL << width) + 1));
    const std::vector<std::pair<std::string, GadgetResult>> outputs{
        {"multiply_mersenne t=" + std::to_string(t), multiply_mersenne(f, t)},
        {"add_const c=" + str(constant) + " width=" + std::to_string(width),
         add_const(f, constant, width)},
        {"complement", complement(f)},
        {"pad_pow2 k=" + std::to_string(k), pad_pow2(f, k)},
    };
    for (const auto& [name, g] : outputs) {
      const BigInt got = brute_machine(g);
      c.rec.check(got == g.count(a),
                  formula_tag(i, f) + " " + kv("a", a) + " " + name + " [" +
                      g.count.to_string() + "]",
                  str(g.count(a)), str(got));
    }
  }
}

struct SuiteInfo {
  std::string description;
  std::uint32_t default_n;
  std::uint32_t max_n;
  std::function<void(Context&)> run;
};

const std::map<std::string, SuiteInfo>& registry() {
  static const std::map<std::string, SuiteInfo> suites{
      {"T2", {"FewP to MNP block construction counts 2^a - 1 for a <= q <= 5", 8, 8, suite_t2}},
      {"T3", {"k(2^n - 1) is Mersenne iff k = 1; us_to_mns on formulas", 12, 20, suite_t3}},
      {"T4", {"majority via NP with an MNS oracle", 8, 10, suite_t4}},
      {"T5", {"parity via NP with an MNS oracle", 8, 10, suite_t5}},
      {"T6", {"every MNP-accepting count is odd", 20, 24, suite_t6}},
      {"T7", {"C=P to MNS: Mersenne iff a = 2^n, plus the interval bounds", 10, 16, suite_t7}},
      {"T8", {"MNS to C=P by a disjunctive truth-table reduction", 10, 16, suite_t8}},
      {"classes", {"class registry totality, disjointness and containment scans", 12, 20,
                   suite_classes}},
      {"intersection", {"EP and MNP accept together exactly when UP does", 20, 24,
                        suite_intersection}},
      {"interval", {"C=P to MNS output stays inside (2^(m-2) - 1, 2^m - 1)", 10, 16,
                    suite_interval}},
      {"engines", {"dpll and ordered enumeration agree with brute force", 16, 20,
                   suite_engines}},
      {"gadgets", {"gadget outputs count as their audit expressions say", 10, 12,
                   suite_gadgets}},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"T2", "T3", "T4", "T5", "T6", "T7",
                                            "T8", "classes", "intersection",
                                            "interval", "engines", "gadgets"};
  return ids;
}

std::string suite_description(const std::string& id) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw ConfigurationError("unknown suite " + id);
  return it->second.description;
}

VerificationReport run_suite(const std::string& id, const VerifyOptions& options) {
  const auto it = registry().find(id);
  if (it == registry().end()) {
    std::string known;
    for (const auto& s : suite_ids()) known += " " + s;
    throw ConfigurationError("unknown suite " + id + "; known:" + known);
  }
  const SuiteInfo& info = it->second;
  const std::uint32_t n = options.n_max.value_or(info.default_n);
  if (n < 1 || n > info.max_n) {
    throw ConfigurationError(id + ": --n-max must lie in 1.." + std::to_string(info.max_n));
  }
  VerificationReport report;
  report.suite = id;
  std::ostringstream replay;
  replay << "countlab verify " << id << " --n-max " << n << " --seed " << options.seed;
  Recorder rec(report, replay.str());
  Context ctx{options, n, rec, report};
  const auto start = std::chrono::steady_clock::now();
  info.run(ctx);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string to_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "suite: " << report.suite << '\n';
  out << "ranges: " << report.parameter_ranges << '\n';
  out << "checks: " << report.checks_run << '\n';
  out << "failures: " << report.total_failures << '\n';
  for (const FailureRecord& f : report.failures) {
    out << "  FAIL " << f.parameters << ": expected " << f.expected << ", observed "
        << f.observed << '\n';
    out << "    replay: " << f.replay << '\n';
  }
  if (report.failures.size() < report.total_failures) {
    out << "  (" << report.total_failures - report.failures.size()
        << " more not shown)\n";
  }
  out << "result: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

nlohmann::json to_json(const VerificationReport& report, bool with_time) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["parameter_ranges"] = report.parameter_ranges;
  j["checks_run"] = report.checks_run;
  j["total_failures"] = report.total_failures;
  j["passed"] = report.passed();
  j["failures"] = nlohmann::json::array();
  for (const FailureRecord& f : report.failures) {
    j["failures"].push_back({{"parameters", f.parameters},
                             {"expected", f.expected},
                             {"observed", f.observed},
                             {"replay", f.replay}});
  }
  if (with_time) j["wall_seconds"] = report.wall_seconds;
  return j;
}

}  // namespace countlab
